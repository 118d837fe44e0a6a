"""Basic Artin-Schreier-Witt towers over P^1 and their layer-1 oracles.

A tower is given by a polynomial f over F_q (plus a polynomial in 1/x on the
torus).  Its Frobenius function sends a closed point x of degree d to

    rho(Frob_x) = Tr_{Z_{q^d}/Z_p}( f^(x^) )

where x^ is the Teichmüller lift of a root of the point's minimal polynomial and
f^ lifts the coefficients of f to Teichmüller representatives.  Layer 1 is
the Artin-Schreier curve y^p - y = f(x), whose zeta function is computed here
by brute force as an independent oracle.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import _batch
from .errors import CheckFailed, PrecisionError, SpecError
from .ff import (
    AFFINE_LINE, TORUS, ClosedPoint, FieldCtx, FqPoly, build_field, closed_points,
    extension, normalize_domain, point_roots, poly_degree, poly_from_ints, roots_in,
)
from .padic import PadicInt, ramification_index
from .tseries import guard_digits

# closed points of degree <= b_s the automatic profile is willing to enumerate
POINT_BUDGET = 25_000
DEFAULT_A = 20
MAX_AUTO_LEVEL = 3


def count_irreducibles(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q (Gauss/Möbius)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(d // e) * q**e
    return total // d


def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


@dataclass(frozen=True)
class Precision:
    """Working precision: p-adic digits a (+ guard for exponents), s-degree b_s, T-degree b_T."""

    a: int
    guard: int
    b_s: int
    b_T: int
    n_max: int

    @property
    def D(self) -> int:
        """Largest closed-point degree entering the Euler product."""
        return self.b_s

    @property
    def A(self) -> int:
        return self.a + self.guard

    def as_dict(self) -> dict[str, int]:
        return {"a": self.a, "guard": self.guard, "b_s": self.b_s, "b_T": self.b_T, "n_max": self.n_max}


def expected_degree(p: int, domain: str, deg: int, pole: int, n: int) -> int | None:
    """Expected deg L(chi_n, s) from the Swan conductors; None for the trivial character."""
    if n == 0:
        return None
    if normalize_domain(domain) == AFFINE_LINE:
        return deg * p ** (n - 1) - 1
    return (deg + pole) * p ** (n - 1)


def make_precision(p: int, q: int, domain: str, deg: int, pole: int, *, a: int | None = None,
                   b_s: int | None = None, n_max: int | None = None, b_T: int | None = None,
                   guard: int | None = None) -> Precision:
    """Fill in a precision profile; unspecified fields get automatic values.

    n_max defaults to the largest level <= 3 whose Euler product needs at most
    POINT_BUDGET closed points, and b_s to one more than the expected degree
    at that level, so the degree of L(chi_{n_max}, s) is visible.
    """
    a = DEFAULT_A if a is None else int(a)
    if a < 2:
        raise SpecError(f"precision.a = {a} must be >= 2")

    def points_needed(level):
        top = expected_degree(p, domain, deg, pole, level) + 1
        return sum(count_irreducibles(q, d) for d in range(1, top + 1))

    if n_max is None:
        n_max = 1
        for level in range(MAX_AUTO_LEVEL, 0, -1):
            if b_s is not None or points_needed(level) <= POINT_BUDGET:
                n_max = level
                break
    n_max = int(n_max)
    if n_max < 0:
        raise SpecError(f"precision.n_max = {n_max} must be >= 0")
    if b_s is None:
        b_s = (expected_degree(p, domain, deg, pole, n_max) or 0) + 1
    b_s = int(b_s)
    if b_s < 1:
        raise SpecError(f"precision.b_s = {b_s} must be >= 1")
    need = ramification_index(p, n_max) * a
    if b_T is None:
        b_T = need
    elif b_T < need:
        raise SpecError(f"precision.b_T = {b_T} below e*a = {need} for level n_max = {n_max}")
    g = guard_digits(p, b_T)
    if guard is None:
        guard = g
    elif guard < g:
        raise SpecError(f"precision.guard = {guard} below ceil(log_p b_T) = {g}")
    return Precision(a, int(guard), b_s, int(b_T), n_max)


@dataclass(frozen=True)
class TowerSpec:
    """A basic tower over F_q: y-coordinates Teichmüller-lifted from f on A^1 or G_m."""

    ctx: FieldCtx
    domain: str
    f: FqPoly
    f_neg: FqPoly
    precision: Precision

    def __post_init__(self):
        p = self.ctx.p
        if self.domain not in (AFFINE_LINE, TORUS):
            raise SpecError(f"domain {self.domain!r}")
        d = poly_degree(self.f)
        if d < 1:
            raise SpecError("f must be nonconstant")
        if d % p == 0:
            raise SpecError(f"deg f = {d} is divisible by p = {p}")
        if any(self.f[0]):
            raise SpecError("f must have zero constant term (a constant would add a constant-field twist)")
        if self.domain == TORUS:
            e = poly_degree(self.f_neg) + 1
            if e < 1:
                raise SpecError("torus towers need a nonzero f_neg (pole at 0)")
            if e % p == 0:
                raise SpecError(f"pole order {e} at 0 is divisible by p = {p}")
        elif self.f_neg:
            raise SpecError("f_neg is only allowed on the torus (domain 'Gm')")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def r(self) -> int:
        return self.ctx.r

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def degree(self) -> int:
        return poly_degree(self.f)

    @property
    def pole_order(self) -> int:
        """Pole order at 0 (torus only)."""
        return poly_degree(self.f_neg) + 1 if self.f_neg else 0

    @property
    def ramified_points(self) -> int:
        return 1 if self.domain == AFFINE_LINE else 2

    def genus(self, n: int = 1) -> int:
        """Genus of layer n from the degrees of L(chi_k, s), k <= n."""
        total = sum(ramification_index(self.p, k) * self.expected_degree(k) for k in range(1, n + 1))
        return total // 2

    def expected_degree(self, n: int) -> int | None:
        return expected_degree(self.p, self.domain, self.degree, self.pole_order, n)

    def with_precision(self, **overrides) -> TowerSpec:
        """Copy with some of a, b_s, n_max, b_T, guard replaced; the rest recomputed."""
        keep = {k: v for k, v in overrides.items() if v is not None}
        if "a" not in keep:
            keep["a"] = self.precision.a
        if "n_max" not in keep and "b_s" in keep:
            keep["n_max"] = self.precision.n_max
        prec = make_precision(self.p, self.q, self.domain, self.degree, self.pole_order, **keep)
        return replace(self, precision=prec)

    def label(self) -> str:
        from .ff import poly_str

        s = poly_str(self.ctx, self.f)
        if self.f_neg:
            s += "+" + poly_str(self.ctx, (self.ctx.zero,) + self.f_neg, "(1/x)")
        return f"{self.domain}/F_{self.q}: {s}"


def make_spec(p: int, f: Sequence, *, r: int = 1, modulus: Sequence[int] | None = None,
              domain: str = "A1", f_neg: Sequence = (), a: int | None = None,
              b_s: int | None = None, n_max: int | None = None, b_T: int | None = None,
              guard: int | None = None) -> TowerSpec:
    """Build and validate a tower; coefficients are ints (field index) or digit lists."""
    ctx = build_field(p, r, modulus)
    domain = normalize_domain(domain)
    fp = _coerce_poly(ctx, f, "f")
    fn = _coerce_poly(ctx, f_neg, "f_neg")
    deg = poly_degree(fp)
    pole = poly_degree(fn) + 1 if fn else 0
    if deg < 1:
        raise SpecError("f must be nonconstant")
    prec = make_precision(p, ctx.q, domain, deg, pole, a=a, b_s=b_s, n_max=n_max, b_T=b_T, guard=guard)
    return TowerSpec(ctx, domain, fp, fn, prec)


def _coerce_poly(ctx: FieldCtx, coeffs: Sequence, name: str) -> FqPoly:
    try:
        return poly_from_ints(ctx, coeffs)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"field {name!r}: {exc}") from None


# -- JSON ------------------------------------------------------------------------

_SPEC_KEYS = {"p", "r", "modulus", "domain", "f", "f_neg", "precision"}
_PREC_KEYS = {"a", "guard", "b_s", "b_T", "n_max"}


def spec_from_dict(data: Mapping[str, Any]) -> TowerSpec:
    if not isinstance(data, Mapping):
        raise SpecError("tower spec must be a JSON object")
    unknown = set(data) - _SPEC_KEYS
    if unknown:
        raise SpecError(f"unknown field(s) {sorted(unknown)}")
    for key in ("p", "f"):
        if key not in data:
            raise SpecError(f"missing field {key!r}")
    prec = data.get("precision") or {}
    if not isinstance(prec, Mapping):
        raise SpecError("field 'precision' must be an object")
    bad = set(prec) - _PREC_KEYS
    if bad:
        raise SpecError(f"unknown precision field(s) {sorted(bad)}")
    for key, value in list(prec.items()) + [(k, data[k]) for k in ("p", "r") if k in data]:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SpecError(f"field {key!r} must be an integer, got {value!r}")
    if not isinstance(data["f"], list):
        raise SpecError("field 'f' must be a list of coefficients")
    return make_spec(
        data["p"], data["f"], r=data.get("r", 1), modulus=data.get("modulus"),
        domain=data.get("domain", "A1"), f_neg=data.get("f_neg") or (), **prec,
    )


def load_spec(source: str | Path | Mapping) -> TowerSpec:
    """Read a tower spec from a JSON file, a JSON string, or a mapping."""
    if isinstance(source, Mapping):
        return spec_from_dict(source)
    text = str(source)
    path = Path(text)
    if not text.lstrip().startswith("{"):
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec file {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(data)


def spec_to_dict(spec: TowerSpec) -> dict[str, Any]:
    def coeffs(poly):
        if spec.r == 1:
            return [c[0] for c in poly]
        return [list(c) for c in poly]

    out = {
        "p": spec.p, "r": spec.r, "modulus": list(spec.ctx.modulus), "domain": spec.domain,
        "f": coeffs(spec.f), "precision": spec.precision.as_dict(),
    }
    if spec.domain == TORUS:
        out["f_neg"] = coeffs(spec.f_neg)
    return out


# -- Frobenius function ------------------------------------------------------------

def _teich_int(c: int, p: int, prec: int) -> int:
    mod = p**prec
    return pow(c, p ** (prec - 1), mod) if prec > 1 else c % mod


def _frob_batch(xbar, M, p, A, K, f_rows, fneg_rows):
    """Tr(f^(x^)) for each row of xbar in Z_p[X]/(M) of degree K over Z_p."""
    mod = p**A
    n = xbar.shape[0]
    xhat = _batch.teichmuller(xbar, M, p, A, K)
    acc = np.zeros_like(xhat)
    for c in reversed(f_rows):
        acc = (_batch.mul(acc, xhat, M, mod) + c) % mod
    if fneg_rows:
        xinv = _batch.power(xhat, p**K - 2, M, mod)
        neg = np.zeros_like(xhat)
        for c in reversed(fneg_rows):
            neg = (_batch.mul(neg, xinv, M, mod) + c) % mod
        acc = (acc + _batch.mul(neg, xinv, M, mod)) % mod
    tv = _batch.trace_vector(M, n if M.ndim == 2 else 1, mod)
    return [int(v) for v in _batch.trace(acc, tv, mod)]


def _values_for_degree(spec: TowerSpec, points: list[ClosedPoint], d: int) -> list[int]:
    ctx, p, A = spec.ctx, spec.p, spec.precision.A
    mod = p**A
    if ctx.r == 1:
        # Z_{q^d} = Z_p[X]/(lifted minpoly), one modulus per row; x-bar is the class of X
        M = _batch.modulus_array([[c[0] for c in pt.minpoly] for pt in points], d, mod)
        xbar = _batch.x_class(M, len(points), mod)

        def lift(poly):
            return [np.array([[_teich_int(c[0], p, A)] + [0] * (d - 1)], dtype=xbar.dtype) for c in poly]

        return _frob_batch(xbar, M, p, A, d, lift(spec.f), lift(spec.f_neg))
    emb = extension(ctx, d)
    big = emb.big
    K = big.r
    M = _batch.modulus_array(big.modulus, K, mod)
    table = point_roots(ctx, d) if len(points) > 1 else None
    roots = [table[pt.minpoly] if table else roots_in(big, [emb(c) for c in pt.minpoly])[0]
             for pt in points]
    xbar = _batch.asarray(roots, K, mod)

    def lift(poly):
        if not poly:
            return []
        rows = _batch.asarray([emb(c) for c in poly], K, mod)
        t = _batch.teichmuller(rows, M, p, A, K)
        return [t[i:i + 1] for i in range(len(poly))]

    return _frob_batch(xbar, M, p, A, K, lift(spec.f), lift(spec.f_neg))


@functools.lru_cache(maxsize=32)
def frobenius_values(spec: TowerSpec, max_degree: int | None = None) -> tuple[tuple[ClosedPoint, PadicInt], ...]:
    """rho(Frob_x) for every closed point of U of degree <= max_degree (default D = b_s).

    Values carry a + guard digits so that (1+T)^rho is exact mod (p^a, T^{b_T}).
    """
    D = spec.precision.D if max_degree is None else max_degree
    points = closed_points(spec.ctx, spec.domain, D)
    out = []
    for d in range(1, D + 1):
        group = [pt for pt in points if pt.degree == d]
        if group:
            vals = _values_for_degree(spec, group, d)
            out.extend((pt, PadicInt(spec.p, v, spec.precision.A)) for pt, v in zip(group, vals))
    return tuple(out)


def frobenius_value(spec: TowerSpec, x: ClosedPoint) -> PadicInt:
    if spec.domain == TORUS and x.minpoly == (spec.ctx.zero, spec.ctx.one):
        raise SpecError("the point x = 0 is not on the torus")
    if x.degree < 1:
        raise SpecError("closed points have degree >= 1")
    (v,) = _values_for_degree(spec, [x], x.degree)
    return PadicInt(spec.p, v, spec.precision.A)


# -- layer-1 oracles ------------------------------------------------------------------

def _field_values(spec: TowerSpec, m: int):
    """F_{q^m} as rows, together with f(x) at each x of U(F_{q^m})."""
    ctx = spec.ctx
    emb = extension(ctx, m)
    big = emb.big
    xs = big.element_array()
    if spec.domain == TORUS:
        xs = xs[1:]
    M = np.array(big.modulus, dtype=np.int64)
    fx = _eval(big, M, [emb(c) for c in spec.f], xs)
    if spec.domain == TORUS:
        xinv = _batch.power(xs, big.q - 2, M, big.p)
        fx = (fx + _batch.mul(_eval(big, M, [emb(c) for c in spec.f_neg], xinv), xinv, M, big.p)) % big.p
    return big, M, xs, fx


def _eval(big, M, coeffs, xs):
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = (_batch.mul(acc, xs, M, big.p) + np.array(c, dtype=np.int64)[None, :]) % big.p
    return acc


def _index(big: FieldCtx, rows: np.ndarray) -> np.ndarray:
    return rows @ (big.p ** np.arange(big.r, dtype=np.int64))


def as_cover_affine_count(spec: TowerSpec, m: int) -> int:
    """#{(x, y) in U(F_{q^m}) x F_{q^m} : y^p - y = f(x)}, by two independent counts."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if spec.q**m > 2**20:
        raise PrecisionError(f"F_{spec.q}^{m} is too large to enumerate")
    big, M, xs, fx = _field_values(spec, m)
    p = big.p
    ys = big.element_array()
    image = (_batch.power(ys, p, M, p) - ys) % p
    fiber = np.bincount(_index(big, image), minlength=big.q)
    by_fibers = int(fiber[_index(big, fx)].sum())
    tv = _batch.trace_vector(M, 1, p)[0]
    traces = (fx * tv).sum(axis=1) % p
    by_trace = p * int(np.count_nonzero(traces == 0))
    if by_fibers != by_trace:
        raise CheckFailed(f"point counts disagree over F_{spec.q}^{m}: {by_fibers} vs {by_trace}")
    return by_fibers


def layer_one_point_counts(spec: TowerSpec, count: int) -> list[int]:
    """N_1..N_count for the complete layer-1 curve (one point above each ramified point)."""
    return [as_cover_affine_count(spec, m) + spec.ramified_points for m in range(1, count + 1)]


def layer_one_zeta_oracle(spec: TowerSpec) -> list[int]:
    """P(X_1, s) with integer coefficients, from brute-force point counts."""
    g = spec.genus(1)
    q = spec.q
    counts = layer_one_point_counts(spec, 2 * g)
    sums = [n - 1 - q**m for m, n in enumerate(counts, start=1)]
    c = [Fraction(1)]
    for k in range(1, 2 * g + 1):
        c.append(sum(sums[m - 1] * c[k - m] for m in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in c):
        raise CheckFailed("zeta numerator has non-integral coefficients")
    coeffs = [int(x) for x in c]
    if coeffs[-1] != q**g or any(coeffs[2 * g - k] != q ** (g - k) * coeffs[k] for k in range(g + 1)):
        raise CheckFailed("zeta numerator fails the functional equation")
    return coeffs


def class_number_oracle(spec: TowerSpec) -> int:
    """h_1 = P(X_1, 1)."""
    return sum(layer_one_zeta_oracle(spec))
