"""Finite fields F_q = F_p[y]/(m(y)), polynomials over them, and closed points.

Field elements are tuples of r residues mod p (coefficients of 1, y, ..., y^{r-1}).
Polynomials are tuples of field elements, constant term first, with no
trailing zero coefficients.  A closed point of the affine line is identified
with its monic irreducible minimal polynomial.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import _batch
from .errors import SpecError

FqElem = tuple
FqPoly = tuple

AFFINE_LINE = "A1"
TORUS = "Gm"
_DOMAIN_ALIASES = {
    "A1": AFFINE_LINE, "affine-line": AFFINE_LINE, "affine": AFFINE_LINE,
    "Gm": TORUS, "torus": TORUS, "GM": TORUS,
}


def normalize_domain(domain: str) -> str:
    try:
        return _DOMAIN_ALIASES[domain]
    except KeyError:
        raise SpecError(f"unknown domain {domain!r}; expected 'A1' or 'Gm'") from None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class FieldCtx:
    """The field F_q with q = p^r, presented by a monic irreducible modulus over F_p."""

    p: int
    r: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.r

    def __str__(self) -> str:
        return f"F_{self.q}"

    @property
    def zero(self) -> FqElem:
        return (0,) * self.r

    @property
    def one(self) -> FqElem:
        return (1,) + (0,) * (self.r - 1)

    def elem(self, index: int) -> FqElem:
        """Element with base-p digit expansion ``index`` (0 <= index < q)."""
        digits = []
        for _ in range(self.r):
            index, d = divmod(index, self.p)
            digits.append(d)
        return tuple(digits)

    def index(self, x: FqElem) -> int:
        return sum(c * self.p**i for i, c in enumerate(x))

    def coerce(self, x) -> FqElem:
        if isinstance(x, int):
            if not 0 <= x < self.q:
                raise SpecError(f"field element index {x} out of range for {self}")
            return self.elem(x)
        x = tuple(int(c) % self.p for c in x)
        if len(x) != self.r:
            raise SpecError(f"field element {x} must have {self.r} digits")
        return x

    def elements(self) -> Iterator[FqElem]:
        return (self.elem(i) for i in range(self.q))

    def add(self, x: FqElem, y: FqElem) -> FqElem:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x: FqElem, y: FqElem) -> FqElem:
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def neg(self, x: FqElem) -> FqElem:
        return tuple(-a % self.p for a in x)

    def mul(self, x: FqElem, y: FqElem) -> FqElem:
        r, p, m = self.r, self.p, self.modulus
        full = [0] * (2 * r - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    full[i + j] += a * b
        for t in range(2 * r - 2, r - 1, -1):
            c = full[t] % p
            if c:
                for j in range(r):
                    full[t - r + j] -= c * m[j]
        return tuple(c % p for c in full[:r])

    def pow(self, x: FqElem, e: int) -> FqElem:
        result, base = self.one, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x: FqElem) -> FqElem:
        if not any(x):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow(x, self.q - 2)

    def absolute_trace(self, x: FqElem) -> int:
        """Tr_{F_q/F_p}(x) as an integer in [0, p)."""
        acc, y = self.zero, x
        for _ in range(self.r):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        if any(acc[1:]):
            raise ArithmeticError("trace left the prime field")
        return acc[0]

    def element_array(self) -> np.ndarray:
        """All q elements as digit rows, in index order."""
        idx = np.arange(self.q, dtype=np.int64)
        cols = [(idx // self.p**i) % self.p for i in range(self.r)]
        return np.stack(cols, axis=1)

    @functools.cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        elems = list(self.elements())
        add = np.array([[self.index(self.add(x, y)) for y in elems] for x in elems], dtype=np.int64)
        mul = np.array([[self.index(self.mul(x, y)) for y in elems] for x in elems], dtype=np.int64)
        return add.reshape(q, q), mul.reshape(q, q)


# -- polynomials over F_q ----------------------------------------------------

def poly_trim(ctx: FieldCtx, f: Sequence[FqElem]) -> FqPoly:
    f = list(f)
    while f and not any(f[-1]):
        f.pop()
    return tuple(f)


def poly_degree(f: FqPoly) -> int:
    return len(f) - 1


def poly_from_ints(ctx: FieldCtx, coeffs: Sequence) -> FqPoly:
    return poly_trim(ctx, [ctx.coerce(c) for c in coeffs])


def poly_mul(ctx: FieldCtx, f: FqPoly, g: FqPoly) -> FqPoly:
    if not f or not g:
        return ()
    out = [ctx.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if any(a):
            for j, b in enumerate(g):
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
    return poly_trim(ctx, out)


def poly_divmod(ctx: FieldCtx, f: FqPoly, g: FqPoly) -> tuple[FqPoly, FqPoly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f)
    dg = len(g) - 1
    lead_inv = ctx.inv(g[-1])
    quo = [ctx.zero] * max(len(f) - dg, 1)
    for t in range(len(rem) - 1, dg - 1, -1):
        c = ctx.mul(rem[t], lead_inv)
        if any(c):
            quo[t - dg] = c
            for j, b in enumerate(g):
                rem[t - dg + j] = ctx.sub(rem[t - dg + j], ctx.mul(c, b))
    return poly_trim(ctx, quo), poly_trim(ctx, rem[:dg])


def poly_eval(ctx: FieldCtx, f: FqPoly, x: FqElem) -> FqElem:
    acc = ctx.zero
    for c in reversed(f):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def poly_str(ctx: FieldCtx, f: FqPoly, var: str = "x") -> str:
    """Human-readable form; for r > 1 coefficients print as their digit index."""
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = ctx.index(f[i])
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms)


def poly_key(ctx: FieldCtx, f: FqPoly) -> int:
    """Index of a monic polynomial: sum of coefficient indices times q^j below the leading term."""
    q = ctx.q
    return sum(ctx.index(c) * q**j for j, c in enumerate(f[:-1]))


# -- fields -------------------------------------------------------------------

def build_field(p: int, r: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Context for F_{p^r}.

    Without ``modulus`` the lexicographically least monic irreducible of degree
    r is used (x itself when r == 1), so results are reproducible.
    """
    if not is_prime(p):
        raise SpecError(f"p = {p} is not prime")
    if r < 1:
        raise SpecError(f"extension degree r = {r} must be >= 1")
    if modulus is None:
        if r == 1:
            return FieldCtx(p, 1, (0, 1))
        prime = build_field(p, 1)
        (first, *_) = monic_irreducibles(prime, r)
        return FieldCtx(p, r, tuple(c[0] for c in first))
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != r + 1 or modulus[-1] != 1:
        raise SpecError(f"modulus {list(modulus)} must be monic of degree {r}")
    if r > 1 and not _is_irreducible_over_prime(p, modulus):
        raise SpecError(f"modulus {list(modulus)} is reducible over F_{p}")
    return FieldCtx(p, r, modulus)


def _is_irreducible_over_prime(p: int, modulus: tuple[int, ...]) -> bool:
    prime = build_field(p, 1)
    f = tuple((c,) for c in modulus)
    r = len(modulus) - 1
    for e in range(1, r // 2 + 1):
        for g in monic_irreducibles(prime, e):
            if not poly_divmod(prime, f, g)[1]:
                return False
    return True


@functools.lru_cache(maxsize=None)
def _irreducible_keys(ctx: FieldCtx, d: int) -> tuple[int, ...]:
    q = ctx.q
    if d == 1:
        return tuple(range(q))
    add, mul = ctx.tables
    reducible = np.zeros(q**d, dtype=bool)
    for i in range(1, d // 2 + 1):
        m = d - i
        idx = np.arange(q**m, dtype=np.int64)
        b = np.stack([(idx // q**j) % q for j in range(m)] + [np.ones_like(idx)], axis=1)
        for key in _irreducible_keys(ctx, i):
            a = [(key // q**j) % q for j in range(i)] + [1]
            prod = np.zeros((q**m, d + 1), dtype=np.int64)
            for s, a_s in enumerate(a):
                if a_s:
                    prod[:, s:s + m + 1] = add[prod[:, s:s + m + 1], mul[a_s, b]]
            keys = prod[:, :d] @ (q ** np.arange(d, dtype=np.int64))
            reducible[keys] = True
    return tuple(int(k) for k in np.flatnonzero(~reducible))


def _poly_from_key(ctx: FieldCtx, key: int, d: int) -> FqPoly:
    q = ctx.q
    elems = _element_list(ctx)
    return tuple(elems[(key // q**j) % q] for j in range(d)) + (ctx.one,)


@functools.lru_cache(maxsize=None)
def _element_list(ctx: FieldCtx) -> tuple:
    return tuple(ctx.elem(i) for i in range(ctx.q))


def monic_irreducibles(ctx: FieldCtx, d: int) -> list[FqPoly]:
    """All monic irreducible polynomials of degree d over F_q, ordered by ``poly_key``."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return [_poly_from_key(ctx, k, d) for k in _irreducible_keys(ctx, d)]


@dataclass(frozen=True)
class ClosedPoint:
    minpoly: FqPoly

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


def closed_points(ctx: FieldCtx, domain: str, max_degree: int) -> list[ClosedPoint]:
    """Closed points of U (A^1, or G_m = A^1 minus the origin) of degree <= max_degree."""
    domain = normalize_domain(domain)
    origin = (ctx.zero, ctx.one)
    points = []
    for d in range(1, max_degree + 1):
        for f in monic_irreducibles(ctx, d):
            if domain == TORUS and f == origin:
                continue
            points.append(ClosedPoint(f))
    return points


# -- extensions F_{q^m} ---------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """F_q inside F_{q^m} = F_{p^{rm}}, sending the generator y to ``image``."""

    small: FieldCtx
    big: FieldCtx
    image: tuple[int, ...]

    def __call__(self, x: FqElem) -> FqElem:
        big = self.big
        acc, power = big.zero, big.one
        for c in x:
            if c:
                acc = big.add(acc, tuple(c * v % big.p for v in power))
            power = big.mul(power, self.image)
        return acc


def evaluate_all(big: FieldCtx, coeffs: Sequence[FqElem], xs: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial with coefficients in ``big`` at every row of xs."""
    M = np.array(big.modulus, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = _batch.mul(acc, xs, M, big.p)
        acc = (acc + np.array(c, dtype=np.int64)[None, :]) % big.p
    return acc


def roots_in(big: FieldCtx, coeffs: Sequence[FqElem]) -> list[FqElem]:
    """All roots in ``big`` of a polynomial with coefficients already in ``big``, in index order."""
    xs = big.element_array()
    vals = evaluate_all(big, coeffs, xs)
    hits = np.flatnonzero(~vals.any(axis=1))
    return [tuple(int(v) for v in xs[i]) for i in hits]


@functools.lru_cache(maxsize=None)
def extension(ctx: FieldCtx, m: int) -> Embedding:
    big = build_field(ctx.p, ctx.r * m)
    if ctx.r == 1:
        return Embedding(ctx, big, big.zero)
    modulus = [tuple([c] + [0] * (big.r - 1)) for c in ctx.modulus]
    roots = roots_in(big, modulus)
    return Embedding(ctx, big, roots[0])


@functools.lru_cache(maxsize=32)
def point_roots(ctx: FieldCtx, d: int) -> dict:
    """Map each monic irreducible of degree d over F_q to its least-index root in F_{q^d}.

    Every element of F_{q^d} is processed at once: its q-power conjugates give
    the minimal polynomial, whose coefficients are pulled back to F_q.
    """
    emb = extension(ctx, d)
    big = emb.big
    p, K = big.p, big.r
    M = np.array(big.modulus, dtype=np.int64)
    xs = big.element_array()
    n = xs.shape[0]
    # poly[:, j, :] is the coefficient of X^j, built as prod_i (X - x^{q^i})
    poly = np.zeros((n, d + 1, K), dtype=np.int64)
    poly[:, 0, 0] = 1
    conj = xs.copy()
    for i in range(d):
        shifted = np.zeros_like(poly)
        shifted[:, 1:, :] = poly[:, :-1, :]
        for j in range(d + 1):
            shifted[:, j, :] -= _batch.mul(poly[:, j, :], conj, M, p)
        poly = shifted % p
        conj = _batch.power(conj, ctx.q, M, p)
    # only rows whose conjugates close up after exactly d steps (conj == x) and no earlier
    small = np.array([big.index(emb(c)) for c in ctx.elements()], dtype=np.int64)
    back = np.full(big.q, -1, dtype=np.int64)
    back[small] = np.arange(ctx.q)
    weights = p ** np.arange(K, dtype=np.int64)
    coeff_idx = back[poly[:, :d, :] @ weights]
    degree_d = np.ones(n, dtype=bool)
    y = xs.copy()
    for e in range(1, d):
        y = _batch.power(y, ctx.q, M, p)
        if d % e == 0:
            degree_d &= (y != xs).any(axis=1)
    keys = coeff_idx @ (ctx.q ** np.arange(d, dtype=np.int64))
    out = {}
    for row in np.flatnonzero(degree_d):
        key = int(keys[row])
        if key not in out:
            out[key] = tuple(int(v) for v in xs[row])
    return {_poly_from_key(ctx, k, d): root for k, root in sorted(out.items())}


def is_irreducible_by_roots(ctx: FieldCtx, f: FqPoly) -> bool:
    """Independent check: f has a root in F_{q^d} lying in no proper subfield F_{q^e}."""
    d = len(f) - 1
    emb = extension(ctx, d)
    big = emb.big
    for root in roots_in(big, [emb(c) for c in f]):
        if all(big.pow(root, ctx.q**e) != root for e in range(1, d)):
            return True
    return False
