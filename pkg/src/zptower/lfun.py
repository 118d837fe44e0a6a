"""The T-adic L-function of a tower and its classical specializations.

    L_rho(T, s) = prod_x 1 / (1 - (1+T)^{rho(Frob_x)} s^{deg x})

is computed from the Euler product over closed points of degree <= b_s, exactly
modulo (p^a, T^{b_T}, s^{b_s+1}).  Substituting T = zeta_{p^n} - 1 gives
L(chi_n, s) for a primitive character of level n, a polynomial whose degree
is detected from the data rather than assumed.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _batch
from .errors import CheckFailed, PrecisionError
from .ff import TORUS, extension
from .padic import (
    CycloElem, CycloRing, PadicInt, cyclo_substitute, cyclo_valuation, galois_conjugate,
    ramification_index, units_mod, vp,
)
from .tower import TowerSpec, frobenius_values
from .tseries import BiSeries, TSeries, binomial_power, inverse_trunc, mul_trunc


@dataclass(frozen=True)
class TadicL:
    series: BiSeries
    spec: TowerSpec

    @property
    def b_s(self) -> int:
        return self.series.b_s

    def coeff(self, k: int) -> TSeries:
        return self.series.coeff(k)


def euler_product(factors, p: int, a: int, b_s: int, b_T: int) -> BiSeries:
    """prod over (c, d) of 1 / (1 - (1+T)^c s^d), truncated.

    Factors of equal degree d are first combined in the variable y = s^d by the
    recurrence G'_j = G_j + U G'_{j-1} (multiplication by the geometric series
    in U y); each combined group is then multiplied into the result.
    """
    mod = p**a
    one = [1] + [0] * (b_T - 1)
    groups: dict[int, list] = {}
    for c, d in factors:
        if d <= b_s:
            groups.setdefault(d, []).append(c)
    terms = [one] + [[0] * b_T for _ in range(b_s)]
    for d in sorted(groups):
        jmax = b_s // d
        G = [one] + [[0] * b_T for _ in range(jmax)]
        for c in groups[d]:
            u = list(binomial_power(c, b_T, a).coeffs)
            G[1] = [(x + y) % mod for x, y in zip(G[1], u)]
            for j in range(2, jmax + 1):
                prev = mul_trunc(G[j - 1], u, b_T, mod)
                G[j] = [(x + y) % mod for x, y in zip(G[j], prev)]
        new = [t[:] for t in terms]
        for k in range(d, b_s + 1):
            acc = new[k]
            for j in range(1, k // d + 1):
                if any(terms[k - d * j]) and any(G[j]):
                    prod = mul_trunc(terms[k - d * j], G[j], b_T, mod)
                    acc = [(x + y) % mod for x, y in zip(acc, prod)]
            new[k] = acc
        terms = new
    return BiSeries(p, a, b_T, tuple(tuple(t) for t in terms))


@functools.lru_cache(maxsize=16)
def tadic_l(spec: TowerSpec) -> TadicL:
    """L_rho(T, s) modulo (p^a, T^{b_T}, s^{b_s+1})."""
    prec = spec.precision
    factors = [(v, pt.degree) for pt, v in frobenius_values(spec)]
    return TadicL(euler_product(factors, spec.p, prec.a, prec.b_s, prec.b_T), spec)


# -- classical specializations -------------------------------------------------------

@dataclass(frozen=True)
class ClassicalL:
    """L(chi_n, s) with coefficients in Z_p[zeta_{p^n}]; ``degree`` is None at n = 0."""

    n: int
    coefficients: tuple[CycloElem, ...]
    degree: int | None

    @property
    def ring(self) -> CycloRing:
        return self.coefficients[0].ring

    def conjugate(self, u: int) -> ClassicalL:
        return ClassicalL(self.n, tuple(galois_conjugate(c, u) for c in self.coefficients), self.degree)

    def to_dict(self) -> dict:
        ring = self.ring
        return {
            "n": self.n, "p": ring.p, "a": ring.prec, "e": ring.e, "degree": self.degree,
            "basis": "pi-adic, pi = zeta - 1",
            "coefficients": [list(c.coeffs) for c in self.coefficients],
        }


def specialize(L: TadicL, n: int) -> ClassicalL:
    """L(chi_n, s) = L_rho(t_n, s), with its degree detected by a valuation margin.

    A coefficient counts as nonzero when its valuation is below a/2.  The
    detected degree is the last such index; everything after it must vanish
    to full precision, and it must fall short of b_s.
    """
    spec = L.spec
    prec = spec.precision
    if n < 0:
        raise ValueError("level must be >= 0")
    if n > prec.n_max:
        need = ramification_index(spec.p, n) * prec.a
        raise PrecisionError(f"level {n} exceeds n_max = {prec.n_max}; rerun with --nmax {n} (b_T >= {need})")
    ring = CycloRing(spec.p, n, prec.a)
    coeffs = [cyclo_substitute(L.coeff(k), ring) for k in range(L.b_s + 1)]
    if n == 0:
        return ClassicalL(0, tuple(coeffs), None)
    half = Fraction(prec.a, 2)
    ell = max((k for k, c in enumerate(coeffs) if not c.is_zero() and cyclo_valuation(c) < half), default=0)
    if ell >= L.b_s or any(not c.is_zero() for c in coeffs[ell + 1:]):
        raise PrecisionError(
            f"degree detection inconclusive at level {n} (b_s = {L.b_s}, a = {prec.a}); raise b_s or a"
        )
    return ClassicalL(n, tuple(coeffs[:ell + 1]), ell)


def l_at_one(L: ClassicalL) -> CycloElem:
    """L(chi_n, 1): the sum of the retained coefficients."""
    acc = L.ring.zero()
    for c in L.coefficients:
        acc = acc + c
    return acc


def l_rho_at_one(L: TadicL, check: bool = True) -> TSeries:
    """L_rho(T, 1) as the finite sum of the retained s-coefficients.

    With ``check`` the degree at n_max is detected first, which refuses
    truncations that cut into L(chi_{n_max}, s).
    """
    if check and L.spec.precision.n_max > 0:
        specialize(L, L.spec.precision.n_max)
    s = L.series
    mod = s.mod
    total = [sum(col) % mod for col in zip(*s.terms)]
    return TSeries(s.p, s.a, tuple(total), ("L_rho(T,1)",))


# -- polynomials over Z_p and layer zeta functions -----------------------------------

@dataclass(frozen=True)
class ZpPoly:
    """A polynomial over Z/p^a, constant term first, of known degree."""

    p: int
    a: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        mod = self.p**self.a
        object.__setattr__(self, "coeffs", tuple(int(c) % mod for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mod(self) -> int:
        return self.p**self.a

    def __mul__(self, other: ZpPoly) -> ZpPoly:
        a = min(self.a, other.a)
        n = self.degree + other.degree + 1
        return ZpPoly(self.p, a, tuple(mul_trunc(list(self.coeffs), list(other.coeffs), n, self.p**a)))

    def at_one(self) -> PadicInt:
        return PadicInt(self.p, sum(self.coeffs), self.a)

    def divides(self, other: ZpPoly) -> bool:
        """Exact divisibility in (Z/p^a)[s] for polynomials with constant term 1."""
        if self.coeffs[0] % self.p == 0:
            raise ValueError("divisor needs a unit constant term")
        a = min(self.a, other.a)
        mod = self.p**a
        n = other.degree - self.degree + 1
        if n < 1:
            return False
        inv = inverse_trunc([c % mod for c in self.coeffs], n, mod, self.p)
        quo = mul_trunc([c % mod for c in other.coeffs], inv, n, mod)
        back = mul_trunc([c % mod for c in self.coeffs], quo, other.degree + 1, mod)
        return back == [c % mod for c in other.coeffs]

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def _cyclo_poly_mul(f: Sequence[CycloElem], g: Sequence[CycloElem]) -> list[CycloElem]:
    ring = f[0].ring
    out = [ring.zero() for _ in range(len(f) + len(g) - 1)]
    for i, x in enumerate(f):
        if x.is_zero():
            continue
        for j, y in enumerate(g):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def conjugate_product(L: ClassicalL) -> ZpPoly:
    """prod over u in (Z/p^n)^x of L^{sigma_u}; must land in Z_p[s]."""
    if L.n < 1:
        raise ValueError("conjugate products are taken at levels n >= 1")
    ring = L.ring
    acc = None
    for u in units_mod(ring.p, L.n):
        conj = list(L.conjugate(u).coefficients)
        acc = conj if acc is None else _cyclo_poly_mul(acc, conj)
    if not all(c.is_rational() for c in acc):
        raise CheckFailed(f"conjugate product at level {L.n} is not Galois-fixed")
    return ZpPoly(ring.p, ring.prec, tuple(c.coeffs[0] for c in acc))


def layer_zeta(spec: TowerSpec, n: int) -> ZpPoly:
    """P(X_n, s) as the product of the conjugate products at levels 1..n."""
    L = tadic_l(spec)
    acc = ZpPoly(spec.p, spec.precision.a, (1,))
    for j in range(1, n + 1):
        acc = acc * conjugate_product(specialize(L, j))
    return acc


def level_valuation(spec: TowerSpec, n: int) -> Fraction:
    """v_p(L(chi_n, 1))."""
    return cyclo_valuation(l_at_one(specialize(tadic_l(spec), n)))


def class_number_valuation(spec: TowerSpec, n: int) -> Fraction:
    """v_p(h_n) from the telescoping sum of e_k * v_p(L(chi_k, 1)) over k <= n."""
    total = Fraction(0)
    for k in range(1, n + 1):
        total += ramification_index(spec.p, k) * level_valuation(spec, k)
    if total.denominator != 1 or total < 0:
        raise CheckFailed(f"v_p(h_{n}) = {total} is not a nonnegative integer")
    return total


# -- Newton polygons -------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]

    @property
    def degree(self) -> int:
        return self.vertices[-1][0]

    @property
    def segments(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) per segment, left to right."""
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0) / (i1 - i0), i1 - i0))
        return out

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for s, m in self.segments for _ in range(m))

    def is_convex(self) -> bool:
        sl = [s for s, _ in self.segments]
        return all(x < y for x, y in zip(sl, sl[1:]))

    def height(self, i: int) -> Fraction:
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            if i0 <= i <= i1:
                return v0 + Fraction(v1 - v0) * (i - i0) / (i1 - i0)
        raise ValueError(f"index {i} outside the polygon")

    def is_symmetric(self, weight: int) -> bool:
        """Slopes invariant under s -> weight - s."""
        sl = self.slopes
        return sorted(sl) == sorted(weight - s for s in sl)

    def to_tsv(self) -> str:
        rows = ["# index\tvaluation_num\tvaluation_den"]
        rows += [f"{i}\t{v.numerator}\t{v.denominator}" for i, v in self.vertices]
        return "\n".join(rows) + "\n"


def _valuations(poly) -> tuple[list[Fraction | None], Fraction]:
    if isinstance(poly, ClassicalL):
        coeffs, floor = poly.coefficients, Fraction(poly.ring.prec)
        return [None if c.is_zero() else cyclo_valuation(c) for c in coeffs], floor
    if isinstance(poly, ZpPoly):
        return [None if c == 0 else Fraction(vp(c, poly.p)) for c in poly.coeffs], Fraction(poly.a)
    raise TypeError(f"cannot take the Newton polygon of {type(poly).__name__}")


def newton_polygon(poly: ClassicalL | ZpPoly) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)), normalised by v_p(p) = 1.

    Coefficients that vanish mod p^a only have v >= a; if the hull passes above
    a at such an index the answer is not determined and PrecisionError is raised.
    """
    vals, floor = _valuations(poly)
    if vals[0] != 0:
        raise ValueError("Newton polygons here need constant term 1")
    if vals[-1] is None:
        raise PrecisionError(f"leading coefficient vanishes mod p^{floor}; raise precision")
    pts = [(i, v) for i, v in enumerate(vals) if v is not None]
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (i0, v0), (i1, v1) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (v1 - v0) * (pt[0] - i0) >= (pt[1] - v0) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(pt)
    np_ = NewtonPolygon(tuple(hull))
    for i, v in enumerate(vals):
        if v is None and np_.height(i) > floor:
            raise PrecisionError(f"coefficient {i} vanishes mod p^{floor} below the hull; raise precision")
    return np_


def ramification_lower_bound(np_: NewtonPolygon, v1: Fraction | None = None) -> int:
    """Lower bound for the ramification index of a field holding these valuations."""
    bound = 1
    for s, _ in np_.segments:
        bound = bound * s.denominator // math.gcd(bound, s.denominator)
    if v1 is not None:
        bound = max(bound, Fraction(v1).denominator)
    return bound


# -- character sums ------------------------------------------------------------------------

def character_sum(spec: TowerSpec, k: int) -> TSeries:
    """S_k(T) = sum over x in U(F_{q^k}) of (1+T)^{Tr(f^(x^))}, by direct enumeration.

    Works in Z_{p^{rk}} presented by the default modulus of F_{p^{rk}}, which is
    independent of the per-point rings used by the Euler product.
    """
    prec = spec.precision
    p, A = spec.p, prec.A
    mod = p**A
    emb = extension(spec.ctx, k)
    big = emb.big
    K = big.r
    M = _batch.modulus_array(big.modulus, K, mod)
    xs = big.element_array()
    if spec.domain == TORUS:
        xs = xs[1:]
    xs = _batch.asarray(xs, K, mod)
    xhat = _batch.teichmuller(xs, M, p, A, K)

    def lifts(poly):
        if not poly:
            return []
        rows = _batch.asarray([emb(c) for c in poly], K, mod)
        return list(_batch.teichmuller(rows, M, p, A, K))

    acc = np.zeros_like(xhat)
    for c in reversed(lifts(spec.f)):
        acc = (_batch.mul(acc, xhat, M, mod) + c) % mod
    if spec.f_neg:
        xinv = _batch.power(xhat, p**K - 2, M, mod)
        neg = np.zeros_like(xhat)
        for c in reversed(lifts(spec.f_neg)):
            neg = (_batch.mul(neg, xinv, M, mod) + c) % mod
        acc = (acc + _batch.mul(neg, xinv, M, mod)) % mod
    tv = _batch.trace_vector(M, 1, mod)
    counts = Counter(int(c) for c in _batch.trace(acc, tv, mod))
    a, b_T = prec.a, prec.b_T
    total = [0] * b_T
    amod = p**a
    for c, m in sorted(counts.items()):
        u = binomial_power(PadicInt(p, c, A), b_T, a).coeffs
        total = [(t + m * x) % amod for t, x in zip(total, u)]
    return TSeries(p, a, tuple(total))


def dlog_identity_holds(spec: TowerSpec, kmax: int) -> bool:
    """s dL/ds == L * sum_{k<=kmax} S_k(T) s^k, modulo (p^a, T^{b_T}, s^{kmax+1})."""
    L = tadic_l(spec).series
    if L.b_s < kmax:
        raise PrecisionError(f"b_s = {L.b_s} < {kmax}")
    terms = L.terms[:kmax + 1]
    lhs = BiSeries(L.p, L.a, L.b_T, terms).s_derivative()
    sums = [(0,) * L.b_T] + [character_sum(spec, k).coeffs for k in range(1, kmax + 1)]
    rhs = BiSeries(L.p, L.a, L.b_T, terms) * BiSeries(L.p, L.a, L.b_T, tuple(sums))
    return lhs == rhs

