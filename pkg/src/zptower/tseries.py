"""Truncated power series over Z/p^a in T, and in (T, s).

A ``TSeries`` is an element of Z_p[[T]] known modulo (p^a, T^{b_T}); a
``BiSeries`` is a polynomial in s of degree b_s with ``TSeries`` coefficients,
i.e. an element of Z_p[[T]][[s]] modulo (p^a, T^{b_T}, s^{b_s+1}).  Every
operation is exact in that quotient ring, so results never depend on the
order in which factors are combined.

Series products use Kronecker substitution: coefficients are packed into one
big integer with slots wide enough that no carries cross slot boundaries.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import PrecisionError
from .padic import PadicInt, vp


def _slot_bytes(mod: int, length: int) -> int:
    bits = 2 * (mod - 1).bit_length() + length.bit_length() + 1
    return (bits + 7) // 8


def _pack(x: Sequence[int], w: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(w, "little") for c in x), "little")


def mul_trunc(x: Sequence[int], y: Sequence[int], n: int, mod: int) -> list[int]:
    """First n coefficients of x*y, reduced mod ``mod``; inputs must lie in [0, mod)."""
    x, y = x[:n], y[:n]
    if not x or not y:
        return [0] * n
    m = min(len(x), len(y))
    bits = 2 * (mod - 1).bit_length() + m.bit_length()
    if bits <= 64:
        # 8-byte slots: pack and unpack through numpy
        z = (int.from_bytes(np.asarray(x, dtype="<u8").tobytes(), "little")
             * int.from_bytes(np.asarray(y, dtype="<u8").tobytes(), "little"))
        slots = np.frombuffer(z.to_bytes(8 * (len(x) + len(y)), "little"), dtype="<u8")
        out = (slots[:n] % np.uint64(mod)).tolist()
    else:
        w = _slot_bytes(mod, m)
        z = _pack(x, w) * _pack(y, w)
        zb = z.to_bytes(w * (len(x) + len(y)), "little")
        out = [int.from_bytes(zb[i * w:(i + 1) * w], "little") % mod
               for i in range(min(n, len(x) + len(y) - 1))]
    out += [0] * (n - len(out))
    return out


def inverse_trunc(x: Sequence[int], n: int, mod: int, p: int) -> list[int]:
    """Inverse of a series with unit constant term, modulo (mod, T^n), by Newton doubling."""
    if x[0] % p == 0:
        raise ValueError("series has a non-unit constant term")
    y = [pow(x[0], -1, mod)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        xy = mul_trunc(x, y, k, mod)
        corr = [(-c) % mod for c in xy]
        corr[0] = (corr[0] + 2) % mod
        y = mul_trunc(y, corr, k, mod)
    return y + [0] * (n - len(y))


def guard_digits(p: int, b_T: int) -> int:
    """ceil(log_p b_T): extra p-adic digits an exponent needs for (1+T)^c mod (p^a, T^{b_T})."""
    g = 0
    while p**g < b_T:
        g += 1
    return g


@dataclass(frozen=True)
class TSeries:
    p: int
    a: int
    coeffs: tuple[int, ...]
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        mod = self.p**self.a
        object.__setattr__(self, "coeffs", tuple(int(c) % mod for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, p: int, a: int, b_T: int, coeffs: Sequence[int]) -> TSeries:
        coeffs = list(coeffs)[:b_T]
        return cls(p, a, tuple(coeffs + [0] * (b_T - len(coeffs))))

    @classmethod
    def one(cls, p: int, a: int, b_T: int) -> TSeries:
        return cls.from_coeffs(p, a, b_T, [1])

    @property
    def b_T(self) -> int:
        return len(self.coeffs)

    @property
    def mod(self) -> int:
        return self.p**self.a

    def _narrow(self, other: TSeries):
        if other.p != self.p:
            raise ValueError("mixed primes")
        a, b = min(self.a, other.a), min(self.b_T, other.b_T)
        prov = self.provenance + other.provenance
        if (a, b) != (self.a, self.b_T) or (a, b) != (other.a, other.b_T):
            prov += (f"narrowed to (a={a}, b_T={b})",)
        return a, b, prov

    def __add__(self, other: TSeries) -> TSeries:
        a, b, prov = self._narrow(other)
        return TSeries(self.p, a, tuple(x + y for x, y in zip(self.coeffs[:b], other.coeffs[:b])), prov)

    def __sub__(self, other: TSeries) -> TSeries:
        a, b, prov = self._narrow(other)
        return TSeries(self.p, a, tuple(x - y for x, y in zip(self.coeffs[:b], other.coeffs[:b])), prov)

    def __neg__(self) -> TSeries:
        return TSeries(self.p, self.a, tuple(-x for x in self.coeffs), self.provenance)

    def __mul__(self, other) -> TSeries:
        if isinstance(other, int):
            return TSeries(self.p, self.a, tuple(x * other for x in self.coeffs), self.provenance)
        a, b, prov = self._narrow(other)
        mod = self.p**a
        x = [c % mod for c in self.coeffs]
        y = [c % mod for c in other.coeffs]
        return TSeries(self.p, a, tuple(mul_trunc(x, y, b, mod)), prov)

    __rmul__ = __mul__

    def truncate(self, a: int | None = None, b_T: int | None = None) -> TSeries:
        a = self.a if a is None else min(a, self.a)
        b = self.b_T if b_T is None else min(b_T, self.b_T)
        return TSeries(self.p, a, self.coeffs[:b], self.provenance)

    def valuations(self) -> list[int | None]:
        """v_p of each coefficient; None where it vanishes to precision."""
        return [vp(c, self.p) if c else None for c in self.coeffs]


def ts_inverse(x: TSeries) -> TSeries:
    """Multiplicative inverse modulo (p^a, T^{b_T}); the constant term must be a unit."""
    return TSeries(x.p, x.a, tuple(inverse_trunc(list(x.coeffs), x.b_T, x.mod, x.p)), x.provenance)


@dataclass(frozen=True)
class BiSeries:
    """sum_k terms[k](T) s^k modulo (p^a, T^{b_T}, s^{b_s+1})."""

    p: int
    a: int
    b_T: int
    terms: tuple[tuple[int, ...], ...]

    @classmethod
    def one(cls, p: int, a: int, b_T: int, b_s: int) -> BiSeries:
        unit = tuple([1] + [0] * (b_T - 1))
        zero = (0,) * b_T
        return cls(p, a, b_T, (unit,) + (zero,) * b_s)

    @classmethod
    def from_tseries(cls, series: Sequence[TSeries]) -> BiSeries:
        p = series[0].p
        a = min(t.a for t in series)
        b = min(t.b_T for t in series)
        mod = p**a
        return cls(p, a, b, tuple(tuple(c % mod for c in t.coeffs[:b]) for t in series))

    @property
    def b_s(self) -> int:
        return len(self.terms) - 1

    @property
    def mod(self) -> int:
        return self.p**self.a

    def coeff(self, k: int) -> TSeries:
        return TSeries(self.p, self.a, self.terms[k])

    def __mul__(self, other: BiSeries) -> BiSeries:
        if other.p != self.p:
            raise ValueError("mixed primes")
        a, b = min(self.a, other.a), min(self.b_T, other.b_T)
        b_s = min(self.b_s, other.b_s)
        mod = self.p**a
        x = [[c % mod for c in t[:b]] for t in self.terms[:b_s + 1]]
        y = [[c % mod for c in t[:b]] for t in other.terms[:b_s + 1]]
        out = [[0] * b for _ in range(b_s + 1)]
        for i, xi in enumerate(x):
            if not any(xi):
                continue
            for j in range(b_s + 1 - i):
                if any(y[j]):
                    prod = mul_trunc(xi, y[j], b, mod)
                    acc = out[i + j]
                    for t in range(b):
                        acc[t] += prod[t]
        return BiSeries(self.p, a, b, tuple(tuple(c % mod for c in row) for row in out))

    def s_derivative(self) -> BiSeries:
        """s * d/ds."""
        mod = self.mod
        return BiSeries(self.p, self.a, self.b_T,
                        tuple(tuple(k * c % mod for c in t) for k, t in enumerate(self.terms)))

    def at_T_zero(self) -> list[int]:
        return [t[0] for t in self.terms]


def _chunk(p: int) -> int:
    # digits handled per table level: the largest k with p^k <= 16
    k = 1
    while p ** (k + 1) <= 16:
        k += 1
    return k


@functools.lru_cache(maxsize=64)
def _binomial_table(p: int, a: int, b_T: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # table[i][j-1] = (1+T)^(j B^i) for 1 <= j < B = p^k, built from repeated
    # multiplication by (1+T)^(B^i); stops once (1+T)^(B^i) == 1
    mod = p**a
    base_size = p ** _chunk(p)
    one = [1] + [0] * (b_T - 1)
    base = one[:]
    if b_T > 1:
        base[1] = 1 % mod
    base = [c % mod for c in base]
    table = []
    while base != one:
        powers = [base]
        for _ in range(base_size - 2):
            powers.append(mul_trunc(powers[-1], base, b_T, mod))
        table.append(tuple(tuple(x) for x in powers))
        base = mul_trunc(powers[-1], base, b_T, mod)
    return tuple(table)


def binomial_power(c: PadicInt, b_T: int, a: int | None = None) -> TSeries:
    """(1+T)^c modulo (p^a, T^{b_T}) from the base-p digits of c.

    Uses only ring operations: (1+T)^{p^i} comes from repeated multiplication,
    so no binomial coefficient is ever divided by a factorial.  Digits are
    consumed a few at a time from a cached table.  c must carry
    a + ceil(log_p b_T) digits (a defaults to c.prec minus that guard).
    """
    p = c.p
    guard = guard_digits(p, b_T)
    if a is None:
        a = c.prec - guard
    if a < 1 or c.prec < a + guard:
        raise PrecisionError(
            f"exponent known to {c.prec} digits; (1+T)^c mod (p^{a}, T^{b_T}) needs {a + guard}"
        )
    table = _binomial_table(p, a, b_T)
    mod = p**a
    B = p ** _chunk(p)
    v = c.value
    result = None
    for level in table:
        if not v:
            break
        v, digit = divmod(v, B)
        if digit:
            entry = level[digit - 1]
            result = list(entry) if result is None else mul_trunc(result, entry, b_T, mod)
    if result is None:
        result = [1] + [0] * (b_T - 1)
    return TSeries(p, a, tuple(result))


def euler_expand(c: PadicInt, d: int, b_s: int, b_T: int, a: int | None = None) -> BiSeries:
    """The local factor 1 / (1 - (1+T)^c s^d) = sum_j (1+T)^{cj} s^{dj}, truncated at s^{b_s}."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    u = binomial_power(c, b_T, a)
    mod = u.mod
    zero = (0,) * b_T
    terms = [zero] * (b_s + 1)
    cur = list(TSeries.one(c.p, u.a, b_T).coeffs)
    for k in range(0, b_s + 1, d):
        terms[k] = tuple(cur)
        cur = mul_trunc(cur, list(u.coeffs), b_T, mod)
    return BiSeries(c.p, u.a, b_T, tuple(terms))


@dataclass(frozen=True)
class PrepResult:
    """x = p^mu (T^lam + p a_1 T^{lam-1} + ... + p a_lam) unit(T).

    ``poly`` holds the computed distinguished polynomial (constant term first)
    modulo p^(a - mu), which reconstructs x exactly modulo (p^a, T^{b_T - lam}).
    Truncating x at T^{b_T} only determines the polynomial modulo
    p^floor(b_T / lam), and the a_i carry that smaller precision.
    """

    p: int
    a: int
    mu: int
    lam: int
    distinguished: tuple[PadicInt, ...]
    unit: TSeries
    poly: tuple[int, ...]

    def polynomial(self) -> list[int]:
        return list(self.poly)

    def reconstruct(self) -> TSeries:
        """p^mu * poly * unit, modulo (p^a, T^{b_T - lam})."""
        n, mod_u = self.unit.b_T, self.unit.mod
        prod = mul_trunc([c % mod_u for c in self.poly], list(self.unit.coeffs), n, mod_u)
        return TSeries(self.p, self.a, tuple(self.p**self.mu * c for c in prod))


def weierstrass_prepare(x: TSeries, min_unit_terms: int = 1) -> PrepResult:
    """p-adic Weierstrass preparation of a truncated series.

    mu is the minimal coefficient valuation and lam the first index attaining
    it.  The unit comes from Weierstrass division of T^lam by x / p^mu and is
    known modulo T^{b_T - lam}: the top lam coefficients of x are consumed by
    the division.
    """
    p, a, c = x.p, x.a, list(x.coeffs)
    vals = x.valuations()
    known = [v for v in vals if v is not None]
    if not known:
        raise PrecisionError(f"series vanishes mod p^{a}: insufficient precision")
    mu = min(known)
    lam = vals.index(mu)
    b = len(c)
    n = b - lam
    if n < min_unit_terms:
        raise PrecisionError(f"lambda = {lam} within {min_unit_terms} of b_T = {b}: truncation too short")
    a2 = a - mu
    mod2 = p**a2
    h = [(ci // p**mu) % mod2 for ci in c]
    low, high = h[:lam], h[lam:]
    u_inv0 = inverse_trunc(high, n, mod2, p)
    q = u_inv0
    for _ in range(a2 + 2):
        qb = mul_trunc(q, low, b, mod2) if lam else [0] * b
        rhs = [(-t) % mod2 for t in qb[lam:b]]
        rhs[0] = (rhs[0] + 1) % mod2
        nxt = mul_trunc(u_inv0, rhs, n, mod2)
        if nxt == q:
            break
        q = nxt
    else:
        raise ArithmeticError("Weierstrass division did not converge")
    qb = mul_trunc(q, low, lam, mod2) if lam else []
    if any(t % p for t in qb):
        raise ArithmeticError("distinguished polynomial is not congruent to T^lambda mod p")
    dist_prec = max(min(a2, b // lam) - 1, 0) if lam else 0
    dist = tuple(PadicInt(p, qb[lam - i] // p, dist_prec) for i in range(1, lam + 1))
    unit = TSeries(p, a2, tuple(inverse_trunc(q, n, mod2, p)))
    return PrepResult(p, a, mu, lam, dist, unit, tuple(qb) + (1,))
