"""p-adic rings at fixed precision.

* ``PadicInt``: Z_p modulo p^prec.
* ``UnramRing``/``UnramElem``: the unramified ring Z_p[X]/(M) of degree k,
  M a monic lift of an irreducible polynomial over F_p, modulo p^prec.
* ``CycloRing``/``CycloElem``: Z_p[zeta_{p^n}] in the basis of powers of the
  uniformizer pi = zeta - 1, reduced by the Eisenstein relation
  Phi_{p^n}(1 + pi) = 0.  Valuations are exact fractions normalised by v(p) = 1.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _batch
from .errors import PrecisionError
from .ff import FieldCtx, FqElem


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    p: int
    value: int
    prec: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.prec)

    @classmethod
    def from_rational(cls, p: int, num: int, den: int, prec: int) -> PadicInt:
        mod = p**prec
        return cls(p, num * pow(den, -1, mod), prec)

    def _coerce(self, other):
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other.value, min(self.prec, other.prec)
        return int(other), self.prec

    def __add__(self, other):
        v, prec = self._coerce(other)
        return PadicInt(self.p, self.value + v, prec)

    __radd__ = __add__

    def __sub__(self, other):
        v, prec = self._coerce(other)
        return PadicInt(self.p, self.value - v, prec)

    def __rsub__(self, other):
        v, prec = self._coerce(other)
        return PadicInt(self.p, v - self.value, prec)

    def __mul__(self, other):
        v, prec = self._coerce(other)
        return PadicInt(self.p, self.value * v, prec)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.p, -self.value, self.prec)

    def __int__(self):
        return self.value

    def is_zero(self) -> bool:
        return self.value == 0

    def valuation(self) -> int:
        if self.value == 0:
            raise PrecisionError(f"element vanishes mod {self.p}^{self.prec}")
        return vp(self.value, self.p)

    def digits(self) -> list[int]:
        v, out = self.value, []
        for _ in range(self.prec):
            v, d = divmod(v, self.p)
            out.append(d)
        return out


# -- unramified rings -----------------------------------------------------------

@dataclass(frozen=True)
class UnramRing:
    p: int
    prec: int
    modulus: tuple[int, ...]

    @classmethod
    def over(cls, ctx: FieldCtx, prec: int) -> UnramRing:
        """The unramified lift of ``ctx`` (its modulus lifted digit by digit)."""
        return cls(ctx.p, prec, tuple(ctx.modulus))

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def mod(self) -> int:
        return self.p**self.prec

    @property
    def residue_size(self) -> int:
        return self.p**self.degree

    @functools.cached_property
    def residue_field(self) -> FieldCtx:
        return FieldCtx(self.p, self.degree, tuple(c % self.p for c in self.modulus))

    @functools.cached_property
    def M(self) -> np.ndarray:
        return _batch.modulus_array(self.modulus, self.degree, self.mod)

    @functools.cached_property
    def trace_vector(self) -> np.ndarray:
        return _batch.trace_vector(self.M, 1, self.mod)[0]

    def elem(self, coeffs: Sequence[int]) -> UnramElem:
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        return UnramElem(self, tuple(int(c) % self.mod for c in coeffs))

    def lift(self, x: FqElem) -> UnramElem:
        return self.elem(x)

    def one(self) -> UnramElem:
        return self.elem([1])

    def array(self, elems) -> np.ndarray:
        return _batch.asarray([e.coeffs for e in elems], self.degree, self.mod)


@dataclass(frozen=True)
class UnramElem:
    ring: UnramRing
    coeffs: tuple[int, ...]

    def _row(self) -> np.ndarray:
        return _batch.asarray([self.coeffs], self.ring.degree, self.ring.mod)

    def _wrap(self, row) -> UnramElem:
        return UnramElem(self.ring, tuple(int(c) for c in row[0]))

    def _other(self, other) -> UnramElem:
        if isinstance(other, UnramElem):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        return self.ring.elem([int(other)])

    def __add__(self, other):
        o = self._other(other)
        return self.ring.elem([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return self.ring.elem([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self):
        return self.ring.elem([-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._other(other)
        return self._wrap(_batch.mul(self._row(), o._row(), self.ring.M, self.ring.mod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return self._wrap(_batch.power(self._row(), e, self.ring.M, self.ring.mod))

    def residue(self) -> FqElem:
        return tuple(c % self.ring.p for c in self.coeffs)


def teichmuller(x: UnramElem) -> UnramElem:
    """The Teichmüller representative t of x: t = x mod p and t^Q = t, Q the residue field size.

    Iterates y -> y^Q from y = x; every pass gains ``degree`` digits, and the
    loop stops at the fixed point.
    """
    ring = x.ring
    row = _batch.teichmuller(x._row(), ring.M, ring.p, ring.prec, ring.degree)
    return x._wrap(row)


def trace_to_zp(x: UnramElem) -> PadicInt:
    """Trace to Z_p: the trace of multiplication by x in the power basis."""
    ring = x.ring
    t = sum(int(c) * int(v) for c, v in zip(x.coeffs, ring.trace_vector))
    return PadicInt(ring.p, t, ring.prec)


# -- cyclotomic rings -----------------------------------------------------------

def ramification_index(p: int, n: int) -> int:
    return 1 if n == 0 else p ** (n - 1) * (p - 1)


@functools.lru_cache(maxsize=None)
def cyclotomic_relation(p: int, n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_{p^n}(1 + pi), constant term first (pi itself for n = 0)."""
    if n == 0:
        return (0, 1)
    step = p ** (n - 1)
    e = ramification_index(p, n)
    coeffs = [0] * (e + 1)
    for j in range(p):
        m = j * step
        for i in range(m + 1):
            coeffs[i] += math.comb(m, i)
    return tuple(coeffs)


@dataclass(frozen=True)
class CycloRing:
    p: int
    n: int
    prec: int

    @property
    def e(self) -> int:
        return ramification_index(self.p, self.n)

    @property
    def mod(self) -> int:
        return self.p**self.prec

    def elem(self, coeffs: Sequence[int]) -> CycloElem:
        coeffs = [int(c) for c in coeffs]
        coeffs += [0] * (self.e - len(coeffs))
        return CycloElem(self, tuple(self._reduce(coeffs)))

    def _reduce(self, full: list[int]) -> list[int]:
        e, mod = self.e, self.mod
        rel = cyclotomic_relation(self.p, self.n)
        full = list(full)
        for m in range(len(full) - 1, e - 1, -1):
            c = full[m] % mod
            if c:
                for j in range(e):
                    full[m - e + j] -= c * rel[j]
        return [c % mod for c in full[:e]]

    def zero(self) -> CycloElem:
        return self.elem([])

    def one(self) -> CycloElem:
        return self.elem([1])

    def pi(self) -> CycloElem:
        """The uniformizer zeta_{p^n} - 1 (zero at level 0)."""
        return self.elem([0, 1])

    def zeta(self) -> CycloElem:
        return self.one() + self.pi()


@dataclass(frozen=True)
class CycloElem:
    ring: CycloRing
    coeffs: tuple[int, ...]

    def _other(self, other) -> CycloElem:
        if isinstance(other, CycloElem):
            if other.ring != self.ring:
                raise ValueError("elements of different cyclotomic rings")
            return other
        return self.ring.elem([int(other)])

    def __add__(self, other):
        o = self._other(other)
        return self.ring.elem([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return self.ring.elem([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self):
        return self.ring.elem([-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._other(other)
        e = self.ring.e
        full = [0] * (2 * e - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    full[i + j] += a * b
        return CycloElem(self.ring, tuple(self.ring._reduce(full)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> Fraction:
        return cyclo_valuation(self)

    def is_rational(self) -> bool:
        """True when the element lies in Z_p (no pi-adic components beyond the constant)."""
        return not any(self.coeffs[1:])


def cyclo_valuation(x: CycloElem) -> Fraction:
    """min_j v_p(c_j) + j/e over the pi-adic expansion; exact for Eisenstein pi."""
    e, p = x.ring.e, x.ring.p
    best = None
    for j, c in enumerate(x.coeffs):
        if c:
            v = Fraction(vp(c, p)) + Fraction(j, e)
            if best is None or v < best:
                best = v
    if best is None:
        raise PrecisionError(
            f"valuation below precision floor: element vanishes mod p^{x.ring.prec}"
        )
    return best


def cyclo_substitute(ts, ring: CycloRing) -> CycloElem:
    """Evaluate a truncated T-series at T = pi (= t_n) in ``ring``.

    The discarded tail T^{b_T}... has valuation >= b_T / e, so b_T >= e * a is
    required for the result to be exact modulo p^a.
    """
    if ts.p != ring.p:
        raise ValueError("mixed primes")
    prec = min(ts.a, ring.prec)
    if prec != ring.prec:
        ring = CycloRing(ring.p, ring.n, prec)
    if ring.n > 0 and ts.b_T < ring.e * prec:
        raise PrecisionError(
            f"T-truncation b_T = {ts.b_T} too short for level {ring.n}: "
            f"need b_T >= e*a = {ring.e * prec}"
        )
    if ring.n == 0:
        return ring.elem([ts.coeffs[0] if ts.coeffs else 0])
    e, mod = ring.e, ring.mod
    rel = cyclotomic_relation(ring.p, ring.n)
    acc = [0] * e
    for c in reversed(ts.coeffs):
        top = acc[-1]
        acc = [0] + acc[:-1]
        if top:
            acc = [(a - top * r) % mod for a, r in zip(acc, rel)]
        acc[0] = (acc[0] + c) % mod
    return CycloElem(ring, tuple(acc))


def galois_conjugate(x: CycloElem, u: int) -> CycloElem:
    """Apply zeta -> zeta^u, i.e. 1 + pi -> (1 + pi)^u."""
    ring = x.ring
    if u % ring.p == 0:
        raise ValueError(f"u = {u} is not coprime to p = {ring.p}")
    if ring.n == 0:
        return x
    u %= ring.p**ring.n
    image = ring.zeta() ** u - ring.one()
    acc = ring.zero()
    for c in reversed(x.coeffs):
        acc = acc * image + c
    return acc


def units_mod(p: int, n: int) -> list[int]:
    """(Z/p^n)^x in increasing order."""
    return [u for u in range(1, p**n) if u % p]
