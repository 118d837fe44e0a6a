from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zptower.errors import PrecisionError
from zptower.ff import build_field
from zptower.padic import (
    CycloRing, PadicInt, UnramRing, cyclo_substitute, cyclo_valuation, cyclotomic_relation,
    galois_conjugate, teichmuller, trace_to_zp, units_mod,
)
from zptower.tseries import TSeries, binomial_power


def test_padic_int_arithmetic():
    x = PadicInt(5, 7, 4)
    y = PadicInt(5, 3, 2)
    assert (x + y).prec == 2 and (x + y).value == 10
    assert PadicInt.from_rational(3, 1, 2, 5).value * 2 % 3**5 == 1
    assert PadicInt(2, 12, 10).valuation() == 2
    with pytest.raises(PrecisionError):
        PadicInt(2, 0, 10).valuation()


def test_teichmuller_in_z9():
    ring = UnramRing(3, 2, (0, 1))
    assert teichmuller(ring.elem([2])).coeffs == (8,)


def test_teichmuller_f4():
    ring = UnramRing.over(build_field(2, 2), 10)
    t = teichmuller(ring.elem([0, 1]))
    assert t.coeffs == (0, 1)  # X^2 + X + 1 divides X^3 - 1, so X is already a root of unity
    assert t**3 == ring.one()


def test_traces_in_w_f4():
    ring = UnramRing.over(build_field(2, 2), 10)
    assert trace_to_zp(ring.one()).value == 2
    # X has minimal polynomial X^2 + X + 1, trace -1
    assert trace_to_zp(ring.elem([0, 1])).value == 2**10 - 1


def test_cyclotomic_relations():
    assert cyclotomic_relation(2, 1) == (2, 1)
    assert cyclotomic_relation(3, 1) == (3, 3, 1)
    assert cyclotomic_relation(2, 2) == (2, 2, 1)
    # Eisenstein: every non-leading coefficient divisible by p, constant exactly by p
    for p, n in [(2, 3), (3, 2), (5, 1)]:
        rel = cyclotomic_relation(p, n)
        assert rel[-1] == 1 and all(c % p == 0 for c in rel[:-1]) and rel[0] % (p * p)


def test_cyclo_valuations():
    R = CycloRing(2, 2, 10)
    pi = R.pi()
    assert cyclo_valuation(pi) == Fraction(1, 2)
    assert cyclo_valuation(pi * pi + pi * 2) == 1
    assert cyclo_valuation(R.elem([2])) == 1
    with pytest.raises(PrecisionError):
        cyclo_valuation(R.zero())


def test_pi_at_level_one_is_minus_two():
    R = CycloRing(2, 1, 5)
    assert R.pi().coeffs == (30,)


def test_galois_conjugate_p3():
    R = CycloRing(3, 1, 5)
    pi = R.pi()
    assert galois_conjugate(pi, 2) == pi * pi + pi * 2
    with pytest.raises(ValueError):
        galois_conjugate(pi, 3)


def test_zeta_has_order_pn():
    for p, n in [(2, 1), (2, 3), (3, 2), (5, 1)]:
        R = CycloRing(p, n, 6)
        z = R.zeta()
        assert z ** (p**n) == R.one()
        assert z ** (p ** (n - 1)) != R.one()


def test_conjugation_is_a_ring_map():
    R = CycloRing(3, 2, 6)
    x = R.elem([1, 4, 0, 7, 2, 5])
    y = R.elem([2, 0, 3, 1, 1, 0])
    for u in units_mod(3, 2):
        assert galois_conjugate(x * y, u) == galois_conjugate(x, u) * galois_conjugate(y, u)
        assert galois_conjugate(x + y, u) == galois_conjugate(x, u) + galois_conjugate(y, u)
        assert cyclo_valuation(galois_conjugate(x, u)) == cyclo_valuation(x)


def test_substitute_needs_enough_terms():
    ts = TSeries.from_coeffs(2, 10, 5, [1, 1])
    with pytest.raises(PrecisionError):
        cyclo_substitute(ts, CycloRing(2, 2, 10))
    assert cyclo_substitute(ts, CycloRing(2, 0, 10)).coeffs == (1,)


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2, 3]), n=st.integers(1, 2), c=st.integers(0, 10**9))
def test_binomial_power_at_classical_points(p, n, c):
    """(1+T)^c at T = zeta - 1 is zeta^(c mod p^n)."""
    a = 8
    R = CycloRing(p, n, a)
    b_T = R.e * a
    prec = a + 8
    val = cyclo_substitute(binomial_power(PadicInt(p, c, prec), b_T, a), R)
    assert val == R.zeta() ** (c % p**n)
