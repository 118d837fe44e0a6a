import random

import pytest
from hypothesis import given, settings, strategies as st

from zptower.errors import PrecisionError
from zptower.padic import PadicInt
from zptower.tseries import (
    BiSeries, TSeries, binomial_power, euler_expand, guard_digits, mul_trunc, ts_inverse,
    weierstrass_prepare,
)


def schoolbook(x, y, n, mod):
    out = [0] * n
    for i, a in enumerate(x[:n]):
        for j, b in enumerate(y[:n - i]):
            out[i + j] += a * b
    return [c % mod for c in out]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(1, 60), st.data())
def test_kronecker_matches_schoolbook(bits, n, data):
    mod = 2**bits + data.draw(st.integers(0, 5))
    x = data.draw(st.lists(st.integers(0, mod - 1), min_size=1, max_size=n))
    y = data.draw(st.lists(st.integers(0, mod - 1), min_size=1, max_size=n))
    assert mul_trunc(x, y, n, mod) == schoolbook(x, y, n, mod)


def test_inverse_examples():
    assert ts_inverse(TSeries(2, 3, (1, 2, 0))).coeffs == (1, 6, 4)
    assert ts_inverse(TSeries(5, 4, (1, 0, 0))).coeffs == (1, 0, 0)
    assert ts_inverse(TSeries(3, 4, (1, 80, 0, 0))).coeffs == (1, 1, 1, 1)  # 1 - T
    with pytest.raises(ValueError):
        ts_inverse(TSeries(2, 3, (2, 1)))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 10**6), min_size=2, max_size=20))
def test_inverse_multiplies_back(p, coeffs):
    coeffs[0] = coeffs[0] * p + 1
    x = TSeries(p, 6, tuple(coeffs))
    assert (x * ts_inverse(x)).coeffs == (1,) + (0,) * (len(coeffs) - 1)


def test_binomial_power_examples():
    one = binomial_power(PadicInt(2, 1, 10), 6)
    assert one.coeffs == (1, 1, 0, 0, 0, 0)
    minus = binomial_power(PadicInt(3, -1, 10), 6)
    mod = 3**minus.a
    assert minus.coeffs == tuple((-1) ** j % mod for j in range(6))
    half = binomial_power(PadicInt.from_rational(3, 1, 2, 12), 9)
    assert (half * half).coeffs == (1, 1) + (0,) * 7


def test_binomial_power_guard_digits():
    assert guard_digits(2, 80) == 7 and guard_digits(3, 9) == 2 and guard_digits(3, 10) == 3
    with pytest.raises(PrecisionError):
        binomial_power(PadicInt(2, 5, 10), 80, a=5)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 10**12), st.integers(0, 10**12), st.integers(1, 30))
def test_binomial_power_is_a_character(p, c1, c2, b_T):
    prec = 6 + guard_digits(p, b_T)
    x = binomial_power(PadicInt(p, c1, prec), b_T)
    y = binomial_power(PadicInt(p, c2, prec), b_T)
    assert x * y == binomial_power(PadicInt(p, c1 + c2, prec), b_T)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3**20), st.integers(1, 12))
def test_binomial_power_integer_exponent(c, b_T):
    # for a genuine integer exponent the coefficients are ordinary binomials
    from math import comb

    a = 5
    prec = a + guard_digits(3, b_T)
    got = binomial_power(PadicInt(3, c, prec), b_T, a).coeffs
    cc = c % 3**prec
    assert got == tuple(comb(cc, j) % 3**a for j in range(b_T))


def test_euler_expand_examples():
    z = euler_expand(PadicInt(2, 0, 12), 1, 4, 3)
    assert [z.coeff(k).coeffs for k in range(5)] == [(1, 0, 0)] * 5
    e = euler_expand(PadicInt(2, 5, 12), 2, 3, 4)
    u = binomial_power(PadicInt(2, 5, 12), 4)
    assert e.coeff(2) == u and e.coeff(1).coeffs == (0,) * 4 and e.coeff(3).coeffs == (0,) * 4
    assert e.at_T_zero() == [1, 0, 1, 0]


def _rand_bi(rng, p, a, b_T, b_s):
    mod = p**a
    return BiSeries(p, a, b_T, tuple(tuple(rng.randrange(mod) for _ in range(b_T)) for _ in range(b_s + 1)))


def test_biseries_ring_laws():
    rng = random.Random(7)
    for p in (2, 3):
        x, y, z = (_rand_bi(rng, p, 5, 6, 4) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)


def test_narrowing_is_recorded():
    x = TSeries(2, 5, (1, 1, 1))
    y = TSeries(2, 3, (1, 1))
    z = x * y
    assert (z.a, z.b_T) == (3, 2)
    assert any("narrowed" in s for s in z.provenance)


def test_prep_examples():
    r = weierstrass_prepare(TSeries(2, 5, (1, 1, 0, 0)))
    assert (r.mu, r.lam) == (0, 0) and r.unit.coeffs == (1, 1, 0, 0)
    r = weierstrass_prepare(TSeries(2, 5, (4, 2, 1, 1, 0, 0, 0, 0)))
    assert (r.mu, r.lam) == (0, 2)
    assert r.reconstruct().coeffs == (4, 2, 1, 1, 0, 0)
    r = weierstrass_prepare(TSeries(2, 5, (4, 2, 0, 0, 0)))
    assert (r.mu, r.lam) == (1, 1)
    assert r.polynomial() == [2, 1]
    assert r.reconstruct().coeffs[:4] == (4, 2, 0, 0)


def test_prep_errors():
    with pytest.raises(PrecisionError, match="insufficient precision"):
        weierstrass_prepare(TSeries(2, 4, (0, 0, 0)))
    with pytest.raises(PrecisionError, match="too short"):
        weierstrass_prepare(TSeries(2, 4, (2, 2, 1)), min_unit_terms=2)


def test_prep_synthetic_mu_lambda():
    # p^2 (T^3 + pT + p)(1 + T) over Z_2
    p, a, b = 2, 12, 16
    poly = TSeries.from_coeffs(p, a, b, [p, p, 0, 1])
    unit = TSeries.from_coeffs(p, a, b, [1, 1])
    r = weierstrass_prepare(poly * unit * 4)
    assert (r.mu, r.lam) == (2, 3)
    # b = 16 terms pin the polynomial down modulo 2^floor(16/3)
    assert all((g - t) % 2**5 == 0 for g, t in zip(r.polynomial(), [2, 2, 0, 1]))
    assert [d.prec for d in r.distinguished] == [4, 4, 4]
    assert [int(d) for d in r.distinguished] == [0, 1, 1]  # a_i multiplies T^(3-i)
    assert r.reconstruct() == (poly * unit * 4).truncate(b_T=b - 3)
