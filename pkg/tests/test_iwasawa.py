import json
from fractions import Fraction

import pytest

from zptower.errors import SpecError
from zptower.iwasawa import (
    expand_family, invariants_from_fit, invariants_from_prep, scan_family, verify_theorem,
)
from zptower.lfun import class_number_valuation, l_rho_at_one, level_valuation, tadic_l
from zptower.tower import make_spec
from zptower.tseries import TSeries


def test_prep_route_examples():
    inv = invariants_from_prep(TSeries(2, 8, (1, 1, 0, 0)))
    assert (inv.mu, inv.lam, inv.nu, inv.source) == (0, 0, None, "prep")
    p, a, b = 2, 12, 16
    poly = TSeries.from_coeffs(p, a, b, [p, p, 0, 1])
    unit = TSeries.from_coeffs(p, a, b, [1, 1])
    inv = invariants_from_prep(poly * unit * 4)
    assert (inv.mu, inv.lam) == (2, 3)


def test_fit_route_examples():
    vals = [2 * 2**n + 3 * n + 1 for n in range(5)]
    inv = invariants_from_fit(vals, 2)
    assert (inv.mu, inv.lam, inv.nu, inv.stable, inv.source) == (2, 3, 1, True, "fit")
    inv = invariants_from_fit([7] * 4, 3)
    assert (inv.mu, inv.lam, inv.nu) == (0, 0, 7)


def test_fit_route_refuses_unstable_data():
    with pytest.raises(ValueError):
        invariants_from_fit([0, 1, 2], 2)
    with pytest.raises(ArithmeticError, match="stable range"):
        invariants_from_fit([0, Fraction(1, 2), 3, 4], 2)
    with pytest.raises(ArithmeticError, match="stable range"):
        invariants_from_fit([5, 0, 1, 3], 2)


def test_routes_agree_on_towers(suite):
    for name, spec in suite:
        prep = invariants_from_prep(l_rho_at_one(tadic_l(spec)))
        vals = [class_number_valuation(spec, n) for n in range(spec.precision.n_max + 1)]
        if len(vals) >= 4:
            fit = invariants_from_fit(vals, spec.p)
            assert (fit.mu, fit.lam) == (prep.mu, prep.lam), name


def test_running_tower_consistency(flagship):
    prep = invariants_from_prep(l_rho_at_one(tadic_l(flagship)))
    assert (prep.mu, prep.lam) == (0, 0)
    assert [level_valuation(flagship, n) for n in (1, 2, 3)] == [0, 0, 0]


def test_verify_running_tower(flagship):
    rep = verify_theorem(flagship)
    assert rep.ok and not rep.lambda_nonzero and rep.c is None
    assert [r.n for r in rep.per_n] == [1, 2, 3]
    assert all(r.identity_ok for r in rep.per_n)
    assert all(r.ram_check.startswith("vacuous") for r in rep.per_n)
    assert rep.telescoping_ok and rep.routes_agree
    data = json.loads(rep.to_json())
    for key in ("tower", "per_n", "mu", "lambda", "nu", "lambda_nonzero", "c", "telescoping_ok", "routes_agree"):
        assert key in data
    for key in ("n", "ell", "slopes", "v_L1", "identity_ok", "ram_lower_bound", "conj4_threshold"):
        assert key in data["per_n"][0]


def test_verify_lambda_nonzero_tower(suite):
    spec = dict(suite)["Gm-F2-x+1/x"]
    rep = verify_theorem(spec)
    assert rep.ok and rep.lambda_nonzero and (rep.mu, rep.lam) == (0, 2)
    assert rep.c == Fraction(1, 4)
    by_n = {r.n: r for r in rep.per_n}
    # the identity only applies once p^{n-1}(p-1) > lambda
    assert by_n[1].identity_ok is None and by_n[2].identity_ok is None and by_n[3].identity_ok
    for r in rep.per_n:
        assert r.ram_check == "pass" and r.ram_lower_bound >= r.conj4_threshold
    bounds = [r.ram_lower_bound for r in rep.per_n]
    assert bounds == sorted(bounds)


def test_fault_injection_is_caught(flagship):
    rep = verify_theorem(flagship, fault=True)
    assert not rep.ok and rep.fault_injected
    assert "cross_route" in " ".join(rep.failures)


def test_report_is_deterministic(flagship):
    assert verify_theorem(flagship).to_json() == verify_theorem(flagship).to_json()


def test_expand_family():
    assert expand_family([[0, 0, 0, 1], [0, [0, 1], 0, 1]]) == [[0, 0, 0, 1], [0, 0, 0, 1], [0, 1, 0, 1]]
    assert expand_family([]) == []
    with pytest.raises(SpecError):
        expand_family([[0, "x"]])


def test_scan(flagship):
    # each member gets its own automatic profile at the base precision a
    base = flagship.with_precision(a=12)
    rows = scan_family(base, [[0, 0, 0, 1], [0, 0, 0, 0, 0, 1]])
    assert [r.status for r in rows] == ["ok", "ok"]
    assert rows[0].ell == [2, 5, 11] and (rows[0].mu, rows[0].lam) == (0, 0)
    assert rows[0].tsv().startswith("0,0,0,1\tok\t0\t0\t2,5,11\t")
    assert scan_family(base, []) == []
    (skipped,) = scan_family(base, [[0, 0, 1]])
    assert skipped.status.startswith("skipped") and "divisible by p" in skipped.status


def test_scan_locates_nonzero_lambda():
    base = make_spec(2, [0, 1], domain="Gm", f_neg=[1], a=12, n_max=2)
    (row,) = scan_family(base, [[0, 1]])
    assert row.status == "ok" and row.lam == 2
