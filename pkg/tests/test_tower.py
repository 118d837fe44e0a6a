import json

import pytest

from zptower.errors import SpecError
from zptower.ff import ClosedPoint, extension, poly_eval
from zptower.tower import (
    as_cover_affine_count, class_number_oracle, frobenius_value, frobenius_values,
    layer_one_point_counts, layer_one_zeta_oracle, load_spec, make_spec, spec_to_dict,
)


def _point(spec, *coeffs):
    return ClosedPoint(tuple(spec.ctx.coerce(c) for c in coeffs))


def test_frobenius_examples(flagship):
    assert frobenius_value(flagship, _point(flagship, 0, 1)).value == 0
    assert frobenius_value(flagship, _point(flagship, 1, 1)).value == 1
    assert frobenius_value(flagship, _point(flagship, 1, 1, 1)).value == 2


def test_torus_rejects_origin():
    spec = make_spec(2, [0, 1], domain="Gm", f_neg=[1])
    with pytest.raises(SpecError):
        frobenius_value(spec, _point(spec, 0, 1))


def _trace_oracle(spec, pt):
    """Tr_{F_{q^d}/F_p} f(alpha) for a root alpha found by brute force."""
    emb = extension(spec.ctx, pt.degree)
    big = emb.big
    minpoly = [emb(c) for c in pt.minpoly]
    alpha = next(x for x in big.elements() if poly_eval(big, minpoly, x) == big.zero)
    val = poly_eval(big, [emb(c) for c in spec.f], alpha)
    if spec.f_neg:
        inv = big.inv(alpha)
        val = big.add(val, big.mul(inv, poly_eval(big, [emb(c) for c in spec.f_neg], inv)))
    return big.absolute_trace(val)


@pytest.mark.parametrize("kw", [
    dict(p=2, f=[0, 0, 0, 1]),
    dict(p=2, f=[0, 1, 1, 1]),
    dict(p=3, f=[0, 2, 1]),
    dict(p=2, f=[0, 1], domain="Gm", f_neg=[1]),
    dict(p=2, r=2, f=[0, 2, 0, 1]),
])
def test_reduction_compatibility(kw):
    spec = make_spec(**kw, a=6)
    values = frobenius_values(spec, 4)
    assert len(values) > 0
    for pt, v in values:
        assert v.value % spec.p == _trace_oracle(spec, pt)


def test_point_counts():
    assert as_cover_affine_count(make_spec(2, [0, 0, 0, 1]), 1) == 2
    assert as_cover_affine_count(make_spec(2, [0, 0, 0, 1]), 2) == 8
    assert as_cover_affine_count(make_spec(3, [0, 0, 1]), 1) == 3
    assert layer_one_point_counts(make_spec(2, [0, 0, 0, 1]), 2) == [3, 9]


def test_layer_one_oracles():
    assert layer_one_zeta_oracle(make_spec(2, [0, 0, 0, 1])) == [1, 0, 2]
    assert layer_one_zeta_oracle(make_spec(2, [0, 1])) == [1]
    assert class_number_oracle(make_spec(2, [0, 0, 0, 1])) == 3


def test_genus_and_degrees():
    spec = make_spec(2, [0, 0, 0, 1])
    assert [spec.expected_degree(n) for n in (1, 2, 3)] == [2, 5, 11]
    assert [spec.genus(n) for n in (1, 2, 3)] == [1, 6, 28]
    gm = make_spec(3, [0, 1], domain="Gm", f_neg=[1])
    assert gm.expected_degree(1) == 2 and gm.genus(1) == 2


@pytest.mark.parametrize("kw,msg", [
    (dict(p=2, f=[0, 0, 1]), "divisible by p"),
    (dict(p=2, f=[1]), "nonconstant"),
    (dict(p=2, f=[1, 1]), "constant term"),
    (dict(p=3, f=[0, 1], domain="Gm", f_neg=[0, 0, 1]), "pole order"),
    (dict(p=2, f=[0, 1], f_neg=[1]), "only allowed"),
    (dict(p=2, f=[0, 1], domain="P2"), "unknown domain"),
    (dict(p=6, f=[0, 1]), "prime"),
])
def test_spec_validation(kw, msg):
    with pytest.raises(SpecError, match=msg):
        make_spec(**kw)


def test_json_round_trip(tmp_path):
    spec = make_spec(2, [0, 2, 0, 1], r=2, a=12)
    path = tmp_path / "tower.json"
    path.write_text(json.dumps(spec_to_dict(spec)))
    assert load_spec(path) == spec
    gm = make_spec(3, [0, 1], domain="Gm", f_neg=[2])
    assert load_spec(json.dumps(spec_to_dict(gm))) == gm


def test_spec_diagnostics(tmp_path):
    with pytest.raises(SpecError, match="line 2, column"):
        load_spec('{"p": 2,\n "f": [0, 1,]}')
    with pytest.raises(SpecError, match="missing field 'f'"):
        load_spec({"p": 2})
    with pytest.raises(SpecError, match="unknown field"):
        load_spec({"p": 2, "f": [0, 1], "colour": 3})
    with pytest.raises(SpecError, match="'a' must be an integer"):
        load_spec({"p": 2, "f": [0, 1], "precision": {"a": "20"}})
    with pytest.raises(SpecError, match="cannot read"):
        load_spec(tmp_path / "missing.json")


@pytest.mark.parametrize("kw", [
    dict(p=2, f=[0, 0, 0, 1]), dict(p=2, f=[0, 0, 0, 0, 0, 1]), dict(p=3, f=[0, 0, 1]),
    dict(p=3, f=[0, 0, 0, 0, 1]), dict(p=2, r=2, f=[0, 0, 0, 1]),
])
def test_oracle_has_weil_shape(kw):
    from zptower.lfun import ZpPoly, newton_polygon

    spec = make_spec(**kw)
    P = layer_one_zeta_oracle(spec)
    g = (spec.p - 1) * (spec.degree - 1) // 2
    assert len(P) - 1 == 2 * g and P[0] == 1
    slopes = newton_polygon(ZpPoly(spec.p, 30, tuple(P))).slopes
    assert len(slopes) == 2 * g and all(0 <= s <= spec.r for s in slopes)
