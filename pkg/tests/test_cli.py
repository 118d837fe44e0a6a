import json

import pytest

from zptower.cli import main

FLAGSHIP = '{"p": 2, "f": [0, 0, 0, 1]}'
SMALL = '{"p": 2, "f": [0, 0, 0, 1], "precision": {"a": 12, "n_max": 2}}'
TORUS = '{"p": 2, "f": [0, 1], "domain": "Gm", "f_neg": [1]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_points(capsys):
    code, out, _ = run(capsys, "points", "--spec", FLAGSHIP, "--max-degree", "1")
    assert code == 0
    assert out.splitlines() == ["# point\tdegree\tfrobenius", "x\t1\t0", "x+1\t1\t1"]
    code, out, _ = run(capsys, "points", "--spec", FLAGSHIP, "--max-degree", "0")
    assert out.splitlines() == ["# point\tdegree\tfrobenius"]
    code, out, _ = run(capsys, "points", "--spec", TORUS, "--max-degree", "2")
    names = [row.split("\t")[0] for row in out.splitlines()[1:]]
    assert names == ["x+1", "x^2+x+1"]


def test_lfun(capsys, tmp_path):
    code, out, _ = run(capsys, "lfun", "--spec", FLAGSHIP, "--n", "1")
    data = json.loads(out)
    assert code == 0 and data["degree"] == 2
    assert [c[0] for c in data["coefficients"]] == [1, 0, 2]
    assert data["slopes"] == [[1, 2], [1, 2]]
    code, _, _ = run(capsys, "lfun", "--spec", FLAGSHIP, "--n", "1", "--out", str(tmp_path))
    assert (tmp_path / "newton_n1.tsv").read_text() == "# index\tvaluation_num\tvaluation_den\n0\t0\t1\n2\t1\t1\n"
    code, out, _ = run(capsys, "lfun", "--spec", FLAGSHIP, "--n", "0")
    data = json.loads(out)
    assert data["degree"] is None and "zeta" in data["note"]
    assert [c[0] for c in data["coefficients"]][:4] == [1, 2, 4, 8]


def test_lfun_beyond_nmax(capsys):
    code, _, err = run(capsys, "lfun", "--spec", SMALL, "--n", "3")
    assert code == 2 and "--nmax 3" in err


def test_tadic_and_zeta(capsys):
    code, out, _ = run(capsys, "tadic", "--spec", SMALL)
    data = json.loads(out)
    assert code == 0 and data["terms"][1][:3] == [2, 1, 0]
    code, out, _ = run(capsys, "zeta", "--spec", SMALL, "--n", "1")
    data = json.loads(out)
    assert data["coefficients"] == [1, 0, 2] and data["genus"] == 1 and data["v_h"] == 0


def test_verify(capsys, tmp_path):
    spec = tmp_path / "tower.json"
    spec.write_text(FLAGSHIP)
    code, out, err = run(capsys, "verify", "--spec", str(spec))
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["lambda_nonzero"] is False
    assert all(r["identity_ok"] for r in rep["per_n"])
    assert "all checks passed" in err


def test_verify_lambda_nonzero(capsys):
    code, out, _ = run(capsys, "verify", "--spec", TORUS)
    rep = json.loads(out)
    assert code == 0 and rep["lambda_nonzero"] is True and rep["lambda"] == 2


def test_verify_fault_injection(capsys):
    code, _, err = run(capsys, "verify", "--spec", SMALL, "--inject-fault")
    assert code == 3 and "verification failed" in err


def test_scan(capsys, tmp_path):
    code, out, err = run(capsys, "scan", "--spec", SMALL, "--prec-a", "12",
                         "--family", "[[0, 0, 0, 1], [0, 0, 0, 0, 0, 1], [0, 0, 1]]")
    rows = out.splitlines()
    assert code == 0 and rows[0].startswith("# f\tstatus")
    assert [r.split("\t")[1] for r in rows[1:3]] == ["ok", "ok"]
    assert rows[3].split("\t")[1].startswith("skipped") and "[0, 0, 1]: skipped" in err
    fam = tmp_path / "family.json"
    fam.write_text("[]")
    code, out, _ = run(capsys, "scan", "--spec", SMALL, "--family", str(fam))
    assert out.splitlines() == ["# f\tstatus\tmu\tlambda\tell\tfirst_slopes"]


@pytest.mark.parametrize("argv,fragment", [
    (["points", "--spec", '{"p": 2, "f": [0, 0, 1]}'], "divisible by p"),
    (["points", "--spec", '{"p": 2,\n "f": [0, 1,]}'], "line 2, column"),
    (["points", "--spec", '{"p": 2, "f": [0, 1], "precision": {"b_s": "x"}}'], "'b_s' must be an integer"),
    (["points"], "--spec"),
    (["frobnicate", "--spec", FLAGSHIP], "invalid choice"),
    (["scan", "--spec", FLAGSHIP, "--family", "[[0, 1"], "family JSON parse error"),
])
def test_bad_input_exits_4(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 4 and fragment in err


def test_out_directory(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--spec", SMALL, "--out", str(tmp_path / "run"))
    assert code == 0 and out.strip().endswith("report.json")
    assert json.loads((tmp_path / "run" / "report.json").read_text())["ok"]
