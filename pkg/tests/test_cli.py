import json
from pathlib import Path

import pytest

from dihedral_bmw.cli import DEFAULT_SEED, main

ROOT = Path(__file__).resolve().parent.parent


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr()


def test_verify_odd_exit_zero_and_deterministic(capsys):
    code, first = run(capsys, "verify", "--case", "odd", "--n", "1")
    assert code == 0
    _, second = run(capsys, "verify", "--case", "odd", "--n", "1")
    assert first.out == second.out
    doc = json.loads(first.out)
    assert doc["schema"] == 1 and doc["seed"] == DEFAULT_SEED and doc["summary"]["passed"]
    keys = [(c["suite"], c["id"], json.dumps(c["index"])) for c in doc["checks"]]
    assert keys == sorted(keys)
    assert "time" not in first.out


def test_verify_even_n2(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--case", "even", "--n", "2", "--no-algebra", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    gated = {c["suite"] for c in doc["checks"] if not c["gating"]}
    assert gated == {"expansions.beyond", "range.extended"}


def test_verify_even_n3_generic_fails_tied_passes(capsys):
    code, _ = run(capsys, "verify", "--case", "even", "--n", "3", "--no-algebra")
    assert code == 1
    code, _ = run(capsys, "verify", "--case", "even", "--n", "3", "--no-algebra", "--tied")
    assert code == 0


@pytest.mark.parametrize("args", [["verify", "--case", "odd", "--n", "0"], ["verify", "--case", "even", "--n", "1"],
                                  ["seq", "--k", "0"], ["rep", "--case", "odd"]])
def test_usage_errors(capsys, args):
    with pytest.raises(SystemExit) as exc:
        main(args)
    assert exc.value.code == 2


def test_alpha_odd_n1(capsys):
    code, res = run(capsys, "alpha", "--case", "odd", "--n", "1")
    doc = json.loads(res.out)["alpha"]
    assert code == 0 and doc["dim"] == 3
    assert doc["entries"][0][2] == "1" and doc["entries"][1][0] == "(l)/(1)"


def test_seq_k4(capsys):
    code, res = run(capsys, "seq", "--k", "4")
    doc = json.loads(res.out)
    assert code == 0 and len(doc["a"]) == len(doc["b"]) == 5
    assert doc["b"][3] == "(v1*v0^-2 - v1^-1*v0^-2)/(1)"


def test_rep_at_point_is_exact(capsys):
    code, res = run(capsys, "rep", "--case", "odd", "--n", "1", "--point", "m=1/2,l=3")
    doc = json.loads(res.out)
    assert code == 0 and doc["X0"]["point"] == {"l": "3", "m": "1/2"}
    assert all("." not in x for r in doc["X0"]["entries"] for x in r)


def test_present_and_check(capsys):
    code, res = run(capsys, "present", "--coxeter", str(ROOT / "data" / "coxeter" / "i2_4.json"), "--check")
    assert code == 0
    assert res.out == (ROOT / "tests" / "golden" / "i2_4.bmw.json").read_text()
    assert "edge m=4: pass" in res.err


def test_certify(capsys):
    code, res = run(capsys, "certify", "--case", "odd", "--n", "2")
    assert code == 0 and json.loads(res.out)["data"]["certificate"]["certified"]
    code, res = run(capsys, "certify", "--case", "even", "--n", "2")
    doc = json.loads(res.out)
    failing = [c["id"] for c in doc["checks"] if c["status"] == "fail"]
    assert code == 1 and failing == ["LIMIT-DIAG"]


def test_sc_and_cells(capsys):
    code, res = run(capsys, "sc", "--case", "odd", "--n", "1")
    assert code == 0 and len(json.loads(res.out)["basis"]) == 15
    code, res = run(capsys, "cells", "--case", "odd", "--n", "1", "--datum",
                    str(ROOT / "data" / "cells_odd1_hecke_layer.json"))
    assert code == 0


def test_missing_file_is_an_error(capsys):
    code, res = run(capsys, "present", "--coxeter", "/nonexistent.json")
    assert code == 2 and "error" in res.err
