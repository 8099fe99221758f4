from __future__ import annotations

import json

import pytest

from padic_betti import cli
from padic_betti.engine import InvariantSequence
from padic_betti.padic import GROWTH, PAdicApprox


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_compute_torus(capsys):
    code, data = run_json(capsys, "compute", "--space", "torus:2", "--tower", "abelian:p=3,d=2",
                          "--betti", "1", "--field", "Q")
    assert code == 0
    assert data["result"]["limit"]["residue"] == 2
    assert set(data) == {"input", "result", "checks"}


def test_compute_surface_euler(capsys):
    code, data = run_json(capsys, "compute", "--space", "surface:2", "--tower", "abelian:p=5,d=1",
                          "--euler")
    assert code == 0
    assert data["result"]["limit"]["residue"] == 0
    assert data["checks"]["euler_limit"]["residue"] == 0


def test_compute_free_trivial(capsys):
    code, data = run_json(capsys, "compute", "--space", "free:2", "--tower", "trivial", "--betti", "1")
    assert code == 0 and data["result"]["limit"]["residue"] == 2


def test_table_output(capsys):
    code, out, _ = run(capsys, "compute", "--space", "circle", "--tower", "abelian:p=2,d=1", "--betti", "0")
    assert code == 0 and "limit: 1 mod 2^3" in out


def test_knot(capsys):
    code, data = run_json(capsys, "knot", "--delta", "t^2-t+1", "--m", "6", "--p", "5")
    assert code == 0 and data["result"]["b1"] == 3
    code, data = run_json(capsys, "knot", "--knot", "4_1", "--p", "3")
    assert data["result"]["b1"] == 1


def test_fab_torsion(capsys):
    code, data = run_json(capsys, "fab-torsion", "--matrix", "1+25,5;5,1", "--p", "5", "--precision", "4",
                          "--levels", "3")
    assert code == 0 and data["result"]["agrees"] and data["result"]["agree_precision"] == 4
    code, data = run_json(capsys, "fab-torsion", "--matrix", "2,1;1,1", "--p", "3", "--power")
    assert code == 0 and data["result"]["agrees"]


def test_frattini(capsys):
    code, data = run_json(capsys, "frattini", "--group", "C8")
    assert code == 0 and data["result"]["length"] == 3
    code, data = run_json(capsys, "frattini", "--group", "Heis3", "--verify")
    assert code == 0 and data["result"]["length"] == 2


def test_atiyah(capsys):
    code, data = run_json(capsys, "atiyah", "--matrix", "t1-1,0;0,t1+1", "--p", "2", "--field", "F3",
                          "--minors")
    assert code == 0
    assert data["result"]["limit"]["residue"] == 2


def test_self_check(capsys):
    code, out, _ = run(capsys, "--self-check", "--count", "10")
    assert code == 0 and "oracle comparisons agree" in out


def test_json_round_trip(capsys):
    code, data = run_json(capsys, "compute", "--space", "torus:1", "--tower", "abelian:p=3,d=1", "--betti", "1")
    limit = PAdicApprox.from_json(data["result"]["limit"])
    assert limit.to_json() == data["result"]["limit"]


@pytest.mark.parametrize("argv", [
    ["compute", "--space", "nope:1", "--tower", "trivial", "--betti", "1"],
    ["compute", "--space", "torus:2", "--tower", "abelian:p=4,d=2", "--betti", "1"],
    ["compute", "--space", "torus:2", "--tower", "abelian:p=3,d=2", "--betti", "1", "--field", "F3"],
    ["compute", "--space", "torus:2"],
    ["knot", "--p", "5"],
    ["fab-torsion", "--matrix", "1,0;0,1", "--p", "3"],
    ["frattini", "--group", "C6"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_growth_exit_code(capsys, monkeypatch):
    def fake(c, tower, req, *a, **k):
        return InvariantSequence(req, 3, [], PAdicApprox.unknown(3, GROWTH), {})
    monkeypatch.setattr(cli, "approximate", fake)
    argv = ["compute", "--space", "free:2", "--tower", "abelian:p=3,d=2", "--betti", "1"]
    assert cli.main(argv + ["--strict"]) == 2
    assert cli.main(argv) == 0


def test_complex_file(tmp_path, capsys):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"generators": ["a", "b"], "relators": ["a b A B"]}))
    code, data = run_json(capsys, "compute", "--space", f"file:{path}", "--tower", "abelian:p=2,d=2",
                          "--betti", "2")
    assert code == 0 and data["result"]["limit"]["residue"] == 1
