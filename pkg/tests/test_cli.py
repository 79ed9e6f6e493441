import json

import pytest

from isotower.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def test_verify_writes_a_report(tmp_path):
    out = tmp_path / "reports" / "calculus.json"
    rc = main(["verify", "--suite", "calculus", "--d0", "2", "--d1", "3", "--trials", "3", "--out", str(out)])
    assert rc == EXIT_OK
    data = json.loads(out.read_text())
    assert set(data) >= {"suite", "config", "environment", "checks", "summary"}
    assert data["suite"] == "calculus"
    assert data["config"]["d0"] == 2
    assert data["summary"]["fail"] == 0
    assert data["environment"]["residue_convention"] == "dT"


def test_verify_fails_with_an_impossible_tolerance(capsys):
    rc = main(["verify", "--suite", "calculus", "--d0", "2", "--trials", "2", "--tol", "tol_eq=1e-30"])
    assert rc == EXIT_FAILED
    assert "❌ calculus.law." in capsys.readouterr().out


def test_verify_reads_a_config_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"suite": "ktheory", "group": "2", "d0": 2, "trials": 2}))
    out = tmp_path / "out.json"
    rc = main(["verify", "--config", str(config), "--out", str(out)])
    assert rc == EXIT_OK
    data = json.loads(out.read_text())
    assert data["suite"] == "ktheory"
    assert data["config"]["group"] == [2]
    assert data["config"]["d1"] == 4


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nope"],
    ["verify", "--d0", "4", "--d1", "2"],
    ["verify", "--tol", "tol_eq"],
    ["verify", "--tol", "tol_eq=small"],
    ["verify", "--tol", "bogus=1"],
    ["verify", "--d1", "1"],
    ["verify", "--k", "1,x"],
    ["verify", "--group", "2xq"],
    ["koszul", "--group", "7", "--v0", "0", "--v1", "0"],
    ["koszul", "--group", "2", "--v0", "a", "--v1", "0"],
    ["degree", "--map", "torus"],
    [],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_missing_config_file(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_help():
    assert main(["--help"]) == EXIT_OK


def test_koszul_command(tmp_path, capsys):
    out = tmp_path / "koszul.json"
    rc = main(["koszul", "--group", "2", "--v0", "0", "--v1", "1", "--out", str(out)])
    assert rc == EXIT_OK
    printed = capsys.readouterr().out
    assert "x_0 = residue(T^0)" in printed
    assert "V0 ⊂ V1: False" in printed
    data = json.loads(out.read_text())
    assert data["suite"] == "koszul"
    assert data["environment"]["complex"]["differentials"][0]["matrix"] == [[1, -1], [-1, 1]]


def test_koszul_command_on_a_subrepresentation(capsys):
    assert main(["koszul", "--group", "2x3", "--v0", "1,0", "--v1", "0,0;1,0"]) == EXIT_OK
    assert "all x_j = 0: True" in capsys.readouterr().out


def test_degree_command(capsys):
    assert main(["degree", "--map", "reflection"]) == EXIT_OK
    assert "reflection: degree -1 (expected -1)" in capsys.readouterr().out
