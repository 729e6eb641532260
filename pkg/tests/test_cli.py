#!/usr/bin/env python3
"""
命令行测试
"""

import json
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli.main import main, run
from config.settings import Settings, load_suites
from core import formulas
from models.types import CommandRequest


def run_json(request):
    result = run(request, Settings())
    assert result.exit_code == 0, result.error
    return json.loads(result.document)


def run_main(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    captured = capsys.readouterr()
    return exc.value.code, captured.out, captured.err


def test_gen_points_and_net_check():
    doc = run_json(CommandRequest("gen", family="pa", n=2, a="0", shift="00", options={"check": "rank"}))
    assert doc["schema"] == "1"
    assert doc["points"] == [[0, 0], [1, 2], [2, 1], [3, 3]]
    assert doc["matrices"]["C1"] == ["01", "10"]
    assert doc["is_0n2_net"] is True


@pytest.mark.parametrize("method", ["formula", "warnock", "parseval"])
def test_l2_methods_agree(method):
    """三种方法给出同一有理数"""
    doc = run_json(CommandRequest("l2", family="pa", n=1, a="", shift="0", method=method))
    assert doc["value"] == "91/144"
    assert doc["scale"] == "(2^n L2)^2"
    assert doc["unscaled"] == "91/576"


def test_l2_symmetrized_and_pc():
    doc = run_json(CommandRequest("l2", family="pa", n=1, a="", shift="0", symmetrized=True))
    assert doc["value"] == "137/72"
    assert doc["scale"] == "(2^(n+1) L2)^2"
    doc = run_json(CommandRequest("l2", family="pc", n=2, c="1", shift="00"))
    assert doc["value"] == "671/1152"


def test_l2_without_closed_form():
    result = run(CommandRequest("l2", family="tri", n=3, tri="101", method="formula"), Settings())
    assert result.exit_code == 1
    assert "no closed form" in result.error
    doc = run_json(CommandRequest("l2", family="tri", n=3, tri="101", method="warnock"))
    assert Fraction(doc["value"]) > 0


def test_parameter_errors_exit_1():
    for request in (CommandRequest("l2", family="pa", n=3, a="1"),
                    CommandRequest("l2", family="pa", n=2, a="x"),
                    CommandRequest("l2", family="pa"),
                    CommandRequest("counterexample", n=1),
                    CommandRequest("nonexistent")):
        result = run(request, Settings())
        assert result.exit_code == 1
        assert result.error


def test_haar_coefficient_command():
    options = {"j1": -1, "j2": 0, "m1": 0, "m2": 0}
    doc = run_json(CommandRequest("haar", family="pa", n=2, a="0", shift="00", options=options))
    assert doc["value"] == "-1/64"
    assert doc["region"] == "J2"
    for method in ("oracle", "case"):
        doc = run_json(CommandRequest("haar", family="pa", n=2, a="0", shift="00", method=method,
                                      options=options))
        assert abs(Fraction(doc["value"])) == Fraction(1, 64)


def test_haar_dump_lists_every_box():
    result = run(CommandRequest("haar", family="pa", n=2, a="0", shift="00", options={"dump": True}),
                 Settings())
    lines = result.document.splitlines()
    # 每个坐标方向1+1+2个盒
    assert len(lines) == 16
    assert "1 1 1 1 3/256" in lines


def test_star_and_mc_commands():
    doc = run_json(CommandRequest("star", family="pa", n=1, a="", shift="0"))
    assert doc["value"] == "3/4"
    assert doc["within_bound"] is True
    doc = run_json(CommandRequest("lp-mc", family="pa", n=2, a="1", shift="01",
                                  options={"p": 2.0, "samples": 5000, "seed": 1}))
    assert doc["samples"] == 5000
    assert doc["estimate"] > 0


def test_points_file(tmp_path):
    path = tmp_path / "points.txt"
    path.write_text("res 1\n0 0\n1 1\n", encoding="utf-8")
    doc = run_json(CommandRequest("l2", method="warnock", options={"points": str(path)}))
    assert doc["value"] == "91/144"
    assert doc["scale"] == "(N L2)^2"


def test_search_and_counterexample():
    doc = run_json(CommandRequest("search-shift", n=3, a="11"))
    assert doc["mode"] == "exhaustive"
    assert Fraction(doc["value"]) <= Fraction(doc["shift_average"])
    doc = run_json(CommandRequest("counterexample", n=2))
    assert doc["mu_corner"] == "11/64"
    assert doc["corner_below_1_over_N"] is True


def test_main_verify(capsys):
    code, out, _ = run_main(["verify", "--suite", "counterexample,position", "--n-max", "4"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["success"] is True
    assert [r["suite"] for r in doc["results"]] == ["counterexample", "position"]


def test_main_verify_mismatch_exit_2(capsys, monkeypatch):
    monkeypatch.setattr(formulas, "l2sq_pc", lambda n, c, s: Fraction(0))
    code, out, _ = run_main(["verify", "--suite", "pc", "--n-max", "2"], capsys)
    assert code == 2
    doc = json.loads(out)
    assert doc["results"][0]["mismatch"]["identity"] == "theorem-pc-warnock"


def test_main_verify_text_report(capsys):
    code, out, _ = run_main(["verify", "--suite", "shift-average", "--n-max", "2", "--format", "text"], capsys)
    assert code == 0
    assert "✓ shift-average" in out
    assert "✓ all suites passed" in out


def test_main_unknown_suite(capsys):
    code, _, err = run_main(["verify", "--suite", "bogus"], capsys)
    assert code == 1
    assert "unknown suite" in err


def test_main_argument_error(capsys):
    code, _, err = run_main(["l2", "--method", "bogus"], capsys)
    assert code == 1
    assert "✗" in err


def test_main_sweep_csv(capsys):
    code, out, _ = run_main(["sweep", "--n", "2", "--a", "1", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,a,shift,ell,L,value"
    assert len(lines) == 5


def test_main_out_file(tmp_path, capsys):
    target = tmp_path / "report.txt"
    code, out, _ = run_main(["--out", str(target), "counterexample", "--n", "3", "--format", "text"], capsys)
    assert code == 0
    assert out == ""
    assert "corner coefficient" in target.read_text(encoding="utf-8")


def test_suite_file_defaults():
    """随包的套件配置"""
    suites = load_suites(os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                                      "config", "suites.yaml"))
    assert suites["defaults"]["seed"] == 20240601
    assert suites["slope"]["tolerance"] == 0.05
    assert suites["oracle"]["n_max"] == 4
    assert suites["netgen"]["exhaustive_max"] == 5
    assert suites["lemmas"]["exhaustive_max"] == 4
    assert Settings(suites=suites).suite_options("mc")["seed"] == 20240601
