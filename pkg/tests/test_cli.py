"""Command-line entry points: output content and exit codes."""
import json
import subprocess
import sys

import mpmath
import pytest

from lfunction.cli import run

POINT = "[[0.41,0.12],[0.57,-0.21],[0.66,0.08],[0.73,0.17],[1.23,0.07],[1.38,-0.26]]"


def _json(capsys, argv):
    code = run(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_group_orders(capsys):
    for which, order in (("sigma", 48), ("GL", 1920), ("ML", 23040)):
        code, data = _json(capsys, ["group", "--which", which])
        assert code == 0 and data["order"] == order
    assert run(["group", "--which", "ml"]) == 0
    assert "ML: order 23040" in capsys.readouterr().out


def test_cosets(capsys):
    code, data = _json(capsys, ["cosets"])
    assert code == 0
    assert [c["label"] for c in data["cosets"]] == ["1", "2", "3", "4", "5", "6",
                                                     "1b", "2b", "3b", "4b", "5b", "6b"]
    assert {c["size"] for c in data["cosets"]} == {1920}
    assert data["permutation_representation"]["a1'"] == "1->2b 2->1b 3->3 4->4 5->5 6->6"


def test_double_cosets(capsys):
    code, data = _json(capsys, ["double-cosets"])
    assert code == 0
    assert sorted(r["size"] for r in data["double_cosets"]) == [48, 48, 96, 576, 576, 576]


def test_invariances(capsys):
    assert run(["invariances", "--type", "5"]) == 0
    assert capsys.readouterr().out.strip().endswith("= L[g-a,g-b,g-c,g-d; 1+g-f; 1+g-e,g]")
    code, data = _json(capsys, ["invariances"])
    assert code == 0 and len(data) == 6


def test_three_term(capsys):
    assert run(["three-term", "--triple", "6,5,6b"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("three-term {6,5,6b}") and "L[1-a,1-b,1-c,1-d; 2-e; 2-f,2-g]" in out
    code, data = _json(capsys, ["three-term"])
    assert code == 0 and len(data) == 220


def test_eval_all_methods_agree(capsys):
    code, data = _json(capsys, ["eval", "--point", POINT, "--digits", "40"])
    assert code == 0
    values = [mpmath.mpc(*map(mpmath.mpf, r["value"])) for r in data["results"].values()]
    assert len(values) == 3
    assert max(abs(v - values[0]) for v in values) < 1e-12 * abs(values[0])


def test_eval_refused_method_is_a_usage_error(capsys):
    # Re(f - d) < 0: the 7F6 form does not apply
    point = "[0.4, 0.5, 0.6, 1.3, 1.2, 1.5]"
    assert run(["eval", "--point", point, "--method", "7f6"]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["invariances", "--type", "7"],
    ["eval", "--point", POINT, "--digits", "10"],
    ["eval", "--point", "[1,2"],
    ["eval", "--point", "[1,2,3]"],
    ["eval"],
    ["three-term", "--triple", "6,6,5"],
    ["verify", "--suite", "nonsense"],
    ["verify", "--samples", "0"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    capsys.readouterr()


def test_verify_small_run(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = run(["verify", "--suite", "invariances", "--samples", "1", "--digits", "40",
                "--format", "json", "--out", str(out)])
    data = json.loads(out.read_text())
    assert code == 0 and data["passed"] is True
    assert len(data["reports"]) == 6


def test_classical_text(capsys):
    code = run(["classical", "--samples", "1", "--digits", "40"])
    out = capsys.readouterr().out
    assert code == 0 and "checks passed" in out


def test_export(capsys, tmp_path):
    out = tmp_path / "catalog.json"
    assert run(["export", "--format", "json", "--out", str(out)]) == 0
    rels = json.loads(out.read_text())["relations"]
    assert len(rels) == 6 + 3 + 220


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lfunction.cli", "group", "--which", "GL"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "order 1920" in proc.stdout
