import io
import json
import subprocess
import sys

import pytest

from cxorder import cli
from cxorder import measure as M


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


def test_check_flagship_json():
    code, text = run("check", "builtin:chebyshev3", "builtin:lobatto4", "--order", "3", "--format", "json")
    assert code == 0
    d = json.loads(text)
    assert d["verdict"] == "holds"
    assert d["order_n"] == 3 and d["m"] == 3
    assert d["checkpoints"][0]["value"] == pytest.approx(4.583337934e-4, rel=1e-8)


def test_output_is_deterministic_and_full_precision():
    a = run("check", "builtin:midpoint", "builtin:uniform", "--format", "json")[1]
    b = run("check", "builtin:midpoint", "builtin:uniform", "--format", "json")[1]
    assert a == b
    assert cli.format_json({"x": 0.1}) == '{"x": 0.10000000000000001}\n'


def test_exit_codes():
    assert run("check", "builtin:trapezoid", "builtin:midpoint")[0] == 0  # reversed still ordered
    assert run("check", "builtin:midpoint", "builtin:trapezoid", "--order", "2")[0] == 1
    assert run("compare", "midpoint", "trapezoid", "--order", "2")[0] == 1


def test_input_errors_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("check", str(bad), "builtin:uniform")[0] == 3
    assert run("check", "builtin:nope", "builtin:uniform")[0] == 3
    other = tmp_path / "other.json"
    other.write_text(json.dumps(M.to_spec(M.uniform(0.0, 1.0))))
    assert run("check", str(other), "builtin:uniform")[0] == 3
    assert run("check", str(tmp_path / "missing.json"), "builtin:uniform")[0] == 3
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 4 and all(line.startswith("error: ") for line in err)


def test_json_measure_files(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    p1.write_text(json.dumps({"support": [0, 1], "atoms": [{"x": 0.5, "w": 1}]}))
    p2.write_text(json.dumps({"support": [0, 1], "density": [{"from": 0, "to": 1, "coeffs": [1]}]}))
    code, text = run("check", str(p1), str(p2))
    assert code == 0 and text.startswith("verdict: holds")


def test_moments_and_interval():
    code, text = run("moments", "builtin:gauss2", "--upto", "3", "--interval", "0", "1", "--format", "json")
    assert code == 0
    assert json.loads(text) == pytest.approx([1.0, 0.5, 1 / 3, 0.25])


def test_hfunction_dump():
    code, text = run("hfunction", "builtin:midpoint", "builtin:trapezoid", "--format", "json")
    d = json.loads(text)
    assert d["breakpoints"] == [-1, 0, 1]
    assert d["pieces"] == [[0, 0.5], [0.5, -0.5]]
    assert run("hfunction", "builtin:midpoint", "builtin:trapezoid", "--k", "4")[0] == 3


def test_oracle_command():
    code, text = run("oracle", "builtin:chebyshev3", "builtin:lobatto4", "--order", "3", "--trials", "500", "--format", "json")
    assert code == 0
    d = json.loads(text)
    assert d["violations"] == 0 and d["grid_condition"] is True and d["seed"] == 42


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cxorder", "compare", "midpoint", "uniform", "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["global"]["verdict"] == "holds"
