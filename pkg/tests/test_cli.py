import json
import subprocess
import sys

import pytest

from fuchsian.cli import main

E9 = "1/7,2/7,3/7,4/7,5/7,6/7,1/3,2/9,1/5"
E2 = "1/2,1/3,1/5"


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as ex:
        code = ex.code
    out = capsys.readouterr()
    return code or 0, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_build_json(capsys):
    code, data = run_json(capsys, "build", "E2", "--e", E2)
    assert code == 0
    assert data["schema"] == 1 and data["command"] == "build"
    assert data["scheme"]["0"] == ["0", "4/5"]


def test_output_is_deterministic(capsys):
    first = run(capsys, "build", "H6", "--e", E9, "--t10", "1/2", "--json")
    second = run(capsys, "build", "H6", "--e", E9, "--t10", "1/2", "--json")
    assert first == second


@pytest.mark.parametrize("argv", [
    ("ad", "E2", "--e", E2, "--g0", "1/3", "--g1", "1/4"),
    ("mc", "H6", "--e", E9, "--t10", "1/2", "--mu", "1/3"),
    ("ch1mx", "H6", "--e", E9, "--t10", "1/2"),
    ("chinv", "E2", "--e", E2, "--power", "1/2"),
    ("shift-solve", "H6", "-00", "--e", E9),
    ("shift-solve", "E2", "--sh", "a+", "--e", E2),
    ("svalue", "E2", "a-", "--e", E2),
    ("svalue", "H6", "--e", E9, "--sh", "sh3"),
    ("reducible", "E2", "--e", E2),
    ("factor", "E2", "--e", "-2,1/3,2/7"),
    ("build", "saE6"),
])
def test_verbs_succeed(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    assert out.strip()


def test_negative_values_are_accepted(capsys):
    code, data = run_json(capsys, "factor", "E2", "--e", "-2,1/3,2/7")
    assert code == 0
    assert data["type"] == [1, 1]
    assert data["apparent_singularities"] == ["9/14", "9/7"]


def test_svalue_matches_formula(capsys):
    code, data = run_json(capsys, "svalue", "E2", "a-", "--e", E2)
    assert code == 0
    assert data["value"] == "3/20"


def test_domain_error_exit_code(capsys):
    code, data = run_json(capsys, "factor", "E2", "--e", E2)
    assert code == 1
    assert "NotReducible" in json.dumps(data)


@pytest.mark.parametrize("argv", [
    ("build", "H9", "--e", "1"),
    ("build", "E2", "--e", "1/2,1/3"),
    ("build", "E2", "--e", "1/2,x,1"),
    ("verify", "--suite", "nope"),
    ("pipe", "nope"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_verify_suite(capsys):
    code, data = run_json(capsys, "verify", "--suite", "gauss", "--seed", "3")
    assert code == 0
    assert data["summary"] == {"fail": 0, "pass": 2, "skipped": 0}
    assert all(r["status"] == "pass" for r in data["reports"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fuchsian", "reducible", "H6", "--e",
                           "1/7,2/7,3/7,4/7,5/7,6/7,1/3,2,1/5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "e8" in proc.stdout
