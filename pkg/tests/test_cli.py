import json
import os
import subprocess
import sys

import pytest

from weierstrass_mock.cli import dumps, main

CURVE_37 = ["--curve", "0,0,1,-1,0", "--conductor", "37"]
CURVE_361 = ["--curve", "0,0,1,-38,90", "--conductor", "361"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_mockform_matches_displayed_expansion(capsys):
    code, out, _ = run(["mockform", *CURVE_37, "--terms", "6"], capsys)
    assert code == 0
    data = json.loads(out)
    series = data["zhat_plus"]
    for n, printed in {"-1": "1.0000", "0": "1.0000", "1": "2.1132", "2": "2.3867", "3": "4.2201", "4": "5.5566", "5": "8.3547"}.items():
        assert series[n].startswith(printed)
    assert data["curve"]["label"] == "37a1"
    assert set(data["atkin_lehner"]) == {"37"}


def test_mockform_exact_output_for_cm_curve(capsys):
    code, out, _ = run(["mockform", *CURVE_361, "--terms", "4"], capsys)
    data = json.loads(out)
    assert code == 0 and data["exact"] and data["S_rational"] == -2
    assert data["zhat_plus"]["2"] == "1/2" and data["zhat_plus"]["3"] == "-7/3"
    assert "atkin_lehner" not in data


def test_padic_all_pass(capsys):
    code, out, _ = run(["padic", *CURVE_361, "-p", "5", "--max-n", "3", "--target-t", "3", "--constant", "-2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["all_passed"]
    assert [r["n"] for r in data["rows"]] == [1, 2, 3]
    assert all(r["min_valuation"] >= r["t"] for r in data["rows"])


def test_padic_digits(capsys):
    code, out, _ = run(["padic", "--label", "11a1", "-p", "5", "--max-n", "1", "--digits-of-limit", "3"], capsys)
    assert code == 0 and json.loads(out)["limit_digits"] == [4, 0, 2]


def test_trace_reports_classes(capsys):
    code, out, _ = run(["trace", *CURVE_37, "--delta", "-3", "--r", "21", "--d", "1", "--digits", "12"], capsys)
    data = json.loads(out)
    assert code == 0 and data["canonical_normalization"] == "footnote"
    row = data["rows"][0]
    assert row["coefficient"].startswith("-0.28176178")
    assert {c["sign"] for c in row["classes"]} == {1, -1}
    assert all({"form", "chi", "cm_point", "value", "stabilizer"} <= set(c) for c in row["classes"])


def test_trace_of_j(capsys):
    code, out, _ = run(["trace", "--function", "j", "--delta", "-3", "--d", "1,4"], capsys)
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["nearest_integer"] for r in rows] == [-248, 26752]


def test_lvalues(capsys):
    code, out, _ = run(["lvalues", *CURVE_37, "--d", "1,12", "--err", "1e-10"], capsys)
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["target"] for r in rows] == ["derivative", "derivative"]
    assert rows[0]["value"].startswith("0.3059997738")
    code, out, _ = run(["lvalues", *CURVE_37, "--target", "value"], capsys)
    assert json.loads(out)["rows"][0]["vanishes"]


def test_verify_subset(capsys):
    code, out, _ = run(["verify", "--filter", "361", "--format", "table"], capsys)
    report = json.loads(out)
    assert code == 0 and report["ok"]
    code, out, err = run(["verify", "--filter", "nothing-matches"], capsys)
    assert code == 1 and json.loads(out)["error"]["type"] == "UnknownCaseError"


@pytest.mark.slow
def test_verify_full_suite(capsys):
    code, out, _ = run(["verify", "--jobs", "4"], capsys)
    report = json.loads(out)
    assert code == 0 and report["ok"]
    assert report["summary"]["fail"] == 0 and report["summary"]["error"] == 0


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["mockform", "--label", "11a1", "--frobnicate"],
    ["mockform", "--curve", "0,0,1,-1", "--conductor", "37"],
    ["mockform", "--curve", "0,0,1,-1,0"],
    ["mockform", "--label", "11a1", "--precision", "32"],
    ["mockform", "--label", "11a1", "--terms", "0"],
    ["padic", "--label", "11a1", "-p", "5", "--constant", "x"],
    ["lvalues", "--label", "11a1", "--d", "1,a"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["padic", "--label", "11a1", "-p", "2", "--max-n", "1"],
    ["lvalues", "--label", "37a1", "--d", "9"],
    ["lvalues", "--label", "11a1", "--target", "derivative"],
])
def test_computational_errors_exit_1(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 1
    error = json.loads(out)["error"]
    assert error["type"] and error["message"]


def test_output_round_trips(capsys):
    for argv in (["mockform", "--label", "11a1", "--terms", "5"], ["lvalues", "--label", "11a1"]):
        code, out, _ = run(argv, capsys)
        assert code == 0 and dumps(json.loads(out)) == out


def test_global_options_before_or_after_subcommand(capsys):
    a = run(["--digits", "8", "mockform", "--label", "11a1", "--terms", "3"], capsys)[1]
    b = run(["mockform", "--label", "11a1", "--terms", "3", "--digits", "8"], capsys)[1]
    assert a == b and json.loads(a)["S"] == "0.38124691"


def test_console_entry_point_and_precision_env():
    env = dict(os.environ, WMOCK_PRECISION="128")
    proc = subprocess.run([sys.executable, "-m", "weierstrass_mock", "lvalues", "--label", "11a1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and json.loads(proc.stdout)["precision_bits"] == 128
    env["WMOCK_PRECISION"] = "16"
    proc = subprocess.run([sys.executable, "-m", "weierstrass_mock", "lvalues", "--label", "11a1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2 and proc.stdout == ""
