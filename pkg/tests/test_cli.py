import csv
import io
import json
import math
import subprocess
import sys

import pytest

from repdigit_lrs.cli import EXIT_HYPOTHESIS, EXIT_INVALID, EXIT_OK, EXIT_USAGE, build_parser, run

SUBCOMMANDS = ("check", "search", "certify", "bound", "height", "expand", "eval", "match")


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_search_padovan(capsys):
    code, out, _ = call(capsys, "search", "--preset", "padovan", "--base", "10", "--distinct", "--n-max", "500")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["values"] == ["151", "616"]
    assert [s["value"] for s in data["solutions"]] == [151, 616]
    assert data["precision"] == 256


def test_height(capsys):
    code, out, _ = call(capsys, "height", "--minpoly", "[-2,0,1]")
    assert code == EXIT_OK
    h = json.loads(out)["height"]
    assert abs(float(h["mid"]) - math.log(2) / 2) < 1e-15
    assert float(h["mid"]) == pytest.approx(0.34657359, abs=1e-8)


def test_match(capsys):
    code, out, _ = call(capsys, "match", "--digits", "1,5,1")
    assert code == EXIT_OK
    assert json.loads(out)["patterns"] == [{"d1": 1, "d2": 5, "l": 1, "m": 1}]


def test_expand_eval(capsys, tmp_path):
    base = tmp_path / "sqrt2.json"
    base.write_text(json.dumps({"field": 2, "beta": [0, 1]}))
    code, out, _ = call(capsys, "expand", "--value", "[2, 0]", "--base", str(base))
    assert code == EXIT_OK and json.loads(out)["rendered"] == "100"
    code, out, _ = call(capsys, "eval", "--digits", "100", "--base", str(base))
    assert code == EXIT_OK and json.loads(out)["value"] == [2, 0]
    code, out, _ = call(capsys, "expand", "--value", "-1", "--base", str(base))
    assert code == EXIT_OK and json.loads(out)["status"] == "NoExpansion"


def test_unit_base_is_invalid(capsys, tmp_path):
    base = tmp_path / "unit.json"
    base.write_text(json.dumps({"field": 2, "beta": [1, 1]}))
    code, _, err = call(capsys, "eval", "--digits", "1", "--base", str(base))
    assert code == EXIT_INVALID and "unit" in err


def test_check_exit_codes(capsys, tmp_path):
    code, out, _ = call(capsys, "check", "--preset", "tribonacci")
    assert code == EXIT_OK and json.loads(out)["verdicts"]["z1_not_in_K"] == "Pass"
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"coeffs": [6, -11, 6], "initials": [1, 2, 3]}))
    code, out, _ = call(capsys, "check", "--spec", str(spec))
    assert code == EXIT_HYPOTHESIS and json.loads(out)["verdicts"]["z1_not_in_K"] == "Fail"
    code, out, _ = call(capsys, "certify", "--spec", str(spec))
    assert code == EXIT_HYPOTHESIS and json.loads(out)["status"]["kind"] == "Failed"


def test_invalid_inputs(capsys, tmp_path):
    spec = tmp_path / "rep.json"
    spec.write_text(json.dumps({"coeffs": [3, -3, 1], "initials": [1, 2, 3]}))
    assert call(capsys, "search", "--spec", str(spec))[0] == EXIT_INVALID
    assert call(capsys, "search", "--spec", str(tmp_path / "missing.json"))[0] == EXIT_INVALID
    assert call(capsys, "height", "--minpoly", "[-4,0,1]")[0] == EXIT_INVALID
    assert call(capsys, "match", "--digits", "0,1")[0] == EXIT_INVALID
    assert call(capsys, "search", "--preset", "padovan", "--n-max", "-1")[0] == EXIT_INVALID


def test_usage_errors(capsys):
    assert call(capsys, "search", "--preset", "padovan", "--bogus")[0] == EXIT_USAGE
    assert call(capsys, "search")[0] == EXIT_USAGE
    assert call(capsys, "search", "--preset", "padovan", "--spec", "x.json")[0] == EXIT_USAGE
    assert call(capsys, "frobnicate")[0] == EXIT_USAGE
    assert call(capsys)[0] == EXIT_USAGE
    assert call(capsys, "search", "--preset", "nope")[0] == EXIT_USAGE
    assert call(capsys, "search", "--preset", "padovan", "--jobs", "0")[0] == EXIT_USAGE


@pytest.mark.parametrize("sub", SUBCOMMANDS)
def test_help_documents_flags(capsys, sub):
    assert call(capsys, sub, "--help")[0] == 0
    text = capsys.readouterr().out or ""
    parser = build_parser()
    subparser = parser._subparsers._group_actions[0].choices[sub]
    helptext = subparser.format_help()
    for action in subparser._actions:
        for opt in action.option_strings:
            assert opt in helptext
    assert text == ""


def test_csv_outputs(capsys):
    code, out, _ = call(capsys, "search", "--preset", "padovan", "--n-max", "100", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["n", "l", "m", "d1", "d2", "value"], ["19", "1", "1", "1", "5", "151"],
                    ["24", "1", "1", "6", "1", "616"]]
    code, out, _ = call(capsys, "check", "--preset", "padovan", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "hypothesis,verdict"


def test_bound_and_certify_trace(capsys):
    code, out, _ = call(capsys, "bound", "--preset", "padovan", "--trace")
    data = json.loads(out)
    assert code == 0 and data["effective"] and data["fixed_point_steps"] <= 200
    assert any(r["name"] == "K3" for r in data["trace"])
    code, out, _ = call(capsys, "certify", "--preset", "padovan", "--cap", "300", "--trace")
    data = json.loads(out)
    assert data["status"]["kind"] == "PartialUpTo" and data["bound"]["trace"]


def test_schema_stable(capsys):
    a = json.loads(call(capsys, "search", "--preset", "narayana", "--base", "3", "--n-max", "200")[1])
    b = json.loads(call(capsys, "search", "--preset", "narayana", "--base", "3", "--n-max", "200")[1])
    a.pop("elapsed_seconds"), b.pop("elapsed_seconds")
    assert a == b and list(a) == list(b)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repdigit_lrs.cli", "match", "--digits", "616"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["patterns"][0]["d1"] == 6
