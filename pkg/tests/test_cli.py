import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from ltverify import cli
from ltverify.reports import make_report

SCHEMA = cli.report_schema()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_hardy_example(capsys):
    code, doc, err = run(capsys, "check", "--hardy", "--d", "3", "--trials", "100", "--seed", "7")
    assert code == 0
    assert len(doc["reports"]) == 100 and all(r["passed"] for r in doc["reports"])
    assert doc["summary"] == {"total": 100, "passed": 100, "failed": 0}
    assert "100/100 passed" in err


def test_stability_example(capsys):
    code, doc, _ = run(capsys, "matter", "--stability", "--N", "10", "--M", "10", "--Z", "1",
                       "--q", "2")
    assert code == 0
    (rep,) = doc["reports"]
    assert rep["details"]["coefficient"] == pytest.approx(1.073, rel=5e-3)


def test_constants_example(capsys):
    code, doc, _ = run(capsys, "constants", "--kind", "semiclassical", "--d", "2")
    assert code == 0
    assert doc["reports"][0]["value"] == pytest.approx(6.283185307179586, rel=1e-15)


@pytest.mark.parametrize("argv", [
    ["check", "--bogus"],
    ["frobnicate"],
    ["check", "--seed", "-1"],
    ["check", "--trials", "-3"],
    ["check", "--tol", "-1"],
    ["check", "--sobolev", "--d", "2"],
    ["constants", "--kind", "nonsense"],
    ["constants", "--kind", "sobolev", "--d", "2"],
])
def test_usage_and_domain_errors_exit_1(capsys, argv):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_violation_exits_2(capsys, monkeypatch):
    bad = make_report("forced", 0.0, 1.0, 1.0, 0.0).to_dict()
    monkeypatch.setitem(cli.HANDLERS, "fermi", lambda a: [bad])
    code, doc, _ = run(capsys, "fermi")
    assert code == 2
    assert doc["summary"] == {"total": 1, "passed": 0, "failed": 1}
    jsonschema.validate(doc, SCHEMA)


@pytest.mark.parametrize("argv", [
    ["constants"],
    ["check", "--d", "1", "--trials", "3"],
    ["check", "--d", "2", "--trials", "2"],
    ["check", "--d", "3", "--trials", "2"],
    ["cover", "--trials", "5"],
    ["lt", "--d", "2", "--trials", "3"],
    ["lt", "--d", "1", "--beta", "1.0"],
    ["fermi", "--d", "2", "--N", "50"],
    ["matter", "--trials", "10"],
    ["all", "--trials", "2"],
])
def test_schema_valid(capsys, argv):
    code, doc, _ = run(capsys, *argv)
    assert code == 0
    jsonschema.validate(doc, SCHEMA)
    assert doc["manifest"]["command"] == argv[0]
    assert doc["summary"]["passed"] == doc["summary"]["total"]


def test_non_finite_values_serialize():
    doc = cli.assemble("constants", {}, 0, [{"type": "constant", "kind": "x", "d": 1,
                                             "value": float("inf"), "details": {}}])
    assert doc["reports"][0]["value"] == "inf"
    json.dumps(doc, allow_nan=False)
    jsonschema.validate(doc, SCHEMA)


@pytest.mark.parametrize("argv", [["check", "--d", "2", "--trials", "4", "--seed", "99"],
                                  ["cover", "--trials", "6", "--seed", "5"],
                                  ["matter", "--baxter", "--trials", "20", "--seed", "3"]])
def test_deterministic(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_seed_changes_stream(capsys):
    _, a, _ = run(capsys, "check", "--heisenberg", "--trials", "3", "--seed", "1")
    _, b, _ = run(capsys, "check", "--heisenberg", "--trials", "3", "--seed", "2")
    assert [r["lhs"] for r in a["reports"]] != [r["lhs"] for r in b["reports"]]


def test_out_and_csv(tmp_path, capsys):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code = cli.main(["fermi", "--N", "30", "--out", str(out), "--csv", str(table)])
    assert code == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(out.read_text())
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == len(doc["reports"])
    assert rows[0]["type"] == "energy_bound"
    assert rows[-1]["passed"] == "True"


def test_subprocess_entry_point(tmp_path):
    out = tmp_path / "r.json"
    res = subprocess.run([sys.executable, "-m", "ltverify", "constants", "--kind",
                          "semiclassical", "--d", "2", "--out", str(out)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert json.loads(out.read_text())["reports"][0]["value"] == pytest.approx(6.2831853)
    res = subprocess.run([sys.executable, "-m", "ltverify", "check", "--nope"],
                         capture_output=True, text=True)
    assert res.returncode == 1 and "usage" in res.stderr
