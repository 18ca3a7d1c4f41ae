import json
import subprocess
import sys
from pathlib import Path

import pytest

from fuzzrisk.cli import run
from fuzzrisk.dsl import format_rule, serialize_model
from fuzzrisk.profiles import builtin, builtin_source, score_attacker

FIXTURES = Path(__file__).parent / "fixtures"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_trace_reports_main_rule(capsys):
    code, out, _ = call(
        capsys, "eval", "--model", "attacker",
        "--in", "resources=0.1", "--in", "knowledge=0.1", "--in", "motivation=0.1", "--trace",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["main_active_rule"] == 1
    assert doc["crisp"] == score_attacker(0.1, 0.1, 0.1)[0]


def test_eval_missing_input(capsys):
    code, out, err = call(capsys, "eval", "--model", "attacker", "--in", "resources=1", "--in", "knowledge=1")
    assert code == 1
    assert out == ""
    assert err.strip().endswith("missing input: motivation")
    assert len(err.strip().splitlines()) == 1


def test_eval_names_are_case_insensitive_and_clamped(capsys):
    code, out, err = call(
        capsys, "eval", "--model", "attacker", "--format", "json",
        "--in", "RESOURCES=1.4", "--in", "Knowledge=1", "--in", "motivation=1",
    )
    assert code == 0
    assert "clamped" in err
    assert json.loads(out)["crisp"] == score_attacker(1, 1, 1)[0]


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--model", "attacker", "--in", "skill=1"],
        ["eval", "--model", "attacker", "--in", "resources"],
        ["eval", "--model", "attacker", "--in", "resources=abc"],
        ["eval", "--model", "no/such/file.fis", "--in", "a=1"],
        ["preset", "pirate"],
        ["sweep", "--model", "attacker", "--x", "knowledge"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 1
    assert err.strip()


def test_rules_success_table(capsys):
    code, out, _ = call(capsys, "rules", "--model", "success")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 81
    index, text = lines[59].split("\t")
    assert index == "60"
    assert text == (
        "rule if profile is big and protection is small and vulnerabilities is medium "
        "and restore_cost is big then successrate is very_big"
    )


@pytest.mark.parametrize("name", ["attacker", "success"])
def test_rules_match_shipped_file(capsys, name):
    _, out, _ = call(capsys, "rules", "--model", name)
    listed = [line.split("\t", 1)[1] for line in out.splitlines()]
    shipped = [ln for ln in builtin_source(name).splitlines() if ln.startswith("rule ")]
    assert listed == shipped


def test_rules_json(capsys):
    _, out, _ = call(capsys, "rules", "--model", "attacker", "--format", "json")
    rows = json.loads(out)
    assert rows[7] == {
        "index": 8,
        "antecedents": {"resources": "small", "knowledge": "big", "motivation": "medium"},
        "consequent": "medium",
    }


def test_pipeline(capsys):
    code, out, _ = call(
        capsys, "pipeline", "--resources", "1", "--knowledge", "1", "--motivation", "1",
        "--protection", "0", "--vulnerabilities", "1", "--restore-cost", "1", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["score"] == pytest.approx(11 / 12, abs=0.002)
    assert doc["successrate_main_active_rule"] == 63


def test_preset(capsys):
    code, out, _ = call(capsys, "preset", "industrial_spy", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["main_active_rule"] == doc["expected_main_rule"] == 26
    code, out, _ = call(capsys, "preset", "hacker")
    assert "expected 4, ok" in out


def test_sweep_csv_to_file(capsys, tmp_path):
    target = tmp_path / "slice.csv"
    code, out, _ = call(
        capsys, "sweep", "--model", "attacker", "--x", "knowledge",
        "--fix", "resources=0.1", "--fix", "motivation=0.5", "--steps", "3", "--out", str(target),
    )
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 4


def test_sweep_json_stdout(capsys):
    code, out, _ = call(
        capsys, "sweep", "--model", "success", "--x", "profile", "--y", "protection",
        "--fix", "vulnerabilities=0.5", "--fix", "restore_cost=0.9", "--steps", "4", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert [a["name"] for a in doc["axes"]] == ["profile", "protection"]
    assert len(doc["values"]) == 4 and len(doc["values"][0]) == 4


def test_json_output_is_stable(capsys):
    argv = ["eval", "--model", "success", "--format", "json", "--trace",
            "--in", "profile=0.4", "--in", "protection=0.3", "--in", "vulnerabilities=0.6", "--in", "restore_cost=0.2"]
    first = call(capsys, *argv)[1]
    assert first == call(capsys, *argv)[1]
    json.loads(first)


def test_validate_builtin_and_file(capsys, tmp_path):
    code, out, _ = call(capsys, "validate", "attacker")
    assert code == 0 and "ok (27 rules)" in out
    path = tmp_path / "success.fis"
    path.write_text(serialize_model(builtin("success")))
    assert call(capsys, "validate", str(path))[0] == 0


def test_validate_reports_positions(capsys):
    path = FIXTURES / "invalid" / "unknown_term.fis"
    code, out, _ = call(capsys, "validate", str(path))
    assert code == 2
    assert f"{path}:6:22: error: unknown term 'tiny'" in out


def test_validate_incomplete_is_warning_only(capsys, tmp_path):
    fis = builtin("attacker")
    dropped = format_rule(fis, fis.rules[16])
    path = tmp_path / "partial.fis"
    path.write_text(builtin_source("attacker").replace(dropped + "\n", ""))
    code, out, _ = call(capsys, "validate", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["valid"]
    assert [d["severity"] for d in doc["diagnostics"]] == ["warning"]


def test_validate_coverage_error(capsys, tmp_path):
    path = tmp_path / "gap.fis"
    path.write_text(
        'fis "gap"\ninput x range 0 1\n  term lo tri 0 0 0.3\n  term hi tri 0.6 1 1\n'
        "output y range 0 1\n  term a trap -1 0 1 2\n"
        "rule if x is lo then y is a\nrule if x is hi then y is a\n"
    )
    code, out, _ = call(capsys, "validate", str(path))
    assert code == 2 and "variable x" in out


def test_eval_of_broken_file_is_parse_error(capsys):
    code, _, err = call(capsys, "eval", "--model", str(FIXTURES / "invalid" / "bad_number.fis"), "--in", "a=0.5")
    assert code == 2
    assert "bad number" in err


def test_empty_aggregate_exit_code(capsys, tmp_path):
    path = tmp_path / "narrow.fis"
    path.write_text(
        'fis "narrow"\ninput x range 0 1\n  term lo tri 0 0 0.5\n  term hi tri 0.5 1 1\n'
        "output y range 0 1\n  term a tri 0 0.5 1\n"
        "rule if x is lo then y is a\n"
    )
    code, _, err = call(capsys, "eval", "--model", str(path), "--in", "x=1")
    assert code == 3
    assert "no rule fired" in err


def test_grid_env(capsys, monkeypatch):
    monkeypatch.setenv("FUZZRISK_GRID", "10001")
    _, out, _ = call(capsys, "eval", "--model", "attacker", "--trace",
                     "--in", "resources=1", "--in", "knowledge=1", "--in", "motivation=1")
    doc = json.loads(out)
    assert doc["grid_size"] == 10001
    assert doc["crisp"] == pytest.approx(11 / 12, abs=1e-4)
    monkeypatch.setenv("FUZZRISK_GRID", "50")
    assert call(capsys, "preset", "hacker")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzrisk", "preset", "cyber_warrior", "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["main_active_rule"] == 27
