import json
import subprocess
import sys

import pytest

from conftest import FIG2_TABLE, FIXTURES
from veracity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def inputs(name):
    d = FIXTURES / name
    return ["--items", str(d / "items.tsv"), "--ratings", str(d / "ratings.tsv"),
            "--explanations", str(d / "explanations.jsonl")]


def test_evaluate_json(capsys):
    code, out, _ = run(capsys, "evaluate", *inputs("four"))
    assert code == 0
    doc = json.loads(out)
    assert doc["veracity"]["permissive"]["matrix"]["hits"] == 2.0


def test_evaluate_writes_out_file(capsys, tmp_path):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "evaluate", *inputs("four"), "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("dimension,mode")


def test_classify_jsonl_reproduces_combiner_table(capsys):
    code, out, _ = run(capsys, "classify", *inputs("fig2"))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 16
    for line, (fid, att, restrictive, permissive) in zip(lines, FIG2_TABLE):
        assert (line["fidelity"], line["attunement"]) == (fid, att)
        names = {"hit": "H", "miss": "M", "false_alarm": "FA", "correct_rejection": "CR"}
        got_r = {names[k]: v for k, v in line["veracity"]["restrictive"].items() if v}
        got_p = {names[k]: v for k, v in line["veracity"]["permissive"].items() if v}
        assert got_r == restrictive and got_p == permissive


def test_classify_flags_excluded(capsys):
    code, out, _ = run(capsys, "classify", *inputs("unknown"), "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 5
    assert all(",excluded,true," in row for row in rows[1:])


def test_simulate_and_persist(capsys, tmp_path):
    ds = tmp_path / "ds"
    code, out, _ = run(capsys, "simulate", "--preset", "case2", "--records", "200", "--seed", "4",
                       "--save-dataset", str(ds))
    assert code == 0
    sim = json.loads(out)
    assert sim["params"]["generator"]["fidelity_accuracy"] == [0.9, 0.1]
    code, out, _ = run(capsys, "evaluate", "--items", str(ds / "items.tsv"), "--ratings", str(ds / "ratings.tsv"),
                       "--explanations", str(ds / "explanations.jsonl"))
    ev = json.loads(out)
    for key in ("inputs", "counts", "fidelity", "attunement", "veracity"):
        assert ev[key] == sim[key]


def test_simulate_custom_params(capsys):
    code, out, _ = run(capsys, "simulate", "--records", "50", "--fidelity-accuracy", "1,0",
                       "--prevalence", "0.3,0.6", "--modes", "balanced")
    doc = json.loads(out)
    assert code == 0
    assert doc["params"]["generator"]["signal_prevalence"] == [0.3, 0.6]
    assert list(doc["veracity"]) == ["balanced"]
    assert doc["fidelity"]["matrix"]["misses"] == 0.0


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("VERACITY_SEED", "17")
    _, out, _ = run(capsys, "simulate", "--records", "20")
    assert json.loads(out)["params"]["seed"] == 17
    _, out, _ = run(capsys, "simulate", "--records", "20", "--seed", "3")
    assert json.loads(out)["params"]["seed"] == 3
    monkeypatch.delenv("VERACITY_SEED")
    _, out, _ = run(capsys, "simulate", "--records", "20")
    assert json.loads(out)["params"]["seed"] == 0


def test_experiment_csv_layout(capsys):
    code, out, err = run(capsys, "experiment", "--replicates", "3", "--records", "60", "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 5
    header = rows[0].split(",")
    assert header[:2] == ["case", "description"]
    assert header[2:] == [
        "fidelity_a_prime", "fidelity_b_double_prime", "attunement_a_prime", "attunement_b_double_prime",
        "veracity_restrictive_a_prime", "veracity_restrictive_b_double_prime",
        "veracity_permissive_a_prime", "veracity_permissive_b_double_prime",
        "veracity_balanced_a_prime", "veracity_balanced_b_double_prime",
    ]
    assert "paired t-test" in err


def test_experiment_json_has_t_test(capsys):
    code, out, _ = run(capsys, "experiment", "--replicates", "2", "--records", "40", "--seed", "5")
    doc = json.loads(out)
    assert code == 0
    assert doc["t_test"]["degrees_of_freedom"] == doc["t_test"]["n_pairs"] - 1
    assert len(doc["runs"]) == 8 and len(doc["table"]) == 4
    assert [r["seed"] for r in doc["runs"]] == [5, 6, 7, 8, 9, 10, 11, 12]


def test_experiment_without_both_modes(capsys):
    code, out, _ = run(capsys, "experiment", "--replicates", "2", "--records", "20", "--modes", "balanced")
    doc = json.loads(out)
    assert code == 0 and doc["t_test"] is None and "requires" in doc["t_test_note"]


@pytest.mark.parametrize("argv", [
    ["experiment", "--replicates", "1"],
    ["simulate", "--modes", "strict"],
    ["simulate", "--records", "0"],
    ["simulate", "--threshold", "9"],
    ["simulate", "--fidelity-accuracy", "2,0"],
    ["bogus"],
    ["evaluate"],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_replicates_one_message(capsys):
    code, _, err = run(capsys, "experiment", "--replicates", "1")
    assert code == 1 and "insufficient pairs" in err


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("VERACITY_SEED", "abc")
    code, _, err = run(capsys, "simulate")
    assert code == 1 and "VERACITY_SEED" in err


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "ratings.tsv"
    bad.write_text("u1\ti1\t6\n")
    d = FIXTURES / "four"
    code, _, err = run(capsys, "evaluate", "--items", str(d / "items.tsv"), "--ratings", str(bad),
                       "--explanations", str(d / "explanations.jsonl"))
    assert code == 2 and "ratings.tsv:1" in err


def test_missing_file_exit_2(capsys, tmp_path):
    d = FIXTURES / "four"
    code, _, _ = run(capsys, "evaluate", "--items", str(tmp_path / "nope"), "--ratings", str(d / "ratings.tsv"),
                     "--explanations", str(d / "explanations.jsonl"))
    assert code == 2


def test_invariant_violation_exit_3(capsys, monkeypatch):
    from veracity import report
    from veracity.errors import InvariantError

    def broken(_):
        raise InvariantError("forced")

    monkeypatch.setattr(report, "check_report", broken)
    code, _, err = run(capsys, "evaluate", *inputs("four"))
    assert code == 3 and "forced" in err


def test_empty_log_warns_but_succeeds(capsys, tmp_path):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    d = FIXTURES / "four"
    code, out, err = run(capsys, "evaluate", "--items", str(d / "items.tsv"), "--ratings", str(d / "ratings.tsv"),
                         "--explanations", str(empty))
    assert code == 0
    assert json.loads(out)["counts"]["total_records"] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "veracity", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "veracity" in proc.stdout
