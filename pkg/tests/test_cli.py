import csv
import json
import subprocess
import sys

from hadamard_lab.cli import main


def test_run_writes_report_and_tables(tmp_path, capsys):
    assert main(["run", "moving_quadratics", "--out", str(tmp_path), "--seed", "3"]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["all_matched"] and doc["environment"]["seed"] == 3
    with open(tmp_path / "envelopes.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "probe", "k", "lambda", "gap", "prox_distance"]
    assert len(rows) > 1
    with open(tmp_path / "rho.csv") as fh:
        assert next(csv.reader(fh)) == ["n", "rho", "e_terms", "r_terms", "truncation"]
    out = capsys.readouterr().out
    assert "ok    moving_quadratics/mosco: consistent" in out


def test_run_is_byte_identical_for_a_seed(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["run", "alternating_balls", "--out", str(d), "--seed", "5"]) == 0
    for name in ("report.json", "envelopes.csv", "rho.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_tolerance_flags_are_recorded(tmp_path):
    main(["run", "spider_alternation", "--out", str(tmp_path), "--tol-prox", "1e-7", "--tol-geom", "1e-10"])
    tol = json.loads((tmp_path / "report.json").read_text())["environment"]["tolerances"]
    assert tol["prox"] == 1e-7 and tol["geom"] == 1e-10


def test_bad_scenario_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x"')
    assert main(["run", str(bad), "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "report.json").exists()


def test_mismatched_expectation_exits_1(tmp_path):
    doc = {
        "id": "wrong_expectation",
        "space": {"kind": "tree", "vertices": ["hub", "A", "B"], "edges": [["hub", "A", 1.0], ["hub", "B", 1.0]]},
        "point_sequence": {"point": {"edge": "n % 2", "offset": 1.0}},
        "checks": ["weak_limit"],
        "expected": {"weak_limit": "yes"},
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    assert main(["run", str(path), "--out", str(tmp_path)]) == 1


def test_suite_is_deterministic(tmp_path, capsys):
    assert main(["suite", "metric", "--seed", "2", "--out", str(tmp_path / "a")]) == 0
    first = capsys.readouterr().out
    assert main(["suite", "metric", "--seed", "2", "--out", str(tmp_path / "b")]) == 0
    assert capsys.readouterr().out == first
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    assert all(line.startswith("PASS") for line in first.splitlines())


def test_list_and_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "hadamard_lab", "list"], capture_output=True, text=True, check=True
    ).stdout
    assert "s1_shifted_balls" in out and "spider_alternation" in out
