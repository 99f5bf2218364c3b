import json
import math
from pathlib import Path

import pytest

from hadamard_lab import ScenarioError, load_scenario, run_scenario
from hadamard_lab.scenario import bundled_scenarios, evaluate_expression

MINIMAL = {
    "id": "tiny",
    "space": {"kind": "euclidean", "dim": 1},
    "sequence": {"kind": "squared_distance", "point": ["1/n"]},
    "limit": {"kind": "squared_distance", "point": [0]},
    "grids": {"lambdas": {"K": 3}, "probes": {"points": [[0], [0.5]]}},
    "checks": ["minorization", "gamma_limit"],
    "expected": {"minorization": "bounded", "gamma_limit": "table"},
}


def test_expression_evaluator():
    assert evaluate_expression("1/n + 2**-n", n=2) == pytest.approx(0.75)
    assert evaluate_expression("sqrt(2) * cos(pi)") == pytest.approx(-math.sqrt(2))
    assert evaluate_expression("n % 2", n=7) == 1.0


@pytest.mark.parametrize(
    "text",
    ["__import__('os')", "n.real", "[1, 2]", "lambda: 1", "open('x')", "1 if n else 2", "1 +"],
)
def test_expression_evaluator_rejects_everything_else(text):
    with pytest.raises(ScenarioError):
        evaluate_expression(text, n=1)


def test_symbolic_n_only_where_allowed():
    with pytest.raises(ScenarioError, match="symbolic n"):
        evaluate_expression("1/n")
    with pytest.raises(ScenarioError, match="cannot be evaluated"):
        evaluate_expression("1/(n - 1)", n=1)


def test_minimal_scenario_runs():
    sc = load_scenario(MINIMAL)
    report = run_scenario(sc)
    assert report.all_matched
    doc = report.to_json()
    assert doc["environment"]["seed"] == 0
    json.dumps(doc)


def test_json_syntax_error_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "id": "x",\n  "space": {"kind": }\n}\n')
    with pytest.raises(ScenarioError, match="line 3, column"):
        load_scenario(str(path))


def test_schema_violation_reports_json_path():
    doc = dict(MINIMAL, grids={"lambdas": {"K": 0}})
    with pytest.raises(ScenarioError, match=r"\$\.grids"):
        load_scenario(doc)


def test_unknown_check_is_a_schema_violation():
    doc = dict(MINIMAL, checks=["telepathy"], expected={"telepathy": "yes"})
    with pytest.raises(ScenarioError, match="schema violation"):
        load_scenario(doc)


def test_expected_verdict_required_for_every_check():
    doc = dict(MINIMAL, expected={"minorization": "bounded"})
    with pytest.raises(ScenarioError, match="gamma_limit"):
        load_scenario(doc)


def test_building_errors_are_scenario_errors():
    doc = dict(MINIMAL, sequence={"kind": "squared_distance", "point": [0, 0]})
    with pytest.raises(ScenarioError, match="does not build"):
        load_scenario(doc)


def test_missing_file():
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario("/nonexistent/scenario.json")


def test_bundled_scenarios_load_with_distinct_ids():
    ids = [load_scenario(p).id for p in bundled_scenarios()]
    assert len(ids) == len(set(ids)) >= 8


@pytest.mark.parametrize(
    "stem", ["spider_alternation", "escaping_points", "moving_quadratics", "alternating_quadratics", "alternating_balls"]
)
def test_fast_bundled_scenarios_match_expectations(stem):
    path = [p for p in bundled_scenarios() if Path(p).stem == stem][0]
    report = run_scenario(load_scenario(path), seed=1)
    assert report.all_matched, {k: v["verdict"] for k, v in report.checks.items()}
