"""Scenario files: loading, validation and execution.

A scenario is a JSON document (schema in ``scenario.schema.json``) naming a
space, a function sequence with symbolic index ``n``, a declared limit,
grids, the checks to run and the verdict expected from each.  Numeric
fields of the sequence may be strings such as ``"1 + 1/n"`` or
``"(-1)**n"``; they are evaluated per index by a small arithmetic evaluator.
"""

import ast
import json
import math
import operator
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from . import windows
from .catalog import (
    Ball,
    DistanceTo,
    DistanceToSet,
    EnvelopeOf,
    FunctionSequence,
    Halfspace,
    Indicator,
    Segment,
    SetSequence,
    Shifted,
    SquaredDistance,
    Subtree,
    WeightedSum,
    WholeSpace,
)
from .convergence import (
    ENVELOPE_WINDOW,
    PointSequence,
    check_envelope_convergence,
    frolik_wijsman_check,
    gamma_limit_from_envelopes,
    mosco_check,
    weak_limit,
)
from .errors import HadamardLabError, NoBound, NotCauchy, NoUniformBound, ScenarioError
from .metric import LambdaGrid, ProbeGrid, cauchy_limit, equi_lipschitz_bound, grid_profile, rho, rho_from_profiles
from .prox import estimate_minorization, solver_tolerance
from .spaces import MetricTree, Product, space_from_json

CHECK_ORDER = (
    "weak_limit",
    "minorization",
    "gamma_limit",
    "envelope_convergence",
    "mosco",
    "frolik_wijsman",
    "equi_lipschitz",
    "rho",
    "cauchy_limit",
)
NEEDS_LIMIT = {"envelope_convergence", "mosco", "frolik_wijsman", "rho"}
NEEDS_SEQUENCE = set(CHECK_ORDER) - {"weak_limit"}


# --- symbolic numbers -------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"sqrt": math.sqrt, "exp": math.exp, "log": math.log, "abs": abs, "sin": math.sin, "cos": math.cos}
_CONSTS = {"pi": math.pi, "e": math.e}


def evaluate_expression(text, n=None, where="expression"):
    """Evaluate an arithmetic expression in the index ``n``.

    Only numbers, ``n``, ``pi``, ``e``, the operators ``+ - * / ** %`` and
    the functions ``sqrt exp log abs sin cos`` are accepted.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ScenarioError(f"{where}: cannot parse {text!r} (column {exc.offset})") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id == "n":
                if n is None:
                    raise ScenarioError(f"{where}: symbolic n is not allowed here")
                return n
            if node.id in _CONSTS:
                return _CONSTS[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ScenarioError(f"{where}: unsupported element {ast.dump(node)[:40]} in {text!r}")

    try:
        return float(ev(tree))
    except (ArithmeticError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"{where}: {text!r} cannot be evaluated at n={n}: {exc}") from None


def _num(value, n, where):
    if isinstance(value, str):
        return evaluate_expression(value, n, where)
    return float(value)


# --- builders ------------------------------------------------------------------------


def build_point(space, obj, n=None, where="point"):
    if isinstance(space, MetricTree):
        if not isinstance(obj, dict):
            raise ScenarioError(f"{where}: tree points are {{'vertex': ...}} or {{'edge': ..., 'offset': ...}}")
        if "vertex" in obj:
            return space.vertex(obj["vertex"])
        edge = int(_num(obj["edge"], n, f"{where}.edge"))
        return space.point(edge=edge, offset=_num(obj["offset"], n, f"{where}.offset"))
    if isinstance(space, Product):
        if not isinstance(obj, list) or len(obj) != 2:
            raise ScenarioError(f"{where}: product points are [left, right]")
        return space.point(
            build_point(space.left, obj[0], n, f"{where}[0]"), build_point(space.right, obj[1], n, f"{where}[1]")
        )
    if not isinstance(obj, list):
        raise ScenarioError(f"{where}: expected a coordinate list")
    return space.point([_num(v, n, f"{where}[{i}]") for i, v in enumerate(obj)])


def build_set(space, spec, n=None, where="set"):
    kind = spec["kind"]
    if kind == "ball":
        return Ball(build_point(space, spec["center"], n, f"{where}.center"), _num(spec["radius"], n, f"{where}.radius"))
    if kind == "segment":
        return Segment(build_point(space, spec["a"], n, f"{where}.a"), build_point(space, spec["b"], n, f"{where}.b"))
    if kind == "subtree":
        return Subtree(space, tuple(spec["vertices"]))
    if kind == "halfspace":
        normal = [_num(v, n, f"{where}.normal[{i}]") for i, v in enumerate(spec["normal"])]
        return Halfspace(space, np.array(normal), _num(spec["offset"], n, f"{where}.offset"))
    return WholeSpace(space)


def build_function(space, spec, n=None, where="function"):
    """Catalog function described by ``spec`` with ``n`` substituted."""
    kind = spec["kind"]
    if kind == "squared_distance":
        w = _num(spec.get("weight", 1.0), n, f"{where}.weight")
        return SquaredDistance(build_point(space, spec["point"], n, f"{where}.point"), w)
    if kind == "distance":
        return DistanceTo(build_point(space, spec["point"], n, f"{where}.point"))
    if kind == "indicator":
        return Indicator(build_set(space, spec["set"], n, f"{where}.set"))
    if kind == "distance_to_set":
        return DistanceToSet(build_set(space, spec["set"], n, f"{where}.set"))
    if kind == "weighted_sum":
        terms = [
            (_num(t["weight"], n, f"{where}.terms[{i}].weight"), build_function(space, t["function"], n, f"{where}.terms[{i}]"))
            for i, t in enumerate(spec["terms"])
        ]
        return WeightedSum(terms)
    if kind == "shifted":
        return Shifted(build_function(space, spec["function"], n, f"{where}.function"), _num(spec["constant"], n, where))
    return EnvelopeOf(build_function(space, spec["function"], n, f"{where}.function"), _num(spec["mu"], n, where))


def _schema():
    return json.loads(resources.files("hadamard_lab").joinpath("scenario.schema.json").read_text())


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    space: object
    sequence: FunctionSequence
    limit: object
    point_sequence: PointSequence
    lambdas: LambdaGrid
    probes: ProbeGrid
    window: tuple
    checks: tuple
    expected: dict
    tolerances: dict
    lipschitz_radius: float
    doc: dict = field(repr=False, default=None)

    def set_sequence(self):
        """``n -> C_n`` when the sequence is a family of indicators."""
        spec = self.doc.get("sequence", {})
        if spec.get("kind") != "indicator" or self.doc.get("limit", {}).get("kind") != "indicator":
            raise ScenarioError("set convergence needs indicator sequence and limit")
        space = self.space
        return SetSequence(lambda n: build_set(space, spec["set"], n, "sequence.set"), self.id), self.limit.C


def load_scenario(source):
    """Parse and validate a scenario from a path, a JSON string or a mapping.

    Raises
    ------
    ScenarioError
        With line and column for JSON syntax errors and the JSON path for
        schema violations.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            try:
                with open(text) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ScenarioError(f"cannot read scenario: {exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        raise ScenarioError(f"schema violation at {err.json_path}: {err.message}")
    try:
        return _build(doc)
    except ScenarioError:
        raise
    except (HadamardLabError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"scenario {doc.get('id')!r} does not build: {exc}") from None


def _build(doc):
    space = space_from_json(doc["space"])
    checks = tuple(c for c in CHECK_ORDER if c in doc["checks"])
    missing = [c for c in checks if c not in doc["expected"]]
    if missing:
        raise ScenarioError(f"expected verdicts missing for {missing}")
    seq = limit = pseq = None
    if "sequence" in doc:
        spec = doc["sequence"]
        seq = FunctionSequence(lambda n: build_function(space, spec, n, "sequence"), None, doc["id"])
        seq(1)
    if "limit" in doc:
        limit = build_function(space, doc["limit"], None, "limit")
        seq = FunctionSequence(seq.generator, limit, doc["id"]) if seq is not None else None
    if "point_sequence" in doc:
        ps = doc["point_sequence"]
        pseq = PointSequence.contiguous(
            lambda n: build_point(space, ps["point"], n, "point_sequence.point"),
            ps.get("start", 10),
            ps.get("length", 16),
            doc["id"],
        )
    if NEEDS_SEQUENCE & set(checks) and seq is None:
        raise ScenarioError("these checks need a 'sequence'")
    if NEEDS_LIMIT & set(checks) and limit is None:
        raise ScenarioError("these checks need a declared 'limit'")
    if "weak_limit" in checks and pseq is None:
        raise ScenarioError("weak_limit needs a 'point_sequence'")
    grids = doc.get("grids", {})
    lam_spec = grids.get("lambdas", {"K": 12})
    lambdas = LambdaGrid.default(lam_spec["K"]) if isinstance(lam_spec, dict) else LambdaGrid(tuple(lam_spec))
    probes = None
    if "probes" in grids:
        pspec = grids["probes"]
        if "lattice" in pspec:
            lat = pspec["lattice"]
            probes = ProbeGrid.lattice(space, lat["low"], lat["high"], lat.get("spacing", 0.25))
        else:
            probes = ProbeGrid(tuple(build_point(space, p, None, f"grids.probes.points[{i}]") for i, p in enumerate(pspec["points"])))
    elif seq is not None:
        raise ScenarioError("function scenarios need 'grids.probes'")
    tol = {"geom": 1e-9, "prox": None, "weak": 1e-6}
    tol.update(doc.get("tolerances", {}))
    return Scenario(
        doc["id"],
        doc.get("description", ""),
        space,
        seq,
        limit,
        pseq,
        lambdas,
        probes,
        tuple(doc.get("window", ENVELOPE_WINDOW)),
        checks,
        dict(doc["expected"]),
        tol,
        float(doc.get("lipschitz_radius", 1.0)),
        doc,
    )


# --- running ----------------------------------------------------------------------------


@dataclass
class RunReport:
    """Per-check verdicts for one scenario run; deterministic in (scenario, seed)."""

    scenario: str
    seed: int
    tolerances: dict
    checks: dict = field(default_factory=dict)
    envelope_rows: list = field(default_factory=list)
    rho_rows: list = field(default_factory=list)

    @property
    def all_matched(self):
        return all(c["matched"] for c in self.checks.values())

    def to_json(self):
        return {
            "scenario": self.scenario,
            "environment": {"seed": self.seed, "tolerances": self.tolerances},
            "all_matched": self.all_matched,
            "checks": self.checks,
        }


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else ("inf" if obj > 0 else ("-inf" if obj < 0 else "nan"))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    return obj


def _probe_label(p):
    return json.dumps(p.to_json(), separators=(",", ":"))


def _run_check(name, sc, seed, state):
    tol = sc.tolerances["weak"]
    if name == "weak_limit":
        v = weak_limit(sc.point_sequence, tol=tol, seed=seed)
        return v.converges, v.to_json()
    if name == "minorization":
        try:
            b = estimate_minorization(sc.sequence, sc.probes[0], sc.lambdas[0])
        except NoUniformBound as exc:
            return "no_uniform_bound", {"reason": str(exc)}
        return "bounded", {"r": b.r, "lambda": b.lam, "envelope_value": b.envelope_value}
    if name == "gamma_limit":
        try:
            table = gamma_limit_from_envelopes(sc.sequence, sc.lambdas, sc.probes)
        except NoUniformBound as exc:
            return "refused", {"reason": str(exc)}
        details = table.to_json()
        if sc.limit is not None:
            details["limit_values"] = [sc.limit(x) for x in sc.probes]
        return "table", details
    if name == "envelope_convergence":
        rep = check_envelope_convergence(sc.sequence, sc.limit, sc.lambdas, sc.probes, sc.window)
        for k, l, n, lam, gap, pd in rep.rows():
            state["envelopes"].append((n, _probe_label(sc.probes[l - 1]), k, lam, gap, pd))
        verdict = "no_pointwise_limit" if not rep.pointwise_limit else ("vanishing" if rep.vanishing else "not_vanishing")
        return verdict, rep.to_json()
    if name == "mosco":
        rep = mosco_check(sc.sequence, sc.limit, sc.probes, tol=tol, seed=seed)
        details = {
            "witness": rep.witness,
            "liminf_checks": len(rep.liminf_checks),
            "recovery_checks": len(rep.recovery_checks),
            "failed": sum(not c.passed for c in rep.liminf_checks + rep.recovery_checks),
            "notes": list(rep.notes),
        }
        return rep.verdict, details
    if name == "frolik_wijsman":
        set_seq, C = sc.set_sequence()
        rep = frolik_wijsman_check(set_seq, C, sc.probes, tol=tol, seed=seed)
        verdict = "disagree" if not rep.agree else ("pass" if rep.fw_pass else "fail")
        return verdict, rep.to_json()
    if name == "equi_lipschitz":
        x0 = sc.probes[0]
        rows = []
        try:
            for lam in sc.lambdas:
                b = equi_lipschitz_bound(sc.sequence, lam, x0, sc.lipschitz_radius, seed=seed)
                rows.append({"lambda": lam, "L": b.L, "C": b.C, "max_quotient": b.max_quotient, "holds": b.holds})
        except NoBound as exc:
            return "no_bound", {"reason": str(exc)}
        return ("holds" if all(r["holds"] for r in rows) else "violated"), {"bounds": rows}
    if name == "rho":
        lams, probes = tuple(sc.lambdas), tuple(sc.probes)
        ref = grid_profile(sc.limit, lams, probes)
        values = []
        for n in sc.window:
            d = rho_from_profiles(grid_profile(sc.sequence(n), lams, probes), ref, lams, probes)
            values.append(d.value)
            state["rho"].append((n, d.value, d.e_terms, d.r_terms, d.truncation))
        return ("vanishing" if windows.vanishing(values, 1e-9) else "not_vanishing"), {"values": values}
    if name == "cauchy_limit":
        try:
            lim = cauchy_limit(sc.sequence, sc.lambdas, sc.probes)
        except NotCauchy as exc:
            return "not_cauchy", {"reason": str(exc)}
        except NoUniformBound as exc:
            return "no_uniform_bound", {"reason": str(exc)}
        details = lim.to_json()
        details["rho_to_limit"] = [rho(sc.sequence(n), lim, sc.lambdas, sc.probes).value for n in sc.window]
        return "cauchy", details
    raise ScenarioError(f"unknown check {name!r}")


def run_scenario(sc, seed=0, tol_geom=None, tol_prox=None):
    """Execute the scenario's checks in dependency order.

    Failures of the mathematics are verdicts, not exceptions; an unexpected
    library error inside a check is recorded with verdict ``"error"``.
    """
    tolerances = dict(sc.tolerances)
    if tol_geom is not None:
        tolerances["geom"] = tol_geom
    if tol_prox is not None:
        tolerances["prox"] = tol_prox
    report = RunReport(sc.id, int(seed), tolerances)
    state = {"envelopes": report.envelope_rows, "rho": report.rho_rows}
    with solver_tolerance(tolerances["prox"]):
        for name in sc.checks:
            try:
                verdict, details = _run_check(name, sc, seed, state)
            except HadamardLabError as exc:
                verdict, details = "error", {"error": f"{type(exc).__name__}: {exc}"}
            expected = sc.expected[name]
            report.checks[name] = _jsonable(
                {"verdict": verdict, "expected": expected, "matched": verdict == expected, "details": details}
            )
    return report


def bundled_scenarios():
    """Paths of the scenario files shipped with the package."""
    folder = resources.files("hadamard_lab").joinpath("scenarios")
    return sorted(str(p) for p in folder.iterdir() if p.name.endswith(".json"))
