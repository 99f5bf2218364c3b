"""Command-line driver.

    python3 -m hadamard_lab run SCENARIO.json [--seed N] [--out DIR]
    python3 -m hadamard_lab suite {geometry,prox,convergence,metric,all} [--seed N]

``run`` writes ``report.json``, ``envelopes.csv`` and ``rho.csv`` and exits
0 exactly when every check produced its expected verdict.  ``suite`` prints
one line per property and exits 0 when all pass.  Wall-clock timings go to
stderr so that the report files are byte-identical for a given seed.
"""

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .errors import ScenarioError
from .scenario import bundled_scenarios, load_scenario, run_scenario
from .suites import SUITES, run_suite


def _tolerance_args(parser):
    parser.add_argument("--tol-geom", type=float, default=None, help="geometric residual tolerance")
    parser.add_argument("--tol-prox", type=float, default=None, help="numerical prox solver tolerance")


def build_parser():
    parser = argparse.ArgumentParser(prog="hadamard-lab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", help="scenario JSON file, or the id of a bundled scenario")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", default=".", help="output directory")
    _tolerance_args(run)
    suite = sub.add_parser("suite", help="run a property battery")
    suite.add_argument("name", choices=SUITES)
    suite.add_argument("--seed", type=int, default=0)
    suite.add_argument("--out", default=None, help="optional directory for report.json")
    _tolerance_args(suite)
    sub.add_parser("list", help="list bundled scenarios")
    return parser


def _resolve(name):
    if Path(name).exists():
        return name
    for path in bundled_scenarios():
        if Path(path).stem == name or load_scenario(path).id == name:
            return path
    return name


def _write_report(out, doc):
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(doc, indent=2) + "\n")


def cmd_run(args):
    start = time.perf_counter()
    try:
        sc = load_scenario(_resolve(args.scenario))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_scenario(sc, args.seed, args.tol_geom, args.tol_prox)
    out = Path(args.out)
    _write_report(out, report.to_json())
    with open(out / "envelopes.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "probe", "k", "lambda", "gap", "prox_distance"])
        w.writerows([n, probe, k, repr(lam), repr(gap), repr(pd)] for n, probe, k, lam, gap, pd in report.envelope_rows)
    with open(out / "rho.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "rho", "e_terms", "r_terms", "truncation"])
        w.writerows([n] + [repr(v) for v in rest] for n, *rest in report.rho_rows)
    for name, check in report.checks.items():
        mark = "ok  " if check["matched"] else "MISS"
        print(f"{mark}  {sc.id}/{name}: {check['verdict']} (expected {check['expected']})")
    print(f"{sc.id}: {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 0 if report.all_matched else 1


def cmd_suite(args):
    start = time.perf_counter()
    tol_geom = 1e-9 if args.tol_geom is None else args.tol_geom
    results = run_suite(args.name, args.seed, tol_geom, args.tol_prox)
    for r in results:
        print(r.line())
    if args.out:
        doc = {
            "suite": args.name,
            "environment": {"seed": args.seed, "tolerances": {"geom": tol_geom, "prox": args.tol_prox}},
            "all_passed": all(r.passed for r in results),
            "properties": [r.to_json() for r in results],
        }
        _write_report(Path(args.out), doc)
    print(f"suite {args.name}: {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "suite":
        return cmd_suite(args)
    for path in bundled_scenarios():
        print(f"{Path(path).stem:28s} {load_scenario(path).description}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
