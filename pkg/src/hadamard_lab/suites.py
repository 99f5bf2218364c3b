"""Property batteries for the ``suite`` command.

Each battery returns a list of :class:`PropertyResult`.  All randomness comes
from one ``numpy`` generator seeded by the caller, and result details are
formatted with fixed precision so reports are byte-identical across runs.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fixtures, windows
from .catalog import (
    Ball,
    DistanceTo,
    DistanceToSet,
    Indicator,
    Shifted,
    SquaredDistance,
    WeightedSum,
)
from .convergence import (
    asymptotic_center,
    check_envelope_convergence,
    frolik_wijsman_check,
    gamma_limit_from_envelopes,
    mosco_check,
    weak_limit,
)
from .metric import cauchy_limit, equi_lipschitz_bound, pseudometric_e, pseudometric_r, rho
from .errors import NotCauchy
from .prox import (
    default_tol,
    envelope_monotone_in_lambda,
    prox,
    prox_displacement_monotone,
    resolvent_inequality_residual,
    semigroup_residual,
)
from .spaces import (
    Euclidean,
    Hyperbolic2,
    MetricTree,
    Product,
    convexity_residual,
    distance,
    geodesic_point,
    quadruple_residual,
    weak_quadruple_residual,
)

SUITES = ("geometry", "prox", "convergence", "metric", "all")


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}"

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def sample_spaces(rng):
    """The roster of spaces exercised by the batteries."""
    return [
        Euclidean(2),
        Hyperbolic2(),
        MetricTree.spider(3, 1.0),
        MetricTree.random(rng, 8),
        Product(Euclidean(1), Hyperbolic2()),
    ]


def random_ball(space, rng):
    return Ball(space.random_point(rng), float(rng.uniform(0.1, 1.0)))


def random_function(space, rng, kind=None):
    """A random catalog function on ``space``.

    ``kind`` is one of ``"closed"`` (closed-form prox), ``"sum"`` (weighted
    sum of finite terms) or ``None`` for either.
    """
    if kind is None:
        kind = "closed" if rng.uniform() < 0.75 else "sum"
    if kind == "sum":
        terms = []
        for _ in range(int(rng.integers(2, 4))):
            g = SquaredDistance(space.random_point(rng)) if rng.uniform() < 0.5 else DistanceTo(space.random_point(rng))
            terms.append((float(rng.uniform(0.2, 2.0)), g))
        return WeightedSum(terms)
    choice = int(rng.integers(5))
    p = space.random_point(rng)
    if choice == 0:
        return SquaredDistance(p, float(rng.uniform(0.2, 3.0)))
    if choice == 1:
        return DistanceTo(p)
    if choice == 2:
        return Indicator(random_ball(space, rng))
    if choice == 3:
        return DistanceToSet(random_ball(space, rng))
    return Shifted(SquaredDistance(p), float(rng.normal()))


def _fmt(x):
    return f"{x:.3e}"


# --- geometry -------------------------------------------------------------------------


def geometry_suite(rng, trials=1000, tol=1e-9):
    out = []
    for space in sample_spaces(rng):
        tag = repr(space)
        worst = worst_weak = math.inf
        speed = 0.0
        convex = math.inf
        for _ in range(trials):
            x, y, v, w = (space.random_point(rng) for _ in range(4))
            worst = min(worst, quadruple_residual(x, y, v, w))
            worst_weak = min(worst_weak, weak_quadruple_residual(x, y, v, w))
            s, t = sorted(rng.uniform(size=2))
            d = distance(x, y)
            gap = abs(distance(geodesic_point(x, y, s), geodesic_point(x, y, t)) - (t - s) * d)
            speed = max(speed, gap / (1.0 + d))
            convex = min(convex, convexity_residual(DistanceTo(v), x, y, float(rng.uniform())))
        out.append(PropertyResult(f"geometry/quadruple[{tag}]", worst >= -tol, f"min residual {_fmt(worst)}"))
        out.append(PropertyResult(f"geometry/weak_quadruple[{tag}]", worst_weak >= -tol, f"min residual {_fmt(worst_weak)}"))
        out.append(PropertyResult(f"geometry/constant_speed[{tag}]", speed <= tol, f"max defect {_fmt(speed)}"))
        out.append(PropertyResult(f"geometry/distance_convex[{tag}]", convex >= -tol, f"min residual {_fmt(convex)}"))
    return out


# --- prox -------------------------------------------------------------------------------


def huber_oracle_error(probes=100, lam=0.5, resolution=1e-6):
    """Max error of the ``d(., 0)`` envelope on the line against brute-force grid minimization."""
    R1 = Euclidean(1)
    f = DistanceTo(R1.point([0.0]))
    xs = np.linspace(-3.0, 3.0, probes)
    worst = 0.0
    for x in xs:
        # the minimizer lies between 0 and x
        lo, hi = min(0.0, x) - 1e-3, max(0.0, x) + 1e-3
        ys = np.arange(lo, hi, resolution)
        brute = float(np.min(np.abs(ys) + (x - ys) ** 2 / (2.0 * lam)))
        worst = max(worst, abs(prox(f, R1.point([x]), lam).value - brute))
    return worst


def prox_suite(rng, trials=200, tol=None):
    out = []
    for space in sample_spaces(rng):
        tag = repr(space)
        stol = default_tol(space) if tol is None else tol
        sg_closed = sg_sum = 0.0
        for i in range(trials // 5):
            x = space.random_point(rng)
            lam, mu = rng.uniform(0.1, 2.0, size=2)
            sg_closed = max(sg_closed, semigroup_residual(random_function(space, rng, "closed"), x, lam, mu))
            if i % 4 == 0:
                sg_sum = max(sg_sum, semigroup_residual(random_function(space, rng, "sum"), x, lam, mu))
        out.append(PropertyResult(f"prox/semigroup_closed_form[{tag}]", sg_closed <= 1e-9, f"max residual {_fmt(sg_closed)}"))
        out.append(PropertyResult(f"prox/semigroup_weighted_sum[{tag}]", sg_sum <= 10 * stol, f"max residual {_fmt(sg_sum)}"))
        resolvent = math.inf
        expansive = -math.inf
        mono = disp = True
        for _ in range(trials):
            f = random_function(space, rng)
            x, y = space.random_point(rng), space.random_point(rng)
            lam = float(rng.uniform(0.05, 2.0))
            rx = prox(f, x, lam)
            ry = prox(f, y, lam)
            # the inequality compares against a point of dom f
            z = y if math.isfinite(f(y)) else ry.minimizer
            res = resolvent_inequality_residual(f, x, z, lam, rx)
            resolvent = min(resolvent, res + stol + rx.certified_gap)
            expansive = max(expansive, distance(rx.minimizer, ry.minimizer) - distance(x, y) - stol)
            lam2 = lam * float(rng.uniform(0.1, 0.9))
            mono &= envelope_monotone_in_lambda(f, x, lam, lam2)
            disp &= prox_displacement_monotone(f, x, lam, lam2)
        out.append(PropertyResult(f"prox/resolvent_inequality[{tag}]", resolvent >= 0, f"min slack {_fmt(resolvent)}"))
        out.append(PropertyResult(f"prox/nonexpansive[{tag}]", expansive <= 0, f"max excess {_fmt(expansive)}"))
        out.append(PropertyResult(f"prox/envelope_monotone_in_lambda[{tag}]", mono, ""))
        out.append(PropertyResult(f"prox/displacement_monotone[{tag}]", disp, ""))
    err = huber_oracle_error()
    out.append(PropertyResult("prox/huber_oracle", err <= 1e-5, f"max error {_fmt(err)}"))
    return out


# --- convergence ---------------------------------------------------------------------------


def convergence_suite(rng, seed=0):
    out = []
    tree, spider = fixtures.spider_alternation()
    line = fixtures.line_alternation()
    strong = [fixtures.converging_points(s, s.random_point(rng), rng) for s in (Euclidean(2), Hyperbolic2())]
    drift = max(distance(asymptotic_center(s), asymptotic_center(s.doubled())) for s in [spider, line] + strong)
    out.append(PropertyResult("convergence/center_stable_under_doubling", drift < 1e-6, f"max drift {_fmt(drift)}"))
    ok = True
    for s in strong:
        v = weak_limit(s, seed=seed)
        ok &= v.converges == "yes" and distance(v.candidate, s.generator(10 ** 12)) < 1e-6
    out.append(PropertyResult("convergence/strong_implies_weak", ok, ""))
    v = weak_limit(spider, seed=seed)
    hub = tree.vertex("hub")
    ok = (
        v.converges == "no"
        and v.witness is not None
        and distance(v.centers["full"], hub) < 1e-6
        and distance(v.centers["evens"], tree.vertex("A")) < 1e-6
    )
    out.append(PropertyResult("convergence/spider_not_weakly_convergent", ok, f"witness {v.witness and v.witness['selector']}"))

    seq_s1, C = fixtures.shrinking_shifted_balls()
    fseq, f = fixtures.indicator_sequence(seq_s1, C)
    probes = fixtures.plane_probes()
    lams = fixtures.default_lambdas()
    mosco = mosco_check(fseq, f, probes, seed=seed)
    env = check_envelope_convergence(fseq, f, lams, probes)
    out.append(
        PropertyResult(
            "convergence/consistent_implies_gaps_decay",
            mosco.verdict != "consistent" or env.vanishing,
            f"mosco {mosco.verdict}, gaps vanishing {env.vanishing}",
        )
    )
    quad = fixtures.moving_quadratics()
    lprobes = fixtures.line_probes()
    env_q = check_envelope_convergence(quad, quad.limit, lams, lprobes)
    mosco_q = mosco_check(quad, quad.limit, lprobes, seed=seed)
    out.append(
        PropertyResult(
            "convergence/gaps_vanish_implies_consistent",
            not env_q.vanishing or mosco_q.verdict == "consistent",
            f"gaps vanishing {env_q.vanishing}, mosco {mosco_q.verdict}",
        )
    )
    alt, B = fixtures.alternating_balls()
    aseq, af = fixtures.indicator_sequence(alt, B)
    R2 = fixtures.R2
    falsified = mosco_check(aseq, af, [R2.point([0.0, 0.0]), R2.point([1.0, 0.0])], seed=seed)
    out.append(
        PropertyResult(
            "convergence/falsification_fixture",
            falsified.verdict == "falsified" and falsified.witness is not None,
            f"witness condition {falsified.witness and falsified.witness['condition']}",
        )
    )
    agree = []
    for name, (sseq, limit, grid, expect) in fixtures.set_fixtures().items():
        rep = frolik_wijsman_check(sseq, limit, grid, seed=seed)
        agree.append(rep.agree and rep.fw_pass == expect)
    out.append(PropertyResult("convergence/frolik_wijsman_agreement", all(agree), f"{sum(agree)}/{len(agree)} fixtures"))
    table = gamma_limit_from_envelopes(quad, lams, lprobes)
    mono = all(
        windows.nonincreasing([-table.phi[k][l] for k in range(len(lams))], 1e-12) for l in range(len(lprobes))
    )
    out.append(PropertyResult("convergence/gamma_table_monotone_in_k", mono, ""))
    return out


# --- metric ------------------------------------------------------------------------------------


def metric_suite(rng, triples=20):
    out = []
    lams = fixtures.default_lambdas()
    R1 = fixtures.R1
    probes = fixtures.line_probes()
    sym = tri = bound = zero = True
    worst_tri = -math.inf
    for _ in range(triples):
        f, g, h = (random_function(R1, rng, "closed") for _ in range(3))
        fg, gf = rho(f, g, lams, probes).value, rho(g, f, lams, probes).value
        gh, fh = rho(g, h, lams, probes).value, rho(f, h, lams, probes).value
        sym &= fg == gf
        worst_tri = max(worst_tri, fh - fg - gh)
        tri &= fh <= fg + gh + 1e-12
        bound &= fg < 2.0
        zero &= rho(f, f, lams, probes).value == 0.0
    out.append(PropertyResult("metric/rho_symmetric", sym, ""))
    out.append(PropertyResult("metric/rho_triangle", tri, f"max excess {_fmt(worst_tri)}"))
    out.append(PropertyResult("metric/rho_below_two", bound, ""))
    out.append(PropertyResult("metric/rho_self_zero", zero, ""))
    f = SquaredDistance(R1.point([0.3]))
    c = 0.7
    es = [pseudometric_e(f, Shifted(f, c), lam, x) for lam in lams for x in probes]
    rs = [pseudometric_r(f, Shifted(f, c), lam, x) for lam in lams for x in probes]
    ok = max(abs(e - c) for e in es) < 1e-12 and max(rs) == 0.0
    out.append(PropertyResult("metric/r_family_not_redundant", ok, "shifted pair: e = |c|, r = 0"))

    quad = fixtures.moving_quadratics()
    window = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)
    rho_q = [rho(quad(n), quad.limit, lams, probes).value for n in window]
    env_q = check_envelope_convergence(quad, quad.limit, lams, probes, window)
    s1, C = fixtures.shrinking_shifted_balls()
    fs1, f1 = fixtures.indicator_sequence(s1, C)
    pprobes = fixtures.plane_probes()
    rho_s = [rho(fs1(n), f1, lams, pprobes).value for n in window]
    env_s = check_envelope_convergence(fs1, f1, lams, pprobes, window)
    agree = windows.vanishing(rho_q) == env_q.vanishing and windows.vanishing(rho_s) == env_s.vanishing
    out.append(PropertyResult("metric/topology_agreement", agree, ""))

    lim = cauchy_limit(quad, lams, probes)
    trip = [rho(quad(n), lim, lams, probes).value for n in window]
    ok = windows.nonincreasing(trip) and trip[-1] < 1e-3
    out.append(PropertyResult("metric/completeness_round_trip", ok, f"rho at n=1000 {_fmt(trip[-1])}"))
    try:
        cauchy_limit(fixtures.alternating_quadratics(), lams, probes)
        raised = False
    except NotCauchy:
        raised = True
    out.append(PropertyResult("metric/alternating_not_cauchy", raised, ""))
    held = all(equi_lipschitz_bound(quad, lam, R1.point([0.0]), 1.0).holds for lam in lams)
    out.append(PropertyResult("metric/equi_lipschitz", held, ""))
    return out


def run_suite(name, seed=0, tol_geom=1e-9, tol_prox=None):
    """Run one battery (or ``"all"``) with a generator seeded by ``seed``."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    rng = np.random.default_rng(seed)
    results = []
    if name in ("geometry", "all"):
        results += geometry_suite(rng, tol=tol_geom)
    if name in ("prox", "all"):
        results += prox_suite(rng, tol=tol_prox)
    if name in ("convergence", "all"):
        results += convergence_suite(rng, seed)
    if name in ("metric", "all"):
        results += metric_suite(rng)
    return results
