"""Weak convergence, Mosco checks, Gamma-limit assembly and set convergence.

All limits are taken over finite index windows (see :mod:`hadamard_lab.windows`)
and every verdict records the window it was computed on.  The Mosco checker
is a falsifier: ``"consistent"`` means no counterexample was found among the
supplied sequences and probes.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import windows
from .catalog import EnvelopeOf, FunctionSequence, Indicator, SetSequence, _along
from .errors import (
    DomainError,
    PreconditionFailed,
    Unbounded,
    Unconverged,
    UnsupportedSpace,
)
from .prox import estimate_minorization, prox
from .spaces import Euclidean, Hyperbolic2, MetricTree, Point, Product, _lift, distance, frame_exp, frame_log, has_frames

WEAK_TOL = 1e-6
#: far-out windows, so that O(1/n) bias in tail extrema stays below WEAK_TOL
LIMINF_WINDOW = windows.contiguous(2 ** 28, 16)
RECOVERY_WINDOW = windows.geometric(2 ** 20, 12)
STEP3_MUS = (1.0, 0.25)


# --- point sequences ------------------------------------------------------------


@dataclass(frozen=True)
class PointSequence:
    """A sequence ``n -> x_n`` observed on a finite window of indices.

    Use :meth:`contiguous` or :meth:`geometric` to build the window.  The
    window must hold at least 8 indices.
    """

    generator: Callable[[int], Point]
    indices: tuple
    name: str = "x_n"
    ratio: int = 1

    def __post_init__(self):
        idx = tuple(int(n) for n in self.indices)
        if len(idx) < 8:
            raise DomainError("a window needs at least 8 indices")
        if any(b <= a for a, b in zip(idx, idx[1:])) or idx[0] < 1:
            raise DomainError("window indices must be positive and increasing")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def contiguous(cls, generator, start, length=16, name="x_n"):
        return cls(generator, windows.contiguous(start, length), name, 1)

    @classmethod
    def geometric(cls, generator, start, count=12, ratio=2, name="x_n"):
        return cls(generator, windows.geometric(start, count, ratio), name, ratio)

    @classmethod
    def constant(cls, p, window=LIMINF_WINDOW, name="constant"):
        return cls(lambda n: p, window, name)

    def points(self):
        pts = [self.generator(n) for n in self.indices]
        pts[0].space._check(*pts)
        return pts

    def tail_points(self):
        return windows.tail(self.points())

    def doubled(self):
        """The same sequence on a window with twice as many indices."""
        idx = self.indices
        if self.ratio == 1:
            idx = windows.contiguous(idx[0], 2 * len(idx))
        else:
            idx = windows.geometric(idx[0], 2 * len(idx), self.ratio)
        return PointSequence(self.generator, idx, self.name, self.ratio)

    def subsequence(self, selector):
        gen, sel = self.generator, selector.fn
        return PointSequence(lambda k: gen(sel(k)), self.indices, f"{self.name}[{selector.name}]", self.ratio)


@dataclass(frozen=True)
class Selector:
    """A strictly increasing index map ``k -> n_k`` naming a subsequence."""

    name: str
    fn: Callable[[int], int]


def random_thinning(seed):
    """Keep one of ``2k, 2k + 1`` at random; deterministic in ``(seed, k)``."""

    def fn(k):
        return 2 * k + int(np.random.default_rng((seed, k)).integers(2))

    return Selector(f"thinning(seed={seed})", fn)


def default_battery(seed=0):
    return [
        Selector("identity", lambda k: k),
        Selector("evens", lambda k: 2 * k),
        Selector("odds", lambda k: 2 * k + 1),
        random_thinning(seed),
    ]


# --- asymptotic centers --------------------------------------------------------


def _tree_center(space, pts):
    best = None
    for e, (u, v, length) in enumerate(space.edges):
        up, down = -math.inf, -math.inf
        for p in pts:
            pe, t = p.coords
            if pe == e:
                up, down = max(up, -t), max(down, t)
                continue
            du, dv = space._vdist(u, p.coords), space._vdist(v, p.coords)
            if du < dv:
                up = max(up, du)
            else:
                down = max(down, length + dv)
        s = min(max((down - up) / 2.0, 0.0), length)
        value = max(s + up, down - s)
        if best is None or value < best[0]:
            best = (value, e, s)
    return space.point(edge=best[1], offset=best[2])


def _sqdist_and_grad(space, v, q):
    """``d(from_chart(v), q)^2`` and its chart gradient."""
    if isinstance(space, Euclidean):
        diff = v - q
        return float(diff @ diff), 2.0 * diff
    if isinstance(space, Hyperbolic2):
        x0 = math.sqrt(1.0 + v @ v)
        d = space._dist(np.concatenate(([x0], v)), q)
        dc = q[0] * v / x0 - q[1:]
        factor = 2.0 * d / math.sinh(d) if d > 1e-8 else 2.0
        return d * d, factor * dc
    if isinstance(space, Product):
        k = space.left.chart_dim
        a, ga = _sqdist_and_grad(space.left, v[:k], q[0])
        b, gb = _sqdist_and_grad(space.right, v[k:], q[1])
        return a + b, np.concatenate((ga, gb))
    raise UnsupportedSpace(f"no chart solver for {space!r}")


def _chart_center(space, pts):
    qs = [p.coords for p in pts]
    v0 = np.mean([space.to_chart(c) for c in qs], axis=0)
    dim = len(v0)
    spread = max(_sqdist_and_grad(space, v0, q)[0] for q in qs)
    if spread == 0.0:
        return pts[0]
    # work in units of the cluster radius around the chart mean
    r = math.sqrt(spread)

    def cons(z):
        v = v0 + r * z[:-1]
        return np.array([z[-1] - _sqdist_and_grad(space, v, q)[0] / spread for q in qs])

    def cons_jac(z):
        v = v0 + r * z[:-1]
        rows = []
        for q in qs:
            _, g = _sqdist_and_grad(space, v, q)
            rows.append(np.concatenate((-g / r, [1.0])))
        return np.array(rows)

    res = minimize(
        lambda z: z[-1],
        np.concatenate((np.zeros(dim), [1.0])),
        jac=lambda z: np.concatenate((np.zeros(dim), [1.0])),
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 1000},
    )
    return Point(space, space.from_chart(v0 + r * res.x[:-1]))


def _euclid_circumcenter(P):
    """Point of the affine hull of the rows of ``P`` equidistant from all of them."""
    A = P[1:] - P[0]
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    gram = A @ A.T
    if abs(np.linalg.det(gram)) <= 1e-12 * max(1.0, np.trace(gram)) ** len(gram):
        return None
    return P[0] + A.T @ np.linalg.solve(gram, rhs)


def _hyperbolic_circumcenter(Q):
    if len(Q) == 2:
        return Hyperbolic2()._geodesic(Q[0], Q[1], 0.5)
    a, b = Q[0] - Q[1], Q[0] - Q[2]
    x = np.cross(a, b) * np.array([-1.0, 1.0, 1.0])
    norm2 = x[0] ** 2 - x[1] ** 2 - x[2] ** 2
    if norm2 <= 1e-24 * (x @ x):
        return None
    x = x / math.sqrt(norm2)
    return _lift(x[1:] if x[0] > 0 else -x[1:])


def _euclid_minimax(P):
    """Center of the smallest ball covering the rows of ``P``.

    The minimizer of ``max_i |x - p_i|`` is equidistant from its active
    points and lies in their hull, so it is the best circumcenter over
    subsets of at most ``dim + 1`` rows.
    """
    best, best_r = P[0], math.inf
    for k in range(1, min(P.shape[1] + 1, len(P)) + 1):
        for idx in itertools.combinations(range(len(P)), k):
            c = P[idx[0]] if k == 1 else _euclid_circumcenter(P[list(idx)])
            if c is None:
                continue
            r = np.max(np.einsum("ij,ij->i", P - c, P - c))
            if r < best_r:
                best, best_r = c, r
    return best


def _combinatorial_center(space, pts):
    """Exact minimax center: the smallest covering circumcenter of at most ``dim + 1`` points."""
    coords = [p.coords for p in pts]
    if isinstance(space, Euclidean):
        return Point(space, _euclid_minimax(np.array(coords)))
    best, best_r = None, math.inf
    for k in range(1, min(3, len(coords)) + 1):
        for idx in itertools.combinations(range(len(coords)), k):
            c = coords[idx[0]] if k == 1 else _hyperbolic_circumcenter([coords[i] for i in idx])
            if c is None:
                continue
            r = max(space._dist(c, q) for q in coords)
            if r < best_r:
                best, best_r = c, r
    return Point(space, best)


def _tangent_center(space, pts, max_iter=100):
    """Minimax center by repeated Euclidean minimax in the tangent space.

    At the true center ``c`` the vectors ``log_c(p_i)`` have lengths
    ``d(c, p_i)`` and the origin lies in the hull of the longest ones, so
    ``c`` is exactly a fixed point of ``c -> exp_c(minimax center of log_c p_i)``.
    Steps are halved until the covering radius does not grow; iteration
    stops once the radius no longer decreases.
    """
    coords = [p.coords for p in pts]
    radius = lambda c: max(space._dist(c, q) for q in coords)
    c = space._frechet_mean(coords, np.ones(len(coords)))
    r = radius(c)
    for _ in range(max_iter):
        if r == 0.0:
            break
        z = _euclid_minimax(np.array([frame_log(space, c, q) for q in coords]))
        t = 1.0
        while t > 1e-6:
            cand = frame_exp(space, c, t * z)
            rc = radius(cand)
            if rc <= r:
                break
            t *= 0.5
        else:
            break
        # no visible progress: the step is at rounding level of the coordinates
        done = rc >= r * (1.0 - 1e-14) or t * np.linalg.norm(z) <= 1e-13 * r
        c, r = cand, rc
        if done:
            break
    return Point(space, c)


def asymptotic_center(seq):
    """Minimizer of ``max over the window tail of d(x, x_n)^2``.

    Exact per-edge minimax on metric trees, exact circumcenter enumeration on
    the hyperbolic plane and in Euclidean space up to dimension 3, tangent
    space minimax iteration on products of those, and SLSQP on the epigraph
    in a global chart otherwise.

    Raises
    ------
    Unbounded
        If the tail contains non-finite distances.
    UnsupportedSpace
        For products with a tree factor.
    """
    pts = seq.tail_points()
    space = pts[0].space
    diam = max(distance(pts[0], p) for p in pts)
    if not math.isfinite(diam):
        raise Unbounded(f"{seq.name} is unbounded over its window")
    if isinstance(space, MetricTree):
        return _tree_center(space, pts)
    if isinstance(space, Hyperbolic2) or (isinstance(space, Euclidean) and space.dim <= 3):
        return _combinatorial_center(space, pts)
    if has_frames(space):
        return _tangent_center(space, pts)
    if space.chart_dim is None:
        raise UnsupportedSpace(f"asymptotic centers are not available on {space!r}")
    return _chart_center(space, pts)


@dataclass(frozen=True)
class WeakLimitVerdict:
    converges: str
    candidate: Point = None
    witness: dict = None
    centers: dict = field(default_factory=dict)
    window: tuple = ()

    def to_json(self):
        return {
            "converges": self.converges,
            "candidate": None if self.candidate is None else self.candidate.to_json(),
            "witness": self.witness,
            "centers": {k: c.to_json() for k, c in self.centers.items()},
            "window": [self.window[0], self.window[-1], len(self.window)],
        }


def weak_limit(seq, battery=None, tol=WEAK_TOL, seed=0):
    """Decide weak convergence by comparing asymptotic centers of subsequences.

    Every selector's center is recorded.  ``"no"`` carries a witness naming
    the first subsequence whose center is more than
    ``tol`` away from the full center; ``"inconclusive"`` means the full
    center moves by more than ``tol`` when the window is doubled.
    """
    battery = default_battery(seed) if battery is None else battery
    center = asymptotic_center(seq)
    centers = {"full": center}
    witness = None
    for sel in battery:
        c = asymptotic_center(seq.subsequence(sel))
        centers[sel.name] = c
        gap = distance(c, center)
        if gap > tol and witness is None:
            witness = {"selector": sel.name, "center": c.to_json(), "full_center": center.to_json(), "distance": gap}
    if witness is not None:
        return WeakLimitVerdict("no", None, witness, centers, seq.indices)
    drift = distance(asymptotic_center(seq.doubled()), center)
    if drift > tol:
        return WeakLimitVerdict("inconclusive", None, {"drift": drift}, centers, seq.indices)
    return WeakLimitVerdict("yes", center, None, centers, seq.indices)


# --- Mosco checks ------------------------------------------------------------------


@dataclass(frozen=True)
class LiminfCheck:
    sequence: str
    x: Point
    estimate: float
    fx: float
    passed: bool
    window: tuple
    device: float = None

    def to_json(self):
        return {
            "sequence": self.sequence,
            "x": self.x.to_json(),
            "liminf_estimate": _num(self.estimate),
            "f_x": _num(self.fx),
            "pass": self.passed,
            "window": [self.window[0], self.window[-1], len(self.window)],
            "envelope_mu": self.device,
        }


@dataclass(frozen=True)
class RecoveryCheck:
    x: Point
    distances: tuple
    fx: float
    limsup: float
    passed: bool
    window: tuple
    device: float = None

    def to_json(self):
        return {
            "x": self.x.to_json(),
            "tail_distances": list(self.distances),
            "f_x": _num(self.fx),
            "limsup_estimate": _num(self.limsup),
            "pass": self.passed,
            "window": [self.window[0], self.window[-1], len(self.window)],
            "envelope_mu": self.device,
        }


def _num(v):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def check_liminf_condition(seq, f, wseq, x, tol=WEAK_TOL, verdict=None, device=None):
    """Compare ``f(x)`` with the tail minimum of ``f_n(x_n)`` along ``wseq``.

    Raises
    ------
    PreconditionFailed
        If ``wseq`` is not found to converge weakly to ``x``.
    """
    verdict = weak_limit(wseq, tol=tol) if verdict is None else verdict
    if verdict.converges != "yes" or distance(verdict.candidate, x) > tol:
        raise PreconditionFailed(f"{wseq.name} is not weakly convergent to the probe")
    values = [seq(n)(wseq.generator(n)) for n in wseq.indices]
    estimate = min(windows.tail(values))
    fx = f(x)
    return LiminfCheck(wseq.name, x, estimate, fx, fx <= estimate + tol, wseq.indices, device)


def _check_schedule(schedule, indices):
    lams = [schedule(n) for n in indices]
    if any(not lam > 0 for lam in lams) or any(b >= a for a, b in zip(lams, lams[1:])):
        raise DomainError("the prox schedule must be positive and strictly decreasing")
    return lams


def build_recovery_sequence(seq, x, schedule=None, window=RECOVERY_WINDOW):
    """The sequence ``y_n = J^{f_n}_{lam_n}(x)`` with ``lam_n = 1/n`` by default."""
    schedule = schedule or (lambda n: 1.0 / n)
    _check_schedule(schedule, window)
    return PointSequence(lambda n: prox(seq(n), x, schedule(n)).minimizer, window, "recovery", 2)


def check_recovery(seq, f, x, schedule=None, window=RECOVERY_WINDOW, tol=WEAK_TOL, device=None):
    """Check ``y_n -> x`` and ``limsup f_n(y_n) <= f(x)`` for the prox recovery sequence."""
    schedule = schedule or (lambda n: 1.0 / n)
    lams = _check_schedule(schedule, window)
    ys = [prox(seq(n), x, lam).minimizer for n, lam in zip(window, lams)]
    dists = [distance(y, x) for y in ys]
    values = [seq(n)(y) for n, y in zip(window, ys)]
    limsup = max(windows.tail(values))
    fx = f(x)
    converging = windows.vanishing(dists, tol)
    passed = converging and limsup <= fx + tol
    return RecoveryCheck(x, tuple(windows.tail(dists)), fx, limsup, passed, tuple(window), device)


def approach_sequences(x, rng, count=1, window=LIMINF_WINDOW):
    """The constant sequence at ``x`` and ``count`` geodesic approaches ``x_n = [x, z](1/n)``."""
    seqs = [PointSequence.constant(x, window)]
    for i in range(count):
        z = x.space.random_point(rng)
        seqs.append(PointSequence(lambda n, z=z: _along(x, z, 1.0 / n), window, f"approach{i}"))
    return seqs


@dataclass(frozen=True)
class MoscoReport:
    liminf_checks: tuple
    recovery_checks: tuple
    verdict: str
    witness: dict = None
    notes: tuple = ()

    def to_json(self):
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "liminf_checks": [c.to_json() for c in self.liminf_checks],
            "recovery_checks": [c.to_json() for c in self.recovery_checks],
            "notes": list(self.notes),
        }


def _envelope_sequence(seq, f, mu):
    return FunctionSequence(lambda n: EnvelopeOf(seq(n), mu), EnvelopeOf(f, mu), f"{seq.name}_mu={mu}")


def _snap(candidate, probes, tol):
    """The probe within ``tol`` of a computed weak limit, else the limit itself.

    A center is only known to solver accuracy, and ``f`` may jump at the
    boundary of its domain, so the liminf condition is judged at the probe.
    """
    for x in probes:
        if distance(candidate, x) <= tol:
            return x
    return candidate


def mosco_check(seq, f, probes, wseqs=None, schedule=None, tol=WEAK_TOL, seed=0, mus=STEP3_MUS):
    """Look for a violation of either Mosco condition.

    Parameters
    ----------
    seq : FunctionSequence
    f : ConvexFunction
        Declared limit.
    probes : iterable of Point
        Recovery sequences are built at every probe.  For probes outside
        ``dom f`` the pair ``(f_n, f)`` is replaced by ``(f_{n,mu}, f_mu)``
        for each ``mu`` in ``mus`` and both conditions are re-checked there.
    wseqs : list of PointSequence, optional
        Sequences for the liminf condition.  Defaults to the constant
        sequence and one geodesic approach at every probe.
    """
    f.dom_sample()
    probes = list(probes)
    rng = np.random.default_rng(seed)
    if wseqs is None:
        wseqs = [s for x in probes for s in approach_sequences(x, rng)]
    liminf, recovery, notes = [], [], []
    verdicts = []
    for ws in wseqs:
        v = weak_limit(ws, tol=tol, seed=seed)
        if v.converges != "yes":
            notes.append(f"{ws.name}: weak limit {v.converges}, skipped")
            continue
        target = _snap(v.candidate, probes, tol)
        verdicts.append((ws, v, target))
        liminf.append(check_liminf_condition(seq, f, ws, target, tol, v))
    for x in probes:
        try:
            if math.isfinite(f(x)):
                recovery.append(check_recovery(seq, f, x, schedule, tol=tol))
                continue
            for mu in mus:
                gseq, g = _envelope_sequence(seq, f, mu), EnvelopeOf(f, mu)
                recovery.append(check_recovery(gseq, g, x, schedule, tol=tol, device=mu))
                for ws, v, target in verdicts:
                    if target is x:
                        liminf.append(check_liminf_condition(gseq, g, ws, x, tol, v, device=mu))
        except Unconverged as exc:
            notes.append(f"prox failed at {x!r}: {exc}")
    failed = [c for c in liminf + recovery if not c.passed]
    if failed:
        c = failed[0]
        kind = "liminf" if isinstance(c, LiminfCheck) else "recovery"
        verdict, witness = "falsified", {"condition": kind, **c.to_json()}
    elif notes:
        verdict, witness = "inconclusive", None
    else:
        verdict, witness = "consistent", None
    return MoscoReport(tuple(liminf), tuple(recovery), verdict, witness, tuple(notes))


# --- envelope convergence --------------------------------------------------------------


ENVELOPE_WINDOW = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)


@dataclass(frozen=True)
class EnvelopeConvergenceReport:
    """Gaps ``|f_{n,lam}(x) - f_lam(x)|`` and prox distances ``d(J^n x, J x)``.

    ``gaps[k][l]`` and ``prox_distances[k][l]`` are lists over ``window``;
    ``diverging[k][l]`` flags envelope values that have no visible limit.
    """

    lambdas: tuple
    probes: tuple
    window: tuple
    gaps: list
    prox_distances: list
    limit_values: list
    diverging: list

    @property
    def vanishing(self):
        return all(windows.vanishing(row, 1e-9) for rows in self.gaps for row in rows)

    @property
    def pointwise_limit(self):
        return not any(flag for rows in self.diverging for flag in rows)

    def rows(self):
        """Flat table rows ``(k, l, n, lam, gap, prox_distance)``."""
        for k, lam in enumerate(self.lambdas):
            for l in range(len(self.probes)):
                for j, n in enumerate(self.window):
                    yield k + 1, l + 1, n, lam, self.gaps[k][l][j], self.prox_distances[k][l][j]

    def to_json(self):
        return {
            "window": list(self.window),
            "max_gap_at_last_index": max(g[-1] for rows in self.gaps for g in rows),
            "max_prox_distance_at_last_index": max(p[-1] for rows in self.prox_distances for p in rows),
            "vanishing": self.vanishing,
            "pointwise_limit": self.pointwise_limit,
        }


def check_envelope_convergence(seq, f, lam_grid, probes, window=ENVELOPE_WINDOW):
    """Tabulate envelope gaps and prox distances over ``window`` at every grid pair."""
    lambdas = tuple(lam_grid)
    probes = tuple(probes)
    if not lambdas or not probes:
        raise DomainError("grids must be nonempty")
    if any(b >= a for a, b in zip(lambdas, lambdas[1:])) or lambdas[-1] <= 0:
        raise DomainError("lambda grid must be positive and strictly decreasing")
    fns = [seq(n) for n in window]
    gaps, dists, limits, flags = [], [], [], []
    for lam in lambdas:
        grow, drow, lrow, frow = [], [], [], []
        for x in probes:
            ref = prox(f, x, lam)
            rs = [prox(fn, x, lam) for fn in fns]
            vals = [r.value for r in rs]
            grow.append([abs(v - ref.value) for v in vals])
            drow.append([distance(r.minimizer, ref.minimizer) for r in rs])
            lrow.append(ref.value)
            frow.append(windows.diverging(vals))
        gaps.append(grow)
        dists.append(drow)
        limits.append(lrow)
        flags.append(frow)
    return EnvelopeConvergenceReport(lambdas, probes, tuple(window), gaps, dists, limits, flags)


# --- Gamma-limit from envelopes -------------------------------------------------------------


GAMMA_WINDOW = windows.geometric(125, 4)


@dataclass(frozen=True)
class GammaLimitTable:
    """``phi[k][l]`` is the window limit of ``f_{n, lam_k}(x_l)``; ``values[l]`` its sup over k."""

    lambdas: tuple
    probes: tuple
    phi: list
    values: list
    divergent: list
    window: tuple
    minorization: object = None

    def to_json(self):
        return {
            "window": list(self.window),
            "values": [_num(v) for v in self.values],
            "divergent": list(self.divergent),
        }


def gamma_limit_from_envelopes(seq, lam_grid, probes, window=GAMMA_WINDOW, anchor=None):
    """Gamma-limit candidate ``sup_k phi(lam_k, x)`` at each probe.

    ``phi(lam, x)`` is ``f_{N, lam}(x)`` at the last window index ``N``, or
    ``+inf`` when the values diverge over the window.  A probe whose values
    keep growing along the grid without shrinking increments is reported as
    ``+inf``.

    Raises
    ------
    NoUniformBound
        If the envelope values at the anchor diverge, so no uniform quadratic
        minorant exists.
    """
    lambdas, probes = tuple(lam_grid), tuple(probes)
    anchor = probes[0] if anchor is None else anchor
    bound = estimate_minorization(seq, anchor, lambdas[0], window=windows.geometric(16, 8))
    fns = [seq(n) for n in window]
    phi = []
    for lam in lambdas:
        row = []
        for x in probes:
            vals = [prox(fn, x, lam).value for fn in fns]
            row.append(math.inf if windows.diverging(vals) else vals[-1])
        phi.append(row)
    values, divergent = [], []
    for l in range(len(probes)):
        col = [phi[k][l] for k in range(len(lambdas))]
        blown = windows.diverging(col)
        divergent.append(blown)
        values.append(math.inf if blown else max(col))
    return GammaLimitTable(lambdas, probes, phi, values, divergent, tuple(window), bound)


# --- Frolik-Wijsman --------------------------------------------------------------------------


FW_WINDOW = windows.geometric(4, 10)


@dataclass(frozen=True)
class FrolikWijsmanReport:
    distance_gaps: list
    fw_pass: bool
    mosco: MoscoReport
    agree: bool
    bridge_residual: float
    window: tuple

    def to_json(self):
        return {
            "frolik_wijsman": "pass" if self.fw_pass else "fail",
            "mosco": self.mosco.verdict,
            "agree": self.agree,
            "bridge_residual": self.bridge_residual,
            "max_distance_gap_at_last_index": max(g[-1] for g in self.distance_gaps),
            "window": list(self.window),
        }


def frolik_wijsman_check(set_seq, C, probes, window=FW_WINDOW, tol=WEAK_TOL, seed=0):
    """Compare distance-function convergence with Mosco convergence of indicators.

    The two are linked by the identity ``(iota_C)_{1/2} = d(., C)^2``, whose
    residual at the probes is reported as ``bridge_residual``.
    """
    probes = list(probes)
    if not isinstance(set_seq, SetSequence):
        set_seq = SetSequence(set_seq)
    sets = [set_seq(n) for n in window]
    gaps = [[abs(Cn.distance(x) - C.distance(x)) for Cn in sets] for x in probes]
    fw_pass = all(windows.vanishing(g, tol) for g in gaps)
    ind = Indicator(C)
    bridge = max(abs(prox(ind, x, 0.5).value - C.distance(x) ** 2) for x in probes)
    report = mosco_check(set_seq.indicators(C), ind, probes, tol=tol, seed=seed)
    agree = fw_pass == (report.verdict == "consistent")
    return FrolikWijsmanReport(gaps, fw_pass, report, agree, bridge, tuple(window))
