"""Proximal maps and Moreau envelopes, exact where possible and numerical otherwise.

For ``f`` in the catalog and ``lam > 0``::

    J_lam(x)  = argmin_y  f(y) + d(x, y)^2 / (2 lam)
    f_lam(x)  =   min_y   f(y) + d(x, y)^2 / (2 lam)

Kinds with a closed-form prox are dispatched to it.  Two numerical solvers
cover the rest:

* ``EnvelopeOf(g, mu)``: the objective equals
  ``min_z g(z) + d(y, z)^2 / (2 mu) + d(x, y)^2 / (2 lam)``.  Alternating
  exact minimization in ``z`` and ``y`` is a contraction with factor
  ``lam / (lam + mu)``, so the error is certified by the usual fixed-point
  bound.
* ``WeightedSum``: exact per-edge minimization on metric trees; damped
  Newton iteration in tangent frames for sums of point distances and
  squared distances on Euclidean, hyperbolic and product spaces; otherwise
  majorize-minimize, where each summand is majorized at the current iterate
  by a weighted squared distance to an anchor point and the surrogate is
  minimized exactly by a weighted Frechet mean.  The cyclic proximal point
  method is available as ``method="cppa"``.
"""

import contextlib
import contextvars
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .catalog import (
    DistanceTo,
    DistanceToSet,
    EnvelopeOf,
    FunctionSequence,
    Indicator,
    Shifted,
    SquaredDistance,
    WeightedSum,
    WholeSpace,
    _along,
    project,
)
from .errors import DomainError, NoUniformBound, Unconverged
from .spaces import Hyperbolic2, MetricTree, Point, Product, distance, frame_exp, frame_log, half_sqdist_jet, has_frames
from . import windows

_ANCHOR_FLOOR = 1e-14
_TOL_OVERRIDE = contextvars.ContextVar("prox_tol_override", default=None)


@contextlib.contextmanager
def solver_tolerance(tol):
    """Within the block, numerical prox solvers default to ``tol``."""
    token = _TOL_OVERRIDE.set(tol)
    try:
        yield
    finally:
        _TOL_OVERRIDE.reset(token)


def default_tol(space):
    """Solver tolerance: 1e-8 for flat and tree spaces, 1e-6 on the hyperboloid.

    A tolerance set with :func:`solver_tolerance` takes precedence.
    """
    override = _TOL_OVERRIDE.get()
    if override is not None:
        return override
    if isinstance(space, Hyperbolic2):
        return 1e-6
    if isinstance(space, Product):
        return max(default_tol(space.left), default_tol(space.right))
    return 1e-8


@dataclass(frozen=True)
class ProxResult:
    """Outcome of a prox computation.

    ``value`` is the envelope ``f_lam(x)``, always recomputed as
    ``f(minimizer) + d(x, minimizer)^2 / (2 lam)``.  ``certified_gap`` bounds
    the objective suboptimality of ``minimizer`` (zero for closed forms).
    """

    minimizer: Point
    value: float
    iterations: int
    certified_gap: float


def _objective(f, x, lam, y):
    return f(y) + distance(x, y) ** 2 / (2.0 * lam)


def prox(f, x, lam, tol=None, max_iter=20000, method="auto", start=None):
    """Proximal point of ``f`` at ``x`` with parameter ``lam``.

    Parameters
    ----------
    f : ConvexFunction
    x : Point
    lam : float
        Positive prox parameter.
    tol : float, optional
        Solver tolerance; defaults to :func:`default_tol` of the space.
    max_iter : int
        Iteration budget of the numerical solvers.
    method : {"auto", "mm", "cppa"}
        Solver for weighted sums.  ``"auto"`` picks the exact edgewise
        solver on trees, Newton iteration where it applies and
        majorize-minimize otherwise.
    start : Point, optional
        Warm start for the numerical solvers.

    Raises
    ------
    DomainError
        If ``lam <= 0``.
    Unconverged
        If a numerical solver runs out of iterations.
    """
    if not lam > 0:
        raise DomainError(f"prox parameter must be positive, got {lam}")
    f.space._check(x)
    if tol is None:
        tol = default_tol(f.space)
    y = f.exact_prox(x, lam)
    if y is not None:
        return ProxResult(y, _objective(f, x, lam, y), 0, 0.0)
    if isinstance(f, Shifted):
        r = prox(f.f, x, lam, tol, max_iter, method, start)
        return ProxResult(r.minimizer, r.value + f.c, r.iterations, r.certified_gap)
    if isinstance(f, EnvelopeOf):
        return _envelope_prox(f, x, lam, tol, max_iter, start)
    if isinstance(f, WeightedSum):
        if method == "cppa":
            return _cppa_prox(f, x, lam, tol, max_iter, start)
        if method == "auto" and isinstance(f.space, MetricTree):
            return _edgewise_prox(f, x, lam)
        if method == "auto" and _newton_applies(f):
            r = _newton_prox(f, x, lam, tol, 100, start)
            if r is not None:
                return r
        return _mm_prox(f, x, lam, tol, max_iter, start)
    raise DomainError(f"no prox available for {type(f).__name__}")


def envelope(f, x, lam, tol=None):
    """Moreau envelope value ``f_lam(x)``."""
    return prox(f, x, lam, tol).value


def _envelope_prox(f, x, lam, tol, max_iter, start):
    g, mu = f.f, f.mu
    q = lam / (lam + mu)
    y = x if start is None else start
    z = None
    err = prev = math.inf
    for it in range(1, max_iter + 1):
        inner = prox(g, y, mu, tol, max_iter, start=z)
        z = inner.minimizer
        y_new = _along(x, z, q)
        step = distance(y, y_new)
        y = y_new
        err = q / (1.0 - q) * step
        # steps that stop shrinking have hit the inner solver's noise floor
        if err <= max(1e-4 * tol, 1e-14) or (step >= prev and err <= tol):
            break
        prev = step
    else:
        raise Unconverged(f"envelope prox did not converge in {max_iter} iterations", y, max_iter)
    inner = prox(g, y, mu, tol, max_iter)
    value = inner.value + distance(x, y) ** 2 / (2.0 * lam)
    slope = distance(y, inner.minimizer) / mu + distance(x, y) / lam
    return ProxResult(y, value, it, slope * err + inner.certified_gap)


def _flatten(f, weight=1.0):
    """Yield ``(weight, base_term)`` pairs and the accumulated constant."""
    terms, const = [], 0.0
    stack = [(weight, f)]
    while stack:
        w, g = stack.pop()
        if isinstance(g, WeightedSum):
            stack.extend((w * wi, gi) for wi, gi in g.terms)
        elif isinstance(g, Shifted):
            const += w * g.c
            stack.append((w, g.f))
        elif isinstance(g, Indicator) and isinstance(g.C, WholeSpace):
            continue
        else:
            terms.append((w, g))
    return terms, const


def _newton_applies(f):
    terms, _ = _flatten(f)
    return has_frames(f.space) and all(type(g) in (SquaredDistance, DistanceTo) for _, g in terms)


def _majorize(terms, y, tol, cache):
    """Anchors and weights of a squared-distance majorizer at ``y``."""
    anchors, weights, total = [], [], 0.0
    for i, (w, g) in enumerate(terms):
        if isinstance(g, SquaredDistance):
            anchors.append(g.p)
            weights.append(0.5 * w * g.w)
            total += w * g(y)
        elif isinstance(g, (DistanceTo, DistanceToSet)):
            p = g.p if isinstance(g, DistanceTo) else project(g.C, y)
            d = distance(y, p)
            anchors.append(p)
            weights.append(0.5 * w / max(d, _ANCHOR_FLOOR))
            total += w * d
        elif isinstance(g, EnvelopeOf):
            r = prox(g.f, y, g.mu, tol, start=cache.get(i))
            cache[i] = r.minimizer
            anchors.append(r.minimizer)
            weights.append(0.5 * w / g.mu)
            total += w * r.value
        else:
            raise DomainError(f"{type(g).__name__} cannot appear in a weighted sum")
    return anchors, weights, total


def _anchor_is_optimal(terms, x, lam, tol, p):
    """Exact optimality test at a distance anchor ``p``.

    ``p`` minimizes the prox objective iff the descent slope of the other
    terms at ``p`` is at most the total weight of the distance terms
    anchored there.
    """
    at_p = [(w, g) for w, g in terms if isinstance(g, DistanceTo) and distance(g.p, p) == 0.0]
    rest = [(w, g) for w, g in terms if not any(g is h for _, h in at_p)]
    anchors, weights, _ = _majorize(rest, p, tol, {})
    slope = p.space.descent_slope(p, anchors + [x], [2.0 * w for w in weights] + [1.0 / lam])
    return slope <= sum(w for w, _ in at_p) * (1.0 + 1e-12)


def _kink_minimizer(terms, x, lam, tol, bound):
    """An anchor of a distance term that minimizes the prox objective, if any.

    Majorize-minimize creeps towards such an anchor sublinearly, so each one
    is tested directly.  Only anchors whose objective does not exceed
    ``bound`` are tried.
    """
    for p in [g.p for _, g in terms if isinstance(g, DistanceTo)]:
        _, _, f_p = _majorize(terms, p, tol, {})
        if f_p + distance(x, p) ** 2 / (2.0 * lam) > bound:
            continue
        if _anchor_is_optimal(terms, x, lam, tol, p):
            return p
    return None


def _on_anchor(terms, y):
    return any(isinstance(g, DistanceTo) and distance(g.p, y) <= 1e-12 for _, g in terms)


def _leave_anchor(terms, x, lam, y, tol):
    """Move a start point off a distance anchor that is not the minimizer.

    The surrogate weight of ``d(., p)`` blows up at ``p``, which would pin
    the iteration there; the surrogate of the other terms is used instead.
    """
    at = [g for _, g in terms if isinstance(g, DistanceTo) and distance(g.p, y) <= 1e-12]
    if not at:
        return y
    rest = [(w, g) for w, g in terms if not any(g is h for h in at)]
    anchors, weights, _ = _majorize(rest, y, tol, {})
    return y.space.frechet_mean(anchors + [x], weights + [0.5 / lam], init=y)


def _kink_proposal(f, terms, x, lam, y, y_mm, tol):
    """Better of the plain step ``y_mm`` and a step keeping the nearest kink exact.

    Near a distance anchor ``p`` the plain surrogate contracts slowly.  The
    other terms are majorized as usual and their surrogate is replaced by
    ``C/2 d(., m)^2``; ``C/2 d(., m)^2 + w d(., p)`` is minimized on ``[m, p]``.
    This is exact majorization in Euclidean space and a proposal elsewhere,
    accepted only when it lowers the objective.
    """
    kinks = [g for _, g in terms if isinstance(g, DistanceTo)]
    p = min(kinks, key=lambda g: distance(g.p, y)).p
    at = [(w, g) for w, g in terms if isinstance(g, DistanceTo) and distance(g.p, p) == 0.0]
    rest = [(w, g) for w, g in terms if not any(g is h for _, h in at)]
    anchors, weights, _ = _majorize(rest, y, tol, {})
    m = y.space.frechet_mean(anchors + [x], weights + [0.5 / lam], init=y)
    C = 2.0 * (sum(weights) + 0.5 / lam)
    d = distance(m, p)
    t = math.inf if d == 0.0 else sum(w for w, _ in at) / (C * d)
    if t >= 1.0:
        # landing on p would pin the iteration there; only the exact test may do so
        return p if _anchor_is_optimal(terms, x, lam, tol, p) else y_mm
    z = _along(m, p, t)
    return z if _objective(f, x, lam, z) < _objective(f, x, lam, y_mm) else y_mm


def _mm_prox(f, x, lam, tol, max_iter, start):
    space = f.space
    terms, _ = _flatten(f)
    y = x if start is None else start
    cache = {}
    anchors, weights, fy = _majorize(terms, y, tol, cache)
    obj = fy + distance(x, y) ** 2 / (2.0 * lam)
    prev_step, q, decrease = None, 0.5, 0.0
    has_kinks = any(isinstance(g, DistanceTo) for _, g in terms)
    for it in range(1, max_iter + 1):
        on_anchor = has_kinks and _on_anchor(terms, y)
        if has_kinks and (it == 1 or it % 8 == 0 or on_anchor):
            p = _kink_minimizer(terms, x, lam, tol, obj)
            if p is not None:
                return ProxResult(p, _objective(f, x, lam, p), it, 0.0)
            if on_anchor:
                y = _leave_anchor(terms, x, lam, y, tol)
                anchors, weights, fy = _majorize(terms, y, tol, cache)
                obj = fy + distance(x, y) ** 2 / (2.0 * lam)
        y_new = space.frechet_mean(anchors + [x], weights + [0.5 / lam], init=y)
        if has_kinks and q > 0.9:
            y_new = _kink_proposal(f, terms, x, lam, y, y_new, tol)
        step = distance(y, y_new)
        anchors, weights, f_new = _majorize(terms, y_new, tol, cache)
        obj_new = f_new + distance(x, y_new) ** 2 / (2.0 * lam)
        if obj_new > obj:
            # surrogate minimum can only lose to y by rounding; keep the better point
            break
        decrease = obj - obj_new
        y, obj = y_new, obj_new
        if prev_step:
            q = min(step / prev_step, 0.999)
        prev_step = step
        err = q / (1.0 - q) * step
        if step == 0.0 or (it > 1 and err <= max(1e-4 * tol, 1e-15)):
            break
    else:
        raise Unconverged(f"weighted-sum prox did not converge in {max_iter} iterations", y, max_iter)
    value = _objective(f, x, lam, y)
    gap = q / (1.0 - q) * decrease
    return ProxResult(y, value, it, max(gap, 0.0))


def _newton_jet(terms, x, lam, y):
    """Value, frame gradient and Hessian of the prox objective at ``y``.

    ``None`` when ``y`` sits on a distance anchor, where the objective is not
    differentiable.
    """
    space = y.space
    g, H = half_sqdist_jet(space, y.coords, x.coords)
    value = distance(x, y) ** 2 / (2.0 * lam)
    grad, hess = g / lam, H / lam
    for w, term in terms:
        g, H = half_sqdist_jet(space, y.coords, term.p.coords)
        if isinstance(term, SquaredDistance):
            c = w * term.w
            value += c * term(y)
            grad, hess = grad + c * g, hess + c * H
            continue
        d = distance(y, term.p)
        if d <= 1e-12:
            return None
        # d = sqrt(2 Q): grad d = grad Q / d, Hess d = Hess Q / d - grad Q grad Q^T / d^3
        value += w * d
        grad = grad + (w / d) * g
        hess = hess + (w / d) * (H - np.outer(g, g) / (d * d))
    return value, grad, hess


def _kink_model_step(terms, x, lam, y, p):
    """Minimizer of a second-order model of the other terms plus the exact kink at ``p``.

    In the frame at ``y`` the model is ``g.s + s.H s / 2 + w |s - s_p|``.
    Away from ``s_p`` its stationary point is
    ``s = s_p - (H + (w / rho) I)^-1 (g + H s_p)`` with ``rho = |s - s_p|``,
    a scalar equation solved by bracketing.  ``None`` when the model puts
    the minimizer on the kink itself.
    """
    at = [(w, g) for w, g in terms if isinstance(g, DistanceTo) and distance(g.p, p) == 0.0]
    rest = [(w, g) for w, g in terms if not any(g is h for _, h in at)]
    jet = _newton_jet(rest, x, lam, y)
    if jet is None:
        return None
    _, grad, hess = jet
    w = sum(wi for wi, _ in at)
    s_p = frame_log(y.space, y.coords, p.coords)
    b = grad + hess @ s_p
    if math.sqrt(b @ b) <= w:
        return None
    evals, evecs = np.linalg.eigh(hess)
    c = evecs.T @ b
    offset = lambda rho: np.sqrt(np.sum((c / (evals + w / rho)) ** 2))
    hi = float(np.sqrt(np.sum((c / evals) ** 2)))
    lo = 1e-12 * hi
    if not offset(lo) > lo:
        return None
    rho = brentq(lambda r: offset(r) - r, lo, hi, xtol=1e-15 * hi)
    step = s_p - evecs @ (c / (evals + w / rho))
    return Point(y.space, frame_exp(y.space, y.coords, step))


def _newton_prox(f, x, lam, tol, max_iter, start):
    """Damped Newton iteration in orthonormal tangent frames.

    For sums of squared distances and point distances on Euclidean spaces,
    the hyperbolic plane and their products.  The objective is
    ``1/lam``-strongly convex along geodesics, so ``d(y, J x) <= lam |grad|``
    and the value gap is at most ``lam |grad|^2 / 2``; iteration stops when
    the first bound drops below ``1e-3 tol`` and the second is reported as
    the certified gap.  Optimal distance anchors are detected by the exact
    slope test, an iterate on a non-optimal anchor is moved off it, and each
    step is the better of the damped Newton step and the kink-model step at
    the nearest anchor.
    Returns ``None`` if the line search stalls above tolerance.
    """
    space = f.space
    terms, _ = _flatten(f)
    y = x if start is None else start
    has_kinks = any(isinstance(g, DistanceTo) for _, g in terms)
    if has_kinks:
        p = _kink_minimizer(terms, x, lam, tol, _objective(f, x, lam, y))
        if p is not None:
            return ProxResult(p, _objective(f, x, lam, p), 0, 0.0)
    for it in range(1, max_iter + 1):
        if has_kinks and _on_anchor(terms, y):
            y = _leave_anchor(terms, x, lam, y, tol)
        jet = _newton_jet(terms, x, lam, y)
        if jet is None:
            return None
        value, grad, hess = jet
        gnorm = math.sqrt(grad @ grad)
        if lam * gnorm <= 1e-3 * tol:
            break
        step = np.linalg.solve(hess, -grad)
        slope = grad @ step
        t, cand, cv = 1.0, None, math.inf
        while t >= 1e-12:
            z = Point(space, frame_exp(space, y.coords, t * step))
            zv = _objective(f, x, lam, z)
            if zv <= value + 1e-4 * t * slope:
                cand, cv = z, zv
                break
            t *= 0.5
        if has_kinks:
            # near a distance anchor the quadratic model is poor; model the kink exactly
            p = min((g.p for _, g in terms if isinstance(g, DistanceTo)), key=lambda q: distance(q, y))
            z = _kink_model_step(terms, x, lam, y, p)
            if z is not None and not _on_anchor(terms, z):
                zv = _objective(f, x, lam, z)
                if zv < min(cv, value):
                    cand, cv = z, zv
        if cand is None:
            return None
        y = cand
    else:
        return None
    return ProxResult(y, _objective(f, x, lam, y), it, 0.5 * lam * gnorm * gnorm)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(phi, lo, hi, xatol):
    """Minimize a convex function on ``[lo, hi]`` to absolute width ``xatol``."""
    a, b = lo, hi
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = phi(c), phi(d)
    while b - a > xatol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = phi(d)
    return (c, fc) if fc <= fd else (d, fd)


def _edge_position(tree, e, a):
    """Signed position ``c`` with ``d(edge e at s, a) = |s - c|`` for all offsets ``s``."""
    u, v, length = tree.edges[e]
    if a[0] == e:
        return a[1]
    du, dv = tree._vdist(u, a), tree._vdist(v, a)
    return -du if du <= dv else length + dv


def _piecewise_quadratic_min(quad, kinks):
    """Exact minimizer of ``sum a_i (s - c_i)^2 + sum b_j |s - c_j|`` with ``sum a_i > 0``."""
    A = sum(a for a, _ in quad)
    B = sum(a * c for a, c in quad)
    merged = {}
    for b, c in kinks:
        merged[c] = merged.get(c, 0.0) + b
    kinks = sorted(((b, c) for c, b in merged.items()), key=lambda t: t[1])

    def pull(s, skip=None):
        # derivative of the smooth part plus the kinks other than ``skip``
        return 2.0 * (A * s - B) + sum(b * math.copysign(1.0, s - c) for j, (b, c) in enumerate(kinks) if j != skip and s != c)

    for j, (b, c) in enumerate(kinks):
        if abs(pull(c, j)) <= b:
            return c
    cuts = [-math.inf] + [c for _, c in kinks] + [math.inf]
    for k in range(len(cuts) - 1):
        slope = sum(b for b, _ in kinks[:k]) - sum(b for b, _ in kinks[k:])
        s = (2.0 * B - slope) / (2.0 * A)
        if cuts[k] <= s <= cuts[k + 1]:
            return s
    raise AssertionError("no stationary point of a strictly convex function")


def _edge_minimizer(f, x, lam, e, terms):
    """Exact or golden-section minimizer of the prox objective on edge ``e``."""
    tree = f.space
    length = tree.edges[e][2]
    if terms is not None:
        quad = [(0.5 / lam, _edge_position(tree, e, x.coords))]
        kinks = []
        for w, g in terms:
            c = _edge_position(tree, e, g.p.coords)
            if isinstance(g, SquaredDistance):
                quad.append((0.5 * w * g.w, c))
            else:
                kinks.append((w, c))
        s = min(max(_piecewise_quadratic_min(quad, kinks), 0.0), length)
        return s, 0.0
    phi = lambda s: _objective(f, x, lam, Point(tree, tree._canon(e, s)))
    xatol = 1e-13 * (1.0 + length)
    s, val = _golden_section(phi, 0.0, length, xatol)
    rise = max(phi(min(max(s + h, 0.0), length)) - val for h in (-xatol, xatol))
    return s, max(rise, 0.0)


def _edgewise_prox(f, x, lam):
    """Prox on a tree by minimizing along the edges at the best vertex.

    Each edge is a geodesic, so the prox objective is convex in the offset,
    and it increases along every geodesic leaving the minimizer.  Hence the
    best vertex is an endpoint of the edge holding the minimizer.  Sums of
    point distances and squared distances are piecewise quadratic on an edge
    and minimized exactly; other sums use golden-section search, whose
    certified gap is the rise of the objective over the final bracket.
    """
    tree = f.space
    terms, _ = _flatten(f)
    if not all(type(g) in (SquaredDistance, DistanceTo) for _, g in terms):
        terms = None
    vals = [_objective(f, x, lam, Point(tree, tree._home[w])) for w in range(len(tree.vertices))]
    w = min(range(len(vals)), key=vals.__getitem__)
    best = (Point(tree, tree._home[w]), vals[w], 0.0)
    for e, (u, v, _) in enumerate(tree.edges):
        if w not in (u, v):
            continue
        s, gap = _edge_minimizer(f, x, lam, e, terms)
        y = Point(tree, tree._canon(e, s))
        val = _objective(f, x, lam, y)
        if val < best[1]:
            best = (y, val, gap)
    return ProxResult(best[0], best[1], len(tree.edges), best[2])


def _cppa_prox(f, x, lam, tol, max_iter, start, sigma0=1.0):
    """Cyclic proximal point over the summands and the quadratic term, steps ``sigma0 / j``."""
    terms, _ = _flatten(f)
    terms = terms + [(1.0, SquaredDistance(x, 1.0 / lam))]
    y = x if start is None else start
    step = math.inf
    for j in range(1, max_iter + 1):
        sigma = sigma0 / j
        y_start = y
        for w, g in terms:
            y = prox(g, y, w * sigma, tol).minimizer
        step = distance(y_start, y)
        if step < tol:
            break
    else:
        raise Unconverged(f"cyclic proximal point did not converge in {max_iter} cycles", y, max_iter)
    contraction = sigma / (lam + sigma)
    gap = step ** 2 / (2.0 * lam) / contraction
    return ProxResult(y, _objective(f, x, lam, y), j, gap)


# --- identities ----------------------------------------------------------------


def semigroup_residual(f, x, lam, mu, tol=None):
    """``|(f_lam)_mu(x) - f_{lam + mu}(x)|`` with the left side computed by nesting."""
    if not (lam > 0 and mu > 0):
        raise DomainError("semigroup parameters must be positive")
    nested = envelope(EnvelopeOf(f, lam), x, mu, tol)
    return abs(nested - envelope(f, x, lam + mu, tol))


def resolvent_inequality_residual(f, x, y, lam, result=None):
    """Slack in ``f(J x) + d(x,Jx)^2/(2lam) + d(Jx,y)^2/(2lam) <= f(y) + d(x,y)^2/(2lam)``.

    Returns ``inf`` when ``f(y)`` is infinite.  Pass a precomputed
    :class:`ProxResult` as ``result`` to reuse it.
    """
    fy = f(y)
    if math.isinf(fy):
        return math.inf
    r = prox(f, x, lam) if result is None else result
    return fy + distance(x, y) ** 2 / (2.0 * lam) - r.value - distance(r.minimizer, y) ** 2 / (2.0 * lam)


def envelope_monotone_in_lambda(f, x, lam1, lam2):
    """Check ``f_lam1(x) <= f_lam2(x) <= f(x)`` for ``lam1 > lam2 > 0``."""
    if not lam1 > lam2 > 0:
        raise DomainError("need lam1 > lam2 > 0")
    r1, r2 = prox(f, x, lam1), prox(f, x, lam2)
    fx = f(x)
    slack = r1.certified_gap + r2.certified_gap + 1e-12 * (1.0 + abs(r2.value))
    return r1.value <= r2.value + slack and r2.value <= fx + slack


def envelope_limit_probe(f, x, lambdas):
    """Envelope values ``f_lam(x)`` along a decreasing list of parameters."""
    return [envelope(f, x, lam) for lam in lambdas]


def prox_displacement_monotone(f, x, lam1, lam2, tol=None):
    """Check ``d(J_lam2 x, x) <= d(J_lam1 x, x)`` for ``lam1 > lam2 > 0``."""
    if not lam1 > lam2 > 0:
        raise DomainError("need lam1 > lam2 > 0")
    if tol is None:
        tol = default_tol(f.space)
    d1 = distance(prox(f, x, lam1).minimizer, x)
    d2 = distance(prox(f, x, lam2).minimizer, x)
    return d2 <= d1 + tol


@dataclass(frozen=True)
class MinorizationBound:
    """Uniform quadratic minorant ``f_n(x) >= -r (d(x, anchor)^2 + 1)``."""

    anchor: Point
    r: float
    lam: float
    envelope_value: float
    window: tuple = ()

    def __call__(self, x):
        return -self.r * (distance(x, self.anchor) ** 2 + 1.0)


def estimate_minorization(seq: FunctionSequence, x0, lam, window=None, samples=()):
    """Quadratic minorant constant from the limit of ``f_{n,lam}(x0)``.

    With ``f0`` the sampled limit, every ``f_n`` (for large ``n``) satisfies
    ``f_n(x) >= f0 - 1 - d(x, x0)^2 / (2 lam)``, so
    ``r = max(1 / (2 lam), |f0| + 1)`` works.  The bound is verified on
    ``samples`` for every index in the window.

    Raises
    ------
    NoUniformBound
        If the envelope values diverge over the window or the bound fails
        at a sampled point.
    """
    if not lam > 0:
        raise DomainError("lam must be positive")
    window = tuple(window or windows.geometric(16, 8))
    values = [envelope(seq(n), x0, lam) for n in window]
    if windows.diverging(values):
        raise NoUniformBound(f"f_n,lam(x0) diverges over the window: last values {values[-3:]}")
    f0 = values[-1]
    r = max(1.0 / (2.0 * lam), abs(f0) + 1.0)
    bound = MinorizationBound(x0, r, lam, f0, window)
    for n in window:
        fn = seq(n)
        for x in samples:
            if fn(x) < bound(x) - 1e-9:
                raise NoUniformBound(f"minorant violated by f_{n} at {x!r}")
    return bound
