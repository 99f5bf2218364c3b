"""Envelope and prox pseudometrics, the metric rho, and Cauchy limits.

For grids ``lam_1 > lam_2 > ... > lam_K`` and probes ``x_1, ..., x_L``::

    e_kl(f, g) = |f_{lam_k}(x_l) - g_{lam_k}(x_l)|
    r_kl(f, g) = d(J^f_{lam_k} x_l, J^g_{lam_k} x_l)
    rho(f, g)  = sum_{k,l} 2^-(k+l) [ e/(1+e) + r/(1+r) ]

The finite grids truncate countable families; the ignored tail carries weight
at most ``2^-K + 2^-L`` per bracket, reported as ``truncation``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import windows
from .catalog import _along
from .errors import DomainError, NoBound, NotCauchy, SpaceMismatch
from .prox import estimate_minorization, prox
from .spaces import Euclidean, distance


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly decreasing positive prox parameters."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("lambda grid is empty")
        if vals[-1] <= 0 or any(b >= a for a, b in zip(vals, vals[1:])):
            raise DomainError("lambda grid must be positive and strictly decreasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def default(cls, K=12):
        """``lam_k = 2^(1 - k)`` for ``k = 1..K``."""
        return cls(tuple(2.0 ** (1 - k) for k in range(1, K + 1)))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


@dataclass(frozen=True)
class ProbeGrid:
    """A nonempty ordered list of probe points in one space."""

    points: tuple
    spacing: float = None

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise DomainError("probe grid is empty")
        pts[0].space._check(*pts)
        object.__setattr__(self, "points", pts)

    @classmethod
    def lattice(cls, space, low, high, spacing=0.25):
        """Cartesian lattice with the given spacing on a box of a Euclidean space."""
        if not isinstance(space, Euclidean):
            raise DomainError("lattices are defined on Euclidean spaces")
        low = np.broadcast_to(np.asarray(low, dtype=float), (space.dim,))
        high = np.broadcast_to(np.asarray(high, dtype=float), (space.dim,))
        axes = [np.linspace(a, b, int(round((b - a) / spacing)) + 1) for a, b in zip(low, high)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, space.dim)
        return cls(tuple(space.point(row) for row in mesh), spacing)

    @property
    def space(self):
        return self.points[0].space

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, l):
        return self.points[l]


def pseudometric_e(f, g, lam, x):
    """``|f_lam(x) - g_lam(x)|``."""
    if f.space != g.space:
        raise SpaceMismatch("functions live in different spaces")
    return abs(prox(f, x, lam).value - prox(g, x, lam).value)


def pseudometric_r(f, g, lam, x):
    """``d(J^f_lam x, J^g_lam x)``."""
    if f.space != g.space:
        raise SpaceMismatch("functions live in different spaces")
    return distance(prox(f, x, lam).minimizer, prox(g, x, lam).minimizer)


@dataclass(frozen=True)
class MoscoDistance:
    value: float
    e_terms: float
    r_terms: float
    lambdas: tuple
    probes: tuple
    e_table: tuple = ()
    r_table: tuple = ()

    @property
    def truncation(self):
        """Weight of the brackets ignored by the finite grids."""
        return 2.0 ** -len(self.lambdas) + 2.0 ** -len(self.probes)

    def to_json(self):
        return {
            "value": self.value,
            "e_terms": self.e_terms,
            "r_terms": self.r_terms,
            "truncation": self.truncation,
            "K": len(self.lambdas),
            "L": len(self.probes),
        }


def grid_profile(f, lambdas, probes):
    """Envelope values and prox points of ``f`` on the grids.

    ``f`` is a catalog function or a :class:`CauchyLimit` built on the same
    grids.
    """
    if isinstance(f, CauchyLimit):
        if tuple(lambdas) != f.lambdas or tuple(probes) != f.probes:
            raise DomainError("a Cauchy limit is only known on its own grids")
        return f.phi, f.prox_points
    values, points = [], []
    for lam in lambdas:
        rs = [prox(f, x, lam) for x in probes]
        values.append([r.value for r in rs])
        points.append([r.minimizer for r in rs])
    return values, points


def rho_from_profiles(pf, pg, lambdas, probes):
    (vf, jf), (vg, jg) = pf, pg
    e_sum = r_sum = 0.0
    e_tab, r_tab = [], []
    for k in range(len(lambdas)):
        erow, rrow = [], []
        for l in range(len(probes)):
            w = 2.0 ** -(k + l + 2)
            e = abs(vf[k][l] - vg[k][l])
            r = distance(jf[k][l], jg[k][l])
            erow.append(e)
            rrow.append(r)
            e_sum += w * (e / (1.0 + e) if math.isfinite(e) else 1.0)
            r_sum += w * r / (1.0 + r)
        e_tab.append(tuple(erow))
        r_tab.append(tuple(rrow))
    return MoscoDistance(e_sum + r_sum, e_sum, r_sum, tuple(lambdas), tuple(probes), tuple(e_tab), tuple(r_tab))


def rho(f, g, lam_grid=None, probe_grid=None):
    """The metric ``rho`` on the finite grids (indices counted from 1)."""
    lambdas = tuple(lam_grid or LambdaGrid.default())
    if probe_grid is None:
        raise DomainError("rho needs a probe grid")
    probes = tuple(probe_grid)
    return rho_from_profiles(grid_profile(f, lambdas, probes), grid_profile(g, lambdas, probes), lambdas, probes)


def _ball_sample(x0, R, rng):
    z = x0.space.random_point(rng, scale=2.0 * R)
    d = distance(x0, z)
    if d == 0.0:
        return x0
    return _along(x0, z, R * rng.uniform() / d)


@dataclass(frozen=True)
class LipschitzBound:
    """``L = (C + R) / lam`` with the measured displacement bound ``C``."""

    L: float
    C: float
    R: float
    lam: float
    max_quotient: float
    window: tuple

    @property
    def holds(self):
        return self.max_quotient <= self.L


def equi_lipschitz_bound(seq, lam, x0, R, window=None, scales=(1.0, 2.0), samples=64, seed=0):
    """Common Lipschitz constant of ``f_{n, lam}`` on the ball ``B_R(x0)``.

    ``C`` is the largest displacement ``d(J^n_s z, z)`` over sampled ``z``
    in the ball, indices in the window and ``s = max(scales + (lam,))``;
    since displacement grows with the prox parameter this dominates the
    displacement at ``lam``.  Difference quotients of ``f_{n, lam}`` over
    sampled pairs are measured and reported alongside.

    Raises
    ------
    NoBound
        If the envelope values at ``x0`` diverge over the window at either
        scale.
    """
    window = tuple(window or windows.geometric(1, 11))
    rng = np.random.default_rng(seed)
    fns = [seq(n) for n in window]
    for s in scales:
        if windows.diverging([prox(fn, x0, s).value for fn in fns]):
            raise NoBound(f"envelope values at the anchor diverge at scale {s}")
    big = max(tuple(scales) + (lam,))
    pts = [x0] + [_ball_sample(x0, R, rng) for _ in range(samples)]
    C = max(distance(prox(fn, z, big).minimizer, z) for fn in fns for z in pts)
    L = (C + R) / lam
    worst = 0.0
    for fn in fns:
        vals = [prox(fn, z, lam).value for z in pts]
        for i in range(len(pts)):
            for j in range(i):
                d = distance(pts[i], pts[j])
                if d > 0.0:
                    worst = max(worst, abs(vals[i] - vals[j]) / d)
    return LipschitzBound(L, C, R, lam, worst, window)


CAUCHY_WINDOW = windows.geometric(2 ** 10, 11)


@dataclass(frozen=True)
class CauchyLimit:
    """Pointwise limit of envelopes and prox points on the grids.

    ``phi[k][l]`` is the limit of ``f_{n, lam_k}(x_l)`` and
    ``prox_points[k][l]`` the limit of ``J^n_{lam_k} x_l``.  The limit
    function is ``sup_k phi[k][l]`` at the probes; off the grid it is
    evaluated at the nearest probe with a Lipschitz error bar.
    """

    lambdas: tuple
    probes: tuple
    phi: list
    prox_points: list
    window: tuple
    cauchy_residuals: tuple
    witness: dict
    minorization: object = None

    @property
    def values(self):
        return [max(self.phi[k][l] for k in range(len(self.lambdas))) for l in range(len(self.probes))]

    def envelope_at(self, k, y):
        """``phi(lam_k, y)`` from the nearest probe, with an error bound.

        The envelope gradient at ``z`` has norm ``d(z, J z) / lam`` and
        ``d(z, J z) <= d(x, J x) + 2 d(x, z)``, so along a geodesic of
        length ``h`` from the probe the value moves by at most
        ``(d(x, J x) h + h^2) / lam``.
        """
        dists = [distance(y, x) for x in self.probes]
        l = int(np.argmin(dists))
        h = dists[l]
        disp = distance(self.probes[l], self.prox_points[k][l])
        return self.phi[k][l], (disp * h + h * h) / self.lambdas[k]

    def __call__(self, y):
        """Limit value ``sup_k phi(lam_k, y)`` and the matching error bar."""
        pairs = [self.envelope_at(k, y) for k in range(len(self.lambdas))]
        k = int(np.argmax([v for v, _ in pairs]))
        return pairs[k]

    def to_json(self):
        return {
            "window": list(self.window),
            "values": self.values,
            "max_cauchy_residual": max(self.cauchy_residuals),
            "properness_witness": self.witness,
        }


def cauchy_limit(seq, lam_grid, probe_grid, window=CAUCHY_WINDOW, eps=1e-3, anchor=None):
    """Assemble the limit of a rho-Cauchy sequence on the grids.

    Raises
    ------
    NotCauchy
        If ``rho(f_n, f_{n+1}) >= eps`` for an index in the window tail.
    NoUniformBound
        If no uniform quadratic minorant exists.
    """
    lambdas, probes = tuple(lam_grid), tuple(probe_grid)
    residuals = []
    for n in windows.tail(window):
        r = rho(seq(n), seq(n + 1), lambdas, probes).value
        residuals.append(r)
        if r >= eps:
            raise NotCauchy(f"rho(f_{n}, f_{n + 1}) = {r:.3g} >= {eps}")
    anchor = probes[0] if anchor is None else anchor
    bound = estimate_minorization(seq, anchor, lambdas[0])
    fN = seq(window[-1])
    phi, pts = grid_profile(fN, lambdas, probes)
    witness = {
        "lambda_index": 1,
        "probe_index": 1,
        "point": pts[0][0].to_json(),
        "value_bound": phi[0][0],
        "f_N_at_point": fN(pts[0][0]),
    }
    return CauchyLimit(lambdas, probes, phi, pts, tuple(window), tuple(residuals), witness, bound)
