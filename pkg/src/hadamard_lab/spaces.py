"""Concrete Hadamard spaces with exact distances and geodesics.

Four families are supported:

* :class:`Euclidean` -- flat ``R^dim``.
* :class:`Hyperbolic2` -- the hyperbolic plane in the hyperboloid model.
* :class:`MetricTree` -- a finite tree with positive edge lengths.
* :class:`Product` -- the l2-product of two supported spaces.

Points are :class:`Point` values tagged with their space.  Every space also
knows how to compute weighted barycenters (Frechet means) of finitely many of
its points; the numerical proximal solvers are built on that primitive.
"""

import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SpaceMismatch, UnsupportedSpace

GEOM_TOL = 1e-9
HYPERBOLOID_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Point:
    """A point of a Hadamard space.

    ``coords`` is space specific: a float array for :class:`Euclidean`, the
    triple ``(x0, x1, x2)`` for :class:`Hyperbolic2`, ``(edge, offset)`` for
    :class:`MetricTree` and a pair of coordinates for :class:`Product`.
    Construct points with ``space.point(...)`` rather than directly.
    """

    space: "Space"
    coords: object

    def __repr__(self):
        return f"Point({self.space!r}, {self.space.to_json(self.coords)})"

    def to_json(self):
        return self.space.to_json(self.coords)


class Space:
    """Interface shared by the supported spaces.

    Subclasses implement the coordinate-level primitives ``_dist``,
    ``_geodesic``, ``_frechet_mean`` and ``_random``.
    """

    #: dimension of a global chart, or ``None`` when the space has none
    chart_dim = None

    def _check(self, *points):
        for p in points:
            if p.space is not self and p.space != self:
                raise SpaceMismatch(f"{p!r} does not belong to {self!r}")

    def distance(self, x, y):
        self._check(x, y)
        return self._dist(x.coords, y.coords)

    def geodesic_point(self, x, y, t):
        self._check(x, y)
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"geodesic parameter {t} outside [0, 1]")
        return Point(self, self._geodesic(x.coords, y.coords, float(t)))

    def random_point(self, rng, scale=1.0):
        return Point(self, self._random(rng, scale))

    def frechet_mean(self, points, weights, init=None):
        """Minimizer of ``sum_i w_i d(., p_i)^2`` for positive weights.

        ``init`` is an optional warm start for the iterative solvers.
        """
        self._check(*points)
        weights = np.asarray(weights, dtype=float)
        if len(points) == 0 or np.any(weights <= 0):
            raise DomainError("Frechet mean needs points with positive weights")
        init = None if init is None else init.coords
        return Point(self, self._frechet_mean([p.coords for p in points], weights, init))

    def descent_slope(self, p, anchors, coeffs):
        """Steepest descent rate at ``p`` of ``sum_i c_i d(., a_i)^2 / 2``.

        The rate is taken over unit-speed geodesics leaving ``p``; it is zero
        exactly when ``p`` minimizes the sum.
        """
        self._check(p, *anchors)
        return self._slope(p.coords, [a.coords for a in anchors], np.asarray(coeffs, dtype=float))

    def to_chart(self, coords):
        raise UnsupportedSpace(f"{self!r} has no global chart")

    def from_chart(self, v):
        raise UnsupportedSpace(f"{self!r} has no global chart")

    def point_from_json(self, obj):
        return self.point(obj)


@dataclass(frozen=True)
class Euclidean(Space):
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"Euclidean dimension must be a positive integer, got {self.dim}")
        object.__setattr__(self, "chart_dim", self.dim)

    def __repr__(self):
        return f"Euclidean({self.dim})"

    def point(self, coords):
        arr = np.array(coords, dtype=float).reshape(-1)
        if arr.shape != (self.dim,):
            raise DomainError(f"expected {self.dim} coordinates, got {arr.shape[0]}")
        return Point(self, arr)

    def _dist(self, a, b):
        if self.dim == 1:
            return abs(float(a[0] - b[0]))
        return float(np.linalg.norm(a - b))

    def _geodesic(self, a, b, t):
        return (1.0 - t) * a + t * b

    def _frechet_mean(self, coords, weights, init=None):
        return np.average(np.stack(coords), axis=0, weights=weights)

    def _slope(self, p, anchors, c):
        return float(np.linalg.norm(sum(ci * (a - p) for ci, a in zip(c, anchors))))

    def _random(self, rng, scale):
        return rng.normal(size=self.dim) * scale

    def to_chart(self, coords):
        return np.array(coords, dtype=float)

    def from_chart(self, v):
        return np.array(v, dtype=float)

    def to_json(self, coords):
        return [float(c) for c in coords]

    def describe(self):
        return {"kind": "euclidean", "dim": self.dim}


def _minkowski(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _tangent_basis(y):
    """Rows ``e1, e2``: a Minkowski-orthonormal basis of the tangent plane at ``y``."""
    out = []
    for c in (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])):
        v = c + _minkowski(c, y) * y
        for e in out:
            v = v - _minkowski(v, e) * e
        out.append(v / math.sqrt(_minkowski(v, v)))
    return np.stack(out)


def _lift(spatial):
    x1, x2 = float(spatial[0]), float(spatial[1])
    return np.array([math.sqrt(1.0 + x1 * x1 + x2 * x2), x1, x2])


@dataclass(frozen=True)
class Hyperbolic2(Space):
    """The hyperbolic plane as the upper sheet ``x0^2 - x1^2 - x2^2 = 1``.

    Points are stored on the hyperboloid with ``x0`` recomputed from the
    spatial part after every construction, which keeps the constraint at
    rounding level.  Distances use the chordal form
    ``d = 2 asinh(|x - y|_M / 2)``, equal to ``arccosh(-<x, y>_M)`` on the
    sheet but well conditioned for nearby points.
    """

    def __post_init__(self):
        object.__setattr__(self, "chart_dim", 2)

    def __repr__(self):
        return "Hyperbolic2()"

    def point(self, coords):
        c = np.array(coords, dtype=float).reshape(-1)
        if c.shape == (2,):
            return Point(self, _lift(c))
        if c.shape != (3,):
            raise DomainError("hyperboloid points take 2 spatial or 3 ambient coordinates")
        if c[0] <= 0 or abs(-_minkowski(c, c) - 1.0) > GEOM_TOL * max(1.0, c[0] ** 2):
            raise DomainError(f"{c} is not on the upper hyperboloid sheet")
        return Point(self, _lift(c[1:]))

    def _dist(self, a, b):
        diff = a - b
        chord2 = _minkowski(diff, diff)
        return 2.0 * math.asinh(math.sqrt(max(chord2, 0.0)) / 2.0)

    def _geodesic(self, a, b, t):
        if t == 0.0:
            return a
        if t == 1.0:
            return b
        d = self._dist(a, b)
        if d < 1e-12:
            return _lift((1.0 - t) * a[1:] + t * b[1:])
        s = math.sinh(d)
        return _lift((math.sinh((1.0 - t) * d) * a[1:] + math.sinh(t * d) * b[1:]) / s)

    def log(self, a, b):
        """Tangent vector at ``a`` pointing to ``b`` with Minkowski length ``d(a, b)``."""
        d = self._dist(a, b)
        if d == 0.0:
            return np.zeros(3)
        u = b + _minkowski(a, b) * a
        return (d / math.sinh(d)) * u if d > 1e-8 else u

    def exp(self, a, v):
        nv = math.sqrt(max(_minkowski(v, v), 0.0))
        if nv == 0.0:
            return a
        return _lift(math.cosh(nv) * a[1:] + (math.sinh(nv) / nv) * v[1:])

    def _slope(self, p, anchors, c):
        v = sum(ci * self.log(p, a) for ci, a in zip(c, anchors))
        return math.sqrt(max(_minkowski(v, v), 0.0))

    def _frechet_mean(self, coords, weights, init=None):
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
        pts = np.stack(coords)
        sign = np.array([-1.0, 1.0, 1.0])

        def dists(y):
            diff = pts - y
            chord2 = np.maximum((diff * diff) @ sign, 0.0)
            return 2.0 * np.arcsinh(np.sqrt(chord2) / 2.0)

        def objective(y):
            return float(w @ dists(y) ** 2)

        y = _lift(w @ pts[:, 1:]) if init is None else init
        fy = objective(y)
        for _ in range(100):
            # Newton step in an orthonormal basis of the tangent plane at y; the
            # Hessian of d(., a)^2 / 2 is 1 along the geodesic to a and
            # d coth d across it
            d = dists(y)
            ip = (pts * y) @ sign
            scale = np.where(d > 1e-8, d / np.sinh(np.maximum(d, 1e-300)), 1.0)
            logs = scale[:, None] * (pts + ip[:, None] * y)
            basis = _tangent_basis(y)
            comp = (logs * sign) @ basis.T
            g = w @ comp
            unit = comp / np.where(d > 1e-12, d, 1.0)[:, None]
            across = np.where(d > 1e-8, d / np.tanh(np.maximum(d, 1e-300)), 1.0)
            hess = np.sum(w * across) * np.eye(2) + np.einsum("i,ij,ik->jk", w * (1.0 - across), unit, unit)
            v = np.linalg.solve(hess, g) @ basis
            step = 1.0
            while True:
                y_new = self.exp(y, step * v)
                f_new = objective(y_new)
                if f_new <= fy:
                    break
                step *= 0.5
                if step < 1e-6:
                    return y
            moved = self._dist(y, y_new)
            y, fy = y_new, f_new
            if moved <= 1e-14 * (1.0 + abs(y[0])):
                break
        return y

    def _random(self, rng, scale):
        return _lift(rng.normal(size=2) * scale)

    def to_chart(self, coords):
        return np.array(coords[1:], dtype=float)

    def from_chart(self, v):
        return _lift(v)

    def to_json(self, coords):
        return [float(c) for c in coords]

    def describe(self):
        return {"kind": "hyperbolic2"}


@dataclass(frozen=True)
class MetricTree(Space):
    """A finite weighted tree viewed as a geodesic metric space.

    ``vertices`` holds vertex labels; ``edges`` holds ``(u, v, length)``
    triples with ``u, v`` indices into ``vertices``.  A point is
    ``(edge, offset)`` with the offset measured from the edge's first
    endpoint.  A vertex is always stored on its smallest incident edge so that
    each point has exactly one representation.
    """

    vertices: tuple
    edges: tuple
    _dtab: list = field(init=False, repr=False, compare=False, default=None)
    _hop: list = field(init=False, repr=False, compare=False, default=None)
    _between: dict = field(init=False, repr=False, compare=False, default=None)
    _home: list = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        nv = len(self.vertices)
        if nv < 2:
            raise DomainError("a metric tree needs at least two vertices")
        if len(set(self.vertices)) != nv:
            raise DomainError("vertex labels must be unique")
        if len(self.edges) != nv - 1:
            raise DomainError("a tree on V vertices has exactly V - 1 edges")
        adj = [[] for _ in range(nv)]
        between = {}
        for i, (u, v, length) in enumerate(self.edges):
            if not (0 <= u < nv and 0 <= v < nv) or u == v:
                raise DomainError(f"edge {i} has invalid endpoints")
            if not length > 0:
                raise DomainError(f"edge {i} has non-positive length {length}")
            adj[u].append((v, i))
            adj[v].append((u, i))
            between[(u, v)] = between[(v, u)] = i
        dtab = [[math.inf] * nv for _ in range(nv)]
        hop = [[-1] * nv for _ in range(nv)]
        for root in range(nv):
            dtab[root][root] = 0.0
            hop[root][root] = root
            queue = deque([root])
            while queue:
                a = queue.popleft()
                for b, e in adj[a]:
                    if dtab[root][b] == math.inf:
                        dtab[root][b] = dtab[root][a] + self.edges[e][2]
                        # b reaches root by first stepping to a
                        hop[b][root] = a
                        queue.append(b)
            if any(d == math.inf for d in dtab[root]):
                raise DomainError("tree is not connected")
        home = []
        for w in range(nv):
            e = min(i for _, i in adj[w])
            home.append((e, 0.0 if self.edges[e][0] == w else float(self.edges[e][2])))
        object.__setattr__(self, "_dtab", dtab)
        object.__setattr__(self, "_hop", hop)
        object.__setattr__(self, "_between", between)
        object.__setattr__(self, "_home", home)

    def __repr__(self):
        return f"MetricTree({len(self.vertices)} vertices)"

    @classmethod
    def from_edges(cls, vertices, edges):
        """Build from vertex labels and ``[label_u, label_v, length]`` triples."""
        vertices = tuple(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        try:
            triples = tuple((index[u], index[v], float(length)) for u, v, length in edges)
        except KeyError as exc:
            raise DomainError(f"edge references unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, triples)

    @classmethod
    def from_json(cls, doc):
        """Load ``{"vertices": [...], "edges": [[u, v, length], ...]}``.

        ``doc`` may be a mapping, a JSON string, or a path to a JSON file.
        """
        if isinstance(doc, str):
            text = doc
            if not text.lstrip().startswith("{"):
                with open(doc) as fh:
                    text = fh.read()
            doc = json.loads(text)
        return cls.from_edges(doc["vertices"], doc["edges"])

    @classmethod
    def spider(cls, legs=3, length=1.0):
        """Star with a hub vertex ``"hub"`` and tips ``"A"``, ``"B"``, ..."""
        tips = [chr(ord("A") + i) for i in range(legs)]
        return cls.from_edges(["hub"] + tips, [["hub", t, length] for t in tips])

    @classmethod
    def random(cls, rng, n_edges=10, low=0.5, high=2.0):
        """Random recursive tree: vertex i attaches to a uniformly chosen earlier vertex."""
        edges = []
        for i in range(1, n_edges + 1):
            edges.append((int(rng.integers(0, i)), i, float(rng.uniform(low, high))))
        return cls(tuple(range(n_edges + 1)), tuple(edges))

    # --- point construction -------------------------------------------------

    def _canon(self, e, s):
        u, v, length = self.edges[e]
        if s <= 0.0:
            return self._home[u]
        if s >= length:
            return self._home[v]
        return (e, s)

    def point(self, coords=None, *, edge=None, offset=None, vertex=None):
        if vertex is not None:
            return self.vertex(vertex)
        if coords is not None:
            if isinstance(coords, dict):
                return self.point_from_json(coords)
            edge, offset = coords
        e = int(edge)
        if not 0 <= e < len(self.edges):
            raise DomainError(f"no edge {edge}")
        length = self.edges[e][2]
        s = float(offset)
        if s < -GEOM_TOL or s > length + GEOM_TOL:
            raise DomainError(f"offset {s} outside edge {e} of length {length}")
        return Point(self, self._canon(e, min(max(s, 0.0), length)))

    def vertex(self, label):
        try:
            w = self.vertices.index(label)
        except ValueError:
            raise DomainError(f"unknown vertex {label!r}") from None
        return Point(self, self._home[w])

    def vertex_index(self, p):
        """Index of the vertex at ``p``, or ``None`` if ``p`` is interior to an edge."""
        e, s = p.coords if isinstance(p, Point) else p
        u, v, length = self.edges[e]
        if s == 0.0:
            return u
        if s == length:
            return v
        return None

    def point_from_json(self, obj):
        if isinstance(obj, dict):
            if "vertex" in obj:
                return self.vertex(obj["vertex"])
            return self.point(edge=obj["edge"], offset=obj["offset"])
        return self.point(tuple(obj))

    def to_json(self, coords):
        e, s = coords
        w = self.vertex_index(coords)
        if w is not None:
            return {"vertex": self.vertices[w]}
        return {"edge": int(e), "offset": float(s)}

    def describe(self):
        return {
            "kind": "tree",
            "vertices": list(self.vertices),
            "edges": [[self.vertices[u], self.vertices[v], length] for u, v, length in self.edges],
        }

    # --- metric -------------------------------------------------------------

    def _vdist(self, w, p):
        e, s = p
        u, v, length = self.edges[e]
        row = self._dtab[w]
        return min(s + row[u], length - s + row[v])

    def _dist(self, p, q):
        e1, s1 = p
        e2, s2 = q
        if e1 == e2:
            return abs(s1 - s2)
        u1, v1, l1 = self.edges[e1]
        u2, v2, l2 = self.edges[e2]
        du, dv = self._dtab[u1], self._dtab[v1]
        return min(
            s1 + du[u2] + s2,
            s1 + du[v2] + l2 - s2,
            l1 - s1 + dv[u2] + s2,
            l1 - s1 + dv[v2] + l2 - s2,
        )

    def _geodesic(self, p, q, t):
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        e1, s1 = p
        e2, s2 = q
        if e1 == e2:
            return self._canon(e1, s1 + t * (s2 - s1))
        u1, v1, l1 = self.edges[e1]
        u2, v2, l2 = self.edges[e2]
        # (cost, exit vertex of p's edge, dist p->exit, entry vertex of q's edge, dist entry->q)
        routes = [
            (ca + self._dtab[a][b] + cb, a, ca, b, cb)
            for a, ca in ((u1, s1), (v1, l1 - s1))
            for b, cb in ((u2, s2), (v2, l2 - s2))
        ]
        total, a, ca, b, cb = min(routes)
        target = t * total
        if target <= ca:
            return self._canon(e1, s1 - target if a == u1 else s1 + target)
        target -= ca
        cur = a
        while cur != b:
            nxt = self._hop[cur][b]
            e = self._between[(cur, nxt)]
            length = self.edges[e][2]
            if target <= length:
                return self._canon(e, target if self.edges[e][0] == cur else length - target)
            target -= length
            cur = nxt
        target = min(target, cb)
        return self._canon(e2, target if b == u2 else l2 - target)

    def _frechet_mean(self, coords, weights, init=None):
        # On each edge every d(., q)^2 is a quadratic in the offset, so the
        # weighted objective has a closed-form minimizer per edge.
        best, best_val = None, math.inf
        total = float(np.sum(weights))
        for e, (u, v, length) in enumerate(self.edges):
            shifts = []
            for q in coords:
                if q[0] == e:
                    shifts.append(-q[1])
                else:
                    du, dv = self._vdist(u, q), self._vdist(v, q)
                    # d = s + du  or  d = -(s - length - dv)
                    shifts.append(du if du <= dv else -(length + dv))
            shifts = np.asarray(shifts)
            s = min(max(-float(np.dot(weights, shifts)) / total, 0.0), length)
            cand = self._canon(e, s)
            val = sum(w * self._dist(cand, q) ** 2 for w, q in zip(weights, coords))
            if val < best_val:
                best, best_val = cand, val
        return best

    def _slope(self, p, anchors, c):
        # directions at p are the ways to its neighbouring vertices; d(., a)
        # has derivative -1 towards a and +1 in every other direction
        e, s = p
        w = self.vertex_index(p)
        if w is None:
            u, v, _ = self.edges[e]
            steps = [(self._home[u], s), (self._home[v], self.edges[e][2] - s)]
        else:
            steps = [
                (self._home[b if a == w else a], length)
                for a, b, length in self.edges
                if w in (a, b)
            ]
        best = 0.0
        for q, h in steps:
            rate = 0.0
            for ci, a in zip(c, anchors):
                d = self._dist(p, a)
                if d == 0.0:
                    continue
                towards = self._dist(q, a) < d + h - 1e-12 * (1.0 + d + h)
                rate += ci * d if towards else -ci * d
            best = max(best, rate)
        return best

    def _random(self, rng, scale=1.0):
        lengths = np.array([edge[2] for edge in self.edges])
        e = int(rng.choice(len(self.edges), p=lengths / lengths.sum()))
        return self._canon(e, float(rng.uniform(0.0, lengths[e])))


@dataclass(frozen=True)
class Product(Space):
    """The l2-product of two spaces: ``d^2 = d_left^2 + d_right^2``."""

    left: Space
    right: Space

    def __post_init__(self):
        if self.left.chart_dim is not None and self.right.chart_dim is not None:
            object.__setattr__(self, "chart_dim", self.left.chart_dim + self.right.chart_dim)

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"

    def point(self, left, right=None):
        if right is None:
            left, right = left
        lp = left if isinstance(left, Point) else self.left.point_from_json(left)
        rp = right if isinstance(right, Point) else self.right.point_from_json(right)
        self.left._check(lp)
        self.right._check(rp)
        return Point(self, (lp.coords, rp.coords))

    def components(self, p):
        return Point(self.left, p.coords[0]), Point(self.right, p.coords[1])

    def _dist(self, a, b):
        return math.hypot(self.left._dist(a[0], b[0]), self.right._dist(a[1], b[1]))

    def _geodesic(self, a, b, t):
        return (self.left._geodesic(a[0], b[0], t), self.right._geodesic(a[1], b[1], t))

    def _frechet_mean(self, coords, weights, init=None):
        return (
            self.left._frechet_mean([c[0] for c in coords], weights, None if init is None else init[0]),
            self.right._frechet_mean([c[1] for c in coords], weights, None if init is None else init[1]),
        )

    def _random(self, rng, scale):
        return (self.left._random(rng, scale), self.right._random(rng, scale))

    def _slope(self, p, anchors, c):
        # the objective splits over the factors, whose tangent cones are orthogonal
        return math.hypot(
            self.left._slope(p[0], [a[0] for a in anchors], c),
            self.right._slope(p[1], [a[1] for a in anchors], c),
        )

    def to_chart(self, coords):
        if self.chart_dim is None:
            raise UnsupportedSpace(f"{self!r} has no global chart")
        return np.concatenate([self.left.to_chart(coords[0]), self.right.to_chart(coords[1])])

    def from_chart(self, v):
        k = self.left.chart_dim
        return (self.left.from_chart(v[:k]), self.right.from_chart(v[k:]))

    def to_json(self, coords):
        return [self.left.to_json(coords[0]), self.right.to_json(coords[1])]

    def describe(self):
        return {"kind": "product", "left": self.left.describe(), "right": self.right.describe()}


# --- orthonormal tangent frames ------------------------------------------------------

_MINKOWSKI_SIGNS = np.array([-1.0, 1.0, 1.0])


def has_frames(space):
    """True for spaces with exponential maps in orthonormal frames: Euclidean, hyperbolic and their products."""
    if isinstance(space, Product):
        return has_frames(space.left) and has_frames(space.right)
    return isinstance(space, (Euclidean, Hyperbolic2))


def frame_log(space, c, q):
    """``log_c(q)`` in an orthonormal frame of the tangent space at ``c`` (raw coordinates)."""
    if isinstance(space, Euclidean):
        return q - c
    if isinstance(space, Hyperbolic2):
        return _tangent_basis(c) @ (space.log(c, q) * _MINKOWSKI_SIGNS)
    return np.concatenate((frame_log(space.left, c[0], q[0]), frame_log(space.right, c[1], q[1])))


def frame_exp(space, c, w):
    """Inverse of :func:`frame_log`: the point reached from ``c`` along frame vector ``w``."""
    if isinstance(space, Euclidean):
        return c + w
    if isinstance(space, Hyperbolic2):
        return space.exp(c, w @ _tangent_basis(c))
    k = space.left.chart_dim
    return (frame_exp(space.left, c[0], w[:k]), frame_exp(space.right, c[1], w[k:]))


def half_sqdist_jet(space, c, q):
    """Gradient and Hessian of ``d(., q)^2 / 2`` at ``c`` in the frame of :func:`frame_log`.

    The Hessian is the identity along ``log_c(q)`` and ``d coth d`` across it
    on the hyperbolic plane, the identity in Euclidean space, and block
    diagonal on products.
    """
    if isinstance(space, Euclidean):
        return c - q, np.eye(space.dim)
    if isinstance(space, Hyperbolic2):
        v = frame_log(space, c, q)
        d = math.sqrt(v @ v)
        k = d / math.tanh(d) if d > 1e-8 else 1.0 + d * d / 3.0
        if d == 0.0:
            return -v, np.eye(2)
        u = v / d
        return -v, k * np.eye(2) + (1.0 - k) * np.outer(u, u)
    g1, h1 = half_sqdist_jet(space.left, c[0], q[0])
    g2, h2 = half_sqdist_jet(space.right, c[1], q[1])
    k1, k2 = len(g1), len(g2)
    hess = np.zeros((k1 + k2, k1 + k2))
    hess[:k1, :k1], hess[k1:, k1:] = h1, h2
    return np.concatenate((g1, g2)), hess


def space_from_json(obj):
    """Build a space from its JSON description (see ``describe()``)."""
    kind = obj.get("kind")
    if kind == "euclidean":
        return Euclidean(int(obj["dim"]))
    if kind == "hyperbolic2":
        return Hyperbolic2()
    if kind == "tree":
        return MetricTree.from_json(obj)
    if kind == "product":
        return Product(space_from_json(obj["left"]), space_from_json(obj["right"]))
    raise DomainError(f"unknown space kind {kind!r}")


# --- module-level operations ---------------------------------------------------


def distance(x, y):
    """Distance between two points of the same space."""
    return x.space.distance(x, y)


def geodesic_point(x, y, t):
    """Point at parameter ``t`` on the geodesic from ``x`` to ``y``."""
    return x.space.geodesic_point(x, y, t)


@dataclass(frozen=True)
class Geodesic:
    """Constant-speed geodesic ``t -> gamma(t)`` with ``gamma(0) = a``, ``gamma(1) = b``."""

    a: Point
    b: Point

    def __post_init__(self):
        self.a.space._check(self.b)

    def __call__(self, t):
        return geodesic_point(self.a, self.b, t)

    @property
    def length(self):
        return distance(self.a, self.b)


def quadruple_residual(x, y, v, w):
    """Slack in the four-point CAT(0) inequality.

    Returns ``d(x,w)^2 + d(y,v)^2 + 2 d(x,y) d(v,w) - d(x,v)^2 - d(y,w)^2``,
    which is non-negative in every Hadamard space.
    """
    x.space._check(y, v, w)
    d = distance
    return d(x, w) ** 2 + d(y, v) ** 2 + 2.0 * d(x, y) * d(v, w) - d(x, v) ** 2 - d(y, w) ** 2


def weak_quadruple_residual(x, y, v, w):
    """Slack in the weaker form with ``d(x,y)^2 + d(v,w)^2`` as the cross term."""
    x.space._check(y, v, w)
    d = distance
    return d(x, w) ** 2 + d(y, v) ** 2 + d(x, y) ** 2 + d(v, w) ** 2 - d(x, v) ** 2 - d(y, w) ** 2


def convexity_residual(f, x, y, t):
    """``(1-t) f(x) + t f(y) - f(gamma(t))`` along the geodesic from x to y.

    ``f`` is any callable on points.  If ``f(x)`` or ``f(y)`` is infinite the
    inequality holds vacuously and ``inf`` is returned.
    """
    fx, fy = f(x), f(y)
    if math.isinf(fx) or math.isinf(fy):
        return math.inf
    if t == 0.0:
        return 0.0
    if t == 1.0:
        return 0.0
    return (1.0 - t) * fx + t * fy - f(geodesic_point(x, y, t))
