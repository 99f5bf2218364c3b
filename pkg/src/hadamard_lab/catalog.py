"""A closed catalog of proper convex lsc functions and convex sets.

Every catalog member knows its space, can be evaluated pointwise, names a
point of its domain, and (for most kinds) has an exact proximal map.  The
kinds without a closed-form prox (:class:`WeightedSum`, :class:`EnvelopeOf`)
are handled numerically by :mod:`hadamard_lab.prox`.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ImproperFunction, SpaceMismatch
from .spaces import Euclidean, Hyperbolic2, MetricTree, Point, _minkowski, distance

MEMBERSHIP_TOL = 1e-10
MAX_ENVELOPE_DEPTH = 3


def _along(x, y, t):
    """Geodesic point without the range check; ``t`` is clipped to [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    return Point(x.space, x.space._geodesic(x.coords, y.coords, t))


# --- convex sets -------------------------------------------------------------


class ConvexSet:
    """Base class for closed convex sets."""

    def project(self, x):
        raise NotImplementedError

    def contains(self, x):
        raise NotImplementedError

    def sample(self):
        raise NotImplementedError

    def distance(self, x):
        return distance(x, self.project(x))


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise DomainError(f"ball radius must be non-negative, got {self.radius}")

    @property
    def space(self):
        return self.center.space

    def contains(self, x):
        return distance(self.center, x) <= self.radius * (1 + MEMBERSHIP_TOL) + MEMBERSHIP_TOL

    def project(self, x):
        d = distance(self.center, x)
        if d <= self.radius:
            return x
        # nearest point of a ball lies on the geodesic to its center
        return _along(self.center, x, self.radius / d)

    def sample(self):
        return self.center


@dataclass(frozen=True, eq=False)
class Segment(ConvexSet):
    a: Point
    b: Point

    def __post_init__(self):
        self.a.space._check(self.b)

    @property
    def space(self):
        return self.a.space

    def contains(self, x):
        total = distance(self.a, self.b)
        return distance(self.a, x) + distance(x, self.b) <= total + MEMBERSHIP_TOL * (1 + total)

    def project(self, x):
        space = self.space
        a, b = self.a, self.b
        length = distance(a, b)
        if length == 0.0:
            return a
        if isinstance(space, Euclidean):
            ab = b.coords - a.coords
            t = float(np.dot(x.coords - a.coords, ab) / np.dot(ab, ab))
            return _along(a, b, t)
        if isinstance(space, MetricTree):
            # the branch point of a, b, x sits at the Gromov product (b|x)_a from a
            s = 0.5 * (distance(a, x) + length - distance(b, x))
            return _along(a, b, s / length)
        if isinstance(space, Hyperbolic2):
            # unit tangent at a towards b, then the closest point on the full line
            u = b.coords + _minkowski(a.coords, b.coords) * a.coords
            u = u / math.sqrt(_minkowski(u, u))
            big_a = -_minkowski(x.coords, a.coords)
            big_b = -_minkowski(x.coords, u)
            s = math.atanh(max(min(-big_b / big_a, 1.0 - 1e-16), -1.0 + 1e-16))
            return _along(a, b, s / length)
        return _along(a, b, _golden(lambda t: distance(x, _along(a, b, t)), 0.0, 1.0))

    def sample(self):
        return self.a


@dataclass(frozen=True, eq=False)
class Subtree(ConvexSet):
    """Subtree of a :class:`MetricTree` spanned by a connected vertex set."""

    space: MetricTree
    vertices: frozenset

    def __post_init__(self):
        tree = self.space
        if not isinstance(tree, MetricTree):
            raise DomainError("Subtree needs a MetricTree space")
        idx = frozenset(tree.vertices.index(v) if v in tree.vertices else -1 for v in self.vertices)
        if not idx or -1 in idx:
            raise ImproperFunction("subtree vertex set is empty or names unknown vertices")
        object.__setattr__(self, "_idx", idx)
        start = next(iter(idx))
        seen, stack = {start}, [start]
        while stack:
            a = stack.pop()
            for u, v, _ in tree.edges:
                for p, q in ((u, v), (v, u)):
                    if p == a and q in idx and q not in seen:
                        seen.add(q)
                        stack.append(q)
        if seen != idx:
            raise DomainError("subtree vertex set is not connected")

    def contains(self, x):
        e, s = x.coords
        u, v, length = self.space.edges[e]
        if u in self._idx and v in self._idx:
            return True
        return (s == 0.0 and u in self._idx) or (s == length and v in self._idx)

    def project(self, x):
        if self.contains(x):
            return x
        tree = self.space
        w = min(self._idx, key=lambda i: tree._vdist(i, x.coords))
        return Point(tree, tree._home[w])

    def sample(self):
        return Point(self.space, self.space._home[min(self._idx)])


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """``{y : <normal, y> <= offset}`` in a Euclidean space."""

    space: Euclidean
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        if not isinstance(self.space, Euclidean):
            raise DomainError("Halfspace is only defined on Euclidean spaces")
        n = np.asarray(self.normal, dtype=float).reshape(-1)
        if n.shape != (self.space.dim,) or not np.any(n):
            raise DomainError("halfspace normal must be a nonzero vector of the space dimension")
        object.__setattr__(self, "normal", n)

    def contains(self, x):
        return float(np.dot(self.normal, x.coords)) <= self.offset + MEMBERSHIP_TOL * (1 + abs(self.offset))

    def project(self, x):
        excess = float(np.dot(self.normal, x.coords)) - self.offset
        if excess <= 0:
            return x
        return Point(self.space, x.coords - excess / float(np.dot(self.normal, self.normal)) * self.normal)

    def sample(self):
        return Point(self.space, self.offset / float(np.dot(self.normal, self.normal)) * self.normal)


@dataclass(frozen=True, eq=False)
class WholeSpace(ConvexSet):
    space: object

    def contains(self, x):
        return True

    def project(self, x):
        return x

    def sample(self):
        return self.space.random_point(np.random.default_rng(0), 0.0)


def _golden(fun, lo, hi, iters=80):
    """Minimize a unimodal scalar function on [lo, hi]."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def project(C, x):
    """Metric projection of ``x`` onto the closed convex set ``C``."""
    if C is None:
        raise ImproperFunction("cannot project onto an empty set")
    C.space._check(x)
    return C.project(x)


# --- convex functions --------------------------------------------------------


class ConvexFunction:
    """Base class for catalog functions.

    Subclasses provide ``space``, ``__call__``, ``exact_prox`` and
    ``dom_sample``; ``finite`` tells whether the function is real valued
    everywhere.
    """

    finite = True
    closed_form = True

    def __call__(self, x):
        raise NotImplementedError

    def exact_prox(self, x, lam):
        return None

    def dom_sample(self):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SquaredDistance(ConvexFunction):
    """``(w / 2) d(., p)^2``."""

    p: Point
    w: float = 1.0

    def __post_init__(self):
        if not self.w > 0:
            raise DomainError("SquaredDistance weight must be positive")

    @property
    def space(self):
        return self.p.space

    def __call__(self, x):
        return 0.5 * self.w * distance(x, self.p) ** 2

    def exact_prox(self, x, lam):
        wl = self.w * lam
        return _along(x, self.p, wl / (1.0 + wl))

    def dom_sample(self):
        return self.p


@dataclass(frozen=True, eq=False)
class DistanceTo(ConvexFunction):
    """``d(., p)``."""

    p: Point

    @property
    def space(self):
        return self.p.space

    def __call__(self, x):
        return distance(x, self.p)

    def exact_prox(self, x, lam):
        d = distance(x, self.p)
        if d <= lam:
            return self.p
        return _along(x, self.p, lam / d)

    def dom_sample(self):
        return self.p


@dataclass(frozen=True, eq=False)
class Indicator(ConvexFunction):
    """``0`` on ``C`` and ``+inf`` elsewhere."""

    C: ConvexSet

    def __post_init__(self):
        if self.C is None:
            raise ImproperFunction("indicator of an empty set is not proper")

    @property
    def space(self):
        return self.C.space

    @property
    def finite(self):
        return isinstance(self.C, WholeSpace)

    def __call__(self, x):
        self.space._check(x)
        return 0.0 if self.C.contains(x) else math.inf

    def exact_prox(self, x, lam):
        return project(self.C, x)

    def dom_sample(self):
        return self.C.sample()


@dataclass(frozen=True, eq=False)
class DistanceToSet(ConvexFunction):
    """``d(., C)``."""

    C: ConvexSet

    @property
    def space(self):
        return self.C.space

    def __call__(self, x):
        return distance(x, project(self.C, x))

    def exact_prox(self, x, lam):
        q = project(self.C, x)
        d = distance(x, q)
        if d <= lam:
            return q
        return _along(x, q, lam / d)

    def dom_sample(self):
        return self.C.sample()


@dataclass(frozen=True, eq=False)
class Shifted(ConvexFunction):
    """``f + c``."""

    f: ConvexFunction
    c: float

    @property
    def space(self):
        return self.f.space

    @property
    def finite(self):
        return self.f.finite

    @property
    def closed_form(self):
        return self.f.closed_form

    def __call__(self, x):
        return self.f(x) + self.c

    def exact_prox(self, x, lam):
        return self.f.exact_prox(x, lam)

    def dom_sample(self):
        return self.f.dom_sample()


@dataclass(frozen=True, eq=False)
class WeightedSum(ConvexFunction):
    """``sum_i w_i f_i`` over finite-valued catalog functions."""

    terms: tuple
    closed_form = False

    def __post_init__(self):
        terms = tuple((float(w), f) for w, f in self.terms)
        if not terms:
            raise ImproperFunction("an empty weighted sum is not a catalog function")
        space = terms[0][1].space
        for w, f in terms:
            if not w > 0:
                raise DomainError("weighted sum weights must be positive")
            if f.space != space:
                raise SpaceMismatch("weighted sum terms live in different spaces")
            if not f.finite:
                raise DomainError("weighted sum terms must be finite valued")
        object.__setattr__(self, "terms", terms)

    @property
    def space(self):
        return self.terms[0][1].space

    def __call__(self, x):
        return sum(w * f(x) for w, f in self.terms)

    def dom_sample(self):
        return self.terms[0][1].dom_sample()


@dataclass(frozen=True, eq=False)
class EnvelopeOf(ConvexFunction):
    """The Moreau envelope ``f_mu`` as a function in its own right."""

    f: ConvexFunction
    mu: float
    closed_form = False

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("envelope parameter must be positive")
        if envelope_depth(self) > MAX_ENVELOPE_DEPTH:
            raise DomainError(f"envelope nesting deeper than {MAX_ENVELOPE_DEPTH}")

    @property
    def space(self):
        return self.f.space

    def __call__(self, x):
        from .prox import envelope

        return envelope(self.f, x, self.mu)

    def dom_sample(self):
        return self.f.dom_sample()


def envelope_depth(f):
    if isinstance(f, EnvelopeOf):
        return 1 + envelope_depth(f.f)
    if isinstance(f, Shifted):
        return envelope_depth(f.f)
    if isinstance(f, WeightedSum):
        return max(envelope_depth(g) for _, g in f.terms)
    return 0


def evaluate(f, x):
    """``f(x)`` in the extended reals; ``inf`` outside the domain."""
    f.space._check(x)
    return f(x)


def exact_prox(f, x, lam):
    """Closed-form proximal point, or ``None`` when the kind needs a numerical solver."""
    if not lam > 0:
        raise DomainError(f"prox parameter must be positive, got {lam}")
    f.space._check(x)
    return f.exact_prox(x, lam)


def dom_sample(f):
    """A point at which ``f`` is finite."""
    return f.dom_sample()


@dataclass(frozen=True)
class FunctionSequence:
    """An indexed family ``n -> f_n`` (``n >= 1``) with an optional declared limit."""

    generator: Callable[[int], ConvexFunction]
    limit: Optional[ConvexFunction] = None
    name: str = "f_n"

    def __call__(self, n):
        if n < 1:
            raise DomainError("sequence indices start at 1")
        f = self.generator(n)
        ref = self.limit if self.limit is not None else self.generator(1)
        if f.space != ref.space:
            raise SpaceMismatch(f"{self.name}({n}) lives in a different space")
        return f

    @property
    def space(self):
        return (self.limit if self.limit is not None else self.generator(1)).space

    @classmethod
    def constant(cls, f, name="constant"):
        return cls(lambda n: f, f, name)


@dataclass(frozen=True)
class SetSequence:
    """An indexed family ``n -> C_n`` of nonempty closed convex sets."""

    generator: Callable[[int], ConvexSet]
    name: str = "C_n"

    def __call__(self, n):
        C = self.generator(n)
        if C is None:
            raise ImproperFunction(f"{self.name}({n}) is empty")
        return C

    def indicators(self, limit=None):
        return FunctionSequence(lambda n: Indicator(self(n)), None if limit is None else Indicator(limit), self.name)
