"""Named sequences with known limits, shared by suites, scenarios and tests."""

import numpy as np

from .catalog import Ball, FunctionSequence, Indicator, SetSequence, SquaredDistance
from .convergence import PointSequence
from .metric import LambdaGrid, ProbeGrid
from .spaces import Euclidean, MetricTree

R1 = Euclidean(1)
R2 = Euclidean(2)


def shrinking_shifted_balls():
    """``C_n = B((1/n, 0), 1 + 1/n)`` decreasing to ``C = B(0, 1)`` in the plane."""
    seq = SetSequence(lambda n: Ball(R2.point([1.0 / n, 0.0]), 1.0 + 1.0 / n), "shifted_balls")
    return seq, Ball(R2.point([0.0, 0.0]), 1.0)


def fixed_set():
    C = Ball(R2.point([0.25, -0.5]), 0.75)
    return SetSequence(lambda n: C, "fixed_ball"), C


def escaping_points():
    """``C_n = {n}`` on the line with declared limit ``{0}``."""
    return SetSequence(lambda n: Ball(R1.point([float(n)]), 0.0), "escaping"), Ball(R1.point([0.0]), 0.0)


def alternating_balls():
    """``C_n = B((-1)^n e_1, 1/2)`` against the declared limit ``B(0, 1/2)``."""
    seq = SetSequence(lambda n: Ball(R2.point([(-1.0) ** n, 0.0]), 0.5), "alternating_balls")
    return seq, Ball(R2.point([0.0, 0.0]), 0.5)


def moving_quadratics():
    """``f_n = d(., 1/n)^2 / 2`` on the line, limit ``d(., 0)^2 / 2``."""
    limit = SquaredDistance(R1.point([0.0]))
    return FunctionSequence(lambda n: SquaredDistance(R1.point([1.0 / n])), limit, "moving_quadratics")


def alternating_quadratics():
    return FunctionSequence(lambda n: SquaredDistance(R1.point([(-1.0) ** n])), None, "alternating_quadratics")


def plane_probes(spacing=0.5, half_width=1.5):
    """Lattice on ``[-w, w]^2``; reaches outside the unit ball so set limits are tested off the domain."""
    return ProbeGrid.lattice(R2, -half_width, half_width, spacing)


def line_probes(spacing=0.25, half_width=1.0):
    return ProbeGrid.lattice(R1, -half_width, half_width, spacing)


def default_lambdas():
    return LambdaGrid.default()


def spider_alternation(start=10, length=16):
    """Spider with three unit legs; ``x_n`` is tip A for even and tip B for odd ``n``."""
    tree = MetricTree.spider(3, 1.0)
    gen = lambda n: tree.vertex("A" if n % 2 == 0 else "B")
    return tree, PointSequence.contiguous(gen, start, length, "spider_alternation")


def line_alternation(start=10, length=16):
    return PointSequence.contiguous(lambda n: R1.point([(-1.0) ** n]), start, length, "line_alternation")


def converging_points(space, target, rng, start=10 ** 7, length=16):
    """``x_n`` on the geodesic from ``target`` to a random point at parameter ``1/n``."""
    from .catalog import _along

    z = space.random_point(rng)
    return PointSequence.contiguous(lambda n: _along(target, z, 1.0 / n), start, length, "converging")


def set_fixtures():
    """The three set-convergence fixtures with the expected agreement outcome."""
    return {
        "shifted_balls": (*shrinking_shifted_balls(), plane_probes(), True),
        "fixed_ball": (*fixed_set(), plane_probes(), True),
        "escaping": (*escaping_points(), ProbeGrid(tuple(R1.point([a]) for a in np.arange(-1.0, 2.01, 0.5))), False),
    }


def indicator_sequence(set_seq, limit):
    return set_seq.indicators(limit), Indicator(limit)
