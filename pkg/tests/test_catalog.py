import math

import numpy as np
import pytest
from hypothesis import given

from hadamard_lab import (
    Ball,
    DistanceTo,
    DistanceToSet,
    DomainError,
    Euclidean,
    EnvelopeOf,
    Halfspace,
    Hyperbolic2,
    ImproperFunction,
    Indicator,
    MetricTree,
    Segment,
    Shifted,
    SpaceMismatch,
    SquaredDistance,
    Subtree,
    WeightedSum,
    WholeSpace,
    distance,
    project,
)
from hadamard_lab.catalog import FunctionSequence, envelope_depth, exact_prox

from conftest import SPACES, seeds

E2 = Euclidean(2)


def test_ball_projection_oracle():
    C = Ball(E2.point([1.0, 0.0]), 1.0)
    p = project(C, E2.point([4.0, 4.0]))
    assert np.allclose(p.coords, [1.6, 0.8])
    inside = E2.point([1.5, 0.2])
    assert project(C, inside) is inside


def test_halfspace_projection_oracle():
    C = Halfspace(E2, [0.0, 2.0], 2.0)
    assert np.allclose(project(C, E2.point([3.0, 5.0])).coords, [3.0, 1.0])


def test_segment_projection_oracle_euclidean():
    S = Segment(E2.point([0.0, 0.0]), E2.point([2.0, 0.0]))
    assert np.allclose(project(S, E2.point([1.0, 3.0])).coords, [1.0, 0.0])
    assert np.allclose(project(S, E2.point([5.0, 1.0])).coords, [2.0, 0.0])


def test_segment_projection_on_hyperbolic_line_is_closest():
    H = Hyperbolic2()
    rng = np.random.default_rng(4)
    for _ in range(20):
        a, b, x = (H.random_point(rng) for _ in range(3))
        S = Segment(a, b)
        p = project(S, x)
        ts = np.linspace(0.0, 1.0, 2001)
        brute = min(distance(x, H.geodesic_point(a, b, t)) for t in ts)
        assert distance(x, p) <= brute + 1e-9


def test_subtree_projection_on_spider():
    T = MetricTree.spider(3, 1.0)
    C = Subtree(T, frozenset({"hub", "A"}))
    tip = T.vertex("B")
    assert distance(project(C, tip), T.vertex("hub")) == 0.0
    mid_a = T.geodesic_point(T.vertex("hub"), T.vertex("A"), 0.5)
    assert C.contains(mid_a)


def test_subtree_must_be_connected():
    T = MetricTree.from_edges(["a", "b", "c"], [["a", "b", 1.0], ["b", "c", 1.0]])
    with pytest.raises(DomainError):
        Subtree(T, frozenset({"a", "c"}))


def test_halfspace_rejects_non_euclidean():
    with pytest.raises(DomainError):
        Halfspace(Hyperbolic2(), [1.0, 0.0], 0.0)


def test_indicator_values():
    C = Ball(E2.point([0.0, 0.0]), 1.0)
    f = Indicator(C)
    assert f(E2.point([0.5, 0.5])) == 0.0
    assert f(E2.point([2.0, 0.0])) == math.inf


def test_indicator_of_empty_set_is_improper():
    with pytest.raises(ImproperFunction):
        Indicator(None)


def test_squared_distance_prox_closed_form():
    p, x = E2.point([0.0, 0.0]), E2.point([3.0, 0.0])
    y = exact_prox(SquaredDistance(p, 2.0), x, 0.5)
    # minimize y^2 + (3 - y)^2: y = 3 * (w lam) / (1 + w lam) from x towards p
    assert np.allclose(y.coords, [1.5, 0.0])


def test_distance_prox_shrinks_by_lambda():
    p, x = E2.point([0.0, 0.0]), E2.point([3.0, 4.0])
    assert np.allclose(exact_prox(DistanceTo(p), x, 1.0).coords, [2.4, 3.2])
    assert exact_prox(DistanceTo(p), x, 6.0) is p


def test_distance_to_set_prox():
    C = Ball(E2.point([0.0, 0.0]), 1.0)
    y = exact_prox(DistanceToSet(C), E2.point([4.0, 0.0]), 1.0)
    assert np.allclose(y.coords, [3.0, 0.0])


def test_shifted_and_weighted_sum_values():
    p = E2.point([1.0, 0.0])
    x = E2.point([0.0, 0.0])
    assert Shifted(DistanceTo(p), 2.5)(x) == pytest.approx(3.5)
    f = WeightedSum([(2.0, DistanceTo(p)), (1.0, SquaredDistance(p))])
    assert f(x) == pytest.approx(2.5)


def test_weighted_sum_rejects_indicators_and_mixed_spaces():
    with pytest.raises(DomainError):
        WeightedSum([(1.0, Indicator(Ball(E2.point([0.0, 0.0]), 1.0)))])
    with pytest.raises(SpaceMismatch):
        WeightedSum([(1.0, DistanceTo(E2.point([0.0, 0.0]))), (1.0, DistanceTo(Hyperbolic2().point([0.0, 0.0])))])
    with pytest.raises(DomainError):
        WeightedSum([(0.0, DistanceTo(E2.point([0.0, 0.0])))])


def test_envelope_of_indicator_is_half_squared_distance_over_mu():
    C = Ball(E2.point([0.0, 0.0]), 1.0)
    g = EnvelopeOf(Indicator(C), 0.5)
    assert g(E2.point([3.0, 0.0])) == pytest.approx(4.0)


def test_envelope_nesting_depth_is_capped():
    f = DistanceTo(E2.point([0.0, 0.0]))
    for _ in range(3):
        f = EnvelopeOf(f, 1.0)
    assert envelope_depth(f) == 3
    with pytest.raises(DomainError):
        EnvelopeOf(f, 1.0)


def test_function_sequence_checks_indices_and_spaces():
    seq = FunctionSequence(lambda n: DistanceTo(E2.point([1.0 / n, 0.0])))
    with pytest.raises(DomainError):
        seq(0)
    bad = FunctionSequence(
        lambda n: DistanceTo(E2.point([0.0, 0.0]) if n == 1 else Hyperbolic2().point([0.0, 0.0]))
    )
    with pytest.raises(SpaceMismatch):
        bad(2)


def test_whole_space_indicator_is_finite():
    assert Indicator(WholeSpace(E2)).finite


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_projection_is_nonexpansive_onto_balls(name, seed):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    C = Ball(space.random_point(rng), float(rng.uniform(0.1, 1.0)))
    x, y = space.random_point(rng), space.random_point(rng)
    assert distance(project(C, x), project(C, y)) <= distance(x, y) + 1e-9


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_projection_is_closest_point_of_ball(name, seed):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    C = Ball(space.random_point(rng), float(rng.uniform(0.1, 1.0)))
    x = space.random_point(rng)
    p = project(C, x)
    assert C.contains(p)
    for _ in range(10):
        z = project(C, space.random_point(rng))
        assert distance(x, p) <= distance(x, z) + 1e-9
