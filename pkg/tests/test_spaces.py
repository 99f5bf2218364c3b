import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hadamard_lab import (
    DomainError,
    Euclidean,
    Hyperbolic2,
    MetricTree,
    Product,
    SpaceMismatch,
    convexity_residual,
    distance,
    geodesic_point,
    quadruple_residual,
    weak_quadruple_residual,
)
from hadamard_lab.catalog import DistanceTo
from hadamard_lab.spaces import space_from_json

from conftest import SPACES, seeds

GEOM_TOL = 1e-9


def _draw(space, seed, count):
    rng = np.random.default_rng(seed)
    return [space.random_point(rng) for _ in range(count)]


# --- oracles ------------------------------------------------------------------------------


def test_euclidean_distance_matches_norm():
    E = Euclidean(3)
    x, y = E.point([1.0, 2.0, 2.0]), E.point([0.0, 0.0, 0.0])
    assert distance(x, y) == pytest.approx(3.0)


def test_hyperbolic_distance_matches_arccosh_formula():
    H = Hyperbolic2()
    rng = np.random.default_rng(1)
    for _ in range(50):
        x, y = H.random_point(rng), H.random_point(rng)
        a, b = x.coords, y.coords
        inner = a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
        assert distance(x, y) == pytest.approx(math.acosh(max(inner, 1.0)), abs=1e-9)


def test_hyperbolic_origin_to_lifted_point():
    H = Hyperbolic2()
    o, p = H.point([0.0, 0.0]), H.point([math.sinh(1.5), 0.0])
    assert distance(o, p) == pytest.approx(1.5, abs=1e-12)


def test_spider_distances():
    T = MetricTree.spider(3, 1.0)
    A, B, hub = T.vertex("A"), T.vertex("B"), T.vertex("hub")
    assert distance(A, B) == pytest.approx(2.0)
    assert distance(A, hub) == pytest.approx(1.0)
    mid = geodesic_point(A, B, 0.5)
    assert distance(mid, hub) == pytest.approx(0.0, abs=1e-15)


def test_tree_vertex_has_one_canonical_form():
    T = MetricTree.spider(3, 1.0)
    e = [i for i, (u, v, _) in enumerate(T.edges) if T.vertices[v] == "B"][0]
    assert T.point(edge=e, offset=0.0).coords == T.vertex("hub").coords


def test_product_distance_is_l2_of_factors():
    P = Product(Euclidean(1), Hyperbolic2())
    H = P.right
    x = P.point(Euclidean(1).point([0.0]), H.point([0.0, 0.0]))
    y = P.point(Euclidean(1).point([3.0]), H.point([math.sinh(4.0), 0.0]))
    assert distance(x, y) == pytest.approx(5.0, abs=1e-12)


def test_euclidean_frechet_mean_is_weighted_average():
    E = Euclidean(2)
    pts = [E.point([0.0, 0.0]), E.point([2.0, 0.0]), E.point([0.0, 4.0])]
    m = E.frechet_mean(pts, [1.0, 1.0, 2.0])
    assert np.allclose(m.coords, [0.5, 2.0])


def test_tree_frechet_mean_on_a_path():
    T = MetricTree.from_edges(["a", "b", "c"], [["a", "b", 1.0], ["b", "c", 1.0]])
    m = T.frechet_mean([T.vertex("a"), T.vertex("c")], [3.0, 1.0])
    assert distance(m, T.vertex("a")) == pytest.approx(0.5)


@pytest.mark.parametrize("name", sorted(SPACES))
def test_frechet_mean_has_zero_descent_slope(name):
    space = SPACES[name]
    rng = np.random.default_rng(3)
    pts = [space.random_point(rng) for _ in range(5)]
    w = rng.uniform(0.2, 2.0, size=5)
    m = space.frechet_mean(pts, w)
    assert space.descent_slope(m, pts, w) < 1e-7
    # any other point has a strictly positive slope
    assert space.descent_slope(pts[0], pts, w) > 1e-3


def test_space_json_round_trip():
    for space in SPACES.values():
        assert space_from_json(space.describe()) == space


# --- error paths ---------------------------------------------------------------------------


def test_point_off_the_hyperboloid_is_rejected():
    with pytest.raises(DomainError):
        Hyperbolic2().point([1.0, 1.0, 1.0])


def test_wrong_dimension_is_rejected():
    with pytest.raises(DomainError):
        Euclidean(2).point([1.0, 2.0, 3.0])


def test_tree_offset_outside_edge_is_rejected():
    T = MetricTree.spider(3, 1.0)
    with pytest.raises(DomainError):
        T.point(edge=0, offset=2.0)


def test_disconnected_or_cyclic_tree_is_rejected():
    with pytest.raises(DomainError):
        MetricTree.from_edges(["a", "b", "c"], [["a", "b", 1.0], ["b", "a", 1.0]])


def test_mixing_spaces_raises():
    with pytest.raises(SpaceMismatch):
        distance(Euclidean(2).point([0.0, 0.0]), Hyperbolic2().point([0.0, 0.0]))


def test_geodesic_parameter_outside_unit_interval():
    E = Euclidean(1)
    with pytest.raises(DomainError):
        geodesic_point(E.point([0.0]), E.point([1.0]), 1.5)


def test_frechet_mean_needs_positive_weights():
    E = Euclidean(1)
    with pytest.raises(DomainError):
        E.frechet_mean([E.point([0.0])], [0.0])


# --- properties ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_quadruple_inequality(name, seed):
    x, y, v, w = _draw(SPACES[name], seed, 4)
    assert quadruple_residual(x, y, v, w) >= -GEOM_TOL


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_weak_quadruple_inequality(name, seed):
    x, y, v, w = _draw(SPACES[name], seed, 4)
    assert weak_quadruple_residual(x, y, v, w) >= -GEOM_TOL


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), s=st.floats(0.0, 1.0), t=st.floats(0.0, 1.0))
def test_geodesics_have_constant_speed(name, seed, s, t):
    x, y = _draw(SPACES[name], seed, 2)
    d = distance(x, y)
    gap = distance(geodesic_point(x, y, s), geodesic_point(x, y, t)) - abs(s - t) * d
    assert abs(gap) <= GEOM_TOL * max(1.0, d)


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_geodesic_endpoints(name, seed):
    x, y = _draw(SPACES[name], seed, 2)
    assert distance(geodesic_point(x, y, 0.0), x) == 0.0
    assert distance(geodesic_point(x, y, 1.0), y) <= GEOM_TOL


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), t=st.floats(0.0, 1.0))
def test_distance_function_is_geodesically_convex(name, seed, t):
    x, y, p = _draw(SPACES[name], seed, 3)
    assert convexity_residual(DistanceTo(p), x, y, t) >= -GEOM_TOL


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds())
def test_triangle_inequality(name, seed):
    x, y, z = _draw(SPACES[name], seed, 3)
    assert distance(x, z) <= distance(x, y) + distance(y, z) + GEOM_TOL
