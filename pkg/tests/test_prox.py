import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hadamard_lab import (
    Ball,
    DistanceTo,
    DomainError,
    Euclidean,
    EnvelopeOf,
    Hyperbolic2,
    Indicator,
    MetricTree,
    NoUniformBound,
    Product,
    Shifted,
    SquaredDistance,
    WeightedSum,
    distance,
    envelope,
    estimate_minorization,
    prox,
    resolvent_inequality_residual,
    semigroup_residual,
    solver_tolerance,
)
from hadamard_lab.catalog import FunctionSequence
from hadamard_lab.prox import (
    default_tol,
    envelope_monotone_in_lambda,
    prox_displacement_monotone,
)
from hadamard_lab.suites import huber_oracle_error, random_function

from conftest import SPACES, seeds

R1 = Euclidean(1)
E2 = Euclidean(2)
H = Hyperbolic2()


def _objective(f, x, lam, y):
    return f(y) + distance(x, y) ** 2 / (2.0 * lam)


# --- oracles ------------------------------------------------------------------------------


def test_huber_envelope_of_absolute_value():
    f = DistanceTo(R1.point([0.0]))
    for x, lam in [(0.3, 1.0), (2.0, 0.5), (-4.0, 2.0)]:
        huber = x * x / (2 * lam) if abs(x) <= lam else abs(x) - lam / 2
        assert envelope(f, R1.point([x]), lam) == pytest.approx(huber, abs=1e-14)


def test_huber_grid_oracle_at_fine_resolution():
    assert huber_oracle_error(probes=12) <= 1e-5


def test_indicator_envelope_at_half_is_squared_distance():
    C = Ball(E2.point([0.0, 0.0]), 1.0)
    x = E2.point([2.0, 2.0])
    assert envelope(Indicator(C), x, 0.5) == pytest.approx((math.sqrt(8) - 1) ** 2)


def test_weighted_sum_of_quadratics_in_the_plane():
    # (1/2)|y - a|^2 + (1/2)|y - b|^2 + |y - x|^2 / (2 lam) has a closed-form minimizer
    a, b, x = E2.point([1.0, 0.0]), E2.point([0.0, 1.0]), E2.point([2.0, 2.0])
    f = WeightedSum([(1.0, SquaredDistance(a)), (1.0, SquaredDistance(b))])
    lam = 0.5
    expect = (a.coords + b.coords + x.coords / lam) / (2 + 1 / lam)
    r = prox(f, x, lam)
    assert np.allclose(r.minimizer.coords, expect, atol=1e-7)


def test_mm_and_cppa_agree():
    rng = np.random.default_rng(8)
    f = random_function(E2, rng, "sum")
    x = E2.random_point(rng)
    a = prox(f, x, 0.7)
    b = prox(f, x, 0.7, method="cppa", max_iter=200000)
    assert a.value <= b.value + 1e-9
    assert b.value - a.value <= 1e-5


def test_tree_prox_matches_brute_force_along_edges():
    T = MetricTree.random(np.random.default_rng(2), 6)
    rng = np.random.default_rng(9)
    for _ in range(10):
        f = random_function(T, rng, "sum")
        x = T.random_point(rng)
        r = prox(f, x, 0.4)
        brute = min(
            _objective(f, x, 0.4, T.point(edge=e, offset=s))
            for e, (_, _, length) in enumerate(T.edges)
            for s in np.linspace(0.0, length, 401)
        )
        assert r.value <= brute + 1e-12


def test_prox_rejects_nonpositive_parameter():
    with pytest.raises(DomainError):
        prox(DistanceTo(E2.point([0.0, 0.0])), E2.point([1.0, 0.0]), 0.0)


def test_solver_tolerance_override():
    assert default_tol(H) == 1e-6
    with solver_tolerance(1e-3):
        assert default_tol(H) == 1e-3
        assert default_tol(E2) == 1e-3
    assert default_tol(E2) == 1e-8


def test_shifted_prox_adds_constant():
    p, x = E2.point([0.0, 0.0]), E2.point([1.0, 1.0])
    base = prox(SquaredDistance(p), x, 1.0)
    shifted = prox(Shifted(SquaredDistance(p), -3.0), x, 1.0)
    assert shifted.value == pytest.approx(base.value - 3.0)


# --- regressions for solver corner cases ---------------------------------------------------


def test_minimizer_at_a_distance_anchor_is_found_exactly():
    # the prox point sits on the kink of the distance term
    f = WeightedSum(
        [
            (1.080400606407135, SquaredDistance(H.point([1.2194378319358528, 0.5240624767662366, -0.4608547996951433]))),
            (0.5783386510335087, SquaredDistance(H.point([2.6058044126165654, -0.1726115686359845, -2.400087890720877]))),
            (1.8205714996931532, DistanceTo(H.point([1.1499076306891698, -0.31612511139593524, -0.47154265243145066]))),
        ]
    )
    x = H.point([1.1521964112434082, 0.5166052912572102, -0.24632406120239703])
    r = prox(f, x, 1.1329429021685786)
    assert r.iterations < 100
    assert distance(r.minimizer, f.terms[2][1].p) == 0.0


def test_nearly_degenerate_kink_converges():
    f = WeightedSum(
        [
            (0.32247494791094816, SquaredDistance(E2.point([0.004995407943487147, -0.45856037142270734]))),
            (1.0008234747400713, SquaredDistance(E2.point([-0.3063606825351341, -0.16902884490035067]))),
            (1.2173562559061055, DistanceTo(E2.point([-0.39263432916798796, 0.4595503116041143]))),
        ]
    )
    x = E2.point([0.011284542702358638, 0.3360566958313506])
    r = prox(f, x, 1.0002443579157911)
    assert r.iterations < 1000
    rng = np.random.default_rng(0)
    for _ in range(200):
        z = E2.point(r.minimizer.coords + rng.normal(size=2) * 1e-4)
        assert r.value <= _objective(f, x, 1.0002443579157911, z) + 1e-12


def test_nested_envelope_after_anchor_warm_start():
    f = WeightedSum(
        [
            (0.27702934376809224, SquaredDistance(H.point([1.434943514070986, -1.0272740178929582, -0.06140831162349016]))),
            (1.791014480175698, DistanceTo(H.point([1.1634906047474751, -0.5256576874112765, 0.2781984597388599]))),
            (1.6032895688298063, DistanceTo(H.point([1.0397282613399543, 0.08701536044838659, -0.27104092767521615]))),
        ]
    )
    x = H.point([1.890292114626454, 0.8307829386949172, -1.3722259243260158])
    assert semigroup_residual(f, x, 1.8771494319833348, 0.7673830686693054) <= 1e-5


def test_kink_step_does_not_stop_on_a_non_optimal_anchor():
    # the kink step would reach the anchor, whose slope test fails there
    a = H.point([-0.02277132698252627, -0.06357377847168744])
    p = H.point([0.4897233582549706, 1.3957883373911508])
    f = WeightedSum([(0.9108001661797673, SquaredDistance(a)), (1.3769102015469663, DistanceTo(p))])
    x = H.point([-0.79406564, 1.46433211])
    r = prox(f, x, 2.8918063077895346)
    assert distance(r.minimizer, p) > 1e-3
    assert semigroup_residual(f, x, 1.295653724933667, 1.5961525828558678) <= 1e-5


def test_newton_escapes_the_kink_of_a_nearby_non_optimal_anchor():
    # the minimizer sits a few thousandths from the anchor; plain Newton steps were drawn into the kink
    P = Product(Euclidean(1), H)
    pt = lambda a, b, c: P.point(Euclidean(1).point([a]), H.point([b, c]))
    anchor = pt(0.55181092, 0.71440495, -1.41173184)
    f = WeightedSum(
        [
            (1.87056552896494, DistanceTo(anchor)),
            (0.4600027522321407, SquaredDistance(pt(-0.76753464, 0.31973032, -1.02504066))),
            (0.5339160121811095, SquaredDistance(pt(0.21572544, 0.20051891, 1.10142253))),
        ]
    )
    x, lam = pt(0.19543717, 0.19335251, -1.09791692), 1.2789483305319402
    r = prox(f, x, lam)
    ref = prox(f, x, lam, method="mm")
    assert r.iterations < 30
    assert 1e-3 < distance(r.minimizer, anchor) < 0.05
    assert r.value <= ref.value + 1e-12
    assert r.certified_gap <= 1e-12


def test_tree_resolvent_at_a_branch_vertex():
    T = MetricTree.spider(3, 1.0)
    P = lambda e, s: T.point(edge=e, offset=s)
    f = WeightedSum(
        [
            (0.3507423335904326, DistanceTo(P(1, 0.008029175428835633))),
            (0.7968845508205746, DistanceTo(P(0, 0.4042031341453126))),
            (0.4658200492245255, DistanceTo(P(2, 0.06863086233364557))),
        ]
    )
    x, y, lam = P(2, 0.6715775748250155), P(2, 0.9099767631982559), 0.08796756834968097
    r = prox(f, x, lam)
    # closed form: the minimizer stays on x's edge, shifted by lam times the total weight
    assert r.minimizer.coords[1] == pytest.approx(0.6715775748250155 - lam * sum(w for w, _ in f.terms), abs=1e-14)
    assert resolvent_inequality_residual(f, x, y, lam, r) >= -1e-12


# --- minorization -------------------------------------------------------------------------


def test_minorization_constant_for_moving_quadratics():
    seq = FunctionSequence(lambda n: SquaredDistance(R1.point([1.0 / n])))
    b = estimate_minorization(seq, R1.point([0.0]), 1.0, samples=[R1.point([v]) for v in (-3.0, 0.0, 5.0)])
    assert b.r == pytest.approx(max(0.5, abs(b.envelope_value) + 1.0))
    assert b(R1.point([2.0])) < 0


def test_escaping_points_have_no_uniform_bound():
    seq = FunctionSequence(lambda n: Indicator(Ball(R1.point([float(n)]), 0.0)))
    with pytest.raises(NoUniformBound):
        estimate_minorization(seq, R1.point([0.0]), 1.0)


# --- properties ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.05, 3.0), mu=st.floats(0.05, 3.0))
def test_semigroup_closed_form(name, seed, lam, mu):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng, "closed")
    assert semigroup_residual(f, space.random_point(rng), lam, mu) <= 1e-9


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.1, 2.0), mu=st.floats(0.1, 2.0))
def test_semigroup_weighted_sum(name, seed, lam, mu):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng, "sum")
    assert semigroup_residual(f, space.random_point(rng), lam, mu) <= 10 * default_tol(space)


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.05, 2.0))
def test_resolvent_inequality(name, seed, lam):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng)
    x, y = space.random_point(rng), space.random_point(rng)
    if math.isinf(f(y)):
        y = prox(f, y, lam).minimizer
    r = prox(f, x, lam)
    assert resolvent_inequality_residual(f, x, y, lam, r) >= -(default_tol(space) + r.certified_gap)


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.05, 2.0))
def test_prox_is_nonexpansive(name, seed, lam):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng)
    x, y = space.random_point(rng), space.random_point(rng)
    assert distance(prox(f, x, lam).minimizer, prox(f, y, lam).minimizer) <= distance(x, y) + default_tol(space)


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.05, 2.0), ratio=st.floats(0.05, 0.95))
def test_envelope_and_displacement_monotone_in_lambda(name, seed, lam, ratio):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng)
    x = space.random_point(rng)
    assert envelope_monotone_in_lambda(f, x, lam, lam * ratio)
    assert prox_displacement_monotone(f, x, lam, lam * ratio)


@pytest.mark.parametrize("name", sorted(SPACES))
@given(seed=seeds(), lam=st.floats(0.05, 2.0))
def test_prox_beats_nearby_points(name, seed, lam):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    f = random_function(space, rng)
    x = space.random_point(rng)
    r = prox(f, x, lam)
    for _ in range(5):
        z = space.random_point(rng)
        for t in (1e-3, 0.1, 1.0):
            y = space.geodesic_point(r.minimizer, z, t)
            assert r.value <= _objective(f, x, lam, y) + default_tol(space) + r.certified_gap


@given(seed=seeds(), mu=st.floats(0.1, 2.0), lam=st.floats(0.1, 2.0))
def test_envelope_of_envelope_prox_matches_semigroup(seed, mu, lam):
    rng = np.random.default_rng(seed)
    f = random_function(E2, rng, "closed")
    x = E2.random_point(rng)
    nested = prox(EnvelopeOf(f, mu), x, lam)
    assert nested.value == pytest.approx(envelope(f, x, lam + mu), abs=1e-8)
