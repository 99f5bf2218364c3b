"""Numerical laboratory for convex analysis on Hadamard spaces.

Geodesic spaces, a catalog of convex sets and functions, proximal maps and
Moreau envelopes, checks for weak and Mosco-type convergence, and a metric on
proper convex lower semicontinuous functions built from envelope values.
"""

from .catalog import (
    Ball,
    ConvexFunction,
    ConvexSet,
    DistanceTo,
    DistanceToSet,
    EnvelopeOf,
    FunctionSequence,
    Halfspace,
    Indicator,
    Segment,
    SetSequence,
    Shifted,
    SquaredDistance,
    Subtree,
    WeightedSum,
    WholeSpace,
    project,
)
from .convergence import (
    PointSequence,
    asymptotic_center,
    build_recovery_sequence,
    check_envelope_convergence,
    check_liminf_condition,
    check_recovery,
    default_battery,
    frolik_wijsman_check,
    gamma_limit_from_envelopes,
    mosco_check,
    random_thinning,
    weak_limit,
)
from .errors import (
    DomainError,
    HadamardLabError,
    ImproperFunction,
    NoBound,
    NotCauchy,
    NoUniformBound,
    PreconditionFailed,
    ScenarioError,
    SpaceMismatch,
    Unbounded,
    Unconverged,
    UnsupportedSpace,
)
from .metric import (
    CauchyLimit,
    LambdaGrid,
    ProbeGrid,
    cauchy_limit,
    equi_lipschitz_bound,
    pseudometric_e,
    pseudometric_r,
    rho,
)
from .prox import (
    ProxResult,
    envelope,
    estimate_minorization,
    prox,
    resolvent_inequality_residual,
    semigroup_residual,
    solver_tolerance,
)
from .scenario import load_scenario, run_scenario
from .spaces import (
    Euclidean,
    Hyperbolic2,
    MetricTree,
    Point,
    Product,
    convexity_residual,
    distance,
    geodesic_point,
    quadruple_residual,
    weak_quadruple_residual,
)

__version__ = "0.1.0"
