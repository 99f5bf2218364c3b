import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from hadamard_lab import Euclidean, Hyperbolic2, MetricTree, Product

settings.register_profile(
    "lab",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("lab")

SPACES = {
    "euclid2": Euclidean(2),
    "hyperbolic": Hyperbolic2(),
    "spider": MetricTree.spider(3, 1.0),
    "tree": MetricTree.random(np.random.default_rng(5), 7),
    "product": Product(Euclidean(1), Hyperbolic2()),
}


@pytest.fixture(params=sorted(SPACES))
def space(request):
    return SPACES[request.param]


def points(space, count):
    """Strategy for ``count`` random points of ``space`` drawn from a seeded generator."""
    return st.integers(0, 2 ** 32 - 1).map(
        lambda seed: [space.random_point(np.random.default_rng(seed)) for _ in range(count)]
    )


def seeds():
    return st.integers(0, 2 ** 32 - 1)


# acceptance criteria append one line each; printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
