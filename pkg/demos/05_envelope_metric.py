"""
A metric from envelope values
=============================

Moving quadratics d(., 1/n)^2 / 2 form a Cauchy sequence for the envelope
metric; their limit is recovered on the grid and the distances to it shrink.
Alternating quadratics are not Cauchy.
"""

from hadamard_lab import NotCauchy, cauchy_limit, equi_lipschitz_bound, rho
from hadamard_lab import fixtures

seq = fixtures.moving_quadratics()
lams, probes = fixtures.default_lambdas(), fixtures.line_probes()

# limit assembled from envelope values along the sequence
lim = cauchy_limit(seq, lams, probes)
for n in (10, 100, 1000):
    print(f"rho(f_{n}, limit) = {rho(seq(n), lim, lams, probes).value:.2e}")

# the envelopes share a Lipschitz constant on the unit ball
b = equi_lipschitz_bound(seq, 0.5, probes[len(probes) // 2], 1.0)
print(f"Lipschitz bound {b.L:.3f}, largest observed quotient {b.max_quotient:.3f}")

# an alternating sequence is refused
try:
    cauchy_limit(fixtures.alternating_quadratics(), lams, probes)
except NotCauchy as err:
    print("alternating quadratics:", err)
