"""
Proximal maps and Moreau envelopes
==================================

The envelope of the absolute value is the Huber function, envelopes increase
to the function as lambda shrinks, and proximal maps compose as a semigroup.
"""

import numpy as np

from hadamard_lab import DistanceTo, Euclidean, Hyperbolic2, SquaredDistance, WeightedSum, envelope, prox, semigroup_residual

line = Euclidean(1)
f = DistanceTo(line.point([0.0]))

# envelope of |x| against the Huber formula
lam = 0.5
for x in (-2.0, -0.3, 0.0, 0.2, 1.5):
    huber = x * x / (2 * lam) if abs(x) <= lam else abs(x) - lam / 2
    print(f"x = {x:+.1f}  envelope {envelope(f, line.point([x]), lam):.6f}  Huber {huber:.6f}")

# envelopes increase towards f(x) = 1 as lambda shrinks
x = line.point([1.0])
print("envelopes at x = 1:", [round(envelope(f, x, 2.0 ** -k), 4) for k in range(6)])

# a weighted sum in the hyperbolic plane has no closed form; the solver reports a certified gap
H = Hyperbolic2()
g = WeightedSum(((1.0, SquaredDistance(H.point([0.5, 0.0]))), (0.7, DistanceTo(H.point([-0.4, 0.8])))))
r = prox(g, H.point([0.0, -1.0]), 0.8)
print(f"prox value {r.value:.10f} after {r.iterations} iterations, certified gap {r.certified_gap:.1e}")

# J_mu of the envelope f_lam equals J_(lam + mu) of f, up to solver tolerance
print("semigroup residual:", f"{semigroup_residual(g, H.point([1.0, 1.0]), 0.3, 0.6):.1e}")
