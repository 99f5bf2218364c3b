"""
Geodesics and the quadruple comparison
======================================

Four model spaces of nonpositive curvature, their geodesics and the
quadruple inequality that characterizes them.
"""

import numpy as np

from hadamard_lab import Euclidean, Hyperbolic2, MetricTree, Product, distance, geodesic_point, quadruple_residual

rng = np.random.default_rng(0)

# the plane, the hyperbolic plane, a three-legged spider and a product of the first two
spaces = [Euclidean(2), Hyperbolic2(), MetricTree.spider(3, 1.0), Product(Euclidean(1), Hyperbolic2())]

# geodesics have constant speed: d(g(s), g(t)) = |s - t| d(x, y)
for space in spaces:
    x, y = space.random_point(rng), space.random_point(rng)
    gap = distance(geodesic_point(x, y, 0.2), geodesic_point(x, y, 0.7)) - 0.5 * distance(x, y)
    print(f"{space!r:40s} speed defect {gap:+.1e}")

# the quadruple residual is nonnegative in every space of the list
for space in spaces:
    worst = min(quadruple_residual(*(space.random_point(rng) for _ in range(4))) for _ in range(2000))
    print(f"{space!r:40s} smallest quadruple residual {worst:+.2e}")

# on the spider the geodesic between two tips passes through the hub
tree = MetricTree.spider(3, 1.0)
mid = geodesic_point(tree.vertex("A"), tree.vertex("B"), 0.5)
print("midpoint of A and B is the hub:", distance(mid, tree.vertex("hub")) == 0.0)
