"""
Weak limits on a spider
=======================

A sequence that alternates between two tips of a three-legged spider has the
hub as asymptotic center, but its even and odd subsequences pick different
centers, so it has no weak limit.
"""

from hadamard_lab import distance, weak_limit
from hadamard_lab import fixtures

tree, seq = fixtures.spider_alternation()

# the battery compares centers of the full sequence and of its subsequences
v = weak_limit(seq)
for name, c in v.centers.items():
    label = min(("hub", "A", "B", "C"), key=lambda t: distance(c, tree.vertex(t)))
    print(f"{name:10s} center at {label}")
print("converges:", v.converges, " witness:", v.witness["selector"])

# on the line the same alternation has center 0 but no weak limit either
print("line alternation:", weak_limit(fixtures.line_alternation()).converges)
