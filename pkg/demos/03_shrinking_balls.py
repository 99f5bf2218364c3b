"""
Shrinking shifted balls
=======================

Balls B((1/n, 0), 1 + 1/n) close in on the unit disc.  Envelope values and
proximal points of their indicators converge, and the Mosco conditions hold
at every probe.
"""

from hadamard_lab import LambdaGrid, check_envelope_convergence, frolik_wijsman_check, mosco_check
from hadamard_lab import fixtures

set_seq, C = fixtures.shrinking_shifted_balls()
seq, f = fixtures.indicator_sequence(set_seq, C)
probes = fixtures.plane_probes()

# envelope gaps and proximal distances along n for every lambda and probe
table = check_envelope_convergence(seq, f, LambdaGrid.default(6), probes)
print("window:", table.window)
print("gaps vanish:", table.vanishing)

# inside the disc the gaps are exact zeros; outside they decay like d(x, C) / (lambda n)
for l in (0, 24, 48):
    x = probes[l]
    print(f"probe {x.coords}  gaps at lambda = 1:", ["%.1e" % g for g in table.gaps[0][l]])

# liminf and recovery conditions at the probes
rep = mosco_check(seq, f, probes)
print("Mosco verdict:", rep.verdict, "with", len(rep.recovery_checks), "recovery sequences")

# distance functions converge as well, and the two notions agree
fw = frolik_wijsman_check(set_seq, C, probes)
print("distance convergence:", fw.fw_pass, " agreement:", fw.agree)
