"""Finite index windows standing in for ``n -> infinity``.

Every asymptotic statement is checked on a finite set of indices.  The
helpers here build those index sets and turn a list of values sampled on
them into limit diagnostics.
"""

import math


def contiguous(start, length):
    """Indices ``start, start + 1, ..., start + length - 1``."""
    return tuple(range(int(start), int(start) + int(length)))


def geometric(start, count, ratio=2):
    """Indices ``start, start * ratio, ..., start * ratio**(count - 1)``."""
    return tuple(int(start) * int(ratio) ** j for j in range(int(count)))


def tail(values):
    """Second half of a window (at least one element)."""
    values = list(values)
    return values[len(values) // 2:] or values[-1:]


def diverging(values, atol=1e-9):
    """True when successive differences stop contracting.

    A sequence whose increments do not shrink by at least 10% at the end of
    the window, or which contains non-finite values, is reported divergent.
    """
    values = list(values)
    if any(not math.isfinite(v) for v in values):
        return True
    if len(values) < 3:
        return False
    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    if diffs[-1] <= atol * (1.0 + abs(values[-1])):
        return False
    return diffs[-1] >= 0.9 * diffs[-2]


def nonincreasing(values, tol=0.0):
    values = list(values)
    return all(b <= a + tol for a, b in zip(values, values[1:]))


def vanishing(values, tol=1e-9):
    """True when a non-negative sequence visibly decays to zero.

    Either the last value is within ``tol`` of zero, or the second half of
    the window is nonincreasing (up to ``tol``) and at least halves.  Early
    indices are ignored because pre-asymptotic values may cross zero.
    """
    values = tail(values)
    if values[-1] <= tol:
        return True
    return nonincreasing(values, tol) and values[-1] <= 0.5 * values[0]
