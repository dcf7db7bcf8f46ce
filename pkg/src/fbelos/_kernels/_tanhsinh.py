"""Shared tanh-sinh (double-exponential) node tables.

Both kernels consume the same precomputed tables so their results agree
bit-for-bit.  For each abscissa t the transform is

    s(t) = tanh(u),  u = (pi/2) sinh(t),  weight w(t) = (pi/2) cosh(t) / cosh(u)^2

but instead of s itself the table stores the distance factor

    delta(t) = 1 - s(t) = 2 / (exp(2u) + 1)

so a node's evaluation points are ``a + hl*delta`` and ``b - hl*delta``
(hl = half-length of the interval).  Computing the offset from the endpoint
directly is what lets integrands with endpoint singularities be sampled
meaningfully close to the boundary.

Level 0 holds t = 0, 1, 2, ...; level L > 0 holds the odd multiples of
2**-L.  Rows stop once delta underflows to zero (the weights there are far
below any double-precision contribution).
"""

import array
import math

MAX_LEVEL = 12

# Nodes with delta below this evaluate through the double-double tape path;
# above it, plain double evaluation of x = a + hl*delta keeps the distance
# relative error under 2^-28.
DD_DELTA_THRESHOLD = 2.0 ** -24

_tables = None


def _row(t):
    u = 0.5 * math.pi * math.sinh(t)
    two_u = 2.0 * u
    if two_u > 709.0:
        return None
    delta = 2.0 / (math.exp(two_u) + 1.0)
    if delta == 0.0:
        return None
    sech = 1.0 / math.cosh(u)
    w = 0.5 * math.pi * math.cosh(t) * sech * sech
    if w == 0.0:
        return None
    return delta, w


def build_tables():
    """Return (level_start, level_count, deltas, weights) as flat arrays."""
    global _tables
    if _tables is not None:
        return _tables
    deltas = []
    weights = []
    starts = []
    counts = []
    for level in range(MAX_LEVEL + 1):
        starts.append(len(deltas))
        h = 0.5 ** level
        # delta underflows shortly after t = 6, well before these caps
        if level == 0:
            ks = range(0, 8)
        else:
            ks = range(1, 7 * 2 ** level, 2)
        for k in ks:
            row = _row(k * h)
            if row is None:
                break
            deltas.append(row[0])
            weights.append(row[1])
        counts.append(len(deltas) - starts[-1])
    _tables = (
        array.array("i", starts),
        array.array("i", counts),
        array.array("d", deltas),
        array.array("d", weights),
    )
    return _tables
