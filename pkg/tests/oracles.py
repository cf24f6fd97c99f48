"""Independent reference computations used to freeze and cross-check expected values.

Nothing here imports the package's numeric code.
"""

import itertools
from fractions import Fraction

import mpmath

mpmath.mp.dps = 40


def entropy_bits(p):
    return float(-sum(mpmath.mpf(x) * mpmath.log(mpmath.mpf(x), 2) for x in p if x > 0))


def mutual_information(rows, weights=None):
    """I(value; user) = sum p(u,v) log2 p(u,v) / (p(u) p(v)) from the joint table."""
    weights = weights or [1] * len(rows)
    total = mpmath.fsum(weights)
    pu = [mpmath.mpf(w) / total for w in weights]
    joint = [[pu[i] * mpmath.mpf(x) for x in r] for i, r in enumerate(rows)]
    pv = [mpmath.fsum(joint[i][j] for i in range(len(rows))) for j in range(len(rows[0]))]
    acc = mpmath.mpf(0)
    for i, r in enumerate(joint):
        for j, pj in enumerate(r):
            if pj > 0:
                acc += pj * mpmath.log(pj / (pu[i] * pv[j]), 2)
    return float(acc)


def proximity(windows):
    """Exact integral of the active-window count over elementary segments."""
    ws = [(Fraction(s), Fraction(e)) for s, e in windows]
    points = sorted({x for w in ws for x in w})
    area = Fraction(0)
    for a, b in zip(points, points[1:]):
        mid = (a + b) / 2
        area += (b - a) * sum(1 for s, e in ws if s <= mid <= e)
    span = points[-1] - points[0]
    return float(area / (span * len(ws)))


def sse(group):
    m = sum(group) / len(group)
    return sum((x - m) ** 2 for x in group)


def best_contiguous_split(values, k):
    """Minimal total SSE over every split of the sorted values into k runs."""
    xs = sorted(values)
    n = len(xs)
    best = None
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        cost = sum(sse(xs[a:b]) for a, b in zip(bounds, bounds[1:]))
        if best is None or cost < best:
            best = cost
    return best
