"""Independent test oracles, deliberately naive.

Nothing here shares code paths with the library: evaluation sums the
Bernstein basis directly, derivatives use central differences, and the
planar intersection predicate is orientation-based instead of distance
based.
"""

from __future__ import annotations

import math

import numpy as np

from curvecert.curves import CompositeBezier, evaluate


def bernstein_point(points, t: float) -> np.ndarray:
    """Direct Bernstein-basis evaluation of one polygon at local t."""
    pts = np.asarray(points, dtype=float)
    n = len(pts) - 1
    acc = np.zeros(3)
    for j in range(n + 1):
        acc += math.comb(n, j) * t**j * (1.0 - t) ** (n - j) * pts[j]
    return acc


def bernstein_curve_point(curve: CompositeBezier, t: float) -> np.ndarray:
    """Global-parameter evaluation through the Bernstein sum."""
    s = curve.num_segments
    k = min(int(t * s), s - 1)
    return bernstein_point(curve.points[k], t * s - k)


def central_difference_derivative(curve: CompositeBezier, t: float,
                                  h: float = 1e-7) -> np.ndarray:
    """Segment-local derivative of the curve by central differences."""
    lo, hi = max(0.0, t - h), min(1.0, t + h)
    d = (evaluate(curve, hi) - evaluate(curve, lo)) / (hi - lo)
    return d / curve.num_segments


def _ccw(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, c) -> bool:
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))


def segments_intersect_2d(p1, p2, p3, p4) -> bool:
    """Exact orientation-based segment intersection in the plane."""
    d1 = _ccw(p3, p4, p1)
    d2 = _ccw(p3, p4, p2)
    d3 = _ccw(p1, p2, p3)
    d4 = _ccw(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 \
            and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def orientation_simple_2d(vertices) -> bool:
    """Self-intersection test for an open planar polyline (z ignored).

    Adjacent edges count as intersecting only when they fold back onto each
    other (collinear with opposite directions).
    """
    v = [(float(p[0]), float(p[1])) for p in vertices]
    m = len(v) - 1
    for i in range(m):
        for j in range(i + 2, m):
            if segments_intersect_2d(v[i], v[i + 1], v[j], v[j + 1]):
                return False
    for i in range(m - 1):
        e1 = (v[i + 1][0] - v[i][0], v[i + 1][1] - v[i][1])
        e2 = (v[i + 2][0] - v[i + 1][0], v[i + 2][1] - v[i + 1][1])
        cross = e1[0] * e2[1] - e1[1] * e2[0]
        dot = e1[0] * e2[0] + e1[1] * e2[1]
        if cross == 0.0 and dot < 0.0:
            return False
        if e1 == (0.0, 0.0) or e2 == (0.0, 0.0):
            return False
    return True
