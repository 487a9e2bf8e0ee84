"""Vectorized closest-distance between 3D segment pairs (clamped quadratic)."""

from __future__ import annotations

import numpy as np


def seg_seg_distance(a0, a1, b0, b1):
    """Min distance between segments [a0,a1] and [b0,b1], elementwise over (..., 3).

    Implements the standard clamped closest-point computation; degenerate
    (zero-length) segments reduce to point-segment or point-point distance.
    """
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    b1 = np.asarray(b1, dtype=float)
    d1 = a1 - a0
    d2 = b1 - b0
    r = a0 - b0
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    denom = a * e - b * b

    a_ok = a > 0.0
    e_ok = e > 0.0
    denom_ok = denom > 0.0

    s = np.where(denom_ok, (b * f - c * e) / np.where(denom_ok, denom, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    t = np.where(e_ok, (b * s + f) / np.where(e_ok, e, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    # Re-optimize s for the clamped t (exact for this convex quadratic).
    s = np.where(a_ok, (b * t - c) / np.where(a_ok, a, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)

    p = a0 + s[..., None] * d1
    q = b0 + t[..., None] * d2
    return np.linalg.norm(p - q, axis=-1)
