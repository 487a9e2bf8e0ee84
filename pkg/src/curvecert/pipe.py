"""Pipe-surface radius estimation, containment tests, and mesh sampling.

The radius estimator is sampled, not exact: it returns
``safety * min(1/kappa_max, d_min/2)`` where ``kappa_max`` is the largest
sampled curvature and ``d_min`` the smallest distant self-approach whose
chord is near-orthogonal to both tangents.  Underestimating the radius is
always sound for the certificates (it only increases the containment bound),
and straight or near-straight curves are capped at the bounding-box diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._segdist import seg_seg_distance
from .curves import CompositeBezier, ControlPolygon, evaluate, evaluate_derivative, pl_evaluate
from .errors import DomainError, NotSimpleError, RegularityError

DEFAULT_DENSITY = 512
DEFAULT_SAFETY = 0.8
# Chord-vs-tangent slack for the doubly-critical self-distance criterion.
ORTHOGONALITY_DEGREES = 5.0
# Dense-polyline crossings below this fraction of the bounding box flag the
# spine as self-intersecting.
CROSSING_REL_TOL = 1e-9


@dataclass(frozen=True)
class PipeEstimate:
    """Sampled non-self-intersection radius and its ingredients."""

    radius: float
    curvature_bound: float
    min_self_distance: float
    safety_factor: float
    sample_density: int


def frames(curve: CompositeBezier, ts):
    """Orthonormal (tangent, normal, binormal) frames at the given parameters.

    Uses Frenet normals where the curvature carries a direction; elsewhere
    (straight stretches, inflections) the normal is propagated from the
    previous sample by projection, which keeps the frame rotation-minimizing
    for export purposes.  Returns (T, N, B, fallback_mask).
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    d1 = evaluate_derivative(curve, ts, 1)
    speed = np.linalg.norm(d1, axis=1)
    if speed.min(initial=np.inf) <= 0.0:
        raise RegularityError("zero tangent encountered while building frames")
    tangent = d1 / speed[:, None]
    d2 = evaluate_derivative(curve, ts, 2)
    raw_normal = d2 - np.sum(d2 * tangent, axis=1)[:, None] * tangent
    raw_len = np.linalg.norm(raw_normal, axis=1)
    fallback = raw_len <= 1e-8 * max(float(np.abs(d2).max(initial=0.0)), 1e-300)

    normal = np.zeros_like(tangent)
    ok = ~fallback
    normal[ok] = raw_normal[ok] / raw_len[ok][:, None]
    prev = None
    for i in range(len(ts)):
        if not fallback[i]:
            prev = normal[i]
            continue
        seed = prev
        if seed is None:
            axis = np.zeros(3)
            axis[int(np.argmin(np.abs(tangent[i])))] = 1.0
            seed = axis
        cand = seed - np.dot(seed, tangent[i]) * tangent[i]
        norm = np.linalg.norm(cand)
        if norm == 0.0:  # seed parallel to tangent; pick another axis
            axis = np.zeros(3)
            axis[int(np.argmin(np.abs(tangent[i])))] = 1.0
            cand = axis - np.dot(axis, tangent[i]) * tangent[i]
            norm = np.linalg.norm(cand)
        normal[i] = cand / norm
        prev = normal[i]
    binormal = np.cross(tangent, normal)
    return tangent, normal, binormal, fallback


def _self_distance_scan(points, tangents, arc, window, ortho_cos, crossing_tol):
    """One chunked pass over distant sample pairs.

    Returns (doubly-critical min distance, min distance between distant
    sub-segments near any close approach).  The segment-segment test runs
    only on candidate pairs that a point-distance prefilter cannot rule out,
    which keeps the scan O(n^2) with a small constant.
    """
    n = len(points)
    d_min = math.inf
    max_step = float(np.linalg.norm(np.diff(points, axis=0), axis=1).max(initial=0.0))
    candidate_tol = crossing_tol + 2.05 * max_step
    cand_i: list[np.ndarray] = []
    cand_j: list[np.ndarray] = []

    chunk = max(1, (1 << 22) // max(n, 1))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        diff = points[start:stop, None, :] - points[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2))
        gap = np.abs(arc[start:stop, None] - arc[None, :])
        distant = gap > window
        if not distant.any():
            continue
        safe = np.where(dist > 0.0, dist, np.inf)
        cos_a = np.abs(np.sum(diff * tangents[start:stop, None, :], axis=2)) / safe
        cos_b = np.abs(np.sum(diff * tangents[None, :, :], axis=2)) / safe
        critical = distant & (cos_a <= ortho_cos) & (cos_b <= ortho_cos)
        if critical.any():
            d_min = min(d_min, float(dist[critical].min()))
        near = distant & (dist < candidate_tol)
        if near.any():
            ii, jj = np.nonzero(near)
            cand_i.append(ii + start)
            cand_j.append(jj)

    crossing = math.inf
    if cand_i:
        ii = np.minimum(np.concatenate(cand_i), n - 2)
        jj = np.minimum(np.concatenate(cand_j), n - 2)
        d = seg_seg_distance(points[ii], points[ii + 1], points[jj], points[jj + 1])
        crossing = float(d.min())
    return d_min, crossing


def estimate_pipe_radius(curve: CompositeBezier,
                         density: int = DEFAULT_DENSITY,
                         safety: float = DEFAULT_SAFETY) -> PipeEstimate:
    """Sampled radius for which the pipe around the curve does not self-intersect.

    ``density`` samples per segment (>= 100).  Raises
    :class:`NotSimpleError` when distant parts of the sampled spine touch,
    i.e. the curve itself appears to self-intersect.
    """
    if density < 100:
        raise DomainError("density must be at least 100 samples per segment")
    if not 0.0 < safety <= 1.0:
        raise DomainError("safety factor must lie in (0, 1]")

    num = density * curve.num_segments + 1
    ts = np.linspace(0.0, 1.0, num)
    points = evaluate(curve, ts)
    d1 = evaluate_derivative(curve, ts, 1)
    speed = np.linalg.norm(d1, axis=1)
    if speed.min() <= 0.0:
        raise RegularityError("zero tangent sample while estimating pipe radius")
    tangents = d1 / speed[:, None]
    d2 = evaluate_derivative(curve, ts, 2)
    kappa = np.linalg.norm(np.cross(d1, d2), axis=1) / speed**3
    kappa_max = float(kappa.max())

    seg_len = np.linalg.norm(np.diff(points, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = float(arc[-1])
    diag = curve.bounding_box_diagonal()
    if total == 0.0 or diag == 0.0:
        raise DomainError("degenerate curve: zero arc length")
    window = 4.0 * total / (num - 1)

    crossing_tol = CROSSING_REL_TOL * diag
    ortho_cos = math.sin(math.radians(ORTHOGONALITY_DEGREES))
    d_min, crossing = _self_distance_scan(
        points, tangents, arc, window, ortho_cos, crossing_tol)
    if crossing < crossing_tol:
        raise NotSimpleError(
            f"distant spine segments come within {crossing:.3e}; curve is not simple"
        )

    candidates = [diag]
    if kappa_max > 0.0:
        candidates.append(1.0 / kappa_max)
    if math.isfinite(d_min):
        candidates.append(d_min / 2.0)
    radius = safety * min(candidates)
    return PipeEstimate(
        radius=radius,
        curvature_bound=kappa_max,
        min_self_distance=d_min,
        safety_factor=safety,
        sample_density=density,
    )


def pipe_contains(curve: CompositeBezier, polygon: ControlPolygon, r: float,
                  samples: int = 2000):
    """True iff the sampled polygon-to-curve distance stays below ``r``.

    Samples uniformly across the polygon's parameter interval plus its
    vertex parameters.  Returns (contains, worst_t, worst_distance).
    """
    if r <= 0.0:
        raise DomainError("pipe radius must be positive")
    a, b = polygon.interval
    ts = np.linspace(a, b, max(2, samples))
    if polygon.num_edges:
        nodes = a + (b - a) * np.arange(polygon.num_edges + 1) / polygon.num_edges
        ts = np.union1d(ts, nodes)
    dist = np.linalg.norm(pl_evaluate(polygon, ts) - evaluate(curve, ts), axis=1)
    worst = int(np.argmax(dist))
    return bool(dist[worst] < r), float(ts[worst]), float(dist[worst])


def pipe_surface_mesh(curve: CompositeBezier, r: float,
                      density_t: int = 128, density_theta: int = 16):
    """Sampled pipe surface as an indexed triangle list (vertices, faces).

    Faces are 0-based index triples; rings close around theta but the tube is
    left open at the curve endpoints.  Export-only: no genus or closure
    guarantees.
    """
    if r <= 0.0:
        raise DomainError("pipe radius must be positive")
    if density_t < 1 or density_theta < 3:
        raise DomainError("need density_t >= 1 and density_theta >= 3")
    ts = np.linspace(0.0, 1.0, density_t + 1)
    spine = evaluate(curve, ts)
    _, normal, binormal, _ = frames(curve, ts)
    thetas = np.linspace(0.0, 2.0 * math.pi, density_theta, endpoint=False)
    ring = (np.cos(thetas)[None, :, None] * normal[:, None, :]
            + np.sin(thetas)[None, :, None] * binormal[:, None, :])
    vertices = (spine[:, None, :] + r * ring).reshape(-1, 3)

    faces = []
    for i in range(density_t):
        base = i * density_theta
        for j in range(density_theta):
            jn = (j + 1) % density_theta
            a = base + j
            b = base + jn
            c = base + density_theta + j
            d = base + density_theta + jn
            faces.append((a, c, d))
            faces.append((a, d, b))
    return vertices, np.array(faces, dtype=int)
