"""Geometric quantities feeding the iteration bounds.

Everything derivative-flavored here (``M``, the hodograph second differences,
``sigma``) is measured per segment in the segment's own parametrization and
aggregated across segments (max for magnitudes, min for ``sigma``).  All
bound formulas consume ratios of these quantities, so the convention is
self-consistent for composite curves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curves import CompositeBezier, ControlPolygon, hodograph_points, subdivide_points
from .errors import DegenerateEdgeError, DomainError, RegularityError

SIGMA_MAX_REFINE = 16
SIGMA_EXTRA_REFINE = 2


def _vertices_of(polyline) -> np.ndarray:
    if isinstance(polyline, ControlPolygon):
        return polyline.vertices
    return np.asarray(polyline, dtype=float)


# ---------------------------------------------------------------------------
# angles and curvature


def exterior_angle(a, b, c, eps: float | None = None) -> float:
    """Turning angle in [0, pi] between directions b-a and c-b.

    Computed as atan2(|cross|, dot) for stability near 0 and pi.  Edges
    shorter than ``eps`` (default 1e-12 times the three points' bounding-box
    diagonal) are degenerate.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    u = b - a
    v = c - b
    if eps is None:
        box = np.vstack([a, b, c])
        eps = 1e-12 * float(np.linalg.norm(box.max(axis=0) - box.min(axis=0)))
    if np.linalg.norm(u) <= eps or np.linalg.norm(v) <= eps:
        raise DegenerateEdgeError("zero-length edge: exterior angle undefined")
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))


def edge_angles(edges_in: np.ndarray, edges_out: np.ndarray) -> np.ndarray:
    """Angles between paired edge vectors; shapes (..., 3) -> (...)."""
    cross = np.cross(edges_in, edges_out)
    dot = np.sum(edges_in * edges_out, axis=-1)
    return np.arctan2(np.linalg.norm(cross, axis=-1), dot)


def _check_edges(edges: np.ndarray, scale: float) -> None:
    lengths = np.linalg.norm(edges, axis=-1)
    if lengths.size and lengths.min() <= 1e-12 * scale:
        raise DegenerateEdgeError("polyline has a degenerate (zero-length) edge")


def total_curvature(polyline, closed: bool = False) -> float:
    """Sum of exterior angles of a PL curve.

    Open polylines sum over interior vertices; closed ones also include the
    wrap-around vertices (a duplicated last-equals-first vertex is dropped).
    """
    v = _vertices_of(polyline)
    if closed and len(v) > 1 and np.array_equal(v[0], v[-1]):
        v = v[:-1]
    if len(v) < 3:
        raise DomainError("total curvature needs at least 3 vertices")
    scale = float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
    if closed:
        edges = np.roll(v, -1, axis=0) - v
        _check_edges(edges, scale)
        angles = edge_angles(edges, np.roll(edges, -1, axis=0))
    else:
        edges = v[1:] - v[:-1]
        _check_edges(edges, scale)
        angles = edge_angles(edges[:-1], edges[1:])
    return float(angles.sum())


def piece_exterior_angles(piece_points: np.ndarray) -> np.ndarray:
    """Interior-vertex exterior angles for stacked pieces (m, k, 3) -> (m, k-2)."""
    edges = piece_points[:, 1:, :] - piece_points[:, :-1, :]
    if edges.shape[1] < 2:
        return np.zeros((piece_points.shape[0], 0))
    flat = piece_points.reshape(-1, 3)
    scale = float(np.linalg.norm(flat.max(axis=0) - flat.min(axis=0)))
    _check_edges(edges, scale)
    return edge_angles(edges[:, :-1, :], edges[:, 1:, :])


# ---------------------------------------------------------------------------
# second differences and bound formulas


def second_difference_norm(polygon) -> tuple[np.ndarray, float]:
    """Per-coordinate max |second difference| and the Euclidean norm of that 3-vector.

    Polygons with fewer than 3 vertices have no second differences and map to
    zero by convention (degree-1 case).
    """
    v = _vertices_of(polygon)
    if len(v) < 3:
        return np.zeros(3), 0.0
    d2 = v[:-2] - 2.0 * v[1:-1] + v[2:]
    vec = np.abs(d2).max(axis=0)
    return vec, float(np.linalg.norm(vec))


def n_infinity(n: int) -> float:
    """Flatness coefficient floor(n/2)*ceil(n/2)/(2n) of the distance bound."""
    if n < 1:
        raise DomainError(f"degree must be >= 1, got {n}")
    return (n // 2) * ((n + 1) // 2) / (2.0 * n)


def b_dist(i, n: int, delta2_norm: float) -> float:
    """Distance bound between curve and polygon after i subdivisions.

    ``i`` may be fractional; the bound decays by 1/4 per iteration.
    """
    if i < 0:
        raise DomainError("iteration count must be >= 0")
    return 0.25**i * n_infinity(n) * delta2_norm


def b_prime_dist(i, n: int, delta2_prime_norm: float) -> float:
    """Distance bound between the derivative curve and its polygon.

    For n < 2 the derivative polygon has fewer than 3 points, so the bound is
    0 by the same convention as :func:`second_difference_norm`.
    """
    if i < 0:
        raise DomainError("iteration count must be >= 0")
    if n < 2:
        return 0.0
    return 0.25**i * n_infinity(n - 1) * delta2_prime_norm


# ---------------------------------------------------------------------------
# M and sigma


def max_first_difference(curve: CompositeBezier) -> float:
    """Max distance between consecutive vertices of any segment's derivative polygon."""
    hodo = hodograph_points(curve.points)
    gaps = np.linalg.norm(np.diff(hodo, axis=1), axis=2)
    return float(gaps.max(initial=0.0))


def distance_to_hull(points, target=None) -> float:
    """Distance from ``target`` (default origin) to the convex hull of ``points``.

    Enumerates faces spanned by up to 4 points (Caratheodory in R^3) and
    solves each equality-constrained least-norm problem, so the result is the
    exact hull distance up to roundoff.  Intended for small point sets.
    """
    v = np.asarray(points, dtype=float).reshape(-1, 3)
    if target is not None:
        v = v - np.asarray(target, dtype=float)
    scale = float(np.linalg.norm(v, axis=1).max(initial=0.0))
    if scale == 0.0:
        return 0.0
    v = v / scale
    m = len(v)
    best = float(np.linalg.norm(v, axis=1).min())
    for size in range(2, min(4, m) + 1):
        idx = np.array(list(itertools.combinations(range(m), size)))
        sub = v[idx]  # (c, size, 3)
        gram = sub @ sub.transpose(0, 2, 1)
        kkt = np.zeros((len(idx), size + 1, size + 1))
        kkt[:, :size, :size] = 2.0 * gram
        kkt[:, :size, size] = 1.0
        kkt[:, size, :size] = 1.0
        rhs = np.zeros((len(idx), size + 1))
        rhs[:, size] = 1.0
        sol = np.linalg.pinv(kkt) @ rhs[:, :, None]
        residual = np.linalg.norm(kkt @ sol - rhs[:, :, None], axis=(1, 2))
        lam = sol[:, :size, 0]
        feasible = (residual < 1e-9) & np.all(lam >= -1e-12, axis=1)
        if feasible.any():
            pts = (lam[feasible, None, :] @ sub[feasible])[:, 0, :]
            best = min(best, float(np.linalg.norm(pts, axis=1).min()))
    return best * scale


def min_derivative_norm(curve: CompositeBezier,
                        max_refine: int = SIGMA_MAX_REFINE,
                        extra_refine: int = SIGMA_EXTRA_REFINE) -> float:
    """Certified positive lower bound for min ||B'(t)|| (segment-local scaling).

    Subdivides each segment's derivative polygon until the distance from the
    origin to every piece's convex hull is positive, refines a couple more
    rounds for tightness (hulls only shrink), and returns the min hull
    distance.  Raises :class:`RegularityError` when positivity cannot be
    certified within ``max_refine`` rounds.
    """
    hodo = hodograph_points(curve.points)
    scale = float(np.linalg.norm(hodo.reshape(-1, 3), axis=1).max(initial=0.0))
    if scale == 0.0:
        raise RegularityError("derivative polygon is identically zero")
    threshold = 1e-14 * scale

    sigma = math.inf
    for seg in range(curve.num_segments):
        pieces = hodo[seg][None, :, :]
        level = 0
        while True:
            dists = np.array([distance_to_hull(p) for p in pieces])
            if dists.min() > threshold:
                break
            if level >= max_refine:
                raise RegularityError(
                    f"segment {seg}: could not certify a positive derivative "
                    f"bound within {max_refine} refinements"
                )
            pieces = subdivide_points(pieces, 1)
            level += 1
        for _ in range(extra_refine):
            pieces = subdivide_points(pieces, 1)
        dists = np.array([distance_to_hull(p) for p in pieces])
        sigma = min(sigma, float(dists.min()))
    if sigma <= 0.0:
        raise RegularityError("refined derivative hull distance is not positive")
    return sigma


# ---------------------------------------------------------------------------
# constants record


@dataclass(frozen=True)
class GeometricConstants:
    """Per-curve ingredients of the iteration bounds.

    ``delta2`` / ``delta2_prime`` are the coordinate-wise max absolute second
    differences of the control polygon and of its derivative polygon
    (max across segments), with their Euclidean norms alongside.
    ``pipe_radius`` is filled in by the pipe estimator or a user override.
    """

    degree: int
    num_segments: int
    M: float
    sigma: float
    delta2: tuple[float, float, float]
    delta2_norm: float
    delta2_prime: tuple[float, float, float]
    delta2_prime_norm: float
    delta2_prime_degenerate: bool
    pipe_radius: float | None = None

    def with_pipe_radius(self, r: float) -> "GeometricConstants":
        if r <= 0.0:
            raise DomainError("pipe radius must be positive")
        return GeometricConstants(
            self.degree, self.num_segments, self.M, self.sigma,
            self.delta2, self.delta2_norm,
            self.delta2_prime, self.delta2_prime_norm,
            self.delta2_prime_degenerate, r,
        )


def geometric_constants(curve: CompositeBezier,
                        pipe_radius: float | None = None,
                        sigma: float | None = None) -> GeometricConstants:
    """Compute every bound ingredient for a curve (pipe radius optional).

    ``sigma`` may be supplied to skip the hull certification, e.g. when a
    sharper external bound is known.
    """
    n = curve.degree
    d2_vecs = []
    d2p_vecs = []
    hodo = hodograph_points(curve.points)
    for seg in range(curve.num_segments):
        vec, _ = second_difference_norm(curve.points[seg])
        d2_vecs.append(vec)
        vec_p, _ = second_difference_norm(hodo[seg])
        d2p_vecs.append(vec_p)
    delta2 = np.max(d2_vecs, axis=0)
    delta2_prime = np.max(d2p_vecs, axis=0)
    if sigma is None:
        sigma = min_derivative_norm(curve)
    return GeometricConstants(
        degree=n,
        num_segments=curve.num_segments,
        M=max_first_difference(curve),
        sigma=float(sigma),
        delta2=tuple(float(x) for x in delta2),
        delta2_norm=float(np.linalg.norm(delta2)),
        delta2_prime=tuple(float(x) for x in delta2_prime),
        delta2_prime_norm=float(np.linalg.norm(delta2_prime)),
        delta2_prime_degenerate=n < 2,
        pipe_radius=pipe_radius,
    )
