"""Composite Bezier curves, their control polygons, and midpoint subdivision.

Core representation: a curve of degree ``n`` with ``S`` segments keeps its
control points in a read-only float64 array of shape ``(S, n+1, 3)``.
Consecutive segments must share their junction vertex exactly as stored, and
the segments occupy equal-width parameter subintervals of ``[0, 1]``.
All operations are pure functions of immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, IterationCapError, RegularityError

# Subdivision always splits at the parameter midpoint.
DEFAULT_ITERATION_CAP = 64
# Guard against runaway piece counts before the cap is reached.
MAX_TOTAL_PIECES = 1 << 22


def _as_points(vertices) -> np.ndarray:
    pts = np.array(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DomainError(f"expected an (m, 3) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("control points must be finite")
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True)
class ControlPolygon:
    """An ordered vertex list covering a closed parameter subinterval.

    The same type models a single segment's control points, one piece
    produced by subdivision, and the concatenated global polygon.
    """

    vertices: np.ndarray
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "vertices", _as_points(self.vertices))
        a, b = self.interval
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise DomainError(f"parameter interval must satisfy a < b, got {self.interval}")
        if len(self.vertices) < 1:
            raise DomainError("a control polygon needs at least 1 vertex")

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    @property
    def num_edges(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class CompositeBezier:
    """Same-degree Bezier segments joined end to end over ``[0, 1]``.

    ``points`` has shape ``(num_segments, degree+1, 3)``. Consecutive
    segments must share the junction vertex bit for bit; tangent (C1)
    continuity is a soft assumption checked by :func:`validate`.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 2:
            pts = pts[None, :, :]
        if pts.ndim != 3 or pts.shape[2] != 3 or pts.shape[1] < 2:
            raise DomainError(f"expected (segments, degree+1, 3) control points, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("control points must be finite")
        for k in range(len(pts) - 1):
            if not np.array_equal(pts[k, -1], pts[k + 1, 0]):
                raise DomainError(
                    f"segments {k} and {k + 1} do not share their junction vertex exactly"
                )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_segments(cls, segments: Sequence) -> "CompositeBezier":
        arrs = [np.asarray(s, dtype=float) for s in segments]
        degrees = {a.shape[0] for a in arrs}
        if len(degrees) != 1:
            raise DomainError(f"all segments must share one degree, got vertex counts {sorted(degrees)}")
        return cls(np.stack(arrs))

    @property
    def degree(self) -> int:
        return self.points.shape[1] - 1

    @property
    def num_segments(self) -> int:
        return self.points.shape[0]

    @property
    def segments(self) -> tuple[ControlPolygon, ...]:
        s = self.num_segments
        return tuple(
            ControlPolygon(self.points[k], (k / s, (k + 1) / s)) for k in range(s)
        )

    def segment_interval(self, k: int) -> tuple[float, float]:
        s = self.num_segments
        return (k / s, (k + 1) / s)

    def bounding_box_diagonal(self) -> float:
        flat = self.points.reshape(-1, 3)
        return float(np.linalg.norm(flat.max(axis=0) - flat.min(axis=0)))


@dataclass(frozen=True)
class SubdivisionResult:
    """Pieces and global polygon after ``iterations`` midpoint subdivisions.

    ``piece_points`` has shape ``(pieces, degree+1, 3)`` with pieces in curve
    order (2**iterations per original segment); consecutive pieces share one
    endpoint.  ``union_polygon`` concatenates them without duplicating the
    shared vertices, so it has ``pieces * degree + 1`` vertices.
    """

    iterations: int
    piece_points: np.ndarray
    union_polygon: ControlPolygon = field(repr=False)

    @property
    def num_pieces(self) -> int:
        return self.piece_points.shape[0]

    @property
    def degree(self) -> int:
        return self.piece_points.shape[1] - 1

    def piece_interval(self, k: int) -> tuple[float, float]:
        p = self.num_pieces
        return (k / p, (k + 1) / p)

    @property
    def pieces(self) -> tuple[ControlPolygon, ...]:
        p = self.num_pieces
        return tuple(
            ControlPolygon(self.piece_points[k], (k / p, (k + 1) / p)) for k in range(p)
        )


# ---------------------------------------------------------------------------
# evaluation


def _decasteljau_many(points: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Evaluate stacked control polygons at per-row parameters.

    points: (m, k, 3) control points, ts: (m,) local parameters in [0, 1].
    """
    b = np.array(points, dtype=float)
    t = ts[:, None, None]
    while b.shape[1] > 1:
        b = (1.0 - t) * b[:, :-1, :] + t * b[:, 1:, :]
    return b[:, 0, :]


def _locate(curve: CompositeBezier, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map global parameters to (segment index, local parameter)."""
    s = curve.num_segments
    scaled = ts * s
    idx = np.minimum(scaled.astype(int), s - 1)
    return idx, scaled - idx


def evaluate(curve: CompositeBezier, t):
    """Point(s) on the curve at global parameter(s) ``t`` in ``[0, 1]``.

    Accepts a scalar or an array of parameters; returns shape ``(3,)`` or
    ``(m, 3)`` accordingly.  Uses the de Casteljau recurrence on the segment
    selected by the uniform partition of ``[0, 1]``.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
        raise DomainError(f"parameter out of range [0, 1]: {ts[(ts < 0) | (ts > 1)][0]}")
    idx, local = _locate(curve, ts)
    out = _decasteljau_many(curve.points[idx], local)
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


def evaluate_derivative(curve: CompositeBezier, t, order: int = 1):
    """Derivative of the curve at ``t`` in each segment's own parametrization.

    The global-parametrization derivative is ``num_segments**order`` times
    this value; every consumer in this package only needs directions or
    segment-local magnitudes, which keeps the scaling consistent with the
    per-segment polygon metrics.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
        raise DomainError(f"parameter out of range [0, 1]: {ts[(ts < 0) | (ts > 1)][0]}")
    idx, local = _locate(curve, ts)
    pts = curve.points
    for _ in range(order):
        n = pts.shape[1] - 1
        if n == 0:
            pts = np.zeros_like(pts[:, :1, :])
            break
        pts = n * (pts[:, 1:, :] - pts[:, :-1, :])
    out = _decasteljau_many(pts[idx], local)
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


def pl_evaluate(polygon: ControlPolygon, t):
    """Piecewise-linear interpolation of the polygon at parameter(s) ``t``.

    Vertices sit at equally spaced parameters across ``polygon.interval``;
    values between vertices interpolate linearly.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    a, b = polygon.interval
    tol = 1e-12 * max(1.0, abs(a), abs(b))
    if ts.size and (ts.min() < a - tol or ts.max() > b + tol):
        raise DomainError(f"parameter outside interval [{a}, {b}]")
    m = polygon.num_edges
    if m == 0:
        out = np.broadcast_to(polygon.vertices[0], (ts.size, 3))
        return out[0] if np.isscalar(t) or np.ndim(t) == 0 else np.array(out)
    u = np.clip((ts - a) / (b - a), 0.0, 1.0) * m
    j = np.minimum(u.astype(int), m - 1)
    frac = (u - j)[:, None]
    v = polygon.vertices
    out = (1.0 - frac) * v[j] + frac * v[j + 1]
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# subdivision


def _split_many(points: np.ndarray) -> np.ndarray:
    """Midpoint de Casteljau split of stacked polygons (m, k, 3) -> (2m, k, 3).

    Output keeps curve order: left half of polygon i at 2i, right at 2i+1.
    The split point is computed once, so the halves share it bit for bit.
    """
    m, k, _ = points.shape
    left = np.empty_like(points)
    right = np.empty_like(points)
    b = np.array(points)
    left[:, 0] = b[:, 0]
    right[:, k - 1] = b[:, k - 1]
    for j in range(1, k):
        b = (b[:, :-1] + b[:, 1:]) * 0.5
        left[:, j] = b[:, 0]
        right[:, k - 1 - j] = b[:, -1]
    out = np.empty((2 * m, k, 3))
    out[0::2] = left
    out[1::2] = right
    return out


def subdivide_once(polygon: ControlPolygon) -> tuple[ControlPolygon, ControlPolygon]:
    """Split a control polygon at the parameter midpoint.

    Returns the left/right de Casteljau polygons; the left's last vertex is
    the right's first, and the parameter interval is halved accordingly.
    """
    halves = _split_many(polygon.vertices[None])
    a, b = polygon.interval
    mid = (a + b) / 2.0
    return (
        ControlPolygon(halves[0], (a, mid)),
        ControlPolygon(halves[1], (mid, b)),
    )


def subdivide_points(points: np.ndarray, iterations: int,
                     cap: int = DEFAULT_ITERATION_CAP) -> np.ndarray:
    """Apply ``iterations`` rounds of midpoint splitting to stacked polygons."""
    if iterations < 0:
        raise DomainError("iteration count must be >= 0")
    if iterations > cap:
        raise IterationCapError(f"{iterations} iterations exceeds cap {cap}")
    pts = np.asarray(points, dtype=float)
    for _ in range(iterations):
        if 2 * pts.shape[0] > MAX_TOTAL_PIECES:
            raise IterationCapError(
                f"subdivision would exceed {MAX_TOTAL_PIECES} pieces"
            )
        pts = _split_many(pts)
    return pts


def subdivide(curve: CompositeBezier, iterations: int,
              cap: int = DEFAULT_ITERATION_CAP) -> SubdivisionResult:
    """Subdivide every segment ``iterations`` times at the midpoint.

    Produces ``2**iterations`` pieces per segment in curve order plus the
    concatenated global polygon; ``iterations=0`` returns the original
    segments.
    """
    pieces = subdivide_points(curve.points, iterations, cap=cap)
    union = np.concatenate([pieces[:, :-1, :].reshape(-1, 3), pieces[-1, -1:, :]])
    return SubdivisionResult(
        iterations=iterations,
        piece_points=pieces,
        union_polygon=ControlPolygon(union, (0.0, 1.0)),
    )


# ---------------------------------------------------------------------------
# differentiation


def hodograph(polygon: ControlPolygon) -> ControlPolygon:
    """Control polygon of the derivative curve: vertices ``n*(p[j+1]-p[j])``."""
    if polygon.degree < 1:
        raise DomainError("hodograph needs degree >= 1")
    v = polygon.vertices
    n = polygon.degree
    # Degree-1 input yields a single-vertex (constant) polygon.
    return ControlPolygon(n * (v[1:] - v[:-1]), polygon.interval)


def hodograph_points(points: np.ndarray) -> np.ndarray:
    """Vectorized first-difference polygon: (m, k, 3) -> (m, k-1, 3)."""
    n = points.shape[1] - 1
    return n * (points[:, 1:, :] - points[:, :-1, :])


def discrete_derivative(polygon: ControlPolygon) -> ControlPolygon:
    """First-difference polygon under the polygon's own uniform parametrization.

    Scaled by the edge count, so for a Bezier segment it coincides with the
    hodograph vertices.
    """
    return hodograph(polygon)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class CurveDiagnostics:
    """Result of checking the analytic curve assumptions.

    ``c1_residuals`` holds one tangent-mismatch norm per junction;
    ``sigma`` is the certified derivative lower bound when certification
    succeeded.  ``spot_min_distance`` is a coarse sampled self-distance with
    near pairs excluded (heuristic; the pipe-radius estimator does the dense
    version).
    """

    c1_residuals: tuple[float, ...]
    c1_tolerance: float
    c1_ok: bool
    sigma: float | None
    regular_ok: bool
    spot_min_distance: float
    spot_ok: bool
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.c1_ok and self.regular_ok and self.spot_ok


def validate(curve: CompositeBezier, c1_rel_tol: float = 1e-9,
             spot_samples_per_segment: int = 64) -> CurveDiagnostics:
    """Check the soft assumptions: C1 junctions, regularity, simplicity spot test.

    Never raises; callers decide what to do with the diagnostics.
    """
    from . import metrics  # local import to avoid a cycle

    n = curve.degree
    pts = curve.points
    hodo = hodograph_points(pts)
    scale = float(np.max(np.linalg.norm(hodo.reshape(-1, 3), axis=1), initial=0.0))
    c1_tol = c1_rel_tol * max(scale, 1e-300)

    residuals = []
    for k in range(curve.num_segments - 1):
        out_tangent = n * (pts[k, -1] - pts[k, -2])
        in_tangent = n * (pts[k + 1, 1] - pts[k + 1, 0])
        residuals.append(float(np.linalg.norm(out_tangent - in_tangent)))
    c1_ok = all(r <= c1_tol for r in residuals)

    messages = []
    if not c1_ok:
        worst = max(range(len(residuals)), key=lambda i: residuals[i])
        messages.append(
            f"C1 violation at junction {worst}: tangent mismatch {residuals[worst]:.3e} "
            f"exceeds {c1_tol:.3e}"
        )

    sigma = None
    regular_ok = True
    try:
        sigma = metrics.min_derivative_norm(curve)
    except RegularityError as exc:
        regular_ok = False
        messages.append(f"regularity unverified: {exc}")

    # Coarse self-intersection spot check on curve samples.
    per_seg = max(8, spot_samples_per_segment)
    ts = np.linspace(0.0, 1.0, per_seg * curve.num_segments + 1)
    samples = evaluate(curve, ts)
    d = samples[:, None, :] - samples[None, :, :]
    dist = np.linalg.norm(d, axis=2)
    gap = np.abs(ts[:, None] - ts[None, :])
    window = 4.0 / len(ts)
    masked = np.where(gap > window, dist, np.inf)
    spot_min = float(masked.min()) if np.isfinite(masked).any() else float("inf")
    diag_len = curve.bounding_box_diagonal()
    spot_ok = spot_min > 1e-9 * max(diag_len, 1e-300)
    if not spot_ok:
        messages.append(
            f"sampled self-intersection spot check failed: min distance {spot_min:.3e}"
        )

    return CurveDiagnostics(
        c1_residuals=tuple(residuals),
        c1_tolerance=c1_tol,
        c1_ok=c1_ok,
        sigma=sigma,
        regular_ok=regular_ok,
        spot_min_distance=spot_min,
        spot_ok=spot_ok,
        messages=tuple(messages),
    )
