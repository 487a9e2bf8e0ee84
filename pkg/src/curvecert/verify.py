"""Brute-force geometric oracles and certificate assembly.

Every certified property is re-checked here on concrete data: exhaustive
segment-pair tests for simplicity, dense aligned sampling for distances and
derivative angles.  Oracles are independent of the bound formulas they
validate; sample counts are recorded in the certificate so failures are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from ._segdist import seg_seg_distance
from .curves import (
    DEFAULT_ITERATION_CAP,
    CompositeBezier,
    ControlPolygon,
    SubdivisionResult,
    evaluate,
    evaluate_derivative,
    pl_evaluate,
    subdivide,
)
from .errors import DomainError, NotSimpleError, RegularityError, RegularityNotReached
from .metrics import GeometricConstants, geometric_constants, piece_exterior_angles
from .pipe import DEFAULT_DENSITY, DEFAULT_SAFETY, PipeEstimate, estimate_pipe_radius

# Consecutive edges legitimately share a vertex; each is shortened by this
# fraction at the shared end before the intersection test.
ADJACENT_TRIM = 1e-6
INTERSECTION_REL_TOL = 1e-10

LEVELS = ("simple-pieces", "homeomorphic", "isotopic")
_LEVEL_ALIASES = {
    "simple": "simple-pieces",
    "simple-pieces": "simple-pieces",
    "homeo": "homeomorphic",
    "homeomorphic": "homeomorphic",
    "isotopy": "isotopic",
    "isotopic": "isotopic",
}


def normalize_level(level: str) -> str:
    try:
        return _LEVEL_ALIASES[level]
    except KeyError:
        raise DomainError(f"unknown certificate level {level!r}; use one of {LEVELS}")


@dataclass(frozen=True)
class SimplicityResult:
    simple: bool
    witness: tuple[int, int] | None
    min_distance: float


def _vertices_of(polyline) -> np.ndarray:
    if isinstance(polyline, ControlPolygon):
        return polyline.vertices
    return np.asarray(polyline, dtype=float)


def is_simple_polyline(polyline, closed: bool = False,
                       eps: float | None = None) -> SimplicityResult:
    """Exhaustive O(m^2) self-intersection test for a polyline.

    Non-adjacent edge pairs intersect when their distance drops below
    ``eps`` (default 1e-10 times the bounding-box diagonal); adjacent pairs
    are trimmed at the shared vertex first, so touching there is not an
    intersection.  Returns the verdict, the offending pair (if any), and the
    minimum pair distance observed.
    """
    v = _vertices_of(polyline)
    if closed and len(v) > 1 and np.array_equal(v[0], v[-1]):
        v = v[:-1]
    if closed:
        starts, ends = v, np.roll(v, -1, axis=0)
    else:
        starts, ends = v[:-1], v[1:]
    m = len(starts)
    if m < 2:
        return SimplicityResult(True, None, math.inf)
    if eps is None:
        diag = float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
        eps = INTERSECTION_REL_TOL * max(diag, 1e-300)

    best = math.inf
    witness = None

    # Adjacent pairs, trimmed at the shared vertex.
    i = np.arange(m if closed else m - 1)
    j = (i + 1) % m
    a1 = starts[i] + (1.0 - ADJACENT_TRIM) * (ends[i] - starts[i])
    b0 = starts[j] + ADJACENT_TRIM * (ends[j] - starts[j])
    d = seg_seg_distance(starts[i], a1, b0, ends[j])
    k = int(np.argmin(d))
    if d[k] < best:
        best = float(d[k])
        witness = (int(i[k]), int(j[k]))

    # Non-adjacent pairs, chunked to bound memory.
    chunk = max(1, (1 << 22) // m)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        ii = np.arange(lo, hi)[:, None]
        jj = np.arange(m)[None, :]
        mask = jj >= ii + 2
        if closed:
            mask &= ~((ii == 0) & (jj == m - 1))
        ri, rj = np.nonzero(mask)
        if not len(ri):
            continue
        ri = ri + lo
        d = seg_seg_distance(starts[ri], ends[ri], starts[rj], ends[rj])
        k = int(np.argmin(d))
        if d[k] < best:
            best = float(d[k])
            witness = (int(ri[k]), int(rj[k]))

    if best < eps:
        return SimplicityResult(False, witness, best)
    return SimplicityResult(True, None, best)


def pieces_all_simple(piece_points: np.ndarray, eps: float | None = None):
    """Batched simplicity test over stacked pieces (m, k, 3).

    Same predicate as :func:`is_simple_polyline` per piece; returns
    (all_simple, witness, min_distance) with witness = (piece, edge_i, edge_j).
    """
    m, k, _ = piece_points.shape
    ne = k - 1
    if ne < 2:
        return True, None, math.inf
    if eps is None:
        spans = piece_points.max(axis=1) - piece_points.min(axis=1)
        diag = np.linalg.norm(spans, axis=1)
        eps_piece = INTERSECTION_REL_TOL * np.maximum(diag, 1e-300)
    else:
        eps_piece = np.full(m, eps)

    starts = piece_points[:, :-1, :]
    ends = piece_points[:, 1:, :]
    best = math.inf
    witness = None
    ok = True

    i = np.arange(ne - 1)
    a1 = starts[:, i] + (1.0 - ADJACENT_TRIM) * (ends[:, i] - starts[:, i])
    b0 = starts[:, i + 1] + ADJACENT_TRIM * (ends[:, i + 1] - starts[:, i + 1])
    d = seg_seg_distance(starts[:, i], a1, b0, ends[:, i + 1])
    viol = d < eps_piece[:, None]
    if viol.any():
        ok = False
        p, e = np.unravel_index(int(np.argmin(np.where(viol, d, np.inf))), d.shape)
        witness = (int(p), int(e), int(e) + 1)
    best = min(best, float(d.min()))

    pairs = [(a, b) for a in range(ne) for b in range(a + 2, ne)]
    if pairs:
        ia = np.array([p[0] for p in pairs])
        ib = np.array([p[1] for p in pairs])
        d = seg_seg_distance(starts[:, ia], ends[:, ia], starts[:, ib], ends[:, ib])
        viol = d < eps_piece[:, None]
        if viol.any():
            ok = False
            p, e = np.unravel_index(int(np.argmin(np.where(viol, d, np.inf))), d.shape)
            witness = (int(p), int(ia[e]), int(ib[e]))
        best = min(best, float(d.min()))
    return ok, witness, best


def parameterwise_distance(curve: CompositeBezier, result: SubdivisionResult,
                           samples: int = 1000):
    """Max distance between the curve and the union polygon at aligned parameters.

    Samples uniformly over [0, 1] plus every polygon node; returns
    (distance, argmax parameter).
    """
    union = result.union_polygon
    m = union.num_edges
    ts = np.union1d(np.linspace(0.0, 1.0, max(2, samples)), np.arange(m + 1) / m)
    dist = np.linalg.norm(pl_evaluate(union, ts) - evaluate(curve, ts), axis=1)
    worst = int(np.argmax(dist))
    return float(dist[worst]), float(ts[worst])


def max_derivative_angle(curve: CompositeBezier, result: SubdivisionResult,
                         samples: int = 2000):
    """Max angle between the curve derivative and the polygon's edge direction.

    The polygon derivative is piecewise constant (the containing edge of the
    union polygon); angles are scale-free so parametrization factors drop
    out.  Raises :class:`RegularityNotReached` if the polygon still has a
    zero-length edge (subdivide more and retry).
    """
    union = result.union_polygon.vertices
    m = len(union) - 1
    edges = union[1:] - union[:-1]
    lengths = np.linalg.norm(edges, axis=1)
    scale = float(lengths.max(initial=0.0))
    if scale == 0.0 or lengths.min() <= 1e-13 * scale:
        raise RegularityNotReached("union polygon has a zero-length edge")
    ts = np.linspace(0.0, 1.0, max(2, samples))
    j = np.minimum((ts * m).astype(int), m - 1)
    e = edges[j]
    d = evaluate_derivative(curve, ts, 1)
    if np.linalg.norm(d, axis=1).min() <= 0.0:
        raise RegularityError("curve derivative vanished at a sample")
    angles = np.arctan2(np.linalg.norm(np.cross(e, d), axis=1),
                        np.sum(e * d, axis=1))
    worst = int(np.argmax(angles))
    return float(angles[worst]), float(ts[worst])


def measure_max_exterior_angle(result: SubdivisionResult) -> float:
    """Max exterior angle over all interior vertices of all pieces."""
    angles = piece_exterior_angles(result.piece_points)
    return float(angles.max(initial=0.0))


def piece_total_curvatures(result: SubdivisionResult) -> np.ndarray:
    """Total curvature (sum of interior exterior angles) of each piece."""
    angles = piece_exterior_angles(result.piece_points)
    if angles.shape[1] == 0:
        return np.zeros(result.num_pieces)
    return angles.sum(axis=1)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class TopologyCertificate:
    """Outcome of certifying one curve at one level.

    ``iterations`` is the closed-form bound for the level; the oracle suite
    runs at ``verified_at_iterations`` (bound + 1, honoring the strict
    "more than the bound" reading), and both are recorded.
    """

    level: str
    iterations: int
    verified_at_iterations: int
    constants: GeometricConstants | None
    bounds: bounds_mod.IterationBounds | None
    pipe_estimate: PipeEstimate | None
    checks: tuple[CheckResult, ...]
    sample_counts: dict[str, int]
    verified: bool

    def failed_checks(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.passed)


def _level_checks(curve, result, level, gc, samples):
    checks = []
    ok, witness, margin = pieces_all_simple(result.piece_points)
    checks.append(CheckResult(
        "piece_simplicity", ok, margin,
        detail="" if ok else f"piece {witness[0]} edges {witness[1:]} intersect",
    ))
    curv = piece_total_curvatures(result)
    worst = float(curv.max(initial=0.0))
    checks.append(CheckResult("piece_total_curvature_pi", worst < math.pi, worst, math.pi))

    if level in ("homeomorphic", "isotopic"):
        checks.append(CheckResult(
            "piece_total_curvature_half_pi", worst < math.pi / 2, worst, math.pi / 2))
        g = is_simple_polyline(result.union_polygon)
        checks.append(CheckResult(
            "global_simplicity", g.simple, g.min_distance,
            detail="" if g.simple else f"edges {g.witness} intersect",
        ))
        r = gc.pipe_radius
        dist, t_worst = parameterwise_distance(curve, result, samples)
        checks.append(CheckResult(
            "pipe_containment", dist < r, dist, r, detail=f"worst at t={t_worst:.6g}"))
        if level == "isotopic":
            checks.append(CheckResult(
                "distance_half_radius", dist < r / 2, dist, r / 2,
                detail=f"worst at t={t_worst:.6g}"))
            angle, t_ang = max_derivative_angle(curve, result, samples)
            checks.append(CheckResult(
                "derivative_angle_pi_6", angle < math.pi / 6, angle, math.pi / 6,
                detail=f"worst at t={t_ang:.6g}"))
    return checks


def certify(curve: CompositeBezier, level: str,
            pipe_radius: float | None = None,
            samples: int = 2000,
            pipe_density: int = DEFAULT_DENSITY,
            pipe_safety: float = DEFAULT_SAFETY,
            cap: int = DEFAULT_ITERATION_CAP,
            max_retries: int = 2) -> TopologyCertificate:
    """Compute bounds, subdivide past them, and verify the level's oracle suite.

    Any oracle failure yields ``verified=False`` with a witness; it signals a
    violated standing assumption (e.g. a self-intersecting input curve), not
    an error in the caller's usage.
    """
    level = normalize_level(level)
    sample_counts = {"distance_angle_samples": samples, "pipe_density": pipe_density}
    checks: list[CheckResult] = []

    def failed(check: CheckResult) -> TopologyCertificate:
        return TopologyCertificate(
            level=level, iterations=0, verified_at_iterations=0,
            constants=None, bounds=None, pipe_estimate=None,
            checks=tuple(checks) + (check,), sample_counts=sample_counts,
            verified=False,
        )

    try:
        gc = geometric_constants(curve)
    except RegularityError as exc:
        return failed(CheckResult("regularity", False, 0.0, detail=str(exc)))

    pipe_est = None
    need_radius = level in ("homeomorphic", "isotopic")
    if pipe_radius is not None:
        gc = gc.with_pipe_radius(pipe_radius)
        checks.append(CheckResult("pipe_radius", True, pipe_radius, detail="user-supplied"))
    elif need_radius:
        try:
            pipe_est = estimate_pipe_radius(curve, density=pipe_density, safety=pipe_safety)
        except NotSimpleError as exc:
            return failed(CheckResult("pipe_radius", False, 0.0, detail=str(exc)))
        gc = gc.with_pipe_radius(pipe_est.radius)
        checks.append(CheckResult("pipe_radius", True, pipe_est.radius, detail="estimated"))

    bnds = bounds_mod.compute_bounds(gc)
    bound = bnds.for_level(level)
    run_at = bound + 1

    level_checks = None
    for _ in range(max_retries + 1):
        result = subdivide(curve, run_at, cap=cap)
        try:
            level_checks = _level_checks(curve, result, level, gc, samples)
            break
        except RegularityNotReached:
            run_at += 1
    if level_checks is None:
        checks.append(CheckResult(
            "derivative_regularity", False, 0.0,
            detail=f"zero-length polygon edge persisted through {run_at} iterations"))
    else:
        checks.extend(level_checks)

    verified = all(c.passed for c in checks)
    return TopologyCertificate(
        level=level,
        iterations=bound,
        verified_at_iterations=run_at,
        constants=gc,
        bounds=bnds,
        pipe_estimate=pipe_est,
        checks=tuple(checks),
        sample_counts=sample_counts,
        verified=verified,
    )
