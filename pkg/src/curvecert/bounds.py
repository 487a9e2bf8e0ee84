"""Closed-form sufficient subdivision counts for topology certificates.

All logarithms are base 2 and every bound clamps negative values to 0 (the
condition it encodes already holds before any subdivision).  Counts are
integers obtained by ceiling; verification runs use count+1 so that strict
"more iterations than the bound" phrasing is honored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConstantsError, DomainError
from .metrics import GeometricConstants, b_prime_dist, n_infinity

# Degree 1 and 2 control polygons are trivially equivalent to their curves
# (a segment, or three points spanning a plane), so every count is 0 there.
TRIVIAL_DEGREE = 2


def _half_log2(arg: float) -> float:
    if arg <= 0.0:
        return -math.inf
    return 0.5 * math.log2(arg)


def n1_raw(gc: GeometricConstants) -> float:
    """Unclamped threshold beyond which the derivative polygon stays nonzero."""
    if gc.sigma <= 0.0:
        raise DomainError("sigma must be positive")
    if gc.degree < 2 or gc.delta2_prime_norm == 0.0:
        return -math.inf
    return _half_log2(n_infinity(gc.degree - 1) * gc.delta2_prime_norm / gc.sigma)


def n1(gc: GeometricConstants) -> float:
    """Iterations after which the derivative lower bound is positive (>= 0)."""
    return max(0.0, n1_raw(gc))


def derivative_floor(gc: GeometricConstants) -> float:
    """Positive lower bound for subdivided derivative-polygon vertex norms.

    Evaluates sigma - b_prime_dist at the first integer iteration strictly
    beyond n1.  Evaluating at n1 itself would make the floor identically
    zero whenever n1 > 0, so the first usable integer level is the honest
    choice; for curves with n1 == 0 both readings coincide.
    """
    raw = n1_raw(gc)
    first = 0 if raw <= 0.0 else math.floor(raw) + 1
    floor = gc.sigma - b_prime_dist(first, gc.degree, gc.delta2_prime_norm)
    if floor <= 0.0:
        raise ConstantsError(
            f"derivative floor is not positive (sigma={gc.sigma}, "
            f"delta2_prime_norm={gc.delta2_prime_norm})"
        )
    return floor


def f_nu(nu: float, gc: GeometricConstants) -> float:
    """Angle-bound numerator 2M / ((1 - cos nu) * derivative_floor)."""
    if not 0.0 < nu <= math.pi:
        raise DomainError(f"nu must lie in (0, pi], got {nu}")
    if gc.M == 0.0:
        return 0.0
    return 2.0 * gc.M / ((1.0 - math.cos(nu)) * derivative_floor(gc))


def n_of_nu(nu: float, gc: GeometricConstants) -> int:
    """Iterations guaranteeing every exterior angle is below ``nu``.

    Ceiling of max(n1, log2 f(nu)); returns 0 for degree <= 2 where the
    control polygon is already trivially equivalent.
    """
    if gc.degree <= TRIVIAL_DEGREE:
        return 0
    f = f_nu(nu, gc)
    log_f = math.log2(f) if f > 0.0 else -math.inf
    return max(0, math.ceil(max(n1(gc), log_f)))


def n_of_nu_raw(nu: float, gc: GeometricConstants) -> float:
    """Pre-ceiling value of the small-angle count (0 for trivial degrees)."""
    if gc.degree <= TRIVIAL_DEGREE:
        return 0.0
    f = f_nu(nu, gc)
    log_f = math.log2(f) if f > 0.0 else -math.inf
    return max(0.0, n1(gc), log_f)


def n_prime(r: float, gc: GeometricConstants) -> float:
    """Iterations after which the curve-to-polygon distance drops below ``r``."""
    if r <= 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    return max(0.0, _half_log2(n_infinity(gc.degree) * gc.delta2_norm / r))


def n2(gc: GeometricConstants) -> float:
    """Iterations bounding the angle between curve and polygon derivatives by pi/6."""
    if gc.sigma <= 0.0:
        raise DomainError("sigma must be positive")
    if gc.degree < 2 or gc.delta2_prime_norm == 0.0:
        return 0.0
    arg = (2.0 * n_infinity(gc.degree - 1) * gc.delta2_prime_norm
           / ((1.0 - math.sqrt(3.0) / 2.0) * gc.sigma))
    return max(0.0, _half_log2(arg))


# ---------------------------------------------------------------------------
# certificate-level counts


def iterations_for_simplicity(gc: GeometricConstants) -> int:
    """Count after which each piece's polygon is simple (total curvature < pi)."""
    if gc.degree <= TRIVIAL_DEGREE:
        return 0
    return n_of_nu(math.pi / (gc.degree - 1), gc)


def _require_radius(gc: GeometricConstants) -> float:
    if gc.pipe_radius is None:
        raise DomainError("pipe radius is required for this bound; estimate or supply one")
    return gc.pipe_radius


def _homeo_terms(gc: GeometricConstants) -> dict[str, float]:
    r = _require_radius(gc)
    return {
        "small_angles": float(n_of_nu(math.pi / (2 * (gc.degree - 1)), gc)),
        "pipe_containment": math.ceil(n_prime(r, gc)),
    }


def _isotopy_terms(gc: GeometricConstants) -> dict[str, float]:
    r = _require_radius(gc)
    return {
        "small_angles": float(n_of_nu(math.pi / (2 * (gc.degree - 1)), gc)),
        "half_pipe_containment": math.ceil(n_prime(r / 2.0, gc)),
        "derivative_angle": math.ceil(n2(gc)),
    }


def iterations_for_homeomorphism(gc: GeometricConstants) -> int:
    """Count after which the global polygon is simple and inside the pipe."""
    if gc.degree <= TRIVIAL_DEGREE:
        return 0
    return int(max(_homeo_terms(gc).values()))


def iterations_for_isotopy(gc: GeometricConstants) -> int:
    """Count after which the polygon satisfies both ambient-isotopy conditions."""
    if gc.degree <= TRIVIAL_DEGREE:
        return 0
    return int(max(_isotopy_terms(gc).values()))


# ---------------------------------------------------------------------------
# assembled record


@dataclass(frozen=True)
class IterationBounds:
    """Evaluated bounds with the term that achieved each max.

    ``n_hat_real`` / ``n_star_real`` are the pre-ceiling values used for the
    spacing check ``n_star_real < n_hat_real + 2``; the integer counts after
    independent ceilings may slip past that by one, so only the pre-ceiling
    relation is asserted.
    """

    n1: float
    n_of_nu: dict[float, int]
    n_prime_r: float | None
    n_prime_half_r: float | None
    n2: float
    simplicity: int
    homeomorphism: int | None
    isotopy: int | None
    n_hat_real: float | None
    n_star_real: float | None
    provenance: dict[str, str]
    spacing_ok: bool | None

    def for_level(self, level: str) -> int:
        value = {
            "simple-pieces": self.simplicity,
            "homeomorphic": self.homeomorphism,
            "isotopic": self.isotopy,
        }[level]
        if value is None:
            raise DomainError(f"bounds for level {level!r} need a pipe radius")
        return value


def compute_bounds(gc: GeometricConstants, nus: tuple[float, ...] = ()) -> IterationBounds:
    """Evaluate every iteration count for ``gc`` (pipe-dependent ones if r is set)."""
    n = gc.degree
    table: dict[float, int] = {}
    provenance: dict[str, str] = {}
    request = list(nus)
    if n > TRIVIAL_DEGREE:
        request += [math.pi / (n - 1), math.pi / (2 * (n - 1))]
    for nu in request:
        table[nu] = n_of_nu(nu, gc)
        if n > TRIVIAL_DEGREE:
            f = f_nu(nu, gc)
            log_f = math.log2(f) if f > 0.0 else -math.inf
            provenance[f"N(nu={nu:.6g})"] = "log_f" if log_f >= n1(gc) else "n1"

    have_r = gc.pipe_radius is not None
    n_prime_r = n_prime(gc.pipe_radius, gc) if have_r else None
    n_prime_half = n_prime(gc.pipe_radius / 2.0, gc) if have_r else None

    homeo = None
    iso = None
    n_hat_real = None
    n_star_real = None
    spacing_ok = None
    if n <= TRIVIAL_DEGREE:
        homeo, iso = 0, 0
        n_hat_real, n_star_real, spacing_ok = 0.0, 0.0, True
        provenance["homeomorphism"] = "trivial_degree"
        provenance["isotopy"] = "trivial_degree"
    elif have_r:
        terms_h = _homeo_terms(gc)
        homeo = int(max(terms_h.values()))
        provenance["homeomorphism"] = max(terms_h, key=terms_h.get)
        terms_i = _isotopy_terms(gc)
        iso = int(max(terms_i.values()))
        provenance["isotopy"] = max(terms_i, key=terms_i.get)
        angle_real = n_of_nu_raw(math.pi / (2 * (n - 1)), gc)
        n_hat_real = max(angle_real, n_prime_r)
        n_star_real = max(angle_real, n_prime_half, n2(gc))
        spacing_ok = n_star_real < n_hat_real + 2.0

    return IterationBounds(
        n1=n1(gc),
        n_of_nu=table,
        n_prime_r=n_prime_r,
        n_prime_half_r=n_prime_half,
        n2=n2(gc),
        simplicity=iterations_for_simplicity(gc),
        homeomorphism=homeo,
        isotopy=iso,
        n_hat_real=n_hat_real,
        n_star_real=n_star_real,
        provenance=provenance,
        spacing_ok=spacing_ok,
    )
