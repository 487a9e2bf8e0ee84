"""Shared fixtures: random regular curves and the standing test corpus."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curvecert import CompositeBezier, RegularityError
from curvecert import bounds as bounds_mod
from curvecert import metrics, pipe

# Degree-4 curve whose initial control polygon self-intersects while the
# curve itself is simple and regular (verified in test_acceptance).
ADVERSARIAL_POINTS = np.array(
    [[0.0, 0.0, 0.0],
     [2.6, 1.0, 0.0],
     [1.7, -0.3, 0.0],
     [0.0, 1.7, 0.0],
     [1.0, 2.5, 0.0]]
)


def random_regular_curve(rng, degree: int, segments: int = 1) -> CompositeBezier:
    """A drifting control polygon with bounded jitter.

    The drift keeps the hodograph comfortably away from the origin (so the
    curve is regular with a healthy derivative floor) while the jitter makes
    the curve genuinely twist in 3D.  Multi-segment curves reuse the last
    step across the junction, which makes them exactly C1.
    """
    jitter = 0.18 if degree <= 4 else 0.12
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    seg_steps = []
    last = None
    for s in range(segments):
        steps = []
        for j in range(degree):
            if s > 0 and j == 0:
                steps.append(last)
                continue
            steps.append(direction * rng.uniform(0.8, 1.2) + jitter * rng.normal(size=3))
        last = steps[-1]
        seg_steps.append(steps)
    point = rng.uniform(-1.0, 1.0, size=3)
    segs = []
    for steps in seg_steps:
        pts = [point]
        for st in steps:
            point = point + st
            pts.append(point)
        segs.append(np.array(pts))
    return CompositeBezier.from_segments(segs)


def corpus_curve(rng, degree: int, need_pipe: bool = False,
                 max_isotopy_bound: int = 8):
    """One corpus entry: a curve whose acceptance constants are well-posed.

    Resamples until the derivative-floor constant is meaningful
    (n1_raw < -0.05, so sigma - b_prime_dist(0) has real margin) and, when a
    pipe radius is requested, until the isotopy bound stays desk-sized.
    Returns (curve, constants) with the pipe radius attached when asked for.
    """
    for _ in range(200):
        segments = 2 if rng.uniform() < 0.15 else 1
        curve = random_regular_curve(rng, degree, segments)
        try:
            gc = metrics.geometric_constants(curve)
        except RegularityError:
            continue
        if bounds_mod.n1_raw(gc) > -0.05:
            continue
        if not need_pipe:
            return curve, gc
        est = pipe.estimate_pipe_radius(curve, density=256)
        gc = gc.with_pipe_radius(est.radius)
        if bounds_mod.iterations_for_isotopy(gc) > max_isotopy_bound:
            continue
        return curve, gc
    raise AssertionError(f"could not sample a corpus curve of degree {degree}")


@pytest.fixture(scope="session")
def small_corpus():
    """A handful of curves per degree for module-level property tests."""
    rng = np.random.default_rng(20240811)
    return {
        degree: [corpus_curve(rng, degree)[0] for _ in range(6)]
        for degree in (2, 3, 4, 5)
    }
