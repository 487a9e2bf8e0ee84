"""Command-line workflow: bounds, subdivide, certify, mesh.

Reports print as an indented key-value tree, or JSON with ``--json``; the
``certify`` exit code is 0 exactly when the certificate verified.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bounds as bounds_mod
from . import fileio, metrics, pipe, verify
from .curves import subdivide
from .errors import CurveError


def _constants_dict(gc: metrics.GeometricConstants) -> dict:
    return {
        "degree": gc.degree,
        "num_segments": gc.num_segments,
        "n_infinity": metrics.n_infinity(gc.degree),
        "M": gc.M,
        "sigma": gc.sigma,
        "delta2": list(gc.delta2),
        "delta2_norm": gc.delta2_norm,
        "delta2_prime": list(gc.delta2_prime),
        "delta2_prime_norm": gc.delta2_prime_norm,
        "pipe_radius": gc.pipe_radius,
    }


def _bounds_dict(b: bounds_mod.IterationBounds) -> dict:
    return {
        "n1": b.n1,
        "n_of_nu": {f"nu={nu:.12g}": count for nu, count in sorted(b.n_of_nu.items())},
        "n_prime_r": b.n_prime_r,
        "n_prime_half_r": b.n_prime_half_r,
        "n2": b.n2,
        "simplicity": b.simplicity,
        "homeomorphism": b.homeomorphism,
        "isotopy": b.isotopy,
        "n_hat_real": b.n_hat_real,
        "n_star_real": b.n_star_real,
        "spacing_ok": b.spacing_ok,
        "provenance": dict(b.provenance),
    }


def _certificate_dict(cert: verify.TopologyCertificate) -> dict:
    return {
        "level": cert.level,
        "iterations": cert.iterations,
        "verified_at_iterations": cert.verified_at_iterations,
        "verified": cert.verified,
        "sample_counts": dict(cert.sample_counts),
        "checks": {
            c.name: {
                "passed": c.passed,
                "value": c.value,
                "threshold": c.threshold,
                **({"detail": c.detail} if c.detail else {}),
            }
            for c in cert.checks
        },
    }


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(fileio.render_report(report))


def cmd_bounds(args) -> int:
    start = time.perf_counter()
    loaded = fileio.load_curve(args.curve)
    curve = loaded.curve
    radius = args.pipe_radius if args.pipe_radius is not None else loaded.pipe_radius
    estimate = None
    if radius is None:
        estimate = pipe.estimate_pipe_radius(curve)
        radius = estimate.radius
    gc = metrics.geometric_constants(curve, pipe_radius=radius)
    nus = tuple(args.nu) if args.nu else ()
    b = bounds_mod.compute_bounds(gc, nus=nus)
    report = {
        "input": {"path": args.curve, "degree": curve.degree,
                  "segments": curve.num_segments},
        "constants": _constants_dict(gc),
        "bounds": _bounds_dict(b),
        "timing": {"seconds": time.perf_counter() - start},
    }
    if estimate is not None:
        report["pipe_estimate"] = {
            "radius": estimate.radius,
            "curvature_bound": estimate.curvature_bound,
            "min_self_distance": estimate.min_self_distance,
            "safety_factor": estimate.safety_factor,
            "sample_density": estimate.sample_density,
        }
    _emit(report, args.json)
    return 0


def cmd_subdivide(args) -> int:
    start = time.perf_counter()
    loaded = fileio.load_curve(args.curve)
    result = subdivide(loaded.curve, args.iters)
    fileio.save_polyline(args.out, result)
    report = {
        "input": {"path": args.curve, "degree": loaded.curve.degree,
                  "segments": loaded.curve.num_segments},
        "iterations": args.iters,
        "pieces": result.num_pieces,
        "union_vertices": len(result.union_polygon.vertices),
        "out": args.out,
        "timing": {"seconds": time.perf_counter() - start},
    }
    _emit(report, args.json)
    return 0


def cmd_certify(args) -> int:
    start = time.perf_counter()
    loaded = fileio.load_curve(args.curve)
    radius = args.pipe_radius if args.pipe_radius is not None else loaded.pipe_radius
    cert = verify.certify(
        loaded.curve, args.level,
        pipe_radius=radius,
        samples=args.samples,
    )
    report = {
        "input": {"path": args.curve, "degree": loaded.curve.degree,
                  "segments": loaded.curve.num_segments},
        "certificate": _certificate_dict(cert),
        "timing": {"seconds": time.perf_counter() - start},
    }
    if cert.constants is not None:
        report["constants"] = _constants_dict(cert.constants)
    if cert.bounds is not None:
        report["bounds"] = _bounds_dict(cert.bounds)
    _emit(report, args.json)
    if not cert.verified:
        print("failed checks: " + ", ".join(cert.failed_checks()), file=sys.stderr)
        return 1
    return 0


def cmd_mesh(args) -> int:
    start = time.perf_counter()
    loaded = fileio.load_curve(args.curve)
    vertices, faces = pipe.pipe_surface_mesh(
        loaded.curve, args.radius,
        density_t=args.density_t, density_theta=args.density_theta,
    )
    fileio.write_mesh(args.out, vertices, faces)
    report = {
        "input": {"path": args.curve},
        "radius": args.radius,
        "vertices": len(vertices),
        "faces": len(faces),
        "out": args.out,
        "timing": {"seconds": time.perf_counter() - start},
    }
    _emit(report, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvecert",
        description="Subdivision-based topology certificates for composite Bezier curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="print geometric constants and iteration bounds")
    p.add_argument("curve")
    p.add_argument("--nu", type=float, action="append",
                   help="extra angle threshold for the N(nu) table (repeatable)")
    p.add_argument("--pipe-radius", type=float, default=None,
                   help="override the estimated pipe radius")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("subdivide", help="subdivide and write the polygon pieces")
    p.add_argument("curve")
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("certify", help="certify a topology level and verify it")
    p.add_argument("curve")
    p.add_argument("--level", required=True,
                   choices=["simple", "homeo", "isotopy"])
    p.add_argument("--pipe-radius", type=float, default=None)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("mesh", help="export a sampled pipe surface mesh")
    p.add_argument("curve")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--density-t", type=int, default=128)
    p.add_argument("--density-theta", type=int, default=16)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mesh)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
