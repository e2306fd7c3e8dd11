"""Command line: build shadow configurations and check them.

Exit codes: 0 when the configuration is verified, 1 when a construction or a
check fails, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import files
from .capcover import SNAP, find_escape_sampling
from .constructions import (
    ConstructionError,
    Lemma2Params,
    lemma2_constants,
    lemma2_unit_sphere,
    tune_lemma2,
    two_balls_unit_circle,
)
from .domains.expr import ExpressionError
from .domains.shapes import DomainError, ImplicitDomain
from .domains.theorems import theorem1_construct, theorem2_construct, validate
from .export import write_obj, write_svg
from .geom import GeometryError, rotation_2d

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MIN_SAMPLES = 1000


class InputError(Exception):
    pass


def _point(text: str) -> list[float]:
    try:
        return [float(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point {text!r}, expected x,y[,z]") from None


def _oracle_rotation(dim: int, seed: int | None):
    if seed is None:
        return None
    rng = np.random.default_rng(seed)
    if dim == 2:
        return rotation_2d(float(rng.uniform(0.0, 2.0 * math.pi)))
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    return q if np.linalg.det(q) > 0 else -q


def _certify(d, cfg, args):
    samples = args.samples or 0
    if samples and samples < MIN_SAMPLES:
        raise InputError(f"--samples must be at least {MIN_SAMPLES}")
    cert = validate(d, cfg)
    if samples:
        cert.samples_used = samples
        if cert.covered:
            cert.oracle_escape = find_escape_sampling(
                cfg.x0, cfg.balls, samples, _oracle_rotation(cfg.dim, args.seed)
            )
    return cert


def _emit(cfg, cert, args, d=None) -> int:
    if args.out:
        files.write_config(args.out, cfg)
    cert_path = args.cert or (Path(args.out).with_suffix(".cert.json") if args.out else None)
    if cert_path:
        files.write_certificate(cert_path, cert)
    if getattr(args, "svg", None):
        write_svg(args.svg, cfg, d)
    if getattr(args, "mesh", None):
        write_obj(args.mesh, cfg, d)
    sys.stdout.write(files.dumps(cert.to_dict()))
    failed = cert.failed_checks()
    target = getattr(args, "margin_target", None) or 0.0
    if cert.covered and cert.margin < target - SNAP:
        failed.append(f"margin {cert.margin:.6g} below target {target:.6g}")
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        if cert.witness is not None and not cert.covered:
            w = ", ".join(f"{c:.17g}" for c in cert.witness)
            print(f"escape direction: [{w}]", file=sys.stderr)
        if cert.oracle_escape is not None:
            w = ", ".join(f"{c:.17g}" for c in cert.oracle_escape)
            print(f"sampling oracle escape: [{w}]", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_solve(args) -> int:
    d = files.read_domain(args.domain)
    if len(args.point) != d.dim:
        raise InputError(f"point has {len(args.point)} coordinates, domain is {d.dim}-d")
    if not d.contains(args.point):
        raise InputError("point not in domain")
    if d.dim == 2:
        cfg = theorem1_construct(d, args.point, mode=args.mode)
    else:
        cfg = theorem2_construct(d, args.point, mode=args.mode)
    return _emit(cfg, _certify(d, cfg, args), args, d)


def cmd_verify(args) -> int:
    cfg = files.read_config(args.config)
    d = files.read_domain(args.domain) if args.domain else None
    if d is not None and d.dim != cfg.dim:
        raise InputError("configuration and domain dimensions differ")
    return _emit(cfg, _certify(d, cfg, args), args, d)


def cmd_lemma2(args) -> int:
    c = lemma2_constants()
    print(
        f"y' = {c.y_prime:.4f}   x' = {c.x_prime:.4f}   r' = {c.r_prime:.4f}   a = {c.side_a:.4f}",
        file=sys.stderr,
    )
    if args.epsilon is None and args.delta is None:
        p = tune_lemma2()
    else:
        base = Lemma2Params()
        p = Lemma2Params(
            base.eps_level if args.epsilon is None else args.epsilon,
            base.delta if args.delta is None else args.delta,
        )
    print(f"eps_level = {p.eps_level:.6g}   delta = {p.delta:.6g}", file=sys.stderr)
    cfg = lemma2_unit_sphere(p, mode=args.mode, verify=False)
    sphere = ImplicitDomain("x^2 + y^2 + z^2 - 1", 3)
    return _emit(cfg, _certify(sphere, cfg, args), args, sphere)


def cmd_khudai2d(args) -> int:
    cfg = two_balls_unit_circle(args.margin, mode=args.mode)
    circle = ImplicitDomain("x^2 + y^2 - 1", 2)
    args.margin_target = 0.0
    return _emit(cfg, _certify(circle, cfg, args), args, circle)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shadowballs",
        description="Construct and verify balls that block every line through a point.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_out=True):
        p.add_argument("--mode", choices=("open", "closed"), default="closed")
        p.add_argument("--samples", type=int, default=0, help="also run the sampling oracle")
        p.add_argument("--seed", type=int, default=None, help="rotates the oracle's sample layout")
        p.add_argument("--cert", help="certificate output (default: next to --out)")
        if with_out:
            p.add_argument("--out", help="configuration output (JSON)")

    p = sub.add_parser("solve", help="shadow a point of a domain (2 balls in 2-d, 4 in 3-d)")
    p.add_argument("--domain", required=True)
    p.add_argument("--point", required=True, type=_point)
    p.add_argument("--margin", dest="margin_target", type=float, default=0.0)
    common(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--svg")
    g.add_argument("--mesh")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify an existing configuration file")
    p.add_argument("config")
    p.add_argument("--domain")
    p.add_argument("--margin", dest="margin_target", type=float, default=0.0)
    common(p, with_out=False)
    p.set_defaults(func=cmd_verify, out=None)

    p = sub.add_parser("lemma2", help="four balls on the unit sphere")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--margin", dest="margin_target", type=float, default=0.0)
    p.add_argument("--mesh")
    common(p)
    p.set_defaults(func=cmd_lemma2)

    p = sub.add_parser("khudai2d", help="two disks on the unit circle")
    p.add_argument("--margin", type=float, default=0.02, help="overlap angle of the two intervals")
    p.add_argument("--svg")
    common(p)
    p.set_defaults(func=cmd_khudai2d)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, files.FormatError, DomainError, ExpressionError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
