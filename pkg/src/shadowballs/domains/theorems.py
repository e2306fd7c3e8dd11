"""Shadow configurations on arbitrary domains, and their certificates.

Both drivers follow the same recipe.  Take the largest ball about ``x0``
inside the domain, lay out a spherical configuration on its boundary with
the biggest ball at the touching point, then push every other ball out along
its own ray from ``x0`` until its center reaches the domain boundary.  A
homothety about ``x0`` does not change the cap a ball blocks, and a smaller
ball pushed outward (factor >= 1) never meets a bigger one left in place, so
the shadow and the disjointness both survive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..capcover import find_escape_sampling
from ..constructions import (
    ConstructionError,
    Lemma2Params,
    ShadowConfig,
    lemma2_unit_sphere,
    tune_lemma2,
    two_balls_unit_circle,
)
from ..geom import Mode, Sphere, as_point, homothety_ball, line_hits_ball, rotation_2d, unit
from .shapes import T_MAX, Domain, DomainError, estimate_inradius

log = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-6


class RayMissesBoundary(ConstructionError):
    pass


class ConstructionFailed(ConstructionError):
    pass


class ValidationFailed(ConstructionError):
    def __init__(self, certificate: "Certificate"):
        super().__init__(f"validation failed: {', '.join(certificate.failed_checks())}")
        self.certificate = certificate


@dataclass
class Certificate:
    covered: bool
    margin: float
    outside_point: bool
    pairwise_disjoint: bool
    centers_on_boundary: bool | None
    witness: np.ndarray | None = None
    witness_verified: bool | None = None
    samples_used: int = 0
    oracle_escape: np.ndarray | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failed_checks()

    def failed_checks(self) -> list[str]:
        failed = []
        if not self.outside_point:
            failed.append("outside_point")
        if not self.pairwise_disjoint:
            failed.append("pairwise_disjoint")
        if self.centers_on_boundary is False:
            failed.append("centers_on_boundary")
        if not self.covered:
            failed.append("coverage")
        if self.oracle_escape is not None:
            failed.append("sampling_oracle")
        return failed

    def to_dict(self) -> dict:
        return {
            "covered": self.covered,
            "margin": self.margin if math.isfinite(self.margin) else None,
            "checks": {
                "outside_point": self.outside_point,
                "pairwise_disjoint": self.pairwise_disjoint,
                "centers_on_boundary": self.centers_on_boundary,
            },
            "witness": None if self.witness is None else [float(c) for c in self.witness],
            "samples_used": self.samples_used,
        }


def validate(
    d: Domain | None,
    cfg: ShadowConfig,
    tol: float = BOUNDARY_TOL,
    samples: int = 0,
) -> Certificate:
    """Check every requirement on a shadow configuration and aggregate a verdict.

    Failures are reported in the certificate, never raised.  Without a domain
    the boundary check is skipped (``None``).  With ``samples > 0`` the
    independent sampling oracle is run as well.
    """
    if d is not None and d.dim != cfg.dim:
        raise DomainError("configuration and domain dimensions differ")
    outside = cfg.point_outside()
    disjoint = cfg.pairwise_disjoint()
    on_boundary = None
    residuals = []
    if d is not None:
        residuals = [d.boundary_residual(b.center) for b in cfg.balls]
        on_boundary = bool(all(r < tol for r in residuals))
    if outside and cfg.balls:
        v = cfg.verdict()
        covered, margin, witness = v.covered, v.margin, v.witness
    else:
        # a ball holding x0 blocks every line; coverage is moot
        covered, margin = False, -math.inf
        witness = np.eye(cfg.dim)[-1]
    witness_ok = None
    if witness is not None:
        witness_ok = not any(line_hits_ball(cfg.x0, witness, b) for b in cfg.balls)
    escape = None
    if samples and covered:
        escape = find_escape_sampling(cfg.x0, cfg.balls, samples)
    return Certificate(
        covered=covered,
        margin=margin,
        outside_point=outside,
        pairwise_disjoint=disjoint,
        centers_on_boundary=on_boundary,
        witness=witness,
        witness_verified=witness_ok,
        samples_used=int(samples),
        oracle_escape=escape,
        details={"boundary_residuals": residuals},
    )


def _push_to_boundary(d: Domain, base: ShadowConfig, rho: float, t_max: float) -> ShadowConfig:
    """Scale each ball about ``x0`` so that its center lands on ``d``'s boundary."""
    x0 = base.x0
    axes = np.array([unit(b.center - x0) for b in base.balls])
    t = d.first_hits(x0, axes, t_max)
    if np.isnan(t).any():
        raise RayMissesBoundary(
            f"{int(np.isnan(t).sum())} construction rays never leave the domain"
        )
    ks = t / rho
    balls = tuple(homothety_ball(b, x0, float(k)) for b, k in zip(base.balls, ks))
    meta = dict(base.meta, base_balls=base.balls)
    return ShadowConfig(
        x0, balls, coefficients=tuple(float(k) for k in ks), sphere_radius=rho, meta=meta
    )


def _hypothesis_pattern(ks) -> bool:
    """The first (biggest) ball has the smallest coefficient, all coefficients >= 1."""
    return min(ks) >= 1.0 and all(k >= ks[0] for k in ks[1:])


def _search(d, trials, rho, t_max, tol):
    last = None
    for label, make in trials:
        try:
            cfg = _push_to_boundary(d, make(), rho, t_max)
        except RayMissesBoundary as exc:
            last = exc
            continue
        if not _hypothesis_pattern(cfg.coefficients):
            last = ConstructionFailed(f"{label}: biggest ball is not the closest to x0")
            continue
        cert = validate(d, cfg, tol)
        if cert.ok:
            cfg.meta["trial"] = label
            return cfg, cert
        last = ValidationFailed(cert)
    if isinstance(last, ValidationFailed):
        raise last
    raise ConstructionFailed(f"no orientation worked ({last})")


def theorem1_construct(
    d: Domain,
    x0,
    margin_angle: float = 0.02,
    mode: Mode = "closed",
    n_directions: int | None = None,
    t_max: float = T_MAX,
    tol: float = BOUNDARY_TOL,
) -> ShadowConfig:
    """Two disjoint disks centered on the boundary of a planar domain shadowing ``x0``."""
    if d.dim != 2:
        raise DomainError("theorem1_construct needs a planar domain")
    x0 = as_point(x0, 2)
    if not d.contains(x0):
        raise DomainError("point not in domain")
    est = estimate_inradius(d, x0, n_directions, t_max, allow_unbounded=True)
    rho = est.rho
    u = est.touch_direction

    def layout(direction, flip):
        return lambda: two_balls_unit_circle(margin_angle, mode, x0, rho, direction, flip)

    trials = [(f"touch, flip={f}", layout(u, f)) for f in (False, True)]
    for deg in range(1, 360):
        w = rotation_2d(math.radians(deg)) @ u
        trials += [(f"rotated {deg} deg, flip={f}", layout(w, f)) for f in (False, True)]
    cfg, _ = _search(d, trials, rho, t_max, tol)
    cfg.meta.update(rho=rho, touch_direction=u.tolist())
    return cfg


def theorem2_construct(
    d: Domain,
    x0,
    params: Lemma2Params | None = None,
    mode: Mode = "closed",
    n_directions: int | None = None,
    t_max: float = T_MAX,
    tol: float = BOUNDARY_TOL,
) -> ShadowConfig:
    """Four disjoint balls centered on the boundary of a spatial domain shadowing ``x0``.

    ``params`` defaults to the tuned four-ball layout.  When a side ray never
    reaches the boundary the side balls are turned about the biggest ball's
    axis, one degree at a time.
    """
    if d.dim != 3:
        raise DomainError("theorem2_construct needs a 3-d domain")
    x0 = as_point(x0, 3)
    if not d.contains(x0):
        raise DomainError("point not in domain")
    est = estimate_inradius(d, x0, n_directions, t_max, allow_unbounded=True)
    rho = est.rho
    u = est.touch_direction
    base = params or tune_lemma2()
    p = Lemma2Params(base.eps_level, base.delta, Sphere(x0, rho))

    def layout(twist):
        return lambda: lemma2_unit_sphere(p, direction=u, twist=twist, mode=mode, verify=False)

    trials = [(f"twist {deg} deg", layout(math.radians(deg))) for deg in range(360)]
    cfg, _ = _search(d, trials, rho, t_max, tol)
    cfg.meta.update(rho=rho, touch_direction=u.tolist())
    return cfg
