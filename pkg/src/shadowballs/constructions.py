"""Explicit ball placements casting a shadow at the center of a circle or sphere.

Space: four balls on a sphere.  The construction frame puts the sphere
center at ``(0, -1, 0)`` and the big ball ``B1`` at the origin, tangent to
the plane ``y = -1``.  Three equal side balls sit on the circle where a plane
``y = const`` cuts the sphere, each tangent to the unit ``B1``.  Lowering
that plane widens the sector each side ball covers inside ``y = -1``, and
finally ``B1`` is shrunk so the observation point leaves it.

Plane: two disks on a circle whose blocked direction intervals overlap by a
chosen angle.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .capcover import CapFamily, Verdict, covers
from .geom import (
    Ball,
    Mode,
    Sphere,
    as_point,
    interiors_disjoint,
    rotation_2d,
    rotation_about,
    rotation_taking,
    unit,
)


class ConstructionError(ValueError):
    pass


class InvalidParams(ConstructionError):
    pass


class NoIntersectionWithSigma(ValueError):
    pass


class NoRootInRange(ValueError):
    pass


class SearchFailed(ConstructionError):
    pass


@dataclass(frozen=True)
class ShadowConfig:
    """An observation point and a collection of balls meant to shadow it.

    ``coefficients`` records, for configurations produced by homothety from a
    spherical layout, the factor applied to each ball about ``x0`` and
    ``sphere_radius`` the radius of that layout's sphere.
    """

    x0: np.ndarray
    balls: tuple[Ball, ...]
    coefficients: tuple[float, ...] | None = None
    sphere_radius: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x0", as_point(self.x0))
        object.__setattr__(self, "balls", tuple(self.balls))
        for b in self.balls:
            if b.dim != self.dim:
                raise ValueError("ball and point dimensions differ")

    @property
    def dim(self) -> int:
        return self.x0.size

    @property
    def mode(self) -> Mode:
        return "open" if any(b.mode == "open" for b in self.balls) else "closed"

    def cap_family(self) -> CapFamily:
        return CapFamily.from_balls(self.x0, self.balls)

    def verdict(self) -> Verdict:
        return covers(self.cap_family())

    def pairwise_disjoint(self) -> bool:
        bs = self.balls
        return all(
            interiors_disjoint(bs[i], bs[j]) for i in range(len(bs)) for j in range(i + 1, len(bs))
        )

    def point_outside(self) -> bool:
        return all(float(np.linalg.norm(b.center - self.x0)) > b.radius for b in self.balls)

    def without(self, i: int) -> "ShadowConfig":
        return ShadowConfig(self.x0, self.balls[:i] + self.balls[i + 1 :])


# ---------------------------------------------------------------------------
# the tangent-ball / sector-angle relations in the construction frame


def angle_from_center_xy(x: float, y: float) -> float:
    """Sector angle, seen from ``(0, -1, 0)`` inside the plane ``y = -1``, of the
    trace of the ball centered at ``(x, y, 0)`` and tangent to the unit ball at
    the origin."""
    if not x > 0:
        raise ValueError("x must be positive")
    rad = x * x - 2.0 * y - 2.0 * math.hypot(x, y)
    if rad < 0.0:
        if rad > -1e-14 * max(1.0, x * x):
            rad = 0.0
        else:
            raise NoIntersectionWithSigma(f"ball centered at ({x}, {y}) misses the plane y = -1")
    return 2.0 * math.asin(min(1.0, math.sqrt(rad) / x))


def sin2_half_angle_on_sphere(y: float) -> float:
    """``sin^2(phi / 2)`` for a tangent ball whose center is on the sphere, -2 < y < 0."""
    if not -2.0 < y < 0.0:
        raise ValueError("y must lie in (-2, 0)")
    return (-y * y - 4.0 * y - 2.0 * math.sqrt(-2.0 * y)) / (-y * y - 2.0 * y)


def level_from_x_and_angle(x: float, phi: float) -> float:
    """The center height ``y`` that gives sector angle ``phi`` at abscissa ``x``."""
    c2 = math.cos(phi / 2.0) ** 2
    return 0.25 * x * x * c2 - 1.0 / c2


def solve_level_for_angle(phi: float) -> float:
    """Height of the sphere circle whose tangent balls cover a sector ``phi``.

    Root of ``a y^2 + 2 (a + 2) y + 4 / a = 0`` with ``a = cos^2(phi / 2)``
    lying in ``(-2, 0)``.
    """
    if not 0.0 <= phi < math.pi:
        raise ValueError("phi must lie in [0, pi)")
    a = math.cos(phi / 2.0) ** 2
    y = (-(a + 2.0) + math.sqrt(a * a + 4.0 * a)) / a
    if not -2.0 < y < 0.0:
        raise NoRootInRange(f"root {y!r} for phi = {phi!r} is outside (-2, 0)")
    return y


@dataclass(frozen=True)
class Lemma2Constants:
    y_prime: float
    x_prime: float
    r_prime: float
    side_a: float


def lemma2_constants() -> Lemma2Constants:
    """Level, abscissa and radius of the side balls covering exactly pi/3, and the
    side of the inscribed triangle they sit on."""
    y = (math.sqrt(57.0) - 11.0) / 3.0
    x = 4.0 / 3.0 * math.sqrt(math.sqrt(57.0) - 7.0)
    return Lemma2Constants(y, x, math.hypot(x, y) - 1.0, math.sqrt(3.0) * x)


@dataclass(frozen=True)
class Lemma2Params:
    eps_level: float = 0.05
    delta: float = 0.01
    sphere: Sphere = field(default_factory=lambda: Sphere(np.zeros(3), 1.0))

    def __post_init__(self):
        if self.sphere.dim != 3:
            raise InvalidParams("the four-ball construction lives in 3-d")
        if not (self.eps_level >= 0.0 and lemma2_constants().y_prime - self.eps_level > -2.0):
            raise InvalidParams(f"eps_level {self.eps_level!r} moves the plane off the sphere")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParams(f"delta must lie in (0, 1), got {self.delta!r}")


def _side_layout(eps: float) -> tuple[float, float, float]:
    """Level, circle radius and side-ball radius in the unit construction frame."""
    y = lemma2_constants().y_prime - eps
    x = math.sqrt(max(0.0, 1.0 - (y + 1.0) ** 2))
    return y, x, math.hypot(x, y) - 1.0


def side_clearance(eps: float) -> float:
    """Gap between two neighbouring side balls (negative when they overlap)."""
    _, x, r = _side_layout(eps)
    return math.sqrt(3.0) * x - 2.0 * r


def _frame_map(sphere: Sphere, direction, twist: float):
    """Rigid map from the construction frame to the caller's frame."""
    d = unit(direction)
    R = rotation_about(d, twist) @ rotation_taking(np.array([0.0, 1.0, 0.0]), d)
    origin = np.array([0.0, -1.0, 0.0])

    def to_world(p):
        return sphere.center + sphere.radius * (R @ (np.asarray(p, dtype=float) - origin))

    return to_world


def lemma2_unit_sphere(
    p: Lemma2Params | None = None,
    direction=(0.0, 1.0, 0.0),
    twist: float = 0.0,
    mode: Mode = "closed",
    verify: bool = True,
) -> ShadowConfig:
    """Four balls with centers on ``p.sphere`` shadowing its center.

    ``direction`` is where ``B1`` (the first, biggest ball) sits as seen from the
    center; ``twist`` turns the three side balls about that direction.
    """
    p = p or Lemma2Params()
    y, x, r = _side_layout(p.eps_level)
    if side_clearance(p.eps_level) <= 0.0:
        raise InvalidParams(f"side balls overlap at eps_level = {p.eps_level!r}")
    if not r < 1.0:
        raise InvalidParams("side-ball radius reaches the sphere radius")
    to_world = _frame_map(p.sphere, direction, twist)
    rho = p.sphere.radius
    balls = [Ball(to_world([0.0, 0.0, 0.0]), (1.0 - p.delta) * rho, mode)]
    for k in range(3):
        th = 2.0 * math.pi * k / 3.0
        balls.append(Ball(to_world([x * math.cos(th), y, x * math.sin(th)]), r * rho, mode))
    cfg = ShadowConfig(
        p.sphere.center,
        tuple(balls),
        coefficients=(1.0,) * 4,
        sphere_radius=rho,
        meta={"eps_level": p.eps_level, "delta": p.delta},
    )
    if verify:
        v = cfg.verdict()
        if not v.covered:
            raise InvalidParams(
                f"eps_level = {p.eps_level!r}, delta = {p.delta!r} leave an escape line "
                f"(margin {v.margin:.3g})"
            )
        cfg.meta["margin"] = v.margin
    return cfg


def _margin(eps: float, delta: float) -> float:
    cfg = lemma2_unit_sphere(Lemma2Params(eps, delta), verify=False)
    return cfg.verdict().margin


@functools.lru_cache(maxsize=None)
def tune_lemma2(
    min_margin: float = 1e-3,
    clearance: float = 1e-2,
    n_eps: int = 24,
    deltas: tuple[float, ...] = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05),
) -> Lemma2Params:
    """Pick ``(eps_level, delta)`` maximizing the verified margin on the unit sphere.

    The level offset is capped by bisection where neighbouring side balls come
    within ``clearance`` of each other; a grid is then scanned below that cap.
    """
    lo, hi = 0.0, 2.0 + lemma2_constants().y_prime - 1e-9
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if side_clearance(mid) >= clearance:
            lo = mid
        else:
            hi = mid
    eps_cap = lo
    best = None
    for eps in np.linspace(eps_cap / n_eps, eps_cap, n_eps):
        for delta in deltas:
            m = _margin(float(eps), delta)
            if best is None or m > best[0]:
                best = (m, float(eps), delta)
    if best is None or best[0] < min_margin:
        raise SearchFailed(f"no parameters reach margin {min_margin}")
    return Lemma2Params(best[1], best[2])


# ---------------------------------------------------------------------------
# plane


def two_balls_unit_circle(
    margin_angle: float = 0.02,
    mode: Mode = "closed",
    x0=(0.0, 0.0),
    radius: float = 1.0,
    direction=(1.0, 0.0),
    flip: bool = False,
) -> ShadowConfig:
    """Two disks on a circle about ``x0`` that block every line through it.

    The bigger disk blocks a direction interval of half-width ``3 pi/8 + m/2``
    around ``direction``, the smaller one ``pi/8 + m/2`` around the perpendicular
    (rotated by -90 degrees if ``flip``); consecutive intervals overlap by ``m``.
    """
    m = float(margin_angle)
    if not 0.0 <= m < math.pi / 8:
        raise InvalidParams("margin_angle must lie in [0, pi/8)")
    a1 = 3.0 * math.pi / 8 + 0.5 * m
    a2 = math.pi / 8 + 0.5 * m
    if not math.sin(a1) + math.sin(a2) < math.sqrt(2.0):
        raise InvalidParams(f"margin_angle = {m!r} makes the two disks overlap")
    x0 = as_point(x0, 2)
    d = unit(direction)
    e = rotation_2d(-math.pi / 2 if flip else math.pi / 2) @ d
    balls = (
        Ball(x0 + radius * d, radius * math.sin(a1), mode),
        Ball(x0 + radius * e, radius * math.sin(a2), mode),
    )
    return ShadowConfig(x0, balls, coefficients=(1.0, 1.0), sphere_radius=radius)
