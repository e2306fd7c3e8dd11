"""Balls, caps and homotheties in the plane and in space.

Points are plain ``numpy`` float arrays of length 2 or 3.  Everything here is a
pure function of its arguments and all returned objects are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Mode = Literal["open", "closed"]

UNIT_TOL = 1e-12


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class PointInsideBall(GeometryError):
    """The observation point lies in the closed ball, so no cap exists."""


def as_point(p, dim: int | None = None) -> np.ndarray:
    """Validate and freeze a point given as any sequence of 2 or 3 reals."""
    a = np.array(p, dtype=float).reshape(-1)
    if a.size not in (2, 3):
        raise GeometryError(f"points must have 2 or 3 coordinates, got {a.size}")
    if dim is not None and a.size != dim:
        raise DimensionMismatch(f"expected a {dim}-d point, got {a.size}-d")
    if not np.all(np.isfinite(a)):
        raise GeometryError("point coordinates must be finite")
    a.flags.writeable = False
    return a


def unit(v) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(-1)
    n = float(np.linalg.norm(a))
    if not np.isfinite(n) or n == 0.0:
        raise GeometryError("cannot normalize a zero or non-finite vector")
    a = a / n
    a.flags.writeable = False
    return a


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.size} vs {b.size}")


def dist(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _same_dim(a, b)
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float
    mode: Mode = "closed"

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise GeometryError(f"ball radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)
        if self.mode not in ("open", "closed"):
            raise GeometryError(f"mode must be 'open' or 'closed', got {self.mode!r}")

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, p) -> bool:
        d = dist(self.center, p)
        return d < self.radius if self.mode == "open" else d <= self.radius

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return (
            self.radius == other.radius
            and self.mode == other.mode
            and np.array_equal(self.center, other.center)
        )

    def __hash__(self):
        return hash((self.center.tobytes(), self.radius, self.mode))


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise GeometryError("sphere radius must be positive")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size

    def __eq__(self, other):
        if not isinstance(other, Sphere):
            return NotImplemented
        return self.radius == other.radius and np.array_equal(self.center, other.center)

    def __hash__(self):
        return hash((self.center.tobytes(), self.radius))


@dataclass(frozen=True)
class Cap:
    """Directions within ``half_angle`` of ``axis`` on the unit direction sphere."""

    axis: np.ndarray
    half_angle: float

    def __post_init__(self):
        a = np.array(self.axis, dtype=float).reshape(-1)
        if a.size not in (2, 3):
            raise GeometryError("cap axis must have 2 or 3 components")
        object.__setattr__(self, "axis", unit(a))
        h = float(self.half_angle)
        if not (0.0 < h < math.pi / 2):
            raise GeometryError(f"cap half-angle must lie in (0, pi/2), got {h!r}")
        object.__setattr__(self, "half_angle", h)

    @property
    def dim(self) -> int:
        return self.axis.size

    def __eq__(self, other):
        if not isinstance(other, Cap):
            return NotImplemented
        return self.half_angle == other.half_angle and np.array_equal(self.axis, other.axis)

    def __hash__(self):
        return hash((self.axis.tobytes(), self.half_angle))


def interiors_disjoint(b1: Ball, b2: Ball) -> bool:
    """Non-overlap in the sense ``r1 + r2 <= d``; tangent balls count as disjoint."""
    return dist(b1.center, b2.center) >= b1.radius + b2.radius


def sets_disjoint(b1: Ball, b2: Ball) -> bool:
    """Like :func:`interiors_disjoint`, but two closed tangent balls share a point."""
    d = dist(b1.center, b2.center)
    if b1.mode == "closed" and b2.mode == "closed":
        return d > b1.radius + b2.radius
    return d >= b1.radius + b2.radius


def homothety_point(p, center, k: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    c = np.asarray(center, dtype=float)
    _same_dim(p, c)
    return c + k * (p - c)


def homothety_ball(b: Ball, center, k: float) -> Ball:
    """Image of ``b`` under scaling by ``k > 0`` about ``center``."""
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise GeometryError(f"homothety coefficient must be positive, got {k!r}")
    if k == 1.0:
        return b
    return Ball(homothety_point(b.center, center, k), k * b.radius, b.mode)


def cap_of_ball(x0, b: Ball) -> Cap:
    """Directions from ``x0`` along which a ray meets the closed ball ``b``.

    Raises :class:`PointInsideBall` when ``x0`` lies in the closed ball.
    """
    x0 = np.asarray(x0, dtype=float)
    _same_dim(x0, b.center)
    v = b.center - x0
    d = float(np.linalg.norm(v))
    if d <= b.radius:
        raise PointInsideBall(f"point at distance {d!r} from a ball of radius {b.radius!r}")
    return Cap(v / d, math.asin(b.radius / d))


def line_distance(x0, direction, center) -> float:
    """Perpendicular distance from ``center`` to the line through ``x0``."""
    u = np.asarray(direction, dtype=float)
    w = np.asarray(center, dtype=float) - np.asarray(x0, dtype=float)
    return float(np.linalg.norm(w - np.dot(w, u) * u))


def line_hits_ball(x0, direction, b: Ball) -> bool:
    """Does the full line ``x0 + t * direction``, t real, meet ``b``?"""
    u = np.asarray(direction, dtype=float)
    n = float(np.linalg.norm(u))
    if n == 0.0:
        raise GeometryError("direction must be nonzero")
    x0 = np.asarray(x0, dtype=float)
    _same_dim(x0, u)
    _same_dim(x0, b.center)
    h = line_distance(x0, u / n, b.center)
    return h < b.radius if b.mode == "open" else h <= b.radius


def line_hits_balls(x0, directions, centers, radii, mode: Mode = "closed") -> np.ndarray:
    """Vectorized :func:`line_hits_ball`: a ``(n_dirs, n_balls)`` boolean matrix.

    ``directions`` must be unit rows.
    """
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    W = np.atleast_2d(np.asarray(centers, dtype=float)) - np.asarray(x0, dtype=float)
    r = np.asarray(radii, dtype=float)
    proj = U @ W.T
    h2 = np.maximum(np.sum(W * W, axis=1)[None, :] - proj * proj, 0.0)
    if mode == "open":
        return h2 < r * r
    return h2 <= r * r


def orthonormal_complement(a) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors ``u, v`` with ``(a, u, v)`` a right-handed orthonormal frame."""
    a = np.asarray(a, dtype=float)
    # pick the world axis least aligned with a
    e = np.zeros(3)
    e[int(np.argmin(np.abs(a)))] = 1.0
    u = np.cross(a, e)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    return u, v


def rotation_taking(src, dst) -> np.ndarray:
    """A rotation matrix ``R`` (2-d or 3-d) with ``R @ src = dst`` for unit vectors."""
    s = np.asarray(src, dtype=float)
    t = np.asarray(dst, dtype=float)
    if s.size == 2:
        ang = math.atan2(t[1], t[0]) - math.atan2(s[1], s[0])
        return rotation_2d(ang)
    su, sv = orthonormal_complement(s)
    tu, tv = orthonormal_complement(t)
    return np.column_stack([t, tu, tv]) @ np.column_stack([s, su, sv]).T


def rotation_2d(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation by ``angle`` about the unit ``axis``."""
    k = np.asarray(axis, dtype=float)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)
