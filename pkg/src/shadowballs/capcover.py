"""Deciding whether a family of caps blocks every line through a point.

Each ball not containing the observation point ``x0`` blocks a cap of
directions; since a *line* is blocked when either of its two directions is,
every cap is paired with its antipode.  The family casts a shadow at ``x0``
exactly when these symmetrized caps cover the direction sphere.

In the plane this reduces to covering the projective circle ``[0, pi)`` by
intervals and is solved in closed form.  On ``S^2`` the decision uses the
boundary-circle rule: nonempty closed caps (with distinct boundary circles)
cover the sphere iff the boundary circle of every cap is covered by the other
caps.  If some open set escaped, its boundary would be an infinite set of
points each lying on one circle and in no other cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geom import Ball, Cap, Mode, cap_of_ball, line_hits_balls, orthonormal_complement

TWO_PI = 2.0 * math.pi
SNAP = 1e-12
MARGIN_TOL = 1e-9


# ---------------------------------------------------------------------------
# arcs on a circle


def _sweep_gaps(los, lens, touching_is_gap: bool, snap: float = SNAP):
    """Uncovered pieces of the circle left by arcs ``[lo, lo + len]``.

    Returns a list of ``(g_lo, g_hi)`` in absolute radians (not reduced).
    When ``touching_is_gap`` is set, arcs that only meet at an endpoint leave
    a zero-width gap there (open arcs miss their shared endpoint).
    """
    los = np.asarray(los, dtype=float)
    lens = np.asarray(lens, dtype=float)
    keep = lens > 0.0
    los, lens = los[keep], lens[keep]
    if los.size == 0:
        return [(0.0, TWO_PI)]
    if np.any(lens >= TWO_PI):
        return []
    # start the sweep strictly inside the longest arc so the seam is covered
    k = int(np.argmax(lens))
    s = float(los[k] + 0.5 * lens[k])
    lo = s + np.mod(los - s, TWO_PI)
    hi = lo + lens
    end = s + TWO_PI
    reach = max(s, float(np.max(hi)) - TWO_PI)
    gaps = []
    for a, b in sorted(zip(lo.tolist(), hi.tolist())):
        if a > reach + snap:
            gaps.append((reach, a))
        elif touching_is_gap and a >= reach - snap and b > reach:
            gaps.append((reach, reach))
        if b > reach:
            reach = b
    if reach < end - snap:
        gaps.append((reach, end))
    return gaps


class ArcSet:
    """A finite union of half-open arcs ``[lo, hi)`` on the circle ``R / 2 pi``."""

    def __init__(self, intervals: Iterable[tuple[float, float]] = ()):
        raw = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            length = hi - lo
            if not (0.0 < length <= TWO_PI + SNAP):
                raise ValueError(f"arc length must lie in (0, 2 pi], got {length!r}")
            raw.append((lo % TWO_PI, min(length, TWO_PI)))
        self._raw = raw

    def __repr__(self):
        return f"ArcSet({self.intervals!r})"

    @property
    def intervals(self) -> list[tuple[float, float]]:
        """Canonical form: sorted, merged, each ``lo`` in ``[0, 2 pi)``."""
        if not self._raw:
            return []
        los = [lo for lo, _ in self._raw]
        lens = [n for _, n in self._raw]
        gaps = _sweep_gaps(los, lens, touching_is_gap=False)
        if not gaps:
            return [(0.0, TWO_PI)]
        # the covered pieces are the complements of consecutive gaps
        gaps = sorted(gaps)
        out = []
        for (_, g_hi), (n_lo, _) in zip(gaps, gaps[1:] + [(gaps[0][0] + TWO_PI, 0.0)]):
            lo = g_hi % TWO_PI
            out.append((lo, lo + (n_lo - g_hi)))
        return sorted(out)

    def gaps(self) -> list[tuple[float, float]]:
        return [
            (a % TWO_PI, a % TWO_PI + (b - a))
            for a, b in _sweep_gaps(
                [lo for lo, _ in self._raw], [n for _, n in self._raw], touching_is_gap=False
            )
        ]

    def covers_circle(self) -> bool:
        return arcset_covers_circle(self)


def arcset_covers_circle(a: ArcSet) -> bool:
    return not a.gaps()


# ---------------------------------------------------------------------------
# caps on S^2


def circle_frame(axis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The frame ``(a, u, v)`` used to parametrize a cap's boundary circle."""
    a = np.asarray(axis, dtype=float)
    u, v = orthonormal_complement(a)
    return a, u, v


def circle_point(cap: Cap, t: float) -> np.ndarray:
    """``cos(alpha) a + sin(alpha) (cos(t) u + sin(t) v)``."""
    a, u, v = circle_frame(cap.axis)
    h = cap.half_angle
    return math.cos(h) * a + math.sin(h) * (math.cos(t) * u + math.sin(t) * v)


def cap_arc_on_circle(boundary_of: Cap, other: Cap) -> tuple[float, float] | None:
    """Parameter interval of the boundary circle of ``boundary_of`` inside ``other``.

    Returns ``None`` when empty and ``(0, 2 pi)`` when the whole circle lies in
    the closed cap ``other``.
    """
    if boundary_of.dim != 3 or other.dim != 3:
        raise ValueError("cap_arc_on_circle needs 3-d caps")
    a, u, v = circle_frame(boundary_of.axis)
    h = boundary_of.half_angle
    b = other.axis
    A = math.cos(h) * float(a @ b)
    pu, pv = float(u @ b), float(v @ b)
    B = math.sin(h) * math.hypot(pu, pv)
    target = math.cos(other.half_angle)
    if math.hypot(pu, pv) < SNAP:
        return (0.0, TWO_PI) if A >= target - SNAP else None
    c = (target - A) / B
    if c <= -1.0:
        return (0.0, TWO_PI)
    if c >= 1.0:
        return None
    t0 = math.atan2(pv, pu)
    w = math.acos(c)
    return (t0 - w, t0 + w)


def _frames(axes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    U = np.empty_like(axes)
    V = np.empty_like(axes)
    for i, a in enumerate(axes):
        U[i], V[i] = orthonormal_complement(a)
    return U, V


@dataclass
class _Arrangement:
    """Symmetrized, deduplicated caps with precomputed circle frames."""

    axes: np.ndarray
    angles: np.ndarray
    U: np.ndarray
    V: np.ndarray
    G: np.ndarray = field(init=False)
    P: np.ndarray = field(init=False)
    T0: np.ndarray = field(init=False)

    def __post_init__(self):
        self.G = self.axes @ self.axes.T
        pu = self.U @ self.axes.T
        pv = self.V @ self.axes.T
        self.P = np.hypot(pu, pv)
        self.T0 = np.arctan2(pv, pu)

    @classmethod
    def from_caps(cls, axes, angles):
        axes = np.asarray(axes, dtype=float)
        angles = np.asarray(angles, dtype=float)
        axes = np.vstack([axes, -axes])
        angles = np.concatenate([angles, angles])
        keep = []
        for i in range(len(angles)):
            dup = any(
                np.max(np.abs(axes[i] - axes[j])) < SNAP and abs(angles[i] - angles[j]) < SNAP
                for j in keep
            )
            if not dup:
                keep.append(i)
        axes, angles = axes[keep], angles[keep]
        U, V = _frames(axes)
        return cls(axes, angles, U, V)

    def first_gap(self, eta: float = 0.0, open_: bool = False):
        """An uncovered boundary arc ``(i, t_lo, t_hi)`` for caps shrunk by ``eta``.

        ``None`` means the caps cover the sphere.
        """
        ang = self.angles - eta
        alive = ang > 0.0
        if not np.any(alive):
            return (-1, 0.0, TWO_PI)
        if np.any(ang[alive] >= math.pi):
            return None
        idx = np.flatnonzero(alive)
        ang = ang[idx]
        G = self.G[np.ix_(idx, idx)]
        P = self.P[np.ix_(idx, idx)]
        T0 = self.T0[np.ix_(idx, idx)]
        cos_i = np.cos(ang)[:, None]
        sin_i = np.sin(ang)[:, None]
        target = np.cos(ang)[None, :]
        A = cos_i * G
        B = sin_i * P
        par = P < SNAP
        with np.errstate(divide="ignore", invalid="ignore"):
            C = np.where(par, np.where(A >= target - SNAP, -2.0, 2.0), (target - A) / B)
        if open_:
            full = C < -1.0 - SNAP
        else:
            full = C <= -1.0
        np.fill_diagonal(full, False)
        W = np.arccos(np.clip(C, -1.0, 1.0))
        n = len(idx)
        for i in range(n):
            if full[i].any():
                continue
            mask = (C[i] < 1.0) & (np.arange(n) != i)
            los = T0[i, mask] - W[i, mask]
            lens = 2.0 * W[i, mask]
            gaps = _sweep_gaps(los, lens, touching_is_gap=open_)
            if gaps:
                g_lo, g_hi = max(gaps, key=lambda g: g[1] - g[0])
                return (int(idx[i]), g_lo, g_hi)
        return None

    def margin(self, covered: bool, tol: float = MARGIN_TOL) -> float:
        """Largest uniform shrink of all half-angles that keeps the sphere covered.

        Negative when the family does not cover: then ``-margin`` is the smallest
        uniform enlargement that would.
        """
        if covered:
            lo, hi = 0.0, float(np.max(self.angles))
        else:
            lo, hi = -math.pi / 2, 0.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if self.first_gap(mid) is None:
                lo = mid
            else:
                hi = mid
        return lo

    def misses_all(self, w: np.ndarray, open_: bool) -> bool:
        ang = np.arccos(np.clip(self.axes @ w, -1.0, 1.0))
        return bool(np.all(ang >= self.angles if open_ else ang > self.angles))

    def witness(self, gap, open_: bool) -> np.ndarray:
        i, g_lo, g_hi = gap
        if i < 0:
            return np.array([0.0, 0.0, 1.0])
        a, u, v, h = self.axes[i], self.U[i], self.V[i], float(self.angles[i])
        t = 0.5 * (g_lo + g_hi)
        ring = math.cos(t) * u + math.sin(t) * v
        nudge = 0.5 * (g_hi - g_lo) * math.sin(h)
        for _ in range(80):
            w = math.cos(h + nudge) * a + math.sin(h + nudge) * ring
            if self.misses_all(w, open_):
                return w
            nudge *= 0.5
        return math.cos(h) * a + math.sin(h) * ring


# ---------------------------------------------------------------------------
# public decision procedures


@dataclass(frozen=True)
class CapFamily:
    caps: tuple[Cap, ...]
    mode: Mode = "closed"

    def __post_init__(self):
        caps = tuple(self.caps)
        object.__setattr__(self, "caps", caps)
        dims = {c.dim for c in caps}
        if len(dims) > 1:
            raise ValueError("all caps in a family must share a dimension")

    @property
    def dim(self) -> int | None:
        return self.caps[0].dim if self.caps else None

    @classmethod
    def from_balls(cls, x0, balls: Sequence[Ball]) -> "CapFamily":
        modes = {b.mode for b in balls}
        mode = "open" if "open" in modes else "closed"
        return cls(tuple(cap_of_ball(x0, b) for b in balls), mode)


@dataclass(frozen=True)
class Verdict:
    covered: bool
    margin: float
    witness: np.ndarray | None = None

    def __post_init__(self):
        if not self.covered and self.witness is None:
            raise ValueError("an uncovered verdict needs an escape witness")


def _circ_dist_pi(p, c):
    d = np.mod(p - c, math.pi)
    return np.minimum(d, math.pi - d)


def covers_projective_2d(f: CapFamily) -> Verdict:
    """Do the caps of a planar family block every line through the point?

    Each cap becomes the interval ``[theta - alpha, theta + alpha]`` modulo pi.
    ``margin`` is the overlap depth at the weakest junction; it equals twice the
    uniform shrink of half-angles the cover can absorb.
    """
    if not f.caps:
        return Verdict(False, -math.inf, np.array([1.0, 0.0]))
    if f.dim != 2:
        raise ValueError("covers_projective_2d needs 2-d caps")
    c = np.array([math.atan2(cap.axis[1], cap.axis[0]) for cap in f.caps]) % math.pi
    al = np.array([cap.half_angle for cap in f.caps])
    # depth(p) = max_i (alpha_i - |p - c_i|) is piecewise linear with slopes +-1;
    # its minimum sits where a falling edge meets a rising one
    ci, cj = np.meshgrid(c, c, indexing="ij")
    ai, aj = np.meshgrid(al, al, indexing="ij")
    cj_lift = ci + np.mod(cj - ci, math.pi)
    cj_lift = np.where(cj_lift <= ci, cj_lift + math.pi, cj_lift)
    cand = (0.5 * (ci + cj_lift + ai - aj)).ravel()
    depth = np.max(al[None, :] - _circ_dist_pi(cand[:, None], c[None, :]), axis=1)
    k = int(np.argmin(depth))
    eta = float(depth[k])
    if abs(eta) <= SNAP:
        eta = 0.0
    covered = eta > 0.0 if f.mode == "open" else eta >= 0.0
    witness = None
    if not covered:
        p = float(cand[k])
        witness = np.array([math.cos(p), math.sin(p)])
    return Verdict(covered, 2.0 * eta, witness)


def covers_sphere_exact(f: CapFamily, margin_tol: float = MARGIN_TOL) -> Verdict:
    """Exact coverage test for 3-d cap families, with bisected margin and witness."""
    if not f.caps:
        return Verdict(False, -math.inf, np.array([0.0, 0.0, 1.0]))
    if f.dim != 3:
        raise ValueError("covers_sphere_exact needs 3-d caps")
    arr = _Arrangement.from_caps(
        np.array([c.axis for c in f.caps]), np.array([c.half_angle for c in f.caps])
    )
    open_ = f.mode == "open"
    gap = arr.first_gap(0.0, open_=open_)
    covered = gap is None
    closed_covered = covered if not open_ else arr.first_gap(0.0) is None
    margin = arr.margin(closed_covered, margin_tol)
    witness = None if covered else arr.witness(gap, open_)
    return Verdict(covered, margin, witness)


def covers(f: CapFamily) -> Verdict:
    if f.dim == 2:
        return covers_projective_2d(f)
    return covers_sphere_exact(f)


# ---------------------------------------------------------------------------
# sampling oracle


def fibonacci_directions(n: int) -> np.ndarray:
    """``n`` quasi-uniform unit vectors on ``S^2`` (golden-angle spiral)."""
    i = np.arange(n, dtype=float) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def circle_directions(n: int) -> np.ndarray:
    t = TWO_PI * np.arange(n) / n
    return np.column_stack([np.cos(t), np.sin(t)])


def sample_directions(dim: int, n: int) -> np.ndarray:
    return fibonacci_directions(n) if dim == 3 else circle_directions(n)


def find_escape_sampling(
    x0,
    balls: Sequence[Ball],
    n_samples: int,
    rotation: np.ndarray | None = None,
    chunk: int = 1 << 16,
) -> np.ndarray | None:
    """First sampled direction whose line through ``x0`` misses every ball.

    Independent of the exact verifier: it only evaluates line-ball distances.
    ``rotation`` optionally turns the whole sample layout.
    """
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    dirs = sample_directions(dim, n_samples)
    if rotation is not None:
        dirs = dirs @ np.asarray(rotation).T
    if not balls:
        return dirs[0]
    centers = np.array([b.center for b in balls])
    radii = np.array([b.radius for b in balls])
    open_ = [b.mode == "open" for b in balls]
    for s in range(0, n_samples, chunk):
        block = dirs[s : s + chunk]
        hit = np.zeros((len(block), len(balls)), dtype=bool)
        for j, is_open in enumerate(open_):
            hit[:, j] = line_hits_balls(
                x0, block, centers[j : j + 1], radii[j : j + 1], "open" if is_open else "closed"
            )[:, 0]
        miss = ~hit.any(axis=1)
        if miss.any():
            return block[int(np.argmax(miss))].copy()
    return None
