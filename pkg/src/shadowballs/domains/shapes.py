"""Domains given by an implicit function, a polygon or a closed triangle mesh.

All three answer the same questions: is a point inside, where does a ray from
an interior point first leave, and how far is a point from the boundary.
Rays are handled in batches, ``first_hits(origin, directions)`` returning one
parameter per direction (``nan`` for no crossing within ``t_max``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..capcover import sample_directions
from ..geom import as_point, orthonormal_complement, unit
from .expr import Node, evaluate, parse_implicit, to_string, variables_of

T_MAX = 1e6
MARCH_STEPS = 1024
BISECT_TOL = 1e-12
SAFETY = 1.0 - 1e-6


class DomainError(ValueError):
    pass


class UnboundedDomain(DomainError):
    pass


class Domain:
    dim: int
    kind: str

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, p) -> bool:
        p = as_point(p, self.dim)
        return bool(self.contains_many(p[None, :])[0])

    def first_hits(self, origin, dirs, t_max: float = T_MAX) -> np.ndarray:
        raise NotImplementedError

    def boundary_residual(self, p) -> float:
        """How far ``p`` is from lying on the boundary (0 on the boundary)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# implicit


class ImplicitDomain(Domain):
    """``{p : f(p) < 0}`` for an expression ``f`` in ``x, y`` (and ``z`` in 3-d)."""

    kind = "implicit"

    def __init__(self, expression: str | Node, dim: int, scale: float = 1.0):
        if dim not in (2, 3):
            raise DomainError("dim must be 2 or 3")
        self.dim = dim
        self.names = ("x", "y", "z")[:dim]
        self.tree = (
            parse_implicit(expression, self.names) if isinstance(expression, str) else expression
        )
        extra = variables_of(self.tree) - set(self.names)
        if extra:
            raise DomainError(f"variables {sorted(extra)} are not allowed in {dim}-d")
        self.text = expression if isinstance(expression, str) else to_string(expression)
        self.scale = float(scale)

    def __repr__(self):
        return f"ImplicitDomain({self.text!r}, dim={self.dim})"

    def f(self, pts):
        pts = np.asarray(pts, dtype=float)
        env = {n: pts[..., i] for i, n in enumerate(self.names)}
        return np.broadcast_to(evaluate(self.tree, env), pts.shape[:-1])

    def contains_many(self, pts):
        return self.f(pts) < 0.0

    def boundary_residual(self, p):
        return abs(float(self.f(as_point(p, self.dim))))

    def first_hits(self, origin, dirs, t_max=T_MAX, steps=MARCH_STEPS, chunk=256):
        """March each ray over ``[0, s], [s, 2s], [2s, 4s], ...`` (``s = scale``),
        ``steps`` samples per segment, then bisect the first sign change."""
        o = np.asarray(origin, dtype=float)
        D = np.atleast_2d(np.asarray(dirs, dtype=float))
        if not self.f(o) < 0.0:
            raise DomainError("ray origin is not inside the domain")
        out = np.full(len(D), np.nan)
        for s in range(0, len(D), chunk):
            out[s : s + chunk] = self._hits_chunk(o, D[s : s + chunk], t_max, steps)
        return out

    def _hits_chunk(self, o, D, t_max, steps):
        n = len(D)
        t_hit = np.full(n, np.nan)
        lo_t = np.zeros(n)
        hi_t = np.zeros(n)
        todo = np.ones(n, dtype=bool)
        a, b = 0.0, min(self.scale, t_max)
        while todo.any() and a < t_max:
            ts = np.linspace(a, b, steps + 1)[1:]
            idx = np.flatnonzero(todo)
            vals = self.f(o + ts[None, :, None] * D[idx, None, :])
            pos = vals >= 0.0
            found = pos.any(axis=1)
            k = np.argmax(pos, axis=1)
            for j in np.flatnonzero(found):
                i = idx[j]
                hi_t[i] = ts[k[j]]
                lo_t[i] = ts[k[j] - 1] if k[j] > 0 else a
                todo[i] = False
                t_hit[i] = 0.0
            a, b = b, min(2.0 * b, t_max)
        hit = ~np.isnan(t_hit)
        if hit.any():
            lo, hi = lo_t[hit], hi_t[hit]
            Dh = D[hit]
            for _ in range(200):
                if np.max(hi - lo) < BISECT_TOL:
                    break
                mid = 0.5 * (lo + hi)
                inside = self.f(o + mid[:, None] * Dh) < 0.0
                lo = np.where(inside, mid, lo)
                hi = np.where(inside, hi, mid)
            t_hit[hit] = hi
        return t_hit

    def to_dict(self):
        return {"dim": self.dim, "kind": "implicit", "payload": self.text}


# ---------------------------------------------------------------------------
# polygon


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class PolygonDomain(Domain):
    """Interior of a simple polygon; vertices are reordered counterclockwise."""

    kind = "polygon"
    dim = 2

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
            raise DomainError("a polygon needs at least three 2-d vertices")
        if np.allclose(V[0], V[-1]):
            V = V[:-1]
        area = 0.5 * np.sum(_cross2(V, np.roll(V, -1, axis=0)))
        if area == 0.0:
            raise DomainError("degenerate polygon")
        if area < 0.0:
            V = V[::-1].copy()
        self.vertices = V

    def __repr__(self):
        return f"PolygonDomain({len(self.vertices)} vertices)"

    @property
    def edges(self):
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def contains_many(self, pts):
        P = np.atleast_2d(np.asarray(pts, dtype=float))
        A, B = self.edges
        px, py = P[:, 0:1], P[:, 1:2]
        ay, by = A[None, :, 1], B[None, :, 1]
        straddle = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = A[None, :, 0] + (py - ay) * (B[None, :, 0] - A[None, :, 0]) / (by - ay)
        crossings = np.sum(straddle & (px < xc), axis=1)
        return crossings % 2 == 1

    def first_hits(self, origin, dirs, t_max=T_MAX):
        o = np.asarray(origin, dtype=float)
        D = np.atleast_2d(np.asarray(dirs, dtype=float))
        A, B = self.edges
        E = B - A
        W = A - o
        den = _cross2(D[:, None, :], E[None, :, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = _cross2(W[None, :, :], E[None, :, :]) / den
            s = _cross2(W[None, :, :], D[:, None, :]) / den
        ok = (
            (np.abs(den) > 1e-300) & (t > 1e-12) & (s >= -1e-12) & (s <= 1.0 + 1e-12) & (t <= t_max)
        )
        t = np.where(ok, t, np.inf)
        best = t.min(axis=1)
        return np.where(np.isfinite(best), best, np.nan)

    def nearest_boundary(self, p):
        p = np.asarray(p, dtype=float)
        A, B = self.edges
        E = B - A
        s = np.clip(np.sum((p - A) * E, axis=1) / np.sum(E * E, axis=1), 0.0, 1.0)
        Q = A + s[:, None] * E
        d = np.linalg.norm(Q - p, axis=1)
        k = int(np.argmin(d))
        return Q[k], float(d[k])

    def boundary_residual(self, p):
        return self.nearest_boundary(as_point(p, 2))[1]

    def to_dict(self):
        return {"dim": 2, "kind": "polygon", "payload": self.vertices.tolist()}


# ---------------------------------------------------------------------------
# triangle mesh


class MeshDomain(Domain):
    """Interior of a closed, consistently oriented triangle surface."""

    kind = "mesh"
    dim = 3

    # generic directions for the crossing-parity membership test
    _PROBES = np.array(
        [[0.5773, 0.5774, 0.5775], [-0.2673, 0.8018, -0.5346], [0.6123, -0.3536, 0.7071]]
    )

    def __init__(self, vertices, triangles):
        V = np.asarray(vertices, dtype=float)
        T = np.asarray(triangles, dtype=int)
        if V.ndim != 2 or V.shape[1] != 3 or T.ndim != 2 or T.shape[1] != 3:
            raise DomainError("mesh needs (n, 3) vertices and (m, 3) triangles")
        if T.min() < 0 or T.max() >= len(V):
            raise DomainError("triangle index out of range")
        directed = {}
        for tri in T:
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                directed[(a, b)] = directed.get((a, b), 0) + 1
        for (a, b), n in directed.items():
            if n != 1 or directed.get((b, a)) != 1:
                raise DomainError("mesh is not a closed, consistently oriented surface")
        self.vertices = V
        self.triangles = T
        self._probes = self._PROBES / np.linalg.norm(self._PROBES, axis=1)[:, None]

    def __repr__(self):
        return f"MeshDomain({len(self.vertices)} vertices, {len(self.triangles)} triangles)"

    def _ray_params(self, o, D):
        """Moller-Trumbore over all (direction, triangle) pairs; inf where missed."""
        P0 = self.vertices[self.triangles[:, 0]]
        E1 = self.vertices[self.triangles[:, 1]] - P0
        E2 = self.vertices[self.triangles[:, 2]] - P0
        pvec = np.cross(D[:, None, :], E2[None, :, :])
        det = np.sum(E1[None, :, :] * pvec, axis=2)
        tvec = o[..., None, :] - P0[None, :, :] if o.ndim == 1 else o[:, None, :] - P0[None, :, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / det
            u = np.sum(tvec * pvec, axis=2) * inv
            qvec = np.cross(tvec, E1[None, :, :])
            v = np.sum(D[:, None, :] * qvec, axis=2) * inv
            t = np.sum(E2[None, :, :] * qvec, axis=2) * inv
            eps = 1e-12
            ok = (np.abs(det) > 1e-300) & (u >= -eps) & (v >= -eps) & (u + v <= 1.0 + eps)
        return np.where(ok, t, np.inf), ok

    def contains_many(self, pts):
        P = np.atleast_2d(np.asarray(pts, dtype=float))
        votes = np.zeros(len(P), dtype=int)
        for d in self._probes:
            t, ok = self._ray_params(P, np.broadcast_to(d, P.shape))
            votes += (np.sum(ok & (t > 0.0) & np.isfinite(t), axis=1) % 2).astype(int)
        return votes >= 2

    def first_hits(self, origin, dirs, t_max=T_MAX, chunk=4096):
        o = np.asarray(origin, dtype=float)
        D = np.atleast_2d(np.asarray(dirs, dtype=float))
        out = np.empty(len(D))
        for s in range(0, len(D), chunk):
            t, _ = self._ray_params(o, D[s : s + chunk])
            t = np.where((t > 1e-12) & (t <= t_max), t, np.inf).min(axis=1)
            out[s : s + chunk] = np.where(np.isfinite(t), t, np.nan)
        return out

    def nearest_boundary(self, p):
        p = np.asarray(p, dtype=float)
        A = self.vertices[self.triangles[:, 0]]
        B = self.vertices[self.triangles[:, 1]]
        C = self.vertices[self.triangles[:, 2]]
        n = np.cross(B - A, C - A)
        n = n / np.linalg.norm(n, axis=1)[:, None]
        # projection onto each plane, kept when it falls inside the triangle
        Q = p - np.sum((p - A) * n, axis=1)[:, None] * n
        inside = np.ones(len(A), dtype=bool)
        for X, Y in ((A, B), (B, C), (C, A)):
            inside &= np.sum(np.cross(Y - X, Q - X) * n, axis=1) >= 0.0
        cands = [np.where(inside[:, None], Q, np.nan)]
        for X, Y in ((A, B), (B, C), (C, A)):
            E = Y - X
            s = np.clip(np.sum((p - X) * E, axis=1) / np.sum(E * E, axis=1), 0.0, 1.0)
            cands.append(X + s[:, None] * E)
        Q = np.concatenate(cands)
        d = np.linalg.norm(Q - p, axis=1)
        k = int(np.nanargmin(d))
        return Q[k], float(d[k])

    def boundary_residual(self, p):
        return self.nearest_boundary(as_point(p, 3))[1]

    def to_dict(self):
        return {
            "dim": 3,
            "kind": "mesh",
            "payload": {"vertices": self.vertices.tolist(), "triangles": self.triangles.tolist()},
        }


DomainSpec = Domain


def domain_from_dict(doc: dict) -> Domain:
    """Build a domain from ``{"dim": 2|3, "kind": ..., "payload": ...}``.

    The payload is an expression string (implicit), a vertex list (polygon) or
    ``{"vertices": [...], "triangles": [...]}`` (mesh).
    """
    try:
        dim = int(doc["dim"])
        kind = doc["kind"]
        payload = doc["payload"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"domain document needs dim, kind and payload ({exc})") from None
    if kind == "implicit":
        if not isinstance(payload, str):
            raise DomainError("implicit payload must be an expression string")
        return ImplicitDomain(payload, dim, scale=float(doc.get("scale", 1.0)))
    if kind == "polygon":
        if dim != 2:
            raise DomainError("polygons are 2-d")
        return PolygonDomain(payload)
    if kind == "mesh":
        if dim != 3:
            raise DomainError("meshes are 3-d")
        try:
            return MeshDomain(payload["vertices"], payload["triangles"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"mesh payload needs vertices and triangles ({exc})") from None
    raise DomainError(f"unknown domain kind {kind!r}")


# ---------------------------------------------------------------------------
# free functions


def contains(d: Domain, p) -> bool:
    return d.contains(p)


@dataclass(frozen=True)
class RayHit:
    t: float
    point: np.ndarray


def ray_first_hit(d: Domain, origin, direction, t_max: float = T_MAX) -> RayHit | None:
    """First crossing of the boundary by the ray ``origin + t * direction``, t > 0."""
    o = as_point(origin, d.dim)
    u = unit(direction)
    if not d.contains(o):
        raise DomainError("ray origin must lie inside the domain")
    t = float(d.first_hits(o, u[None, :], t_max)[0])
    if math.isnan(t):
        return None
    return RayHit(t, o + t * u)


@dataclass(frozen=True)
class InradiusEstimate:
    rho: float
    touch_direction: np.ndarray
    n_directions: int
    touch_distance: float

    @property
    def touch_point_offset(self) -> np.ndarray:
        return self.touch_distance * self.touch_direction


def _default_directions(dim: int) -> int:
    return 4096 if dim == 3 else 1024


def _refine_implicit(d: ImplicitDomain, x0, u0, t0, spacing, t_max):
    """Polish the sampled closest direction by local minimization of the hit distance."""

    def hit(u):
        t = float(d.first_hits(x0, u[None, :], t_max)[0])
        return t if not math.isnan(t) else math.inf

    if d.dim == 2:
        th0 = math.atan2(u0[1], u0[0])

        def g(th):
            return hit(np.array([math.cos(th), math.sin(th)]))

        res = optimize.minimize_scalar(
            g, bounds=(th0 - spacing, th0 + spacing), method="bounded", options={"xatol": 1e-12}
        )
        u = np.array([math.cos(res.x), math.sin(res.x)])
    else:
        e1, e2 = orthonormal_complement(u0)

        def g(s):
            return hit(unit(u0 + s[0] * e1 + s[1] * e2))

        res = optimize.minimize(
            g,
            np.zeros(2),
            method="Nelder-Mead",
            options={
                "xatol": 1e-11,
                "fatol": 1e-14,
                "initial_simplex": np.array([[0, 0], [spacing, 0], [0, spacing]], dtype=float),
            },
        )
        u = unit(u0 + res.x[0] * e1 + res.x[1] * e2)
    t = hit(u)
    if t < t0:
        return u, t
    return u0, t0


def estimate_inradius(
    d: Domain,
    x0,
    n_directions: int | None = None,
    t_max: float = T_MAX,
    allow_unbounded: bool = False,
    refine: bool = True,
) -> InradiusEstimate:
    """Radius of the largest ball about ``x0`` inside ``d``, from directional sampling.

    The sampled minimum is polished (exact nearest boundary point for polygons
    and meshes, local minimization for implicit domains) and then shrunk by a
    relative safety factor of 1e-6.
    """
    x0 = as_point(x0, d.dim)
    if not d.contains(x0):
        raise DomainError("point not in domain")
    n = n_directions or _default_directions(d.dim)
    if n < 64:
        raise ValueError("need at least 64 directions")
    dirs = sample_directions(d.dim, n)
    t = d.first_hits(x0, dirs, t_max)
    missed = np.isnan(t)
    if missed.all() or (missed.any() and not allow_unbounded):
        raise UnboundedDomain(f"{int(missed.sum())} of {n} sampled rays never leave the domain")
    k = int(np.nanargmin(t))
    u, tk = dirs[k], float(t[k])
    if refine:
        if isinstance(d, (PolygonDomain, MeshDomain)):
            q, dist = d.nearest_boundary(x0)
            if dist < tk and dist > 0.0:
                u = unit(q - x0)
                th = float(d.first_hits(x0, u[None, :], t_max)[0])
                tk = min(th, tk) if not math.isnan(th) else tk
        elif isinstance(d, ImplicitDomain):
            spacing = 2.0 * math.pi / n if d.dim == 2 else math.sqrt(4.0 * math.pi / n)
            u, tk = _refine_implicit(d, x0, u, tk, spacing, t_max)
    return InradiusEstimate(tk * SAFETY, np.array(u, dtype=float), n, tk)


# ---------------------------------------------------------------------------
# fixtures


def box_mesh(half_sizes=(1.0, 1.0, 1.0), center=(0.0, 0.0, 0.0)) -> MeshDomain:
    """Axis-aligned box as a 12-triangle outward-oriented mesh."""
    h = np.asarray(half_sizes, dtype=float)
    c = np.asarray(center, dtype=float)
    V = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], float)
    V = c + V * h
    # vertex index = 4*ix + 2*iy + iz
    quads = [
        (0, 1, 3, 2),  # x = -1
        (4, 6, 7, 5),  # x = +1
        (0, 4, 5, 1),  # y = -1
        (2, 3, 7, 6),  # y = +1
        (0, 2, 6, 4),  # z = -1
        (1, 5, 7, 3),  # z = +1
    ]
    T = []
    for a, b, c_, d in quads:
        T += [(a, b, c_), (a, c_, d)]
    return MeshDomain(V, T)


def square_polygon(half: float = 1.0) -> PolygonDomain:
    return PolygonDomain([[-half, -half], [half, -half], [half, half], [-half, half]])


def l_shape_polygon() -> PolygonDomain:
    return PolygonDomain([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])


PLUS_SHAPE = "min(max(abs(x)-2, abs(y)-1), max(abs(x)-1, abs(y)-2))"
