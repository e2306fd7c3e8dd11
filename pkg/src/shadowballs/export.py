"""Pictures of shadow configurations: SVG in the plane, OBJ meshes in space."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .capcover import circle_directions
from .constructions import ShadowConfig
from .domains.shapes import Domain, MeshDomain, PolygonDomain


def _outline_2d(d: Domain, x0, n: int = 512) -> np.ndarray:
    if isinstance(d, PolygonDomain):
        return d.vertices
    # first boundary crossing seen from x0: exact for domains star-shaped about x0
    dirs = circle_directions(n)
    t = d.first_hits(x0, dirs)
    t = np.where(np.isnan(t), np.nanmax(t), t)
    return x0 + t[:, None] * dirs


def write_svg(path, cfg: ShadowConfig, d: Domain | None = None, size: int = 600) -> None:
    x0 = cfg.x0
    outline = _outline_2d(d, x0) if d is not None else np.empty((0, 2))
    pts = [x0[None, :]] + [outline]
    for b in cfg.balls:
        pts.append(b.center[None, :] + b.radius * np.array([[-1, -1], [1, 1]]))
    allp = np.vstack(pts)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = float(max(hi - lo)) * 1.1 or 1.0
    mid = 0.5 * (lo + hi)
    s = size / span

    def xy(p):
        return (size / 2 + s * (p[0] - mid[0]), size / 2 - s * (p[1] - mid[1]))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if len(outline):
        path_d = " ".join(f"{a:.3f},{b:.3f}" for a, b in (xy(p) for p in outline))
        out.append(f'<polygon points="{path_d}" fill="#eef3fb" stroke="#335" stroke-width="1.5"/>')
    rho = cfg.sphere_radius or cfg.meta.get("rho")
    if rho:
        cx, cy = xy(x0)
        out.append(
            f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{s * rho:.3f}" fill="none" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    for b in cfg.balls:
        cx, cy = xy(b.center)
        dash = ' stroke-dasharray="5 3"' if b.mode == "open" else ""
        out.append(
            f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{s * b.radius:.3f}" fill="#e8a33d" '
            f'fill-opacity="0.55" stroke="#a55d00"{dash}/>'
        )
    cx, cy = xy(x0)
    out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="3" fill="black"/>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def uv_sphere(center, radius, n_lon: int = 32, n_lat: int = 16):
    """Vertices and triangles of a latitude-longitude sphere."""
    V = [[0.0, 0.0, 1.0]]
    for i in range(1, n_lat):
        th = math.pi * i / n_lat
        for j in range(n_lon):
            ph = 2.0 * math.pi * j / n_lon
            V.append([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    V.append([0.0, 0.0, -1.0])
    V = np.asarray(center) + radius * np.array(V)
    T = []
    last = len(V) - 1
    for j in range(n_lon):
        T.append((0, 1 + j, 1 + (j + 1) % n_lon))
    for i in range(n_lat - 2):
        r0, r1 = 1 + i * n_lon, 1 + (i + 1) * n_lon
        for j in range(n_lon):
            a, b = r0 + j, r0 + (j + 1) % n_lon
            c, e = r1 + j, r1 + (j + 1) % n_lon
            T += [(a, c, e), (a, e, b)]
    r0 = 1 + (n_lat - 2) * n_lon
    for j in range(n_lon):
        T.append((r0 + j, last, r0 + (j + 1) % n_lon))
    return V, np.array(T)


def write_obj(path, cfg: ShadowConfig, d: Domain | None = None) -> None:
    """One OBJ file holding a UV sphere per ball plus the domain surface.

    Implicit domains are drawn as the star-shaped surface of first crossings
    seen from the observation point.
    """
    parts = []
    for i, b in enumerate(cfg.balls):
        parts.append((f"ball{i}", *uv_sphere(b.center, b.radius)))
    if isinstance(d, MeshDomain):
        parts.append(("domain", d.vertices, d.triangles))
    elif d is not None:
        V, T = uv_sphere(np.zeros(3), 1.0, 64, 32)
        t = d.first_hits(cfg.x0, V)
        t = np.where(np.isnan(t), np.nanmax(t), t)
        parts.append(("domain", cfg.x0 + t[:, None] * V, T))
    lines = ["# shadow configuration"]
    offset = 1
    for name, V, T in parts:
        lines.append(f"o {name}")
        lines += [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in V]
        lines += [f"f {a + offset} {b + offset} {c + offset}" for a, b, c in T]
        offset += len(V)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
