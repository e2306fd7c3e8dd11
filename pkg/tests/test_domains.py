import math

import numpy as np
import pytest

from shadowballs.capcover import circle_directions, fibonacci_directions
from shadowballs.domains import (
    PLUS_SHAPE,
    DomainError,
    ImplicitDomain,
    MeshDomain,
    PolygonDomain,
    UnboundedDomain,
    box_mesh,
    contains,
    domain_from_dict,
    estimate_inradius,
    l_shape_polygon,
    ray_first_hit,
    square_polygon,
)
from shadowballs.domains.expr import EvaluationError

DISK = ImplicitDomain("x^2 + y^2 - 1", 2)
ELLIPSE = ImplicitDomain("x^2/9 + y^2 - 1", 2)
PLUS = ImplicitDomain(PLUS_SHAPE, 2)
ELLIPSOID = ImplicitDomain("x^2/16 + y^2 + z^2 - 1", 3)


def octahedron_mesh():
    V = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)
    T = []
    for i in (0, 1):
        for j in (2, 3):
            for k in (4, 5):
                tri = [i, j, k]
                n = np.cross(V[j] - V[i], V[k] - V[i])
                if n @ (V[i] + V[j] + V[k]) < 0:
                    tri = [i, k, j]
                T.append(tri)
    return MeshDomain(V, T)


def test_contains_examples():
    assert contains(DISK, (0, 0))
    assert not contains(DISK, (2, 0))
    assert contains(square_polygon(), (0.999, 0))
    assert not contains(square_polygon(), (1.001, 0))
    assert contains(box_mesh(), (0.2, 0.0, -0.1))
    assert not contains(box_mesh(), (1.2, 0.0, 0.0))
    assert contains(l_shape_polygon(), (0.5, 1.5))
    assert not contains(l_shape_polygon(), (1.5, 1.5))


def test_evaluation_failures_surface():
    d = ImplicitDomain("1/x - 2", 2)
    with pytest.raises(EvaluationError):
        d.contains((0.0, 0.5))


def test_polygon_orientation_is_normalized():
    cw = PolygonDomain([[-1, -1], [-1, 1], [1, 1], [1, -1]])
    v = cw.vertices
    area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
    assert area > 0
    with pytest.raises(DomainError):
        PolygonDomain([[0, 0], [1, 1], [2, 2]])


def test_mesh_must_be_closed():
    box = box_mesh()
    with pytest.raises(DomainError):
        MeshDomain(box.vertices, box.triangles[:-1])
    flipped = box.triangles.copy()
    flipped[0] = flipped[0][::-1]
    with pytest.raises(DomainError):
        MeshDomain(box.vertices, flipped)


def test_domain_documents():
    assert isinstance(
        domain_from_dict({"dim": 2, "kind": "implicit", "payload": "x^2+y^2-1"}), ImplicitDomain
    )
    box = box_mesh()
    again = domain_from_dict(box.to_dict())
    assert np.array_equal(again.vertices, box.vertices)
    sq = domain_from_dict(square_polygon().to_dict())
    assert np.array_equal(sq.vertices, square_polygon().vertices)
    for bad in (
        {"dim": 2, "kind": "blob", "payload": ""},
        {"dim": 3, "kind": "polygon", "payload": [[0, 0], [1, 0], [0, 1]]},
        {"dim": 2, "kind": "implicit", "payload": 3},
        {"dim": 2, "kind": "implicit", "payload": "x + z"},
        {"kind": "implicit"},
    ):
        with pytest.raises(Exception) as err:
            domain_from_dict(bad)
        assert isinstance(err.value, ValueError)


def test_ray_first_hit_examples():
    for u in circle_directions(12):
        assert math.isclose(ray_first_hit(DISK, (0, 0), u).t, 1.0, abs_tol=1e-11)
    h = ray_first_hit(ELLIPSE, (0, 0), (1, 0))
    assert math.isclose(h.t, 3.0, abs_tol=1e-11)
    assert np.allclose(h.point, (3.0, 0.0), atol=1e-11)
    assert math.isclose(
        ray_first_hit(square_polygon(), (0, 0), (1, 1)).t, math.sqrt(2), abs_tol=1e-14
    )
    assert math.isclose(ray_first_hit(box_mesh(), (0, 0, 0), (0, 0, -1)).t, 1.0, abs_tol=1e-14)
    strip = ImplicitDomain("y^2 - 1", 2)
    assert ray_first_hit(strip, (0, 0), (1, 0), t_max=1e3) is None
    with pytest.raises(DomainError):
        ray_first_hit(DISK, (2, 0), (1, 0))


def test_plus_shape_hit_matches_fine_scan():
    u = np.array([math.cos(0.3), math.sin(0.3)])
    h = ray_first_hit(PLUS, (0, 0), u)
    # 10^7-step scan of the defining inequality along the ray
    n, t_end = 10_000_000, 3.0
    step = t_end / n
    first = None
    for s in range(0, n, 1_000_000):
        t = (np.arange(s, s + 1_000_000) + 1) * step
        x, y = np.abs(t * u[0]), np.abs(t * u[1])
        outside = ~(((x < 2) & (y < 1)) | ((x < 1) & (y < 2)))
        if outside.any():
            first = t[np.argmax(outside)]
            break
    assert first is not None
    assert abs(h.t - first) <= step
    # leaves through the end of the horizontal arm
    assert math.isclose(h.t, 2.0 / math.cos(0.3), abs_tol=1e-11)


def _random_inside(d, rng, n, box):
    pts = []
    while sum(len(p) for p in pts) < n:
        cand = rng.uniform(-box, box, (4 * n, d.dim))
        pts.append(cand[d.contains_many(cand)])
    return np.concatenate(pts)[:n]


def _random_dirs(rng, n, dim):
    u = rng.standard_normal((n, dim))
    return u / np.linalg.norm(u, axis=1)[:, None]


@pytest.mark.parametrize(
    "name, d, box",
    [
        ("disk", DISK, 1.0),
        ("ellipse", ELLIPSE, 3.0),
        ("plus", PLUS, 2.0),
        ("ellipsoid", ELLIPSOID, 4.0),
        ("square", square_polygon(), 1.0),
        ("l-shape", l_shape_polygon(), 2.0),
        ("box", box_mesh((1.0, 2.0, 0.5)), 2.0),
        ("octahedron", octahedron_mesh(), 1.0),
    ],
)
def test_membership_flips_at_first_hit(name, d, box):
    rng = np.random.default_rng(sum(map(ord, name)))
    # 100 origins, 100 directions each
    origins = np.repeat(_random_inside(d, rng, 100, box), 100, axis=0)
    dirs = _random_dirs(rng, len(origins), d.dim)
    t = np.concatenate([d.first_hits(origins[i], dirs[i : i + 100]) for i in range(0, 10_000, 100)])
    assert not np.isnan(t).any()
    before = origins + (t * (1 - 1e-6))[:, None] * dirs
    after = origins + (t * (1 + 1e-6))[:, None] * dirs
    assert d.contains_many(before).all()
    assert not d.contains_many(after).any()


def _segment_distance(p, a, b):
    e = b - a
    s = min(1.0, max(0.0, float((p - a) @ e) / float(e @ e)))
    return float(np.linalg.norm(a + s * e - p))


def test_inradius_examples():
    est = estimate_inradius(DISK, (0, 0))
    assert math.isclose(est.rho, 1.0, rel_tol=2e-6)
    est = estimate_inradius(ELLIPSE, (0, 0))
    assert math.isclose(est.rho, 1.0, rel_tol=2e-6)
    assert math.isclose(abs(est.touch_direction[1]), 1.0, abs_tol=1e-4)
    est = estimate_inradius(ELLIPSOID, (0, 0, 0))
    assert math.isclose(est.rho, 1.0, rel_tol=2e-6)
    assert abs(est.touch_direction[0]) < 1e-3
    with pytest.raises(DomainError):
        estimate_inradius(DISK, (2, 0))
    with pytest.raises(ValueError):
        estimate_inradius(DISK, (0, 0), n_directions=16)


def test_inradius_of_l_shape_matches_exact_distance():
    L = l_shape_polygon()
    V = L.vertices
    rng = np.random.default_rng(3)
    for p in _random_inside(L, rng, 200, 2.0):
        exact = min(_segment_distance(p, V[i], V[(i + 1) % len(V)]) for i in range(len(V)))
        est = estimate_inradius(L, p)
        assert math.isclose(est.rho, exact * (1 - 1e-6), rel_tol=1e-12, abs_tol=1e-15)
        coarse = estimate_inradius(L, p, refine=False)
        assert exact * (1 - 1e-6) <= coarse.rho + 1e-15
        assert coarse.rho <= exact * (1 + 0.02) + 1e-12


def test_inradius_never_exceeds_true_distance():
    rng = np.random.default_rng(4)
    box = box_mesh((1.0, 2.0, 0.5))
    for p in _random_inside(box, rng, 30, 2.0):
        exact = float(np.min(np.array([1.0, 2.0, 0.5]) - np.abs(p)))
        est = estimate_inradius(box, p)
        assert est.rho <= exact
        assert math.isclose(est.rho, exact, rel_tol=2e-6)
    for p in _random_inside(ELLIPSE, rng, 30, 3.0):
        # the ball of radius rho must stay inside the ellipse
        est = estimate_inradius(ELLIPSE, p)
        ring = p + est.rho * circle_directions(4096)
        assert ELLIPSE.contains_many(ring).all()


def test_unbounded_domains():
    strip = ImplicitDomain("y^2 - 1", 2)
    with pytest.raises(UnboundedDomain):
        estimate_inradius(strip, (0, 0), t_max=1e3)
    est = estimate_inradius(strip, (0, 0), t_max=1e3, allow_unbounded=True)
    assert math.isclose(est.rho, 1.0, rel_tol=2e-6)
    with pytest.raises(UnboundedDomain):
        estimate_inradius(ImplicitDomain("-1", 2), (0, 0), t_max=10.0, allow_unbounded=True)


def test_sphere_sampling_is_quasi_uniform():
    U = fibonacci_directions(4096)
    # every direction has a sample within a few mean spacings
    probe = fibonacci_directions(997) @ np.diag([1, -1, 1])
    nearest = np.max(np.arccos(np.clip(probe @ U.T, -1, 1)).min(axis=1))
    assert nearest < 3 * math.sqrt(4 * math.pi / 4096)
