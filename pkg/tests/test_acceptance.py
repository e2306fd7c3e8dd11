"""The eight acceptance criteria, each at its stated tolerance and time budget.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary lists
one PASS/FAIL line per criterion.
"""

import json
import math
import time

import numpy as np
import pytest

from shadowballs.capcover import CapFamily, covers_sphere_exact, find_escape_sampling
from shadowballs.cli import main
from shadowballs.constructions import (
    NoIntersectionWithSigma,
    angle_from_center_xy,
    lemma2_constants,
    lemma2_unit_sphere,
    sin2_half_angle_on_sphere,
    solve_level_for_angle,
    tune_lemma2,
)
from shadowballs.domains import PLUS_SHAPE, box_mesh, domain_from_dict, square_polygon
from shadowballs.files import read_config
from shadowballs.geom import (
    Ball,
    dist,
    homothety_ball,
    homothety_point,
    interiors_disjoint,
    line_hits_ball,
)

criterion = pytest.mark.criterion


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


@criterion("1", "four-ball constants reproduce the published values")
def test_constants():
    with Clock() as clk:
        y = solve_level_for_angle(math.pi / 3)
        c = lemma2_constants()
    assert abs(y - (math.sqrt(57) - 11) / 3) <= 1e-9
    assert abs(c.y_prime - y) <= 1e-9
    published = {"y'": -1.15, "x'": 0.99, "r'": 0.52, "a": 1.71}
    computed = {"y'": c.y_prime, "x'": c.x_prime, "r'": c.r_prime, "a": c.side_a}
    for key, value in published.items():
        assert abs(computed[key] - value) <= 0.01, key
    assert c.r_prime < c.side_a / 2
    assert clk.seconds < 1e-3, f"{clk.seconds * 1e3:.3f} ms"


@criterion("2", "tuned four-ball layout on the unit sphere, verified exactly and by 10^6 samples")
def test_four_balls_end_to_end():
    tune_lemma2.cache_clear()
    with Clock() as clk:
        cfg = lemma2_unit_sphere(tune_lemma2())
        v = covers_sphere_exact(cfg.cap_family())
        escape = find_escape_sampling(cfg.x0, cfg.balls, 1_000_000)
    assert len(cfg.balls) == 4
    assert cfg.pairwise_disjoint()
    for b in cfg.balls:
        assert abs(dist(b.center, cfg.x0) - 1.0) <= 1e-9
        assert b.radius < 1.0
    assert cfg.point_outside()
    assert v.covered and v.margin >= 1e-3, v
    assert escape is None
    assert clk.seconds < 10.0, f"{clk.seconds:.2f} s"
    print(f"margin {v.margin:.6f}, {clk.seconds:.2f} s")


@criterion("3", "every three of the four balls leave an escape line")
def test_three_balls_leak():
    cfg = lemma2_unit_sphere(tune_lemma2())
    for i in range(4):
        rest = cfg.without(i)
        v = covers_sphere_exact(rest.cap_family())
        assert not v.covered
        assert not any(line_hits_ball(rest.x0, v.witness, b) for b in rest.balls)


PLANAR = [
    ("disk", {"dim": 2, "kind": "implicit", "payload": "x^2 + y^2 - 1"}, "0,0"),
    ("ellipse", {"dim": 2, "kind": "implicit", "payload": "x^2/9 + y^2 - 1"}, "0,0"),
    ("off-center", {"dim": 2, "kind": "implicit", "payload": "x^2/9 + y^2 - 1"}, "0.5,0.2"),
    ("square", square_polygon().to_dict(), "0.3,0.1"),
    ("plus", {"dim": 2, "kind": "implicit", "payload": PLUS_SHAPE}, "0,0"),
]

SPATIAL = [
    ("unit-ball", {"dim": 3, "kind": "implicit", "payload": "x^2 + y^2 + z^2 - 1"}, "0,0,0"),
    ("ellipsoid", {"dim": 3, "kind": "implicit", "payload": "x^2/16 + y^2 + z^2 - 1"}, "0,0,0"),
    ("box", box_mesh().to_dict(), "0.2,0,-0.1"),
]


def _solve(tmp_path, capsys, name, doc, point, n_balls, budget):
    dom = tmp_path / f"{name}.domain.json"
    dom.write_text(json.dumps(doc))
    out = tmp_path / f"{name}.json"
    capsys.readouterr()
    with Clock() as clk:
        code = main(["solve", "--domain", str(dom), "--point", point, "--out", str(out)])
    assert code == 0
    cert = json.loads(capsys.readouterr().out)
    cfg = read_config(out)
    d = domain_from_dict(doc)
    assert len(cfg.balls) == n_balls
    assert all(d.boundary_residual(b.center) <= 1e-6 for b in cfg.balls)
    assert cert["checks"] == {
        "outside_point": True,
        "pairwise_disjoint": True,
        "centers_on_boundary": True,
    }
    assert cert["covered"] and cert["margin"] > 0
    assert clk.seconds < budget, f"{clk.seconds:.2f} s"


@criterion("4", "two-disk fixtures in the plane solve and verify")
@pytest.mark.parametrize("name, doc, point", PLANAR, ids=[p[0] for p in PLANAR])
def test_planar_fixtures(tmp_path, capsys, name, doc, point):
    _solve(tmp_path, capsys, name, doc, point, 2, 2.0)


@criterion("5", "four-ball fixtures in space solve and verify")
@pytest.mark.parametrize("name, doc, point", SPATIAL, ids=[p[0] for p in SPATIAL])
def test_spatial_fixtures(tmp_path, capsys, name, doc, point):
    _solve(tmp_path, capsys, name, doc, point, 4, 30.0)


def _disjoint_pairs_on_sphere(rng, n, dim):
    """Random (rho, centers, R, r) with both centers on the rho-sphere about 0,
    radii r <= R < rho and interiors disjoint."""
    out = []
    while sum(len(o[0]) for o in out) < n:
        m = 2 * n
        rho = rng.uniform(0.5, 5.0, m)
        u1 = rng.standard_normal((m, dim))
        u2 = rng.standard_normal((m, dim))
        u1 /= np.linalg.norm(u1, axis=1)[:, None]
        u2 /= np.linalg.norm(u2, axis=1)[:, None]
        c1, c2 = rho[:, None] * u1, rho[:, None] * u2
        d = np.linalg.norm(c1 - c2, axis=1)
        R = rho * rng.uniform(0.01, 0.99, m)
        cap = np.minimum(R, d - R)
        ok = cap > 1e-3 * rho
        r = cap * rng.uniform(0.01, 1.0, m)
        out.append((rho[ok], c1[ok], c2[ok], R[ok], r[ok]))
    cols = [np.concatenate(x)[:n] for x in zip(*out)]
    return cols


@criterion("6", "homothety disjointness suites and the distance identity")
def test_homothety_suites():
    rng = np.random.default_rng(2024)
    n = 100_000
    origin = {2: np.zeros(2), 3: np.zeros(3)}
    violations = {"push smaller out": 0, "pull bigger in": 0, "both, k1 >= k2": 0}
    with Clock() as clk:
        for dim in (2, 3):
            center = origin[dim]
            rho, c_big, c_small, R, r = _disjoint_pairs_on_sphere(rng, n, dim)
            k_out = 1.0 + rng.exponential(1.0, n)
            k_in = rng.uniform(1e-3, 1.0, n)
            k2 = rng.uniform(1e-3, 3.0, n)
            k1 = k2 * (1.0 + rng.exponential(1.0, n))
            for i in range(n):
                big = Ball(c_big[i], R[i])
                small = Ball(c_small[i], r[i])
                assert interiors_disjoint(big, small)
                if not interiors_disjoint(homothety_ball(small, center, k_out[i]), big):
                    violations["push smaller out"] += 1
                if not interiors_disjoint(homothety_ball(big, center, k_in[i]), small):
                    violations["pull bigger in"] += 1
                if not interiors_disjoint(
                    homothety_ball(small, center, k1[i]), homothety_ball(big, center, k2[i])
                ):
                    violations["both, k1 >= k2"] += 1
        # moving one center outward along its own axis by eps
        worst = 0.0
        for dim in (2, 3):
            center = origin[dim]
            rho, c1, c2, _, _ = _disjoint_pairs_on_sphere(rng, 5_000, dim)
            eps = rho * rng.uniform(0.0, 3.0, len(rho))
            for i in range(len(rho)):
                d = dist(c1[i], c2[i])
                E = homothety_point(c2[i], center, 1.0 + eps[i] / rho[i])
                lhs = dist(c1[i], E) ** 2
                rhs = d * d + eps[i] ** 2 + 2 * d * eps[i] * (d / (2 * rho[i]))
                worst = max(worst, abs(lhs - rhs) / rhs)
    assert violations == dict.fromkeys(violations, 0)
    assert worst <= 1e-10, worst
    assert clk.seconds < 60.0, f"{clk.seconds:.1f} s"
    print(f"{clk.seconds:.1f} s, worst relative error {worst:.2e}")


@criterion("7", "exact coverage agrees with the 10^5-sample oracle on 10^3 random families")
def test_verifier_agreement():
    rng = np.random.default_rng(77)
    x0 = np.zeros(3)
    stats = {"covered": 0, "uncovered": 0, "thin": 0}
    with Clock() as clk:
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            axes = rng.standard_normal((n, 3))
            axes /= np.linalg.norm(axes, axis=1)[:, None]
            alpha = rng.uniform(0.1, 1.4, n)
            dist_ = rng.uniform(1.0, 5.0, n)
            balls = [Ball(a * s, s * math.sin(h)) for a, s, h in zip(axes, dist_, alpha)]
            v = covers_sphere_exact(CapFamily.from_balls(x0, balls))
            if v.covered and v.margin >= 1e-6:
                stats["covered"] += 1
                assert find_escape_sampling(x0, balls, 100_000) is None
            elif v.covered:
                stats["thin"] += 1
            else:
                stats["uncovered"] += 1
                assert not any(line_hits_ball(x0, v.witness, b) for b in balls)
    assert clk.seconds < 120.0, f"{clk.seconds:.1f} s"
    print(stats, f"{clk.seconds:.1f} s")


@criterion("8", "sector angle on the sphere matches its closed form on 10^4 points")
def test_sector_angle_sweep():
    ys = np.linspace(-2.0, -0.1, 10_002)[1:-1]
    worst, absent = 0.0, 0
    with Clock() as clk:
        for y in ys:
            x = math.sqrt(1.0 - (y + 1.0) ** 2)
            closed = sin2_half_angle_on_sphere(y)
            try:
                phi = angle_from_center_xy(x, y)
            except NoIntersectionWithSigma:
                # no trace on the plane: the closed form must be negative too
                assert closed < 0
                absent += 1
                continue
            worst = max(worst, abs(math.sin(phi / 2) ** 2 - max(closed, 0.0)))
    assert worst <= 1e-10, worst
    assert clk.seconds < 1.0, f"{clk.seconds:.2f} s"
    print(f"worst {worst:.2e}, {absent} points without a trace")
