"""Four balls on a sphere casting a shadow at its center."""

import math

from shadowballs import (
    Lemma2Params,
    lemma2_constants,
    lemma2_unit_sphere,
    solve_level_for_angle,
    tune_lemma2,
)
from shadowballs.capcover import find_escape_sampling
from shadowballs.export import write_obj

# The side balls sit on the circle where a horizontal plane cuts the sphere,
# each tangent to the big ball at the top.  The level that makes each of them
# cover a pi/3 sector of the horizontal plane through the center:
c = lemma2_constants()
print(f"y' = {c.y_prime:.4f}  x' = {c.x_prime:.4f}  r' = {c.r_prime:.4f}  a = {c.side_a:.4f}")
print(solve_level_for_angle(math.pi / 3) - c.y_prime)

# Exactly at that level the three sectors only tile the horizontal plane;
# lines tilted toward the gaps between the side balls still get through
cfg = lemma2_unit_sphere(Lemma2Params(eps_level=0.0, delta=0.01), verify=False)
v = cfg.verdict()
print("eps = 0:", v.covered, "margin", round(v.margin, 5))

# Lowering the plane widens the side caps
for eps in (0.02, 0.05, 0.1, 0.2, 0.3):
    v = lemma2_unit_sphere(Lemma2Params(eps, 0.01), verify=False).verdict()
    print(f"eps = {eps}: covered {v.covered}, margin {v.margin:.5f}")

# The tuner scans level offsets and big-ball shrinks for the widest margin
p = tune_lemma2()
cfg = lemma2_unit_sphere(p)
print("tuned", p.eps_level, p.delta, "margin", cfg.meta["margin"])
print("sampling oracle:", find_escape_sampling(cfg.x0, cfg.balls, 1_000_000))

# Any three of the four leave a gap
for i in range(4):
    print("without ball", i, "->", cfg.without(i).verdict().covered)

write_obj("four_balls.obj", cfg)
print("wrote four_balls.obj")
