"""Two disks on a circle that block every line through its center."""

import math

from shadowballs import two_balls_unit_circle
from shadowballs.export import write_svg

# The big disk blocks directions within 3pi/8 + m/2 of the x axis, the small
# one within pi/8 + m/2 of the y axis; modulo pi the two intervals overlap by m
cfg = two_balls_unit_circle(margin_angle=0.02)
for b in cfg.balls:
    print("center", b.center, "radius", round(b.radius, 5))

v = cfg.verdict()
print("covered:", v.covered, "overlap:", v.margin)
print("disjoint:", cfg.pairwise_disjoint())

# m = 0 tiles the projective line exactly.  Closed disks still touch every
# line, open ones let the two seam directions through
print(two_balls_unit_circle(0.0, mode="closed").verdict().covered)
print(two_balls_unit_circle(0.0, mode="open").verdict().witness)

# Larger overlaps push the disks together until they collide
for m in (0.05, 0.1, 0.15, 0.17):
    big, small = two_balls_unit_circle(m).balls
    print(m, "gap", round(math.sqrt(2) - big.radius - small.radius, 4))

write_svg("two_disks.svg", cfg)
print("wrote two_disks.svg")
