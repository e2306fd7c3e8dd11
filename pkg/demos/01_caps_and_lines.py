"""Balls, the caps of directions they block, and deciding coverage."""

import math

import numpy as np

from shadowballs import Ball, CapFamily, cap_of_ball, covers_sphere_exact, line_hits_ball
from shadowballs.capcover import find_escape_sampling

x0 = np.zeros(3)

# A ball at distance 2 with radius 1 blocks every line through x0 within
# 30 degrees of its axis (the line, not the ray, so the opposite cap counts too)
b = Ball((2.0, 0.0, 0.0), 1.0)
cap = cap_of_ball(x0, b)
print("axis", cap.axis, "half-angle", math.degrees(cap.half_angle))

print(line_hits_ball(x0, (1.0, 0.2, 0.0), b))  # True
print(line_hits_ball(x0, (-1.0, -0.2, 0.0), b))  # True as well: same line
print(line_hits_ball(x0, (0.0, 1.0, 0.0), b))  # False

# Six balls on the coordinate axes.  Their caps meet the cube diagonals at
# acos(1/sqrt 3) ~ 54.7 degrees, so radius sin(55 deg) at distance 1 covers
balls = [Ball(s * e, math.sin(math.radians(55))) for e in np.eye(3) for s in (1, -1)]
v = covers_sphere_exact(CapFamily.from_balls(x0, balls))
print("covered:", v.covered, "margin (rad):", round(v.margin, 5))

# With radius sin(54 deg) a diagonal escapes, and we get the line to prove it
balls = [Ball(s * e, math.sin(math.radians(54))) for e in np.eye(3) for s in (1, -1)]
v = covers_sphere_exact(CapFamily.from_balls(x0, balls))
print("covered:", v.covered, "witness:", np.round(v.witness, 4))
print("witness misses all:", not any(line_hits_ball(x0, v.witness, b) for b in balls))

# Independent check: a million quasi-uniform directions
print("sampling finds:", find_escape_sampling(x0, balls, 1_000_000))
