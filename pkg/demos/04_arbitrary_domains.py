"""Balls centered on the boundary of a domain, shadowing an interior point."""

from shadowballs import (
    ImplicitDomain,
    PolygonDomain,
    theorem1_construct,
    theorem2_construct,
    validate,
)
from shadowballs.domains import PLUS_SHAPE, box_mesh
from shadowballs.export import write_obj, write_svg

# Inscribe the largest circle about x0, put the big disk where it touches the
# boundary, then slide the small disk out along its own ray until its center
# lands on the boundary.  Scaling about x0 keeps the blocked directions
ellipse = ImplicitDomain("x^2/9 + y^2 - 1", 2)
cfg = theorem1_construct(ellipse, (0.5, 0.2))
print("push factors", cfg.coefficients)
print(validate(ellipse, cfg).to_dict())
write_svg("ellipse.svg", cfg, ellipse)

# Non-convex domains work the same way
plus = ImplicitDomain(PLUS_SHAPE, 2)
cfg = theorem1_construct(plus, (1.5, 0.2))
print("plus:", [b.center.round(4).tolist() for b in cfg.balls])
write_svg("plus.svg", cfg, plus)

L = PolygonDomain([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])
print("L:", validate(L, theorem1_construct(L, (0.5, 1.5))).ok)

# In space four balls do it.  A long ellipsoid stretches the side balls out
ellipsoid = ImplicitDomain("x^2/16 + y^2 + z^2 - 1", 3)
cfg = theorem2_construct(ellipsoid, (0, 0, 0))
print("ellipsoid push factors", [round(k, 3) for k in cfg.coefficients])
cert = validate(ellipsoid, cfg, samples=200_000)
print("ok:", cert.ok, "margin", round(cert.margin, 5))
write_obj("ellipsoid.obj", cfg, ellipsoid)

box = box_mesh()
cfg = theorem2_construct(box, (0.2, 0.0, -0.1))
print("box:", validate(box, cfg).ok, cfg.meta["trial"])
