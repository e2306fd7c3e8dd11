"""Balls centered on a domain boundary that block every line through a point."""

from .capcover import (
    ArcSet,
    CapFamily,
    Verdict,
    arcset_covers_circle,
    cap_arc_on_circle,
    covers,
    covers_projective_2d,
    covers_sphere_exact,
    find_escape_sampling,
)
from .constructions import (
    Lemma2Constants,
    Lemma2Params,
    ShadowConfig,
    angle_from_center_xy,
    lemma2_constants,
    lemma2_unit_sphere,
    solve_level_for_angle,
    tune_lemma2,
    two_balls_unit_circle,
)
from .domains import (
    Certificate,
    ImplicitDomain,
    MeshDomain,
    PolygonDomain,
    estimate_inradius,
    parse_implicit,
    ray_first_hit,
    theorem1_construct,
    theorem2_construct,
    validate,
)
from .geom import (
    Ball,
    Cap,
    Sphere,
    cap_of_ball,
    dist,
    homothety_ball,
    interiors_disjoint,
    line_hits_ball,
    sets_disjoint,
)

__version__ = "0.1.0"
