from .expr import EvaluationError, ParseError, evaluate, parse_implicit, to_string
from .shapes import (
    PLUS_SHAPE,
    Domain,
    DomainError,
    DomainSpec,
    ImplicitDomain,
    InradiusEstimate,
    MeshDomain,
    PolygonDomain,
    RayHit,
    UnboundedDomain,
    box_mesh,
    contains,
    domain_from_dict,
    estimate_inradius,
    l_shape_polygon,
    ray_first_hit,
    square_polygon,
)
from .theorems import (
    Certificate,
    ConstructionFailed,
    RayMissesBoundary,
    ValidationFailed,
    theorem1_construct,
    theorem2_construct,
    validate,
)
