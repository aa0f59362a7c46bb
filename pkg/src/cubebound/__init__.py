"""Hyperplanes, contracting rays and lower divergence for graph products of cyclic groups."""

__version__ = "0.1.0"

from .catalog import builtin
from .cayley import GeodesicPath, ball, distance, interval, median, project
from .divergence import INFINITE, DivergenceProfile, divergence_profile, ldiv_at, quadratic_bound_check
from .errors import (
    CubeboundError,
    GraphMismatch,
    HorizonExceeded,
    HorizonTooSmall,
    IndexOutOfRange,
    InvalidLetter,
    NotGeodesic,
    ParseError,
    PreconditionError,
    RaysIndistinguishable,
    ResourceLimit,
)
from .group import (
    INF,
    GroupElement,
    Letter,
    PresentationGraph,
    dependence_comparable,
    inverse,
    is_geodesic,
    multiply,
    normal_form,
    parse_presentation,
)
from .rays import (
    DetectorParams,
    RaySpec,
    block_decomposition,
    bounded_projection_check,
    detect_contracting,
    estimate_contraction,
    estimate_slimness,
    itinerary,
)
from .walls import Relation, SeparationVerdict, Wall, crosses, product_membership, separates, separation, wall_of_edge, walls_of_path
