"""Triple-point interpolation on toric surfaces by regular subdivisions.

Exact lattice geometry, the six-point polygon classification, fat-point
conditions and a rank oracle, subdivision liftings by exact LP, and the
block constructions that certify emptiness on P1 x P1 and P2.
"""

__version__ = "0.1.0"

from .classify import Catalog, PolygonClass, default_catalog, enumerate_classes, match_class
from .degeneration import (
    BlockLibrary,
    DegenCertificate,
    Region,
    VerificationReport,
    build_p1xp1,
    build_p2,
    compose_stack,
    conclude_dimension,
    search_block,
    transform_certificate,
    verify_certificate,
)
from .errors import *  # noqa: F401,F403
from .fatpoints import (
    SystemSpec,
    generic_dim_oracle,
    is_empty_after_triple,
    residue_table,
    symbolic_det,
    triple_point_matrix,
    vdim_plane,
    vdim_polygon,
)
from .lattice import (
    LatticePolygon,
    UnimodularAffineMap,
    canonical_form,
    normalize_standard,
    pick_data,
    rectangle,
    triangle,
)
from .subdivision import Cell, Lifting, Subdivision, check_lifting, fill_complement, find_lifting, separating_lift

__all__ = [
    "BlockLibrary",
    "Catalog",
    "Cell",
    "DegenCertificate",
    "LatticePolygon",
    "Lifting",
    "PolygonClass",
    "Region",
    "Subdivision",
    "SystemSpec",
    "UnimodularAffineMap",
    "VerificationReport",
    "build_p1xp1",
    "build_p2",
    "canonical_form",
    "check_lifting",
    "compose_stack",
    "conclude_dimension",
    "default_catalog",
    "enumerate_classes",
    "fill_complement",
    "find_lifting",
    "generic_dim_oracle",
    "is_empty_after_triple",
    "match_class",
    "normalize_standard",
    "pick_data",
    "rectangle",
    "residue_table",
    "search_block",
    "separating_lift",
    "symbolic_det",
    "transform_certificate",
    "triangle",
    "triple_point_matrix",
    "vdim_plane",
    "vdim_polygon",
    "verify_certificate",
]
