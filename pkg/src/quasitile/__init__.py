"""Quasiperiodic tilings from lattices: exact arithmetic, cut-and-project,
dual-cell sections, inflation, matching rules, coverings and diffraction."""

from .exactnum import TAU, QuadValue, to_float
from .patch import PATCH_SCHEMA, Patch, Tile
from .lattice import (
    ab_scheme,
    an_lattice,
    crystallographic_restriction,
    fibonacci_scheme,
    penrose_scheme,
    zn_lattice,
)
from .dualcell import section_tiling, voronoi_complex, voronoi_domain
from .cutproject import ab_tiling, ab_vertex_set, penrose_tiling, triangle_tiling
from .inflation import RULES, ab_rule, fibonacci_rule, penrose_rule, seed_patch, substitute
from .matching import PENROSE_TEMPLATE, check_legality, decorate
from .covering import decagon_cluster, find_covering, pentagon_clusters, verify_covering
from .diffraction import predict_peaks

__version__ = "0.1.0"

__all__ = [
    "TAU",
    "QuadValue",
    "to_float",
    "PATCH_SCHEMA",
    "Patch",
    "Tile",
    "ab_scheme",
    "an_lattice",
    "crystallographic_restriction",
    "fibonacci_scheme",
    "penrose_scheme",
    "zn_lattice",
    "section_tiling",
    "voronoi_complex",
    "voronoi_domain",
    "ab_tiling",
    "ab_vertex_set",
    "penrose_tiling",
    "triangle_tiling",
    "RULES",
    "ab_rule",
    "fibonacci_rule",
    "penrose_rule",
    "seed_patch",
    "substitute",
    "PENROSE_TEMPLATE",
    "check_legality",
    "decorate",
    "decagon_cluster",
    "find_covering",
    "pentagon_clusters",
    "verify_covering",
    "predict_peaks",
]
