"""Thin closed circle sets: covering numbers, α and decompositions."""

from .covering import alpha_analytic, alpha_empirical, cover_arcs, covering_number
from .decomposition import decompose, example_family_cluster, label_by_first_containing
from .formats import format_set_text, load_set_file, parse_set_text
from .schemas import (
    Angle,
    CoverArc,
    CoveringEntry,
    CoveringProfile,
    Decomposition,
    GeometricCluster,
    SymbolicCircleSet,
    canonical_theta,
    circle_distance,
)

__all__ = [
    "Angle",
    "CoverArc",
    "CoveringEntry",
    "CoveringProfile",
    "Decomposition",
    "GeometricCluster",
    "SymbolicCircleSet",
    "alpha_analytic",
    "alpha_empirical",
    "canonical_theta",
    "circle_distance",
    "cover_arcs",
    "covering_number",
    "decompose",
    "example_family_cluster",
    "format_set_text",
    "label_by_first_containing",
    "load_set_file",
    "parse_set_text",
]
