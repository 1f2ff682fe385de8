"""Simultaneous approximation and recurrence searches."""

from .dirichlet import admissible_denominators, as_fractions, dirichlet_simultaneous, pigeonhole_certificate
from .recurrence import (
    near_recurrence_to_identity,
    recurrence_exponent,
    sup_distance_to_one,
    weak_limit_subsequence,
)
from .schemas import DirichletCertificate, RecurrenceResult, WeakLimitResult

__all__ = [
    "DirichletCertificate",
    "RecurrenceResult",
    "WeakLimitResult",
    "admissible_denominators",
    "as_fractions",
    "dirichlet_simultaneous",
    "near_recurrence_to_identity",
    "pigeonhole_certificate",
    "recurrence_exponent",
    "sup_distance_to_one",
    "weak_limit_subsequence",
]
