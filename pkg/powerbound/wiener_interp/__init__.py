"""ℓ¹-minimal analytic interpolation on finite circle sets."""

from .schemas import AnalyticPolynomial, InterpolationProblem, InterpolationResult
from .solver import (
    evaluate_on_operator,
    interpolate_min_l1,
    interpolation_constant,
    interpolation_profile,
)

__all__ = [
    "AnalyticPolynomial",
    "InterpolationProblem",
    "InterpolationResult",
    "evaluate_on_operator",
    "interpolate_min_l1",
    "interpolation_constant",
    "interpolation_profile",
]
