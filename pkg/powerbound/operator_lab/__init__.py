"""Power-bound experiments on finite-dimensional similarity models."""

from .bounds import (
    check_lemma21,
    check_theorem25,
    check_theorem35,
    check_theorem211,
    check_theorem212,
    riesz_bounds,
    verify_lemma11,
    weak_limit_gap,
)
from .generators import (
    block_model,
    cluster_eigenangles,
    random_eigenangles,
    random_model,
    random_similarity,
    random_unitary,
)
from .norms import power_norm_profile, spectral_norm, window_constants
from .schemas import BoundReport, DiagonalUnitary, SimilarityModel, spectrum_mismatch

__all__ = [
    "BoundReport",
    "DiagonalUnitary",
    "SimilarityModel",
    "block_model",
    "check_lemma21",
    "check_theorem25",
    "check_theorem35",
    "check_theorem211",
    "check_theorem212",
    "cluster_eigenangles",
    "power_norm_profile",
    "random_eigenangles",
    "random_model",
    "random_similarity",
    "random_unitary",
    "riesz_bounds",
    "spectral_norm",
    "spectrum_mismatch",
    "verify_lemma11",
    "weak_limit_gap",
    "window_constants",
]
