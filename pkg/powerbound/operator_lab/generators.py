"""
Random test models: unitaries, conditioned similarities and spectra.
"""

import math
from typing import Optional, Sequence

import numpy as np

from ..circle_sets import SymbolicCircleSet, circle_distance
from ..errors import InvalidParameterError, PreconditionError, ResourceLimitError
from .schemas import DiagonalUnitary, SimilarityModel

_ANGLE_DRAWS = 1000


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    if d < 1:
        raise InvalidParameterError("dimension must be positive", details={"d": d})
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    diagonal = np.diag(R)
    return Q * (diagonal / np.abs(diagonal))[None, :]


def random_similarity(d: int, kappa: float, rng: np.random.Generator) -> np.ndarray:
    """
    Y = Q₁·diag(s)·Q₂ with κ(Y) = kappa exactly.

    The singular values are log-uniform in [1/√κ, √κ] with both endpoints
    attained (d = 1 requires kappa = 1).
    """
    if not (kappa >= 1.0) or (d == 1 and kappa != 1.0):
        raise InvalidParameterError("kappa must be >= 1 (and 1 when d = 1)", details={"d": d, "kappa": kappa})
    top = math.sqrt(kappa)
    s = np.exp(rng.uniform(-math.log(top), math.log(top), d))
    if d > 1:
        s[0], s[-1] = top, 1.0 / top
    return (random_unitary(d, rng) * s[None, :]) @ random_unitary(d, rng)


def _min_gap(thetas: Sequence[float]) -> float:
    return min(
        (circle_distance(a, b) for i, a in enumerate(thetas) for b in thetas[i + 1:]),
        default=math.inf,
    )


def random_eigenangles(d: int, rng: np.random.Generator, min_gap: float = 1e-3) -> list[float]:
    """d uniform angles, redrawn until they are pairwise min_gap apart."""
    for _ in range(_ANGLE_DRAWS):
        thetas = sorted(rng.uniform(0.0, 2.0 * math.pi, d).tolist())
        if _min_gap(thetas) >= min_gap:
            return thetas
    raise ResourceLimitError("could not draw separated eigenangles", details={"d": d, "min_gap": min_gap})


def cluster_eigenangles(
    circle_set: SymbolicCircleSet,
    d: int,
    rng: np.random.Generator,
    min_offset: float = 1e-6,
) -> list[float]:
    """d distinct angles drawn from the points of E resolvable at ``min_offset``."""
    candidates = circle_set.enumerate_thetas(min_offset)
    if d > len(candidates):
        raise PreconditionError(
            "set has too few resolvable points",
            details={"d": d, "available": len(candidates)},
        )
    chosen = rng.choice(len(candidates), size=d, replace=False)
    return sorted(candidates[i] for i in chosen)


def random_model(
    d: int,
    kappa: float,
    rng: np.random.Generator,
    eigenangles: Optional[Sequence[float]] = None,
) -> SimilarityModel:
    thetas = list(eigenangles) if eigenangles is not None else random_eigenangles(d, rng)
    if len(thetas) != d:
        raise InvalidParameterError("need one eigenangle per dimension", details={"d": d, "angles": len(thetas)})
    return SimilarityModel(U=DiagonalUnitary(eigenangles=thetas), Y=random_similarity(d, kappa, rng))


def block_model(block_sizes: Sequence[int], kappa: float, rng: np.random.Generator) -> SimilarityModel:
    """Model whose eigenangles carry block labels 0, 1, … of the given sizes."""
    if not block_sizes or min(block_sizes) < 1:
        raise InvalidParameterError("block sizes must be positive", details={"block_sizes": list(block_sizes)})
    d = sum(block_sizes)
    labels = [label for label, size in enumerate(block_sizes) for _ in range(size)]
    U = DiagonalUnitary(eigenangles=random_eigenangles(d, rng), block_labels=labels)
    return SimilarityModel(U=U, Y=random_similarity(d, kappa, rng))
