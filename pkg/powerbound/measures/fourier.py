"""
Fourier coefficients μ̂(n) = Σ_j w_j·e^{−inθ_j} of atomic circle measures.

Single coefficients are summed with ``math.fsum``; windows are evaluated
as blocked matrix products. Cantor approximations also have a closed
product formula, which windows use directly.
"""

import math
from typing import Sequence

import numpy as np

from .. import config
from .schemas import CantorApproxMeasure, CircleMeasure

# Upper bound on (index, atom) pairs materialized per block.
_MAX_BLOCK_ELEMENTS = 1 << 22


def fourier_coefficient(mu: CircleMeasure, n: int) -> complex:
    """Compensated direct sum Σ w_j·e^{−inθ_j} over the atoms of ``mu``."""
    thetas, weights = mu.thetas(), mu.weights()
    phase = n * thetas
    real = math.fsum(weights * np.cos(phase))
    imag = math.fsum(-weights * np.sin(phase))
    return complex(real, imag)


def cantor_fourier_coefficient(measure: CantorApproxMeasure, n: int) -> complex:
    """
    Product formula for a Cantor approximation.

    mass·e^{−in(s + ℓ/2)}·Π_{k=1..d} cos(n·(1−a)·a^{k−1}·ℓ/2), which equals
    the direct sum over the 2^d midpoints.
    """
    return complex(_cantor_window(measure, np.array([n]))[0])


def _cantor_window(measure: CantorApproxMeasure, ns: np.ndarray) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    product = np.ones_like(ns)
    for gap in measure.half_gaps():
        product *= np.cos(ns * gap)
    return measure.mass * np.exp(-1j * ns * measure.center) * product


def fourier_coefficients(mu: CircleMeasure, ns: Sequence[int]) -> np.ndarray:
    """
    μ̂(n) for every n in ``ns``.

    Atomic measures are evaluated in blocks of at most
    ``FOURIER_SCAN_CHUNK`` indices; Cantor approximations use the product
    formula.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if isinstance(mu, CantorApproxMeasure):
        return _cantor_window(mu, ns)

    thetas, weights = mu.thetas(), mu.weights()
    rows = max(1, min(config.FOURIER_SCAN_CHUNK, _MAX_BLOCK_ELEMENTS // max(1, thetas.size)))
    out = np.empty(ns.size, dtype=complex)
    for lo in range(0, ns.size, rows):
        block = ns[lo:lo + rows].astype(float)
        out[lo:lo + rows] = np.exp(-1j * np.outer(block, thetas)) @ weights
    return out
