"""
Analytic polynomials and interpolation problems on finite circle sets.
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import config
from ..types import ComplexVector


class AnalyticPolynomial(BaseModel):
    """
    f(ζ) = Σ_{n=0..D} c_n·ζⁿ.

    Attributes:
        coeffs: c_0..c_D.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coeffs: ComplexVector

    @model_validator(mode="after")
    def _nonempty(self) -> "AnalyticPolynomial":
        if self.coeffs.size == 0:
            raise ValueError("a polynomial needs at least one coefficient")
        return self

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def aplus_norm(self) -> float:
        """Σ |c_n|."""
        return math.fsum(np.abs(self.coeffs))

    def evaluate(self, zeta):
        """Horner evaluation at a scalar or an array of points."""
        zeta = np.asarray(zeta, dtype=complex)
        result = np.full(zeta.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            result = result * zeta + c
        return result if result.ndim else complex(result)


class InterpolationProblem(BaseModel):
    """
    Find f of degree ≤ ``degree`` with f(z_i) = w_i.

    Nodes are unimodular and pairwise distinct.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nodes: ComplexVector
    values: ComplexVector
    degree: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _well_posed(self) -> "InterpolationProblem":
        if self.nodes.size == 0:
            raise ValueError("need at least one node")
        if self.nodes.size != self.values.size:
            raise ValueError("nodes and values must have the same length")
        if np.any(np.abs(np.abs(self.nodes) - 1.0) > 1e-12):
            raise ValueError("nodes must be unimodular")
        gaps = np.abs(self.nodes[:, None] - self.nodes[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() <= config.ANGLE_TOLERANCE:
            raise ValueError("nodes must be pairwise distinct")
        return self

    def vandermonde(self) -> np.ndarray:
        """V[i, n] = z_iⁿ for n = 0..degree."""
        return self.nodes[:, None] ** np.arange(self.degree + 1)[None, :]


class InterpolationResult(BaseModel):
    """
    Minimal-norm interpolant with its dual certificate.

    Attributes:
        polynomial: The interpolant.
        dual: y with ‖Vᴴy‖_∞ ≤ 1; Re⟨y, w⟩ lower-bounds the optimum.
        gap: Relative duality gap.
        residual: max_i |f(z_i) − w_i|.
        iterations: Splitting iterations used.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    polynomial: AnalyticPolynomial
    dual: ComplexVector
    gap: float
    residual: float = Field(..., ge=0.0)
    iterations: int = Field(..., ge=0)

    @property
    def norm(self) -> float:
        return self.polynomial.aplus_norm

    @property
    def dual_value(self) -> float:
        return self.norm - self.gap * max(1.0, self.norm)
