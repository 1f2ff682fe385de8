"""
Finite-dimensional models T = Y·U·Y⁻¹ with U a diagonal unitary.
"""

from functools import cached_property
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.linalg import eigvals, inv, svdvals
from scipy.optimize import linear_sum_assignment

from .. import config
from ..circle_sets.schemas import canonical_theta
from ..types import ComplexMatrix

BoundName = Literal["lemma21", "lemma11", "thm25", "thm211", "thm212", "thm35"]


class DiagonalUnitary(BaseModel):
    """
    U = diag(e^{iθ_1}, …, e^{iθ_d}) with an optional block label per entry.

    Attributes:
        eigenangles: θ_j in [0, 2π).
        block_labels: Block of each diagonal entry (all 0 when omitted).
    """

    model_config = ConfigDict(frozen=True)

    eigenangles: list[float] = Field(..., min_length=1)
    block_labels: Optional[list[int]] = None

    @field_validator("eigenangles")
    @classmethod
    def _canonical(cls, value: list[float]) -> list[float]:
        return [canonical_theta(t) for t in value]

    @model_validator(mode="after")
    def _labels_match(self) -> "DiagonalUnitary":
        if self.block_labels is not None and len(self.block_labels) != len(self.eigenangles):
            raise ValueError("one block label per eigenangle is required")
        return self

    @property
    def dim(self) -> int:
        return len(self.eigenangles)

    @property
    def labels(self) -> list[int]:
        return self.block_labels if self.block_labels is not None else [0] * self.dim

    def eigenvalues(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.eigenangles))

    def blocks(self) -> dict[int, list[int]]:
        """Indices of each block, keyed by label in increasing order."""
        grouped: dict[int, list[int]] = {}
        for index, label in enumerate(self.labels):
            grouped.setdefault(label, []).append(index)
        return dict(sorted(grouped.items()))


class SimilarityModel(BaseModel):
    """
    T = Y·U·Y⁻¹.

    Construction checks that Y⁻¹ is accurate (‖Y·Y⁻¹ − I‖ within
    ``INVERSE_QUALITY_TOLERANCE``) and that the computed spectrum of T
    matches the eigenvalues of U (optimal matching within
    ``SPECTRUM_MATCH_TOLERANCE``). T, T⁻¹, Y⁻¹ and κ(Y) are cached.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    U: DiagonalUnitary
    Y: ComplexMatrix

    @model_validator(mode="after")
    def _consistent(self) -> "SimilarityModel":
        d = self.U.dim
        if self.Y.shape != (d, d):
            raise ValueError(f"Y must be {d}x{d}")
        Y_inv = inv(self.Y)
        quality = float(np.max(svdvals(self.Y @ Y_inv - np.eye(d))))
        if quality > config.INVERSE_QUALITY_TOLERANCE:
            raise ValueError(f"Y is too ill-conditioned: |Y Y^-1 - I| = {quality:.3e}")
        T = (self.Y * self.U.eigenvalues()[None, :]) @ Y_inv
        mismatch = spectrum_mismatch(eigvals(T), self.U.eigenvalues())
        if mismatch > config.SPECTRUM_MATCH_TOLERANCE:
            raise ValueError(f"spectrum of T differs from the spectrum of U by {mismatch:.3e}")
        return self

    @property
    def dim(self) -> int:
        return self.U.dim

    @cached_property
    def Y_inv(self) -> np.ndarray:
        return inv(self.Y)

    @cached_property
    def T(self) -> np.ndarray:
        return self.power(1)

    @cached_property
    def T_inv(self) -> np.ndarray:
        return self.power(-1)

    @cached_property
    def kappa(self) -> float:
        """Condition number ‖Y‖·‖Y⁻¹‖."""
        s = svdvals(self.Y)
        return float(s[0] / s[-1])

    def power(self, n: int) -> np.ndarray:
        """Tⁿ = Y·Uⁿ·Y⁻¹ for any integer n."""
        phases = np.exp(1j * n * np.asarray(self.U.eigenangles))
        return (self.Y * phases[None, :]) @ self.Y_inv


def spectrum_mismatch(computed: np.ndarray, expected: np.ndarray) -> float:
    """Largest distance in the optimal one-to-one matching of two spectra."""
    cost = np.abs(np.asarray(computed)[:, None] - np.asarray(expected)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


class BoundReport(BaseModel):
    """
    Outcome of one similarity-bound check.

    Attributes:
        M_window: max ‖Tⁿ‖ over 0 ≤ n ≤ N.
        Minv_window: max ‖T⁻ⁿ‖ over 0 ≤ n ≤ N.
        bound_value: The bound the checked quantity is held to.
        bound_name: Which bound was checked.
        satisfied: Whether the check passed.
        slack: bound_value minus the checked quantity.
        N: Final window (after any doubling).
        tolerance: Relative tolerance delta.
        rechecks: Number of window doublings performed.
        details: Check-specific diagnostics.
    """

    M_window: float
    Minv_window: float
    bound_value: float
    bound_name: BoundName
    satisfied: bool
    slack: float
    N: int = Field(..., ge=0)
    tolerance: float
    rechecks: int = Field(0, ge=0)
    details: dict[str, Any] = Field(default_factory=dict)
