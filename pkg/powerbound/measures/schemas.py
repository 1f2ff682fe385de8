"""
Finite positive measures on the circle and bounded coefficient sequences.
"""

import math
from typing import Callable, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import config
from ..types import ComplexScalar
from ..circle_sets.schemas import AngleLike, canonical_theta, circle_distance

# Cantor renderings above this depth would need millions of atoms.
MAX_CANTOR_DEPTH = 20


class Atom(BaseModel):
    """A point mass ``weight`` at e^{iθ}."""

    model_config = ConfigDict(frozen=True)

    theta: AngleLike
    weight: float = Field(..., gt=0.0)


class AtomicMeasure(BaseModel):
    """
    Σ w_j·δ(e^{iθ_j}) with distinct angles and positive weights.

    Attributes:
        atoms: The point masses.
    """

    model_config = ConfigDict(frozen=True)

    atoms: list[Atom] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _distinct_angles(self) -> "AtomicMeasure":
        thetas = sorted(atom.theta.theta for atom in self.atoms)
        if len(thetas) > 1:
            for left, right in zip(thetas, thetas[1:] + thetas[:1]):
                if circle_distance(left, right) <= config.ANGLE_TOLERANCE:
                    raise ValueError(f"atoms at {left} and {right} coincide")
        return self

    @classmethod
    def from_arrays(cls, thetas, weights) -> "AtomicMeasure":
        return cls(atoms=[Atom(theta=float(t), weight=float(w)) for t, w in zip(thetas, weights)])

    def thetas(self) -> np.ndarray:
        return np.array([atom.theta.theta for atom in self.atoms])

    def weights(self) -> np.ndarray:
        return np.array([atom.weight for atom in self.atoms])

    @property
    def total_mass(self) -> float:
        return math.fsum(atom.weight for atom in self.atoms)


class CantorApproxMeasure(BaseModel):
    """
    Depth-d approximation of the uniform measure on a central Cantor set.

    The arc [arc_start, arc_start + arc_length] is split d times, each
    interval keeping its two outer subintervals of relative length
    ``ratio``. The measure puts mass/2^d on the midpoint of each of the
    2^d construction intervals.
    """

    model_config = ConfigDict(frozen=True)

    ratio: float = Field(..., gt=0.0, lt=0.5)
    depth: int = Field(..., ge=0, le=MAX_CANTOR_DEPTH)
    mass: float = Field(..., gt=0.0)
    arc_start: float
    arc_length: float = Field(..., gt=0.0, le=2.0 * math.pi)

    @property
    def total_mass(self) -> float:
        return self.mass

    @property
    def center(self) -> float:
        return self.arc_start + self.arc_length / 2.0

    def half_gaps(self) -> np.ndarray:
        """Distance (1−a)·a^{k−1}·ℓ/2 from a level-(k−1) midpoint to its children."""
        k = np.arange(1, self.depth + 1)
        return (1.0 - self.ratio) * self.ratio ** (k - 1) * self.arc_length / 2.0

    def thetas(self) -> np.ndarray:
        midpoints = np.array([self.center])
        for gap in self.half_gaps():
            midpoints = np.concatenate([midpoints - gap, midpoints + gap])
        return np.sort(np.array([canonical_theta(t) for t in midpoints]))

    def weights(self) -> np.ndarray:
        return np.full(2 ** self.depth, self.mass / 2 ** self.depth)

    def to_atomic(self) -> AtomicMeasure:
        return AtomicMeasure.from_arrays(self.thetas(), self.weights())


CircleMeasure = Union[AtomicMeasure, CantorApproxMeasure]


class WindowMaximum(BaseModel):
    """Largest |μ̂(n)| on a window and the first n achieving it."""

    value: float = Field(..., ge=0.0)
    index: int


class Lemma28Result(BaseModel):
    """
    Indices where |μ̂(n)| is nearly the total mass.

    Attributes:
        indices: Up to ``count`` indices with |μ̂(n)| ≥ (1 − tol)·mass.
        xi: Unimodular ξ built from the last index.
        dispersion: Σ w_j·|ζ_j^n − ξ|² at the last index.
        bound: 2·tol·mass.
    """

    indices: list[int]
    xi: ComplexScalar
    dispersion: float
    bound: float


class MinimizingSequence(BaseModel):
    """
    Strictly increasing n_k with ∫|Im ζ^{n_k}| dμ ≤ targets[k].

    ``total`` ≤ ``target_total`` certifies summability of the integrals.
    """

    indices: list[int]
    values: list[float]
    total: float
    target_total: float


class Pseudomeasure(BaseModel):
    """
    A coefficient sequence n ↦ coeff(n) claimed bounded by ``bound``.

    Every window read through :func:`~powerbound.measures.diagnostics.pseudomeasure_window`
    is checked against the bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coeff: Callable[[int], complex]
    bound: float = Field(..., gt=0.0)
