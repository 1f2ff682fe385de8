"""
Result types for simultaneous approximation and recurrence searches.
"""

from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, model_validator

from ..types import ComplexVector

ExactRational = Annotated[Fraction, PlainSerializer(str, return_type=str)]


class DirichletCertificate(BaseModel):
    """
    A simultaneous approximation q·t_j ≈ p_j.

    Attributes:
        q: Denominator, Q ≤ q ≤ Q·m^N.
        p: Nearest integers to q·t_j.
        m: Box resolution; the residual bound is 1/m.
        Q: Lower end of the search.
        max_residual: max_j |q·t_j − p_j|, exact.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    q: int = Field(..., ge=1)
    p: list[int]
    m: int = Field(..., ge=2)
    Q: int = Field(..., ge=1)
    max_residual: ExactRational

    @model_validator(mode="after")
    def _dirichlet_bounds(self) -> "DirichletCertificate":
        if not self.Q <= self.q <= self.Q * self.m ** len(self.p):
            raise ValueError("q must lie in [Q, Q·m^N]")
        if self.max_residual > Fraction(1, self.m):
            raise ValueError("max_residual exceeds 1/m")
        return self


class RecurrenceResult(BaseModel):
    """
    An exponent q with e^{iqθ} close to 1 on the whole set.

    Attributes:
        q: The exponent.
        sup_error: Certified bound on sup |ζ^q − 1| over the set.
        K: Recurrence parameter (m = K − 1 boxes).
        epsilon_used: Arc length of the cover.
        N_used: Number of cover arcs.
        Q_used: Search start that produced q.
        target: 2·sin(π/(K−1)).
        slack: Allowance 2π·(Q/2)·((K−1)/K)^N at Q_used.
        strict: True when sup_error ≤ target without slack.
        centers: Arc centers in turns (θ/2π).
    """

    q: int = Field(..., ge=1)
    sup_error: float = Field(..., ge=0.0)
    K: int = Field(..., ge=3)
    epsilon_used: float = Field(..., gt=0.0)
    N_used: int = Field(..., ge=1)
    Q_used: int = Field(..., ge=1)
    target: float
    slack: float = Field(..., ge=0.0)
    strict: bool
    centers: list[float]


class WeakLimitResult(BaseModel):
    """
    Strictly increasing exponents n_k with λ^{n_k} → ξ.

    Attributes:
        indices: n_1 < n_2 < … .
        xi: The limit vector λ^{n_1}.
        errors: max_j |λ_j^{n_k} − ξ_j| for each k.
        tolerances: The tolerance each n_k was held to.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    indices: list[int]
    xi: ComplexVector
    errors: list[float]
    tolerances: list[float]
