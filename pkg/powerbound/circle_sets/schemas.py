"""
Domain types for thin closed subsets of the unit circle.

Angles are radians interpreted mod 2π; the represented point is e^{iθ}.
"""

import math
from typing import Annotated, Any, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator

from .. import config

TWO_PI = 2.0 * math.pi


def canonical_theta(theta: float) -> float:
    """Return the representative of ``theta`` in [0, 2π)."""
    value = math.fmod(theta, TWO_PI)
    if value < 0.0:
        value += TWO_PI
    if value >= TWO_PI:
        value = 0.0
    return value


def circle_distance(theta_a: float, theta_b: float) -> float:
    """Arc-length distance between two angles along the circle."""
    diff = abs(theta_a - theta_b) % TWO_PI
    return min(diff, TWO_PI - diff)


class Angle(BaseModel):
    """
    A point e^{iθ} of the unit circle.

    Attributes:
        theta: Angle in radians, stored as its representative in [0, 2π).
    """

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., description="Radians, canonical representative in [0, 2π).")

    @field_validator("theta")
    @classmethod
    def _canonical(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("theta must be finite")
        return canonical_theta(value)

    def close_to(self, other: "Angle", tol: float) -> bool:
        """Return True when the two angles are within ``tol`` along the circle."""
        return circle_distance(self.theta, other.theta) <= tol

    @property
    def point(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


def _coerce_angle(value: Any) -> Any:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return {"theta": float(value)}
    return value


AngleLike = Annotated[Angle, BeforeValidator(_coerce_angle)]


class GeometricCluster(BaseModel):
    """
    Closed set {limit} ∪ {limit − sign·scale·ratioⁿ : n ≥ start_index}.

    Attributes:
        limit_theta: The accumulation point (always a member).
        ratio: Geometric ratio a in (0, 1).
        scale: Offset scale c > 0.
        sign: +1 places the points below the limit, -1 above it.
        start_index: First index j ≥ 1.
    """

    model_config = ConfigDict(frozen=True)

    limit_theta: AngleLike
    ratio: float = Field(..., gt=0.0, lt=1.0)
    scale: float = Field(..., gt=0.0)
    sign: Literal[1, -1] = 1
    start_index: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _fits_on_circle(self) -> "GeometricCluster":
        if self.offset(self.start_index) >= TWO_PI:
            raise ValueError("scale * ratio**start_index must be smaller than 2π")
        return self

    @property
    def alpha(self) -> float:
        """The quantity 1/log(1/a) of this cluster."""
        return 1.0 / math.log(1.0 / self.ratio)

    def offset(self, n: int) -> float:
        return self.scale * self.ratio ** n

    def theta_at(self, n: int) -> float:
        return canonical_theta(self.limit_theta.theta - self.sign * self.offset(n))

    def indices_down_to(self, min_offset: float) -> range:
        """Indices n ≥ start_index whose offset is at least ``min_offset``."""
        if min_offset <= 0.0:
            raise ValueError("min_offset must be positive")
        n = self.start_index
        if self.offset(n) < min_offset:
            return range(n, n)
        last = int(math.floor(math.log(min_offset / self.scale) / math.log(self.ratio)))
        last = max(last, n)
        while self.offset(last) < min_offset:
            last -= 1
        while self.offset(last + 1) >= min_offset:
            last += 1
        return range(n, last + 1)

    def thetas_down_to(self, min_offset: float) -> list[float]:
        return [self.theta_at(n) for n in self.indices_down_to(min_offset)]

    def contains(self, theta: float, tol: float) -> bool:
        """Membership test with tolerance ``tol`` (radians)."""
        u = (self.sign * (self.limit_theta.theta - theta)) % TWO_PI
        if u <= tol or TWO_PI - u <= tol:
            return True
        if u > self.offset(self.start_index) + tol:
            return False
        estimate = math.log(u / self.scale) / math.log(self.ratio)
        for n in (math.floor(estimate) - 1, math.floor(estimate), math.floor(estimate) + 1,
                  math.floor(estimate) + 2):
            if n >= self.start_index and abs(self.offset(n) - u) <= tol:
                return True
        return False


class SymbolicCircleSet(BaseModel):
    """
    Finite union of point atoms and geometric clusters.

    Attributes:
        points: Isolated point atoms.
        clusters: Geometric accumulation clusters.
    """

    model_config = ConfigDict(frozen=True)

    points: list[AngleLike] = Field(default_factory=list)
    clusters: list[GeometricCluster] = Field(default_factory=list)

    @model_validator(mode="after")
    def _components_disjoint(self) -> "SymbolicCircleSet":
        if not self.points and not self.clusters:
            raise ValueError("a circle set needs at least one component")
        tol = config.ANGLE_TOLERANCE

        thetas = sorted(p.theta for p in self.points)
        for left, right in zip(thetas, thetas[1:] + thetas[:1]):
            if len(thetas) > 1 and circle_distance(left, right) <= tol:
                raise ValueError(f"point atoms at {left} and {right} coincide")

        for cluster in self.clusters:
            for theta in thetas:
                if cluster.contains(theta, tol):
                    raise ValueError(f"point atom {theta} lies on a cluster")

        for i, first in enumerate(self.clusters):
            for second in self.clusters[i + 1:]:
                if _clusters_meet(first, second, tol):
                    raise ValueError("clusters are not disjoint")
        return self

    def contains(self, theta: float, tol: Optional[float] = None) -> bool:
        """Return True when e^{iθ} belongs to the set, up to ``tol``."""
        tol = config.ANGLE_TOLERANCE if tol is None else tol
        if any(circle_distance(p.theta, theta) <= tol for p in self.points):
            return True
        return any(c.contains(theta, tol) for c in self.clusters)

    @property
    def is_finite(self) -> bool:
        return not self.clusters

    def enumerate_thetas(self, min_offset: float) -> list[float]:
        """Atoms, cluster limits and every cluster point with offset ≥ ``min_offset``."""
        thetas = [p.theta for p in self.points]
        for cluster in self.clusters:
            thetas.append(cluster.limit_theta.theta)
            thetas.extend(cluster.thetas_down_to(min_offset))
        return sorted(thetas)


def _clusters_meet(first: GeometricCluster, second: GeometricCluster, tol: float) -> bool:
    if first.contains(second.limit_theta.theta, tol) or second.contains(first.limit_theta.theta, tol):
        return True
    floor = max(tol, 1e-300)
    for a, b in ((first, second), (second, first)):
        for theta in a.thetas_down_to(floor):
            if b.contains(theta, tol):
                return True
    return False


class CoveringEntry(BaseModel):
    """One grid point of a covering profile."""

    epsilon: float = Field(..., gt=0.0)
    n_eps: int = Field(..., ge=1)


class CoveringProfile(BaseModel):
    """
    Covering numbers on a decreasing epsilon grid plus the α estimates.

    Attributes:
        entries: (epsilon, N_ε) pairs, epsilon strictly decreasing.
        alpha_empirical: Minimum of N_ε/log(1/ε) over the grid tail.
        alpha_analytic: Σ 1/log(1/a) over clusters.
    """

    entries: list[CoveringEntry]
    alpha_empirical: float = Field(..., ge=0.0)
    alpha_analytic: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _monotone(self) -> "CoveringProfile":
        for prev, cur in zip(self.entries, self.entries[1:]):
            if not cur.epsilon < prev.epsilon:
                raise ValueError("epsilon must be strictly decreasing")
            if cur.n_eps < prev.n_eps:
                raise ValueError("n_eps must be nondecreasing as epsilon decreases")
        return self


class CoverArc(BaseModel):
    """
    A closed arc of a minimal cover.

    ``start`` is the first covered point and ``extent`` the span of the
    covered points (≤ ``length``).
    """

    start: Angle
    extent: float = Field(..., ge=0.0)
    length: float = Field(..., gt=0.0)

    @property
    def center(self) -> float:
        """Midpoint of the covered extent, in radians."""
        return canonical_theta(self.start.theta + self.extent / 2.0)


class Decomposition(BaseModel):
    """Exceptional points plus pieces of small α."""

    exceptional: list[Angle]
    pieces: list[SymbolicCircleSet]
