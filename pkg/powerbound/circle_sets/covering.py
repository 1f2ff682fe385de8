"""
Exact covering numbers of symbolic circle sets.

A minimal cover by closed arcs of length ε is found by cutting the circle
at a candidate start point and running the greedy sweep (each arc starts
at the first uncovered point). The sweep never enumerates a cluster: the
next point after a position is located by closed-form index arithmetic on
the geometric offsets, so the accumulated tail costs nothing.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .. import config
from ..audit import get_audit_logger
from ..errors import InvalidParameterError, ResourceLimitError
from .schemas import (
    TWO_PI,
    Angle,
    CoverArc,
    CoveringEntry,
    CoveringProfile,
    GeometricCluster,
    SymbolicCircleSet,
    canonical_theta,
)

audit_logger = get_audit_logger("circle_sets")

# Float rounding can misplace a closed-form index by a step or two.
_MAX_NUDGE = 8


def _rel(theta: float, start: float) -> float:
    value = (theta - start) % TWO_PI
    if value >= TWO_PI:
        value = 0.0
    return value


def _first_index(scale: float, ratio: float, bound: float, lo: int, strict: bool) -> Optional[int]:
    """Smallest n ≥ lo with scale·ratioⁿ < bound (or ≤ bound when not strict)."""
    if bound <= 0.0:
        return None

    def ok(n: int) -> bool:
        value = scale * ratio ** n
        return value < bound if strict else value <= bound

    if ok(lo):
        return lo
    guess = math.ceil(math.log(bound / scale) / math.log(ratio))
    n = max(lo + 1, guess)
    while not ok(n):
        n += 1
    while n - 1 > lo and ok(n - 1):
        n -= 1
    return n


# -------------------------------
# Sweep oracles
# -------------------------------


@dataclass(frozen=True)
class _Run:
    """
    Consecutive cluster indices [lo, hi) that stay monotone in relative
    coordinates; ``base`` is where they accumulate (limit, possibly ±2π).
    """

    cluster: GeometricCluster
    start: float
    lo: int
    hi: Optional[int]
    increasing: bool
    base: float

    def value(self, n: int) -> float:
        return _rel(self.cluster.theta_at(n), self.start)

    def _in_range(self, n: int) -> bool:
        return n >= self.lo and (self.hi is None or n < self.hi)

    def next_after(self, r: float) -> Optional[float]:
        c, a = self.cluster.scale, self.cluster.ratio
        if self.increasing:
            n = _first_index(c, a, self.base - r, self.lo, strict=True)
            if n is None or not self._in_range(n):
                return None
            for _ in range(_MAX_NUDGE):
                if not self._in_range(n) or self.value(n) > r:
                    break
                n += 1
            else:
                return None
            return self.value(n) if self._in_range(n) else None

        if r - self.base <= 0.0:
            if self.hi is None:
                return None
            n = self.hi - 1
        else:
            first = _first_index(c, a, r - self.base, self.lo, strict=False)
            n = first - 1
            if self.hi is not None:
                n = min(n, self.hi - 1)
        if n < self.lo:
            return None
        while n >= self.lo and self.value(n) <= r:
            n -= 1
        return self.value(n) if n >= self.lo else None

    def last_at_or_before(self, r: float) -> Optional[float]:
        c, a = self.cluster.scale, self.cluster.ratio
        if self.increasing:
            if self.base - r <= 0.0:
                if self.hi is None:
                    # supremum is the limit itself, which is a member
                    return self.base
                n = self.hi - 1
            else:
                n = _first_index(c, a, self.base - r, self.lo, strict=True) - 1
                if self.hi is not None:
                    n = min(n, self.hi - 1)
            while n >= self.lo and self.value(n) > r:
                n -= 1
            return self.value(n) if n >= self.lo else None

        if r - self.base <= 0.0:
            return None
        n = _first_index(c, a, r - self.base, self.lo, strict=False)
        if n is None or not self._in_range(n):
            return None
        for _ in range(_MAX_NUDGE):
            if not self._in_range(n) or self.value(n) <= r:
                break
            n += 1
        else:
            return None
        return self.value(n) if self._in_range(n) else None


def _runs_for(cluster: GeometricCluster, start: float) -> list[_Run]:
    lam = _rel(cluster.limit_theta.theta, start)
    c, a, j = cluster.scale, cluster.ratio, cluster.start_index
    runs = []
    if cluster.sign == 1:
        # values λ − c·aⁿ; the ones below the cut wrap to λ + 2π − c·aⁿ
        split = _first_index(c, a, lam, j, strict=False)
        if split is None or split > j:
            runs.append(_Run(cluster, start, j, split, True, lam + TWO_PI))
        if split is not None:
            runs.append(_Run(cluster, start, split, None, True, lam))
    else:
        # values λ + c·aⁿ; the ones past 2π wrap to λ − 2π + c·aⁿ
        split = _first_index(c, a, TWO_PI - lam, j, strict=True)
        if split > j:
            runs.append(_Run(cluster, start, j, split, False, lam - TWO_PI))
        runs.append(_Run(cluster, start, split, None, False, lam))
    return runs


class _SweepView:
    """The set seen in coordinates relative to a start point, cut there."""

    def __init__(self, circle_set: SymbolicCircleSet, start: float):
        atoms = [_rel(p.theta, start) for p in circle_set.points]
        atoms += [_rel(c.limit_theta.theta, start) for c in circle_set.clusters]
        self._atoms = sorted(atoms)
        self._runs = [run for c in circle_set.clusters for run in _runs_for(c, start)]

    def next_after(self, r: float) -> Optional[float]:
        best = None
        i = bisect_right(self._atoms, r)
        if i < len(self._atoms):
            best = self._atoms[i]
        for run in self._runs:
            v = run.next_after(r)
            if v is not None and (best is None or v < best):
                best = v
        return best

    def last_at_or_before(self, r: float) -> Optional[float]:
        best = None
        i = bisect_right(self._atoms, r)
        if i > 0:
            best = self._atoms[i - 1]
        for run in self._runs:
            v = run.last_at_or_before(r)
            if v is not None and (best is None or v > best):
                best = v
        return best


def _sweep(view: _SweepView, epsilon: float, limit: Optional[int]) -> Optional[list[tuple[float, float]]]:
    """Greedy cover from relative position 0; None once ``limit`` arcs would not suffice."""
    arcs: list[tuple[float, float]] = []
    cur = 0.0
    while True:
        reach = cur + epsilon
        covered = view.last_at_or_before(reach)
        arcs.append((cur, cur if covered is None else covered))
        nxt = view.next_after(reach)
        if nxt is None:
            return arcs
        if limit is not None and len(arcs) >= limit:
            return None
        cur = nxt


# -------------------------------
# Public operations
# -------------------------------


def _resolvable_count(circle_set: SymbolicCircleSet, min_offset: float) -> int:
    count = len(circle_set.points) + len(circle_set.clusters)
    for cluster in circle_set.clusters:
        count += len(cluster.indices_down_to(min_offset))
    return count


def _check_epsilon(epsilon: float) -> None:
    if not (epsilon > 0.0) or not math.isfinite(epsilon):
        raise InvalidParameterError(
            "epsilon must be a positive finite number",
            details={"epsilon": epsilon},
        )


def _minimal_cover(circle_set: SymbolicCircleSet, epsilon: float) -> tuple[float, list[tuple[float, float]]]:
    resolvable = _resolvable_count(circle_set, epsilon / 4.0)
    if resolvable > config.COVERING_POINT_CAP:
        raise ResourceLimitError(
            "resolvable point count exceeds the covering cap",
            details={"resolvable": resolvable, "cap": config.COVERING_POINT_CAP, "epsilon": epsilon},
        )

    starts = circle_set.enumerate_thetas(epsilon * config.COVERING_START_DEPTH)
    if len(starts) > config.COVERING_POINT_CAP:
        raise ResourceLimitError(
            "candidate start count exceeds the covering cap",
            details={"starts": len(starts), "cap": config.COVERING_POINT_CAP, "epsilon": epsilon},
        )

    best_start, best_arcs = None, None
    for start in starts:
        limit = None if best_arcs is None else len(best_arcs) - 1
        if limit == 0:
            break
        arcs = _sweep(_SweepView(circle_set, start), epsilon, limit)
        if arcs is not None and (best_arcs is None or len(arcs) < len(best_arcs)):
            best_start, best_arcs = start, arcs
            if len(best_arcs) == 1:
                break
    return best_start, best_arcs


def covering_number(circle_set: SymbolicCircleSet, epsilon: float) -> int:
    """
    Exact minimal number of closed arcs of length ``epsilon`` covering the set.

    Args:
        circle_set: The set to cover.
        epsilon: Arc length in radians.

    Returns:
        int: N_ε(E) ≥ 1.

    Raises:
        InvalidParameterError: If epsilon is not positive.
        ResourceLimitError: If more points are resolvable at scale ε/4 than
            the configured cap allows.
    """
    _check_epsilon(epsilon)
    if epsilon >= TWO_PI:
        return 1
    _, arcs = _minimal_cover(circle_set, epsilon)
    return len(arcs)


def cover_arcs(circle_set: SymbolicCircleSet, epsilon: float) -> list[CoverArc]:
    """
    Arcs of a minimal cover, each recentered on the points it covers.

    The arcs are listed in sweep order starting from the best cut point.
    """
    _check_epsilon(epsilon)
    if epsilon >= TWO_PI:
        theta = circle_set.enumerate_thetas(TWO_PI)[0]
        return [CoverArc(start=Angle(theta=theta), extent=0.0, length=epsilon)]
    start, arcs = _minimal_cover(circle_set, epsilon)
    result = [
        CoverArc(start=Angle(theta=canonical_theta(start + lo)), extent=max(hi - lo, 0.0), length=epsilon)
        for lo, hi in arcs
    ]
    audit_logger.info(
        "COVER set components=%s epsilon=%s n_eps=%s",
        len(circle_set.points) + len(circle_set.clusters), epsilon, len(result),
    )
    return result


def alpha_analytic(circle_set: SymbolicCircleSet) -> float:
    """Σ 1/log(1/a) over the clusters; point atoms contribute nothing."""
    return math.fsum(cluster.alpha for cluster in circle_set.clusters)


def alpha_empirical(circle_set: SymbolicCircleSet, eps0: float, rho: float, steps: int) -> CoveringProfile:
    """
    Covering profile on the grid eps0·ρⁱ, i = 0..steps−1.

    The empirical α is the minimum of N_ε/log(1/ε) over the tail half of
    the grid; only grid values below 1 contribute.

    Args:
        circle_set: The set to profile.
        eps0: First grid value.
        rho: Grid ratio in (0, 1).
        steps: Number of grid values, at least 2.

    Returns:
        CoveringProfile: Entries, empirical and analytic α.

    Raises:
        InvalidParameterError: On a malformed grid or if no tail value is below 1.
        ResourceLimitError: Propagated from covering_number.
    """
    if not (eps0 > 0.0) or not (0.0 < rho < 1.0) or steps < 2:
        raise InvalidParameterError(
            "grid needs eps0 > 0, 0 < rho < 1 and at least two steps",
            details={"eps0": eps0, "rho": rho, "steps": steps},
        )

    entries = []
    for i in range(steps):
        epsilon = eps0 * rho ** i
        entries.append(CoveringEntry(epsilon=epsilon, n_eps=covering_number(circle_set, epsilon)))

    tail = [
        e.n_eps / math.log(1.0 / e.epsilon)
        for e in entries[steps // 2:]
        if e.epsilon < 1.0
    ]
    if not tail:
        raise InvalidParameterError(
            "the tail half of the grid never drops below 1",
            details={"eps0": eps0, "rho": rho, "steps": steps},
        )

    profile = CoveringProfile(
        entries=entries,
        alpha_empirical=min(tail),
        alpha_analytic=alpha_analytic(circle_set),
    )
    audit_logger.info(
        "PROFILE set steps=%s last_epsilon=%s alpha_empirical=%.6f alpha_analytic=%.6f",
        steps, entries[-1].epsilon, profile.alpha_empirical, profile.alpha_analytic,
    )
    return profile
