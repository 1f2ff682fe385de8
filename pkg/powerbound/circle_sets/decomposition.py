"""
Splitting a thin set into finitely many exceptional points and pieces
of small α, plus the helpers that make overlapping families disjoint.
"""

from typing import Optional, Sequence

from .. import config
from ..audit import get_audit_logger
from ..errors import InvalidParameterError, ResourceLimitError
from .covering import alpha_analytic
from .schemas import Angle, Decomposition, GeometricCluster, SymbolicCircleSet

audit_logger = get_audit_logger("circle_sets")


def _dyadic_blocks(cluster: GeometricCluster, depth_offset: float) -> list[list[int]]:
    """Index blocks 2^m ≤ n − j + 1 < 2^{m+1}, truncated at ``depth_offset``."""
    indices = cluster.indices_down_to(depth_offset)
    if len(indices) > config.COVERING_POINT_CAP:
        raise ResourceLimitError(
            "too many cluster points above the decomposition depth",
            details={"points": len(indices), "cap": config.COVERING_POINT_CAP, "ratio": cluster.ratio},
        )
    blocks: list[list[int]] = []
    current: list[int] = []
    bound = 2
    for n in indices:
        k = n - cluster.start_index + 1
        if k >= bound:
            blocks.append(current)
            current = []
            bound *= 2
        current.append(n)
    if current:
        blocks.append(current)
    return [block for block in blocks if block]


def decompose(circle_set: SymbolicCircleSet, delta: float) -> Decomposition:
    """
    Split E into exceptional points and pieces each with α ≤ delta.

    Point atoms and clusters with 1/log(1/a) ≤ delta are packed first-fit
    into whole pieces. Every larger cluster contributes its limit as an
    exceptional point and its remaining points as finite dyadic index
    blocks (finite sets have α = 0). Blocks stop where the gap between
    neighbouring points, offset·(1 − a), falls to ten times the angle
    tolerance; deeper points coincide with the limit to that depth.

    Args:
        circle_set: The set to split.
        delta: Target α per piece, positive.

    Returns:
        Decomposition: Exceptional limits and the pieces.

    Raises:
        InvalidParameterError: If delta is not positive.
        ResourceLimitError: If a split cluster has more than
            ``COVERING_POINT_CAP`` resolvable points.
    """
    if not (delta > 0.0):
        raise InvalidParameterError("delta must be positive", details={"delta": delta})

    if alpha_analytic(circle_set) <= delta:
        return Decomposition(exceptional=[], pieces=[circle_set])

    small = [c for c in circle_set.clusters if c.alpha <= delta]
    big = [c for c in circle_set.clusters if c.alpha > delta]

    groups: list[tuple[list[Angle], list[GeometricCluster], float]] = []
    if circle_set.points:
        groups.append((list(circle_set.points), [], 0.0))
    for cluster in small:
        for i, (points, clusters, total) in enumerate(groups):
            if total + cluster.alpha <= delta:
                groups[i] = (points, clusters + [cluster], total + cluster.alpha)
                break
        else:
            groups.append(([], [cluster], cluster.alpha))

    pieces = [SymbolicCircleSet(points=points, clusters=clusters) for points, clusters, _ in groups]
    exceptional = []
    for cluster in big:
        exceptional.append(cluster.limit_theta)
        # Neighbours at offset r sit r(1 - a) apart and must stay resolvable.
        depth = 10.0 * config.ANGLE_TOLERANCE / (1.0 - cluster.ratio)
        for block in _dyadic_blocks(cluster, depth):
            pieces.append(SymbolicCircleSet(points=[cluster.theta_at(n) for n in block]))

    audit_logger.info(
        "DECOMPOSE set delta=%s exceptional=%s pieces=%s",
        delta, len(exceptional), len(pieces),
    )
    return Decomposition(exceptional=exceptional, pieces=pieces)


def label_by_first_containing(
    thetas: Sequence[float],
    sets: Sequence[SymbolicCircleSet],
    tol: Optional[float] = None,
) -> list[int]:
    """
    Index of the first set containing each angle, or -1 when none does.

    Assigning every point to the first family member that contains it turns
    an overlapping family into a disjoint one with the same union.
    """
    labels = []
    for theta in thetas:
        label = -1
        for i, piece in enumerate(sets):
            if piece.contains(theta, tol):
                label = i
                break
        labels.append(label)
    return labels


def example_family_cluster(a: float, j: int = 1) -> GeometricCluster:
    """
    The set {e^{i·a/(1−a)}} ∪ {e^{i·(a + a² + … + aⁿ)} : n ≥ j}.

    Partial sums of the geometric series sit at a/(1−a) − a^{n+1}/(1−a),
    i.e. a cluster with limit and scale a/(1−a) and ratio a.
    """
    if not (0.0 < a < 1.0):
        raise InvalidParameterError("a must lie in (0, 1)", details={"a": a})
    c = a / (1.0 - a)
    return GeometricCluster(limit_theta=c, ratio=a, scale=c, sign=1, start_index=j)
