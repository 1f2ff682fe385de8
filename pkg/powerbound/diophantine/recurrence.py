"""
Recurrence searches: exponents q with ζ^q close to 1 on a whole set.

- recurrence_exponent: uniform recurrence on a thin circle set through a
  minimal cover and simultaneous approximation of the arc centers
- near_recurrence_to_identity: first n with every λ_jⁿ close to 1
- weak_limit_subsequence: increasing exponents along which λⁿ converges
"""

import math
from typing import Optional, Sequence

import numpy as np

from .. import config
from ..audit import get_audit_logger
from ..circle_sets import SymbolicCircleSet, alpha_analytic, cover_arcs, covering_number
from ..errors import InvalidParameterError, NotFoundError, PreconditionError, ResourceLimitError
from .dirichlet import admissible_denominators, as_fractions
from .schemas import RecurrenceResult, WeakLimitResult

audit_logger = get_audit_logger("diophantine")

TWO_PI = 2.0 * math.pi

# Cluster points closer to their limit than this (times 1/q) are bounded analytically.
_TAIL_DEPTH = 1e-12


def sup_distance_to_one(circle_set: SymbolicCircleSet, q: int) -> float:
    """
    Certified upper bound on sup over ζ ∈ E of |ζ^q − 1|.

    Atoms, limits and every cluster point with offset ≥ 1e-12/q are
    evaluated exactly as 2|sin(qθ/2)|; the remaining tail of a cluster is
    bounded by |L^q − 1| + q·offset, using |e^{iqx} − e^{iqy}| ≤ q|x − y|.
    """
    depth = _TAIL_DEPTH / q
    thetas = np.asarray(circle_set.enumerate_thetas(depth))
    sup = float(np.max(2.0 * np.abs(np.sin(q * thetas / 2.0))))
    for cluster in circle_set.clusters:
        limit_error = 2.0 * abs(math.sin(q * cluster.limit_theta.theta / 2.0))
        sup = max(sup, limit_error + q * depth)
    return sup


def _choose_epsilon(circle_set: SymbolicCircleSet, K: int) -> tuple[float, int]:
    """Largest grid value ε with N_ε ≤ log(1/ε)/log K."""
    epsilon = config.RECURRENCE_EPS0
    while epsilon >= config.RECURRENCE_MIN_EPS:
        if epsilon < 1.0:
            n_eps = covering_number(circle_set, epsilon)
            if n_eps <= math.log(1.0 / epsilon) / math.log(K):
                return epsilon, n_eps
        epsilon *= config.RECURRENCE_RHO
    raise ResourceLimitError(
        "no grid epsilon satisfies N_eps <= log(1/eps)/log K",
        details={"K": K, "min_eps": config.RECURRENCE_MIN_EPS},
    )


def recurrence_exponent(
    circle_set: SymbolicCircleSet,
    K: int,
    q_schedule: Optional[Sequence[int]] = None,
) -> RecurrenceResult:
    """
    Find q with sup over E of |ζ^q − 1| ≤ 2·sin(π/(K−1)) (+ slack).

    The set is covered by N minimal arcs of length ε, the arc centers t_j
    (in turns) are approximated simultaneously with m = K − 1, and each
    admissible q is certified by direct evaluation on the set. For each
    start Q of the schedule, up to ``RECURRENCE_CANDIDATES_PER_Q``
    admissible q are walked; the first q meeting 2·sin(π/(K−1)) is
    returned, otherwise the best walked q if it meets the bound plus
    slack(Q) = 2π·(Q/2)·((K−1)/K)^N.

    Args:
        circle_set: The set E.
        K: Recurrence parameter, K ≥ 3.
        q_schedule: Successive starts Q (default ``RECURRENCE_Q_SCHEDULE``).

    Returns:
        RecurrenceResult: The exponent with its certified error.

    Raises:
        PreconditionError: If K < 3 or α(E) ≥ 1/log K.
        ResourceLimitError: If no grid ε is fine enough or Q·m^N exceeds
            the search cap before a q is found.
        NotFoundError: If the schedule is exhausted.
    """
    if K < 3:
        raise PreconditionError("K must be at least 3", details={"K": K})
    alpha = alpha_analytic(circle_set)
    if not alpha < 1.0 / math.log(K):
        raise PreconditionError(
            "alpha(E) must be below 1/log K",
            details={"alpha": alpha, "K": K, "threshold": 1.0 / math.log(K)},
        )

    epsilon, _ = _choose_epsilon(circle_set, K)
    arcs = cover_arcs(circle_set, epsilon)
    centers = [arc.center / TWO_PI for arc in arcs]
    t = as_fractions(centers)
    n_arcs = len(arcs)
    m = K - 1
    target = 2.0 * math.sin(math.pi / m)

    best: Optional[tuple[float, int, int]] = None
    for Q in (q_schedule or config.RECURRENCE_Q_SCHEDULE):
        upper = Q * m ** n_arcs
        if upper > config.DIOPHANTINE_SEARCH_CAP:
            raise ResourceLimitError(
                "Q·m^N exceeds the Diophantine search cap",
                details={"Q": Q, "m": m, "N": n_arcs, "best": best},
            )
        slack = TWO_PI * (Q / 2.0) * ((K - 1) / K) ** n_arcs

        best_here: Optional[tuple[float, int]] = None
        for walked, cert in enumerate(admissible_denominators(t, m, Q, upper)):
            if walked >= config.RECURRENCE_CANDIDATES_PER_Q:
                break
            sup = sup_distance_to_one(circle_set, cert.q)
            if best_here is None or sup < best_here[0]:
                best_here = (sup, cert.q)
            if sup <= target:
                break

        if best_here is None:
            continue
        sup, q = best_here
        if best is None or sup < best[0]:
            best = (sup, q, Q)
        if sup <= target + slack:
            result = RecurrenceResult(
                q=q,
                sup_error=sup,
                K=K,
                epsilon_used=epsilon,
                N_used=n_arcs,
                Q_used=Q,
                target=target,
                slack=slack,
                strict=sup <= target,
                centers=centers,
            )
            audit_logger.info(
                "RECUR set K=%s epsilon=%s N=%s Q=%s q=%s sup_error=%.3e strict=%s",
                K, epsilon, n_arcs, Q, q, sup, result.strict,
            )
            return result

    raise NotFoundError(
        "no exponent met the recurrence bound on the Q schedule",
        details={"K": K, "target": target, "best": best},
    )


# -------------------------------
# Recurrence of finitely many phases
# -------------------------------


def _phases(lambdas: Sequence[complex]) -> np.ndarray:
    values = np.asarray(lambdas, dtype=complex).ravel()
    if values.size == 0:
        raise InvalidParameterError("need at least one eigenvalue")
    if np.any(np.abs(np.abs(values) - 1.0) > 1e-9):
        raise InvalidParameterError("eigenvalues must be unimodular")
    return np.angle(values)


def _first_recurrence(phases: np.ndarray, tol: float, start: int, stop: int) -> Optional[int]:
    """First n in [start, stop] with max_j |e^{inφ_j} − 1| ≤ tol."""
    chunk = max(1, config.DIOPHANTINE_SCAN_CHUNK)
    for lo in range(start, stop + 1, chunk):
        ns = np.arange(lo, min(lo + chunk, stop + 1), dtype=float)
        errors = 2.0 * np.abs(np.sin(np.outer(ns, phases) / 2.0)).max(axis=1)
        hits = np.flatnonzero(errors <= tol)
        if hits.size:
            return lo + int(hits[0])
    return None


def _check_tolerance(tol: float) -> None:
    if not (0.0 < tol < 2.0):
        raise InvalidParameterError("tolerance must lie in (0, 2)", details={"tolerance": tol})


def _capped_recurrence(phases: np.ndarray, tol: float, start: int, bound: int) -> int:
    """First recurrence in [start, bound], scanning no further than the search cap."""
    stop = min(bound, config.DIOPHANTINE_SEARCH_CAP)
    n = _first_recurrence(phases, tol, start, stop)
    if n is None:
        error_cls = ResourceLimitError if stop < bound else NotFoundError
        raise error_cls(
            "no recurrence found below the search bound",
            details={"bound": bound, "scanned_to": stop, "cap": config.DIOPHANTINE_SEARCH_CAP},
        )
    return n


def near_recurrence_to_identity(lambdas: Sequence[complex], delta: float) -> int:
    """
    Smallest n ≥ 1 with max_j |λ_jⁿ − 1| ≤ delta.

    Such n exists with n ≤ ⌈8/delta⌉^d by the box principle; the scan
    halts at that bound.

    Raises:
        InvalidParameterError: If delta ∉ (0, 2) or some λ_j is not unimodular.
        ResourceLimitError: If the box bound exceeds ``DIOPHANTINE_SEARCH_CAP``.
    """
    _check_tolerance(delta)
    phases = _phases(lambdas)
    bound = math.ceil(8.0 / delta) ** phases.size
    if bound > config.DIOPHANTINE_SEARCH_CAP:
        raise ResourceLimitError(
            "box bound of the recurrence search exceeds the search cap",
            details={"bound": bound, "cap": config.DIOPHANTINE_SEARCH_CAP, "d": int(phases.size), "delta": delta},
        )
    n = _capped_recurrence(phases, delta, 1, bound)
    audit_logger.info("RECUR identity d=%s delta=%s n=%s", phases.size, delta, n)
    return n


def weak_limit_subsequence(
    lambdas: Sequence[complex],
    count: int,
    tol_schedule: Optional[Sequence[float]] = None,
) -> WeakLimitResult:
    """
    Strictly increasing n_1 < … < n_count with max_j |λ_j^{n_k} − ξ_j| ≤ tol_k.

    n_1 is the first near recurrence to the identity at tol_1 and
    ξ = λ^{n_1}. Each later n_k = n_1 + r_k where r_k > r_{k−1} is the first
    exponent with λ^{r_k} within tol_k of 1; one exists below
    (r_{k−1} + 1)·⌈8/tol_k⌉^d by the box principle on multiples of
    r_{k−1} + 1.

    Raises:
        InvalidParameterError: On a short or invalid tolerance schedule.
        ResourceLimitError: If a scan reaches the search cap before its bound.
    """
    tolerances = list(tol_schedule if tol_schedule is not None else config.WEAK_LIMIT_TOLERANCES)
    if count < 1 or len(tolerances) < count:
        raise InvalidParameterError(
            "tolerance schedule must cover every requested index",
            details={"count": count, "schedule": tolerances},
        )
    tolerances = tolerances[:count]
    for tol in tolerances:
        _check_tolerance(tol)

    phases = _phases(lambdas)
    n_first = _capped_recurrence(phases, tolerances[0], 1, math.ceil(8.0 / tolerances[0]) ** phases.size)
    xi = np.exp(1j * n_first * phases)

    indices, errors = [n_first], [0.0]
    previous = 0
    for tol in tolerances[1:]:
        bound = (previous + 1) * math.ceil(8.0 / tol) ** phases.size
        r = _capped_recurrence(phases, tol, previous + 1, bound)
        n = n_first + r
        indices.append(n)
        errors.append(float(np.max(np.abs(np.exp(1j * n * phases) - xi))))
        previous = r

    audit_logger.info(
        "SUBSEQ weak_limit d=%s count=%s last_index=%s",
        phases.size, count, indices[-1],
    )
    return WeakLimitResult(indices=indices, xi=xi, errors=errors, tolerances=tolerances)
