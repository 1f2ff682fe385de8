"""
Limsup diagnostics, absolute-convergence sums and pseudomeasure ratios.
"""

import math
from typing import Sequence

import numpy as np

from .. import config
from ..audit import get_audit_logger
from ..errors import CertificateError, DivisionDomainError, InvalidParameterError, NotFoundError
from .fourier import fourier_coefficient, fourier_coefficients
from .schemas import CircleMeasure, Lemma28Result, MinimizingSequence, Pseudomeasure, WindowMaximum

audit_logger = get_audit_logger("measures")


def _check_window(n_min: int, n_max: int) -> None:
    if not (0 <= n_min < n_max):
        raise InvalidParameterError(
            "window needs 0 <= n_min < n_max",
            details={"n_min": n_min, "n_max": n_max},
        )


# -------------------------------
# Limsup diagnostics
# -------------------------------


def limsup_abs_fourier(mu: CircleMeasure, n_min: int, n_max: int) -> WindowMaximum:
    """
    Largest |μ̂(n)| for n_min ≤ n ≤ n_max and the first index achieving it.

    Raises:
        InvalidParameterError: Unless 0 ≤ n_min < n_max.
    """
    _check_window(n_min, n_max)
    ns = np.arange(n_min, n_max + 1)
    magnitudes = np.abs(fourier_coefficients(mu, ns))
    best = int(np.argmax(magnitudes))
    return WindowMaximum(value=float(magnitudes[best]), index=int(ns[best]))


def k_condition_estimate(mu: CircleMeasure, n_min: int, n_max: int) -> float:
    """
    Ratio total_mass / max |μ̂(n)| over the window.

    Magnitudes are clamped to the total mass and a ratio within
    ``FOURIER_SNAP_TOLERANCE`` of 1 is reported as exactly 1, so measures
    supported on roots of unity give 1.

    Raises:
        InvalidParameterError: Unless 0 ≤ n_min < n_max.
        DivisionDomainError: If every coefficient in the window vanishes
            (relative to the mass, up to ``FOURIER_SNAP_TOLERANCE``).
    """
    window = limsup_abs_fourier(mu, n_min, n_max)
    mass = mu.total_mass
    peak = min(window.value, mass)
    if peak <= mass * config.FOURIER_SNAP_TOLERANCE:
        raise DivisionDomainError(
            "Fourier coefficients vanish on the whole window",
            details={"n_min": n_min, "n_max": n_max},
        )
    ratio = mass / peak
    if abs(ratio - 1.0) <= config.FOURIER_SNAP_TOLERANCE:
        ratio = 1.0
    audit_logger.info(
        "ESTIMATE k_condition n_min=%s n_max=%s peak_index=%s ratio=%.12g",
        n_min, n_max, window.index, ratio,
    )
    return ratio


def lemma28_extract(mu: CircleMeasure, tol: float, count: int, n_max: int) -> Lemma28Result:
    """
    Indices 1 ≤ n ≤ n_max where |μ̂(n)| ≥ (1 − tol)·mass.

    With ξ the conjugate phase of μ̂(n) at the last index,
    Σ w_j·|ζ_j^n − ξ|² = 2·mass − 2·|μ̂(n)| ≤ 2·tol·mass; the dispersion is
    recomputed directly and checked against that bound.

    Raises:
        InvalidParameterError: If tol ∉ (0, 1), count < 1 or n_max < 1.
        NotFoundError: If fewer than ``count`` indices qualify.
        CertificateError: If the recomputed dispersion exceeds the bound.
    """
    if not (0.0 < tol < 1.0) or count < 1 or n_max < 1:
        raise InvalidParameterError(
            "need 0 < tol < 1, count >= 1 and n_max >= 1",
            details={"tol": tol, "count": count, "n_max": n_max},
        )
    mass = mu.total_mass
    ns = np.arange(1, n_max + 1)
    magnitudes = np.abs(fourier_coefficients(mu, ns))
    hits = ns[magnitudes >= (1.0 - tol) * mass][:count]
    if hits.size < count:
        raise NotFoundError(
            "too few near-maximal Fourier coefficients in the window",
            details={"found": int(hits.size), "count": count, "n_max": n_max},
        )

    n = int(hits[-1])
    coefficient = fourier_coefficient(mu, n)
    xi = np.conj(coefficient) / abs(coefficient)
    thetas, weights = mu.thetas(), mu.weights()
    dispersion = math.fsum(weights * np.abs(np.exp(1j * n * thetas) - xi) ** 2)
    bound = 2.0 * tol * mass
    if dispersion > bound * (1.0 + 1e-9) + 1e-15:
        raise CertificateError(
            "dispersion exceeds 2*tol*mass",
            details={"dispersion": dispersion, "bound": bound, "index": n},
        )
    return Lemma28Result(indices=[int(i) for i in hits], xi=complex(xi), dispersion=dispersion, bound=bound)


# -------------------------------
# Absolute convergence
# -------------------------------


def _check_series(a: Sequence[float], zeta: complex, N: int) -> np.ndarray:
    coefficients = np.asarray(a, dtype=float)
    if N < 1 or N > coefficients.size:
        raise InvalidParameterError(
            "N must lie in [1, len(a)]",
            details={"N": N, "len": int(coefficients.size)},
        )
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise InvalidParameterError("zeta must be unimodular", details={"abs": abs(zeta)})
    return coefficients[:N]


def absolute_convergence_partial(a: Sequence[float], zeta: complex, N: int) -> float:
    """
    Σ_{n=1..N} a_n·|Im ζⁿ|, with a[0] holding a_1.

    Raises:
        InvalidParameterError: If N > len(a), N < 1 or ζ is not unimodular.
    """
    coefficients = _check_series(a, zeta, N)
    n = np.arange(1, N + 1)
    return math.fsum(coefficients * np.abs(np.sin(n * np.angle(zeta))))


def weighted_imaginary_average(a: Sequence[float], zeta: complex, N: int) -> float:
    """
    Σ a_n·|Im ζⁿ| / Σ a_n over n = 1..N.

    Raises:
        DivisionDomainError: If the weights sum to zero.
    """
    coefficients = _check_series(a, zeta, N)
    total = math.fsum(coefficients)
    if total == 0.0:
        raise DivisionDomainError("weights sum to zero", details={"N": N})
    return absolute_convergence_partial(a, zeta, N) / total


def minimizing_sequence(mu: CircleMeasure, targets: Sequence[float], n_cap: int) -> MinimizingSequence:
    """
    Greedy strictly increasing n_k ≤ n_cap with ∫|Im ζ^{n_k}| dμ ≤ targets[k].

    Each n_k is the first index after n_{k−1} meeting its target.

    Raises:
        InvalidParameterError: If a target is not positive or n_cap < 1.
        NotFoundError: If some target is not met below n_cap.
    """
    if n_cap < 1 or any(not (t > 0.0) for t in targets):
        raise InvalidParameterError(
            "targets must be positive and n_cap >= 1",
            details={"n_cap": n_cap},
        )
    thetas, weights = mu.thetas(), mu.weights()
    ns = np.arange(1, n_cap + 1)
    values = np.empty(ns.size)
    rows = max(1, (1 << 22) // max(1, thetas.size))
    for lo in range(0, ns.size, rows):
        block = ns[lo:lo + rows].astype(float)
        values[lo:lo + rows] = np.abs(np.sin(np.outer(block, thetas))) @ weights

    indices: list[int] = []
    found: list[float] = []
    start = 0
    for k, target in enumerate(targets):
        hits = np.flatnonzero(values[start:] <= target)
        if hits.size == 0:
            raise NotFoundError(
                "target not reached below n_cap",
                details={"k": k, "target": target, "n_cap": n_cap},
            )
        pos = start + int(hits[0])
        indices.append(int(ns[pos]))
        found.append(math.fsum(weights * np.abs(np.sin(ns[pos] * thetas))))
        start = pos + 1

    return MinimizingSequence(
        indices=indices,
        values=found,
        total=math.fsum(found),
        target_total=math.fsum(targets),
    )


# -------------------------------
# Pseudomeasures
# -------------------------------


def pseudomeasure_window(p: Pseudomeasure, ns: Sequence[int]) -> np.ndarray:
    """
    Coefficients of ``p`` on ``ns``, checked against ``p.bound``.

    Raises:
        CertificateError: If some |coeff(n)| exceeds the bound.
    """
    values = np.array([complex(p.coeff(int(n))) for n in ns])
    magnitudes = np.abs(values)
    if magnitudes.size and magnitudes.max() > p.bound * (1.0 + 1e-12):
        worst = int(np.argmax(magnitudes))
        raise CertificateError(
            "pseudomeasure coefficient exceeds its bound",
            details={"index": int(ns[worst]), "value": float(magnitudes[worst]), "bound": p.bound},
        )
    return values


def measure_pseudomeasure(mu: CircleMeasure) -> Pseudomeasure:
    """The coefficient sequence of ``mu``, bounded by its total mass."""
    return Pseudomeasure(coeff=lambda n: fourier_coefficient(mu, n), bound=mu.total_mass * (1.0 + 1e-12))


def pseudomeasure_ratio(p: Pseudomeasure, n_min: int, n_max: int, window2: tuple[int, int]) -> float:
    """
    max_{|n| ≤ n_max} |coeff(n)| divided by max over window2 of |coeff(n)|.

    ``window2`` is the reference window of large frequencies and must lie
    in [n_min, ∞).

    Raises:
        InvalidParameterError: On malformed windows.
        DivisionDomainError: If the reference window is identically zero.
        CertificateError: If a queried coefficient exceeds the bound.
    """
    lo2, hi2 = window2
    if not (0 <= n_min <= lo2 <= hi2) or n_max < 0:
        raise InvalidParameterError(
            "windows need n_max >= 0 and 0 <= n_min <= window2[0] <= window2[1]",
            details={"n_min": n_min, "n_max": n_max, "window2": list(window2)},
        )
    numerator = float(np.abs(pseudomeasure_window(p, np.arange(-n_max, n_max + 1))).max())
    denominator = float(np.abs(pseudomeasure_window(p, np.arange(lo2, hi2 + 1))).max())
    if denominator == 0.0:
        raise DivisionDomainError(
            "reference window of the pseudomeasure is identically zero",
            details={"window2": list(window2)},
        )
    ratio = numerator / denominator
    audit_logger.info(
        "ESTIMATE pseudomeasure_ratio n_min=%s n_max=%s window2=%s ratio=%.12g",
        n_min, n_max, list(window2), ratio,
    )
    return ratio
