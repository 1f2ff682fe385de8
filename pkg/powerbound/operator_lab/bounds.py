"""
Numerical checks of the power-bound inequalities for T = Y·U·Y⁻¹.

Every check measures the windowed constants

    M_window    = max_{0 ≤ n ≤ N} ‖Tⁿ‖
    Minv_window = max_{0 ≤ n ≤ N} ‖T⁻ⁿ‖

and compares Minv_window with the bound built from M_window. A failing
window is doubled ``WINDOW_RECHECKS`` times before the failure is
reported, since a short window can underestimate M.
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import qr, svdvals

from .. import config
from ..audit import get_audit_logger
from ..circle_sets import SymbolicCircleSet, alpha_analytic, decompose, label_by_first_containing
from ..diophantine import recurrence_exponent, weak_limit_subsequence
from ..errors import (
    CertificateError,
    InvalidParameterError,
    PreconditionError,
    RankDeficiencyError,
)
from ..measures import AtomicMeasure, CantorApproxMeasure, CircleMeasure, k_condition_estimate
from ..wiener_interp import evaluate_on_operator, interpolation_profile
from .norms import power_norm_profile, window_constants
from .schemas import BoundReport, DiagonalUnitary, SimilarityModel, spectrum_mismatch

audit_logger = get_audit_logger("operator_lab")

# Vectors sampled by the vector form of the inverse bound.
_VECTOR_SAMPLES = 8
_PAIR_RECHECK_RTOL = 1e-6


# -------------------------------
# Shared helpers
# -------------------------------


def _defaults(N: Optional[int], delta: Optional[float]) -> tuple[int, float]:
    N = config.DEFAULT_WINDOW if N is None else N
    delta = config.DEFAULT_DELTA if delta is None else delta
    if N < 1:
        raise InvalidParameterError("window N must be at least 1", details={"N": N})
    if not (delta >= 0.0):
        raise InvalidParameterError("delta must be nonnegative", details={"delta": delta})
    return N, delta


def _with_rechecks(evaluate: Callable[[int], BoundReport], N: int) -> BoundReport:
    report = evaluate(N)
    rechecks = 0
    while not report.satisfied and rechecks < config.WINDOW_RECHECKS:
        rechecks += 1
        N *= 2
        report = evaluate(N)
    report = report.model_copy(update={"rechecks": rechecks})
    audit_logger.info(
        "CHECK %s d=%s N=%s satisfied=%s slack=%.6g rechecks=%s",
        report.bound_name, report.details.get("dim"), report.N, report.satisfied, report.slack, rechecks,
    )
    return report


def _orbit_norms(model: SimilarityModel, x: np.ndarray, N: int) -> np.ndarray:
    """‖T^ℓx‖ for ℓ = 0..N."""
    coords = model.Y_inv @ x
    angles = np.asarray(model.U.eigenangles)
    norms = np.empty(N + 1)
    chunk = max(1, config.FOURIER_SCAN_CHUNK)
    for lo in range(0, N + 1, chunk):
        ns = np.arange(lo, min(lo + chunk, N + 1), dtype=float)
        images = (np.exp(1j * np.outer(ns, angles)) * coords[None, :]) @ model.Y.T
        norms[lo:lo + ns.size] = np.linalg.norm(images, axis=1)
    return norms


def _orthonormal_basis(columns: np.ndarray) -> np.ndarray:
    Q, R = qr(np.asarray(columns, dtype=complex), mode="economic")
    diagonal = np.abs(np.diag(R))
    if diagonal.size == 0 or diagonal.min() <= 1e-12 * max(1.0, diagonal.max()):
        raise RankDeficiencyError("subspace basis is rank deficient", details={"columns": int(columns.shape[1])})
    return Q


def weak_limit_gap(model: SimilarityModel, indices: Sequence[int], xi) -> list[float]:
    """‖U^{n_k} − diag(ξ)‖ for each n_k."""
    lambdas = model.U.eigenvalues()
    xi = np.asarray(xi, dtype=complex)
    return [float(np.max(np.abs(lambdas ** n - xi))) for n in indices]


# -------------------------------
# Orbit monotonicity
# -------------------------------


def check_lemma21(model: SimilarityModel, x, N: Optional[int] = None) -> BoundReport:
    """
    ‖T^ℓx‖ ≤ M_window·‖Tⁿx‖·(1 + 1e−9) for all 0 ≤ n ≤ ℓ ≤ N.

    The worst pair is recomputed by repeated multiplication with T and must
    agree with the diagonalized evaluation.

    Raises:
        InvalidParameterError: If x is zero or has the wrong length.
        CertificateError: If the direct recomputation disagrees.
    """
    N, _ = _defaults(N, 0.0)
    x = np.asarray(x, dtype=complex).ravel()
    if x.size != model.dim or not np.any(x):
        raise InvalidParameterError("x must be a nonzero vector of the model dimension", details={"size": x.size})

    M, Minv = window_constants(model, N)
    norms = _orbit_norms(model, x, N)
    running_min = np.minimum.accumulate(norms)
    ratios = norms / running_min
    worst_l = int(np.argmax(ratios))
    worst_n = int(np.argmin(norms[: worst_l + 1]))
    limit = M * (1.0 + 1e-9)
    violations = int(np.count_nonzero(ratios > limit))

    vector = x.copy()
    direct = {0: np.linalg.norm(vector)}
    for step in range(1, worst_l + 1):
        vector = model.T @ vector
        if step in (worst_n, worst_l):
            direct[step] = np.linalg.norm(vector)
    direct_ratio = direct[worst_l] / direct[worst_n]
    if abs(direct_ratio - ratios[worst_l]) > _PAIR_RECHECK_RTOL * ratios[worst_l]:
        raise CertificateError(
            "direct multiplication disagrees on the worst pair",
            details={"pair": [worst_n, worst_l], "direct": direct_ratio, "diagonalized": float(ratios[worst_l])},
        )

    report = BoundReport(
        M_window=M,
        Minv_window=Minv,
        bound_value=limit,
        bound_name="lemma21",
        satisfied=violations == 0,
        slack=limit - float(ratios[worst_l]),
        N=N,
        tolerance=1e-9,
        details={"dim": model.dim, "violations": violations, "worst_pair": [worst_n, worst_l],
                 "worst_ratio": float(ratios[worst_l])},
    )
    audit_logger.info("CHECK lemma21 d=%s N=%s violations=%s", model.dim, N, violations)
    return report


# -------------------------------
# Inverse bound from a weak limit
# -------------------------------


def check_theorem25(
    model: SimilarityModel,
    N: Optional[int] = None,
    delta: Optional[float] = None,
    tol_schedule: Optional[Sequence[float]] = None,
    rng: Optional[np.random.Generator] = None,
) -> BoundReport:
    """
    Minv_window ≤ ‖A⁻¹‖·M_window²·(1 + delta) with A = diag(ξ).

    ξ is the limit of λ^{n_k} along a near-recurrence subsequence of the
    eigenvalues, so ‖A⁻¹‖ = 1. Sampled vectors are also held to
    ‖x‖ ≤ ‖A⁻¹‖·M²·‖T^ℓx‖·(1 + delta) for ℓ ≤ N.

    Raises:
        CertificateError: If the limit ξ is not unimodular.
    """
    N, delta = _defaults(N, delta)
    schedule = list(tol_schedule if tol_schedule is not None else config.WEAK_LIMIT_TOLERANCES)
    weak = weak_limit_subsequence(model.U.eigenvalues(), len(schedule), schedule)
    moduli = np.abs(weak.xi)
    if np.max(np.abs(moduli - 1.0)) > 1e-12:
        raise CertificateError("weak limit is not unimodular", details={"moduli": moduli.tolist()})
    a_inv_norm = float(1.0 / moduli.min())
    gaps = weak_limit_gap(model, weak.indices, weak.xi)

    rng = np.random.default_rng(0) if rng is None else rng
    samples = rng.standard_normal((_VECTOR_SAMPLES, model.dim)) + 1j * rng.standard_normal((_VECTOR_SAMPLES, model.dim))

    def evaluate(window: int) -> BoundReport:
        M, Minv = window_constants(model, window)
        constant = a_inv_norm * M ** 2
        bound = constant * (1.0 + delta)
        worst_vector = max(
            float(np.linalg.norm(x) / (constant * _orbit_norms(model, x, window).min()))
            for x in samples
        )
        vector_ok = worst_vector <= 1.0 + delta
        return BoundReport(
            M_window=M,
            Minv_window=Minv,
            bound_value=bound,
            bound_name="thm25",
            satisfied=Minv <= bound and vector_ok,
            slack=bound - Minv,
            N=window,
            tolerance=delta,
            details={
                "dim": model.dim,
                "a_inv_norm": a_inv_norm,
                "subsequence": weak.indices,
                "weak_limit_gap": gaps,
                "vector_worst_ratio": worst_vector,
                "vector_satisfied": vector_ok,
            },
        )

    return _with_rechecks(evaluate, N)


# -------------------------------
# Riesz bounds and block decompositions
# -------------------------------


def riesz_bounds(subspace_bases: Sequence) -> tuple[float, float]:
    """
    Riesz bounds of a family of subspaces spanning the space.

    Each basis is orthonormalized; the bounds are the extreme eigenvalues
    of the Gram matrix of the concatenated bases, so that
    lower·Σ‖x_j‖² ≤ ‖Σ x_j‖² ≤ upper·Σ‖x_j‖² for x_j in the j-th subspace.

    Raises:
        RankDeficiencyError: If a basis is degenerate, the family does not
            span the space, or the subspaces are dependent.
    """
    bases = [_orthonormal_basis(np.atleast_2d(b)) for b in subspace_bases]
    if not bases:
        raise RankDeficiencyError("need at least one subspace")
    stacked = np.hstack(bases)
    if stacked.shape[0] != stacked.shape[1]:
        raise RankDeficiencyError(
            "subspaces do not form a direct sum of the whole space",
            details={"dim": int(stacked.shape[0]), "total": int(stacked.shape[1])},
        )
    eigenvalues = np.linalg.eigvalsh(stacked.conj().T @ stacked)
    if eigenvalues[0] <= 1e-12:
        raise RankDeficiencyError("subspaces are linearly dependent", details={"lower": float(eigenvalues[0])})
    return float(eigenvalues[0]), float(eigenvalues[-1])


def _restriction(model: SimilarityModel, indices: list[int]) -> tuple[SimilarityModel, np.ndarray]:
    """T restricted to Y·span(e_i : i in indices), in an orthonormal basis."""
    Q, R = qr(model.Y[:, indices], mode="economic")
    angles = [model.U.eigenangles[i] for i in indices]
    return SimilarityModel(U=DiagonalUnitary(eigenangles=angles), Y=R), Q


def check_theorem211(
    block_model: SimilarityModel,
    N: Optional[int] = None,
    delta: Optional[float] = None,
    tol_schedule: Optional[Sequence[float]] = None,
) -> BoundReport:
    """
    Minv_window ≤ M²·C³·(1 + delta) with C the largest block constant.

    Each block restriction is checked on its own, giving
    C_j = ‖A_j⁻¹‖·M_j². The block images M_j are held to Riesz bounds in
    [1/(M²C²), M²C²], they must be biorthogonal to the adjoint family
    Y^{−*}·block_k, and the block decomposition map and its inverse must
    have norm at most M·C.
    """
    N, delta = _defaults(N, delta)
    blocks = block_model.U.blocks()
    restrictions = [_restriction(block_model, indices) for indices in blocks.values()]
    adjoint = block_model.Y_inv.conj().T
    adjoint_bases = [_orthonormal_basis(adjoint[:, indices]) for indices in blocks.values()]
    images = [Q for _, Q in restrictions]
    lower, upper = riesz_bounds(images)

    biorthogonality = 0.0
    for j, Qj in enumerate(images):
        for k, Pk in enumerate(adjoint_bases):
            if j != k:
                biorthogonality = max(biorthogonality, float(svdvals(Qj.conj().T @ Pk)[0]))
    biorthogonal = biorthogonality <= 1e-8 * max(1.0, block_model.kappa ** 2)

    def evaluate(window: int) -> BoundReport:
        block_reports = [check_theorem25(restricted, window, delta, tol_schedule) for restricted, _ in restrictions]
        constants = [r.details["a_inv_norm"] * r.M_window ** 2 for r in block_reports]
        C = max(constants)
        M, Minv = window_constants(block_model, window)
        bound = M ** 2 * C ** 3 * (1.0 + delta)
        riesz_interval = (1.0 / (M ** 2 * C ** 2), M ** 2 * C ** 2)
        riesz_ok = lower >= riesz_interval[0] * (1.0 - delta) and upper <= riesz_interval[1] * (1.0 + delta)
        decomposition_norm = 1.0 / math.sqrt(lower)
        reconstruction_norm = math.sqrt(upper)
        decomposition_ok = max(decomposition_norm, reconstruction_norm) <= M * C * (1.0 + delta)
        return BoundReport(
            M_window=M,
            Minv_window=Minv,
            bound_value=bound,
            bound_name="thm211",
            satisfied=Minv <= bound and riesz_ok and decomposition_ok and biorthogonal,
            slack=bound - Minv,
            N=window,
            tolerance=delta,
            details={
                "dim": block_model.dim,
                "blocks": list(blocks.keys()),
                "block_constants": constants,
                "C": C,
                "riesz": [lower, upper],
                "riesz_interval": list(riesz_interval),
                "riesz_satisfied": riesz_ok,
                "biorthogonality": biorthogonality,
                "decomposition_norm": decomposition_norm,
                "reconstruction_norm": reconstruction_norm,
                "decomposition_satisfied": decomposition_ok,
            },
        )

    return _with_rechecks(evaluate, N)


# -------------------------------
# Thin spectra
# -------------------------------

_K_SERIES = (8, 16, 32)


def _ck_constant(M: float, K: int) -> float:
    """C_K = M²/(1 − 2·sin(π/(K−1)))."""
    return M ** 2 / (1.0 - 2.0 * math.sin(math.pi / (K - 1)))


def _ck_bound(M: float, K: int) -> float:
    return M ** 2 * _ck_constant(M, K) ** 3


def check_theorem35(
    model: SimilarityModel,
    E: SymbolicCircleSet,
    K: int,
    N: Optional[int] = None,
    delta: Optional[float] = None,
) -> BoundReport:
    """
    Minv_window ≤ min(M²·C_K³, M⁸)·(1 + delta) for spectra inside a thin set E.

    C_K = M²/(1 − 2·sin(π/(K−1))). The recurrence exponent of E gives a
    realized ‖A⁻¹‖ ≤ 1/(1 − sup_error) and a realized constant
    M²/(1 − sup_error), reported next to C_K. Eigenangles are labelled by
    the first piece of decompose(E, 1/log K) containing them.

    Raises:
        PreconditionError: If K < 8, α(E) ≥ 1/log K, or an eigenangle lies
            outside E.
    """
    N, delta = _defaults(N, delta)
    if K < 8:
        raise PreconditionError("K must be at least 8", details={"K": K})
    alpha = alpha_analytic(E)
    threshold = 1.0 / math.log(K)
    if not alpha < threshold:
        raise PreconditionError("alpha(E) must be below 1/log K", details={"alpha": alpha, "threshold": threshold})
    outside = [theta for theta in model.U.eigenangles if not E.contains(theta, 1e-9)]
    if outside:
        raise PreconditionError("eigenangles outside E", details={"outside": outside})

    recurrence = recurrence_exponent(E, K)
    realized_a_inv = 1.0 / (1.0 - recurrence.sup_error) if recurrence.sup_error < 1.0 else math.inf
    decomposition = decompose(E, threshold)
    labels = label_by_first_containing(model.U.eigenangles, decomposition.pieces, 1e-9)

    def evaluate(window: int) -> BoundReport:
        M, Minv = window_constants(model, window)
        C_K = _ck_constant(M, K)
        bound_ck = _ck_bound(M, K)
        bound_m8 = M ** 8
        bound = min(bound_ck, bound_m8) * (1.0 + delta)
        realized_constant = M ** 2 * realized_a_inv
        return BoundReport(
            M_window=M,
            Minv_window=Minv,
            bound_value=bound,
            bound_name="thm35",
            satisfied=Minv <= bound,
            slack=bound - Minv,
            N=window,
            tolerance=delta,
            details={
                "dim": model.dim,
                "K": K,
                "alpha": alpha,
                "C_K": C_K,
                "bound_C_K": bound_ck,
                "bound_M8": bound_m8,
                "bound_C_K_by_K": {str(k): _ck_bound(M, k) for k in _K_SERIES},
                "recurrence_q": recurrence.q,
                "recurrence_sup_error": recurrence.sup_error,
                "realized_constant": realized_constant,
                "realized_bound": M ** 2 * realized_constant ** 3,
                "piece_labels": labels,
            },
        )

    return _with_rechecks(evaluate, N)


def check_theorem212(
    model: SimilarityModel,
    mu: CircleMeasure,
    N: Optional[int] = None,
    delta: Optional[float] = None,
) -> BoundReport:
    """
    Minv_window ≤ K_est³·M⁸·(1 + delta), K_est from the Fourier coefficients of μ.

    Raises:
        PreconditionError: If the atoms of μ are not the eigenangles.
    """
    N, delta = _defaults(N, delta)
    atomic = mu.to_atomic() if isinstance(mu, CantorApproxMeasure) else mu
    if not isinstance(atomic, AtomicMeasure) or len(atomic.atoms) != model.dim:
        raise PreconditionError("measure atoms must be the eigenangles", details={"dim": model.dim})
    mismatch = spectrum_mismatch(np.exp(1j * atomic.thetas()), model.U.eigenvalues())
    if mismatch > 1e-9:
        raise PreconditionError("measure atoms must be the eigenangles", details={"mismatch": mismatch})
    K_est = k_condition_estimate(atomic, *config.K_CONDITION_WINDOW)

    def evaluate(window: int) -> BoundReport:
        M, Minv = window_constants(model, window)
        bound = K_est ** 3 * M ** 8 * (1.0 + delta)
        return BoundReport(
            M_window=M,
            Minv_window=Minv,
            bound_value=bound,
            bound_name="thm212",
            satisfied=Minv <= bound,
            slack=bound - Minv,
            N=window,
            tolerance=delta,
            details={"dim": model.dim, "K_est": K_est, "k_window": list(config.K_CONDITION_WINDOW)},
        )

    return _with_rechecks(evaluate, N)


# -------------------------------
# Inverses through interpolation
# -------------------------------


def verify_lemma11(
    model: SimilarityModel,
    k_max: int,
    D: int,
    tol: Optional[float] = None,
    delta: Optional[float] = None,
    threads: int = 1,
) -> BoundReport:
    """
    T⁻ᵏ = f_k(T) for the minimal interpolant f_k of ζ^{−k} on the spectrum of U.

    Per k = 1..k_max checks ‖f_k(T)·Tᵏ − I‖ ≤ κ(Y)·d·tol and
    ‖T⁻ᵏ‖ ≤ M_window·‖f_k‖·(1 + delta), where M_window covers every power
    up to the degree D.
    """
    tol = config.L1_TOLERANCE if tol is None else tol
    _, delta = _defaults(1, delta)
    if k_max < 1:
        raise InvalidParameterError("k_max must be at least 1", details={"k_max": k_max})
    window = max(D, 1)
    M = float(power_norm_profile(model, window, "forward").max())
    inverse_norms = power_norm_profile(model, k_max, "backward")
    results = interpolation_profile(model.U.eigenvalues(), k_max, D, tol, threads)

    identity = np.eye(model.dim)
    residual_limit = model.kappa * model.dim * tol
    residuals, interp_norms, slacks = [], [], []
    for k, result in enumerate(results, start=1):
        product = evaluate_on_operator(result.polynomial, model.T) @ model.power(k)
        residuals.append(float(svdvals(product - identity)[0]))
        interp_norms.append(result.norm)
        slacks.append(M * result.norm * (1.0 + delta) - float(inverse_norms[k]))

    residual_ok = max(residuals) <= residual_limit
    report = BoundReport(
        M_window=M,
        Minv_window=float(inverse_norms.max()),
        bound_value=M * max(interp_norms) * (1.0 + delta),
        bound_name="lemma11",
        satisfied=residual_ok and min(slacks) >= 0.0,
        slack=min(slacks),
        N=window,
        tolerance=delta,
        details={
            "dim": model.dim,
            "degree": D,
            "residuals": residuals,
            "residual_limit": residual_limit,
            "interp_norms": interp_norms,
        },
    )
    audit_logger.info(
        "CHECK lemma11 d=%s D=%s k_max=%s satisfied=%s", model.dim, D, k_max, report.satisfied,
    )
    return report
