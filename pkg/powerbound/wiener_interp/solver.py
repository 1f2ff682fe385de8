"""
ℓ¹-minimal analytic interpolation on finite circle sets.

    minimize Σ|c_n|  subject to  Σ_n c_n·z_iⁿ = w_i  (n = 0..D)

is solved by ADMM on the splitting x = z (x on the affine constraint set,
z carrying the ℓ¹ term) with complex soft thresholding and residual
balancing of the penalty. Every ``L1_CHECK_EVERY`` iterations a dual point
y is read off the scaled multiplier, the dual-phase support is polished
with a nonnegative least-squares fit and the relative duality gap decides
termination.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lstsq
from scipy.optimize import nnls

from .. import config
from ..audit import get_audit_logger
from ..errors import InfeasibleProblemError, InvalidParameterError, NonConvergenceError
from .schemas import AnalyticPolynomial, InterpolationProblem, InterpolationResult

audit_logger = get_audit_logger("wiener_interp")

# Dual entries this close to modulus 1 are treated as active.
_SUPPORT_THRESHOLD = 1e-3


def _shrink(v: np.ndarray, kappa: float) -> np.ndarray:
    magnitude = np.abs(v)
    scale = np.maximum(0.0, 1.0 - kappa / np.maximum(magnitude, 1e-300))
    return v * scale


class _AffineProjector:
    """Orthogonal projection onto {x : A x = b}."""

    def __init__(self, A: np.ndarray, b: np.ndarray):
        self.A = A
        self.b = b
        self.factor = cho_factor(A @ A.conj().T)

    def solve_gram(self, r: np.ndarray) -> np.ndarray:
        return cho_solve(self.factor, r)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return v - self.A.conj().T @ self.solve_gram(self.A @ v - self.b)


def _scaled_dual(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(A.conj().T @ y))) if y.size else 0.0
    return y / max(1.0, peak)


def _dual_value(y: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.vdot(y, b)))


def _polish(A: np.ndarray, b: np.ndarray, y: np.ndarray, tol: float):
    """NNLS fit of x = σ·t (t ≥ 0) on the support where |Aᴴy| ≈ 1, plus a refit of y."""
    correlation = A.conj().T @ y
    support = np.flatnonzero(np.abs(correlation) >= 1.0 - _SUPPORT_THRESHOLD)
    if support.size == 0:
        return None, None
    phases = correlation[support] / np.abs(correlation[support])
    columns = A[:, support] * phases[None, :]
    stacked = np.vstack([columns.real, columns.imag])
    rhs = np.concatenate([b.real, b.imag])
    try:
        t, _ = nnls(stacked, rhs)
    except RuntimeError:
        t = None
    x = None
    if t is not None:
        x = np.zeros(A.shape[1], dtype=complex)
        x[support] = phases * t
        if np.max(np.abs(A @ x - b)) > tol:
            x = None

    y_fit, *_ = lstsq(A[:, support].conj().T, phases)
    return x, _scaled_dual(A, y_fit)


def interpolate_min_l1(problem: InterpolationProblem, tol: Optional[float] = None) -> InterpolationResult:
    """
    ℓ¹-minimal interpolant of degree ≤ D.

    Args:
        problem: Nodes, values and the degree bound D.
        tol: Bound on the relative duality gap and the node residual
            (default ``L1_TOLERANCE``).

    Returns:
        InterpolationResult: Interpolant, dual certificate, gap, residual.

    Raises:
        InfeasibleProblemError: If D < m − 1 (fewer coefficients than nodes).
        NonConvergenceError: If the gap has not closed after
            ``L1_MAX_ITERATIONS``; ``best`` holds the best certified iterate.
    """
    tol = config.L1_TOLERANCE if tol is None else tol
    if not (tol > 0.0):
        raise InvalidParameterError("tolerance must be positive", details={"tol": tol})
    m = problem.nodes.size
    if problem.degree < m - 1:
        raise InfeasibleProblemError(
            "degree too small to interpolate at every node",
            details={"degree": problem.degree, "nodes": m},
        )

    A = problem.vandermonde()
    b = problem.values
    project = _AffineProjector(A, b)

    x = project(np.zeros(A.shape[1], dtype=complex))
    z = x.copy()
    u = np.zeros_like(x)
    rho = 1.0
    best: Optional[InterpolationResult] = None

    for iteration in range(1, config.L1_MAX_ITERATIONS + 1):
        x = project(z - u)
        z_old = z
        z = _shrink(x + u, 1.0 / rho)
        u = u + x - z

        primal_res = np.linalg.norm(x - z)
        dual_res = rho * np.linalg.norm(z - z_old)
        if primal_res > 10.0 * dual_res:
            rho *= 2.0
            u /= 2.0
        elif dual_res > 10.0 * primal_res:
            rho /= 2.0
            u *= 2.0

        if iteration % config.L1_CHECK_EVERY and iteration != 1:
            continue

        y = _scaled_dual(A, project.solve_gram(A @ (rho * u)))
        candidates = [x]
        x_polished, y_polished = _polish(A, b, y, tol)
        if x_polished is not None:
            candidates.append(x_polished)
        duals = [y] if y_polished is None else [y, y_polished]

        x_best = min(candidates, key=lambda c: math.fsum(np.abs(c)))
        y_best = max(duals, key=lambda d: _dual_value(d, b))
        primal = math.fsum(np.abs(x_best))
        gap = max(0.0, (primal - _dual_value(y_best, b)) / max(1.0, primal))
        residual = float(np.max(np.abs(A @ x_best - b)))

        result = InterpolationResult(
            polynomial=AnalyticPolynomial(coeffs=x_best),
            dual=y_best,
            gap=gap,
            residual=residual,
            iterations=iteration,
        )
        if best is None or result.gap < best.gap:
            best = result
        if gap <= tol and residual <= tol:
            return result

    raise NonConvergenceError(
        "duality gap did not close within the iteration cap",
        best=best,
        details={"gap": None if best is None else best.gap, "iterations": config.L1_MAX_ITERATIONS},
    )


def _monomial_problem(nodes: np.ndarray, k: int, degree: int) -> InterpolationProblem:
    return InterpolationProblem(nodes=nodes, values=np.conj(nodes) ** k, degree=degree)


def interpolation_profile(
    nodes,
    k_max: int,
    degree: int,
    tol: Optional[float] = None,
    threads: int = 1,
) -> list[InterpolationResult]:
    """
    Minimal interpolants of ζ^{−k} on the nodes for k = 1..k_max.

    Instances run on a thread pool; results come back in k order.
    """
    if k_max < 1:
        raise InvalidParameterError("k_max must be at least 1", details={"k_max": k_max})
    nodes = np.asarray(nodes, dtype=complex)
    problems = [_monomial_problem(nodes, k, degree) for k in range(1, k_max + 1)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda p: interpolate_min_l1(p, tol), problems))
    return results


def interpolation_constant(
    nodes,
    k_max: int,
    degree: int,
    tol: Optional[float] = None,
    threads: int = 1,
) -> float:
    """
    max over k = 1..k_max of the minimal ‖f‖ with f = ζ^{−k} on the nodes.

    This bounds the interpolation constant of the node set from below: it
    is a finite-degree, finite-k quantity, not the constant itself.
    """
    results = interpolation_profile(nodes, k_max, degree, tol, threads)
    value = max(r.norm for r in results)
    audit_logger.info(
        "INTERP constant nodes=%s k_max=%s degree=%s interp_constant=%.10g",
        len(results[0].dual), k_max, degree, value,
    )
    return value


def evaluate_on_operator(f: AnalyticPolynomial, T: np.ndarray) -> np.ndarray:
    """Σ c_n·Tⁿ by Horner's rule."""
    T = np.asarray(T, dtype=complex)
    identity = np.eye(T.shape[0], dtype=complex)
    result = f.coeffs[-1] * identity
    for c in f.coeffs[-2::-1]:
        result = result @ T + c * identity
    return result
