"""
Operator norms of powers of a similarity model.
"""

import math
from typing import Literal

import numpy as np

from .. import config
from ..errors import CertificateError, InvalidParameterError, NonConvergenceError, OverflowGuardError
from .schemas import SimilarityModel

Direction = Literal["forward", "backward"]

# Matrices per batched Gram eigenvalue call.
_PROFILE_BATCH = 256


def _start_vector(n: int) -> np.ndarray:
    ramp = np.arange(1, n + 1, dtype=float)
    v = 1.0 + 1j * ramp / n
    return v / np.linalg.norm(v)


def spectral_norm(A) -> float:
    """
    ‖A‖₂ by power iteration on AᴴA.

    The Rayleigh quotient of the Gram operator is iterated until two
    consecutive values agree to ``SPECTRAL_NORM_RTOL``.

    Raises:
        NonConvergenceError: After ``SPECTRAL_NORM_MAX_ITERATIONS``; ``best``
            holds the last estimate.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    if not np.any(A):
        return 0.0
    v = _start_vector(A.shape[1])
    estimate = 0.0
    for _ in range(config.SPECTRAL_NORM_MAX_ITERATIONS):
        w = A.conj().T @ (A @ v)
        rayleigh = float(np.real(np.vdot(v, w)))
        size = np.linalg.norm(w)
        if size == 0.0:
            # Start vector in the kernel; restart on a coordinate direction.
            v = np.zeros_like(v)
            v[int(np.argmax(np.linalg.norm(A, axis=0)))] = 1.0
            continue
        v = w / size
        if abs(rayleigh - estimate) <= config.SPECTRAL_NORM_RTOL * rayleigh:
            return math.sqrt(rayleigh)
        estimate = rayleigh
    raise NonConvergenceError(
        "power iteration did not converge",
        best=math.sqrt(max(estimate, 0.0)),
        details={"iterations": config.SPECTRAL_NORM_MAX_ITERATIONS},
    )


def _check_window(N: int) -> None:
    if N < 0:
        raise InvalidParameterError("window N must be nonnegative", details={"N": N})


def power_norm_profile(model: SimilarityModel, N: int, direction: Direction = "forward") -> np.ndarray:
    """
    ‖T^{±n}‖ for n = 0..N.

    Powers are built by repeated multiplication with T (or T⁻¹); the norms
    come from batched Hermitian eigenvalues of the Gram stacks.

    Raises:
        OverflowGuardError: If a norm exceeds ``OVERFLOW_GUARD``.
        CertificateError: If a norm exceeds κ(Y) beyond rounding.
    """
    _check_window(N)
    if direction not in ("forward", "backward"):
        raise InvalidParameterError("direction must be forward or backward", details={"direction": direction})
    step = model.T if direction == "forward" else model.T_inv
    d = model.dim

    norms = np.empty(N + 1)
    current = np.eye(d, dtype=complex)
    for lo in range(0, N + 1, _PROFILE_BATCH):
        count = min(_PROFILE_BATCH, N + 1 - lo)
        powers = np.empty((count, d, d), dtype=complex)
        for i in range(count):
            if lo + i > 0:
                current = current @ step
            powers[i] = current
        grams = np.conj(np.swapaxes(powers, 1, 2)) @ powers
        top = np.linalg.eigvalsh(grams)[:, -1]
        norms[lo:lo + count] = np.sqrt(np.maximum(top, 0.0))
        peak = float(norms[lo:lo + count].max())
        if peak > config.OVERFLOW_GUARD:
            raise OverflowGuardError(
                "power norm above the overflow guard",
                details={"peak": peak, "guard": config.OVERFLOW_GUARD, "index": lo + int(np.argmax(top))},
            )

    peak = float(norms.max())
    if peak > model.kappa * (1.0 + 1e-6):
        raise CertificateError(
            "power norm exceeds the condition number",
            details={"peak": peak, "kappa": model.kappa, "index": int(np.argmax(norms))},
        )
    return norms


def window_constants(model: SimilarityModel, N: int) -> tuple[float, float]:
    """(M_window, Minv_window) = (max ‖Tⁿ‖, max ‖T⁻ⁿ‖) over 0 ≤ n ≤ N."""
    M = float(power_norm_profile(model, N, "forward").max())
    Minv = float(power_norm_profile(model, N, "backward").max())
    return M, Minv
