"""
Dirichlet simultaneous approximation.

Given reals t_1..t_N, an integer m and a start Q, find q ≥ Q with
‖q·t_j‖ ≤ 1/m for every j (‖·‖ the distance to the nearest integer).
The box principle guarantees such a q with q ≤ Q·m^N.

Candidates are screened in float chunks and confirmed with exact
``Fraction`` arithmetic, so certificates never depend on rounding.
"""

import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .. import config
from ..audit import get_audit_logger
from ..errors import InvalidParameterError, NotFoundError, ResourceLimitError
from .schemas import DirichletCertificate

audit_logger = get_audit_logger("diophantine")

RealLike = Union[int, float, str, Fraction]

# Float screening is loose; exact confirmation decides.
_SCREEN_SLACK = 1e-6


def as_fractions(values: Sequence[RealLike]) -> list[Fraction]:
    """Exact rationals for the inputs (floats are taken at their binary value)."""
    try:
        return [Fraction(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"cannot read reals: {exc}") from exc


def _certify(t: list[Fraction], q: int, m: int, Q: int) -> Optional[DirichletCertificate]:
    p = [math.floor(q * x + Fraction(1, 2)) for x in t]
    residual = max(abs(q * x - pj) for x, pj in zip(t, p))
    if residual > Fraction(1, m):
        return None
    return DirichletCertificate(q=q, p=p, m=m, Q=Q, max_residual=residual)


def _check_inputs(t: Sequence[RealLike], m: int, Q: int) -> list[Fraction]:
    if len(t) == 0:
        raise InvalidParameterError("need at least one real to approximate")
    if m < 2 or Q < 1:
        raise InvalidParameterError("need m >= 2 and Q >= 1", details={"m": m, "Q": Q})
    return as_fractions(t)


def admissible_denominators(t: list[Fraction], m: int, start: int, stop: int) -> Iterator[DirichletCertificate]:
    """
    Yield certificates for every q in [start, stop] with max_j ‖q·t_j‖ ≤ 1/m,
    in increasing order of q.

    The scan runs in chunks of ``DIOPHANTINE_SCAN_CHUNK`` denominators;
    chunking does not change the result.
    """
    reduced = np.array([float(x - math.floor(x)) for x in t])
    screen = 1.0 / m + _SCREEN_SLACK
    chunk = max(1, config.DIOPHANTINE_SCAN_CHUNK)
    for lo in range(start, stop + 1, chunk):
        qs = np.arange(lo, min(lo + chunk, stop + 1), dtype=np.int64)
        products = np.outer(qs.astype(float), reduced)
        residuals = np.abs(products - np.rint(products)).max(axis=1)
        for idx in np.flatnonzero(residuals <= screen):
            cert = _certify(t, int(qs[idx]), m, start)
            if cert is not None:
                yield cert


def dirichlet_simultaneous(t: Sequence[RealLike], m: int, Q: int) -> DirichletCertificate:
    """
    Smallest q ≥ Q with max_j ‖q·t_j‖ ≤ 1/m.

    Args:
        t: Reals t_1..t_N (floats, ints, ``Fraction`` or rational strings).
        m: Box resolution, m ≥ 2.
        Q: Search start, Q ≥ 1.

    Returns:
        DirichletCertificate: q, the nearest integers p and the exact residual.

    Raises:
        InvalidParameterError: On empty t, m < 2 or Q < 1.
        ResourceLimitError: If Q·m^N exceeds ``DIOPHANTINE_SEARCH_CAP``.
    """
    fractions = _check_inputs(t, m, Q)
    upper = Q * m ** len(fractions)
    if upper > config.DIOPHANTINE_SEARCH_CAP:
        raise ResourceLimitError(
            "Q·m^N exceeds the Diophantine search cap",
            details={"Q": Q, "m": m, "N": len(fractions), "cap": config.DIOPHANTINE_SEARCH_CAP},
        )

    for cert in admissible_denominators(fractions, m, Q, upper):
        audit_logger.info(
            "SEARCH dirichlet N=%s m=%s Q=%s q=%s residual=%s",
            len(fractions), m, Q, cert.q, cert.max_residual,
        )
        return cert
    raise NotFoundError("no admissible q found below Q·m^N", details={"Q": Q, "m": m})


def pigeonhole_certificate(t: Sequence[RealLike], m: int, Q: int) -> DirichletCertificate:
    """
    Certificate from two multiples of Q landing in the same box.

    The fractional parts of k·Q·t for k = 0..m^N fall into the m^N boxes of
    the m×…×m grid, so two share a box and q = Q·(k₂ − k₁) works. The
    result is valid but generally not the smallest admissible q.

    Raises:
        InvalidParameterError: On empty t, m < 2 or Q < 1.
        ResourceLimitError: If m^N exceeds ``DIOPHANTINE_SEARCH_CAP``.
    """
    fractions = _check_inputs(t, m, Q)
    boxes = m ** len(fractions)
    if boxes > config.DIOPHANTINE_SEARCH_CAP:
        raise ResourceLimitError(
            "m^N exceeds the Diophantine search cap",
            details={"m": m, "N": len(fractions), "cap": config.DIOPHANTINE_SEARCH_CAP},
        )

    seen: dict[tuple[int, ...], int] = {}
    for k in range(boxes + 1):
        box = []
        for x in fractions:
            value = k * Q * x
            box.append(math.floor((value - math.floor(value)) * m))
        key = tuple(box)
        if key in seen:
            q = Q * (k - seen[key])
            cert = _certify(fractions, q, m, Q)
            if cert is None:
                raise NotFoundError("box collision did not certify", details={"q": q})
            return cert
        seen[key] = k
    raise NotFoundError("no box collision found", details={"m": m, "Q": Q})
