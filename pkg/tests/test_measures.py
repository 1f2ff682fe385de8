import math

import numpy as np
import pytest
from pydantic import ValidationError

from powerbound.errors import (
    CertificateError,
    DivisionDomainError,
    InvalidParameterError,
    NotFoundError,
    SetFormatError,
)
from powerbound.measures import (
    AtomicMeasure,
    CantorApproxMeasure,
    Pseudomeasure,
    absolute_convergence_partial,
    cantor_fourier_coefficient,
    format_measure_text,
    fourier_coefficient,
    fourier_coefficients,
    k_condition_estimate,
    lemma28_extract,
    limsup_abs_fourier,
    measure_pseudomeasure,
    minimizing_sequence,
    parse_measure_text,
    pseudomeasure_ratio,
    weighted_imaginary_average,
)


def _roots_of_unity(p, weights=None):
    weights = weights if weights is not None else [1.0 / p] * p
    return AtomicMeasure.from_arrays([2 * math.pi * k / p for k in range(p)], weights)


def _random_measure(seed, size=7):
    rng = np.random.default_rng(seed)
    return AtomicMeasure.from_arrays(rng.uniform(0, 2 * math.pi, size), rng.uniform(0.1, 1.0, size))


def test_atomic_measure_validation():
    with pytest.raises(ValidationError):
        AtomicMeasure.from_arrays([1.0, 1.0], [0.5, 0.5])
    with pytest.raises(ValidationError):
        AtomicMeasure.from_arrays([1.0], [0.0])
    with pytest.raises(ValidationError):
        AtomicMeasure(atoms=[])


def test_fourier_coefficient_basic_properties():
    mu = _random_measure(3)
    assert fourier_coefficient(mu, 0) == pytest.approx(mu.total_mass)
    for n in (1, 5, 17, 1234):
        value = fourier_coefficient(mu, n)
        assert abs(value) <= mu.total_mass + 1e-12
        assert fourier_coefficient(mu, -n) == pytest.approx(value.conjugate(), abs=1e-12)


def test_vectorized_coefficients_match_scalar():
    mu = _random_measure(4, size=40)
    ns = list(range(-30, 31)) + [999, 10_000]
    window = fourier_coefficients(mu, ns)
    for n, value in zip(ns, window):
        assert value == pytest.approx(fourier_coefficient(mu, n), abs=1e-10)


@pytest.mark.parametrize("ratio", [1 / 3, 1 / 4])
@pytest.mark.parametrize("depth", [0, 5, 12])
def test_cantor_product_formula_matches_direct_sum(ratio, depth):
    measure = CantorApproxMeasure(ratio=ratio, depth=depth, mass=2.0, arc_start=0.3, arc_length=1.7)
    atomic = measure.to_atomic()
    assert len(atomic.atoms) == 2 ** depth
    for n in (0, 1, -7, 123, 4096, -9999, 10_000):
        direct = fourier_coefficient(atomic, n)
        assert abs(cantor_fourier_coefficient(measure, n) - direct) <= 1e-10
    window = fourier_coefficients(measure, [3, -3])
    assert window[0] == pytest.approx(fourier_coefficient(atomic, 3), abs=1e-10)


def test_limsup_window_maximum():
    mu = _roots_of_unity(5)
    window = limsup_abs_fourier(mu, 1, 20)
    assert window.index == 5
    assert window.value == pytest.approx(1.0)
    with pytest.raises(InvalidParameterError):
        limsup_abs_fourier(mu, 5, 5)
    with pytest.raises(InvalidParameterError):
        limsup_abs_fourier(mu, -1, 5)


def test_k_condition_estimate():
    assert k_condition_estimate(_roots_of_unity(6, [0.1, 0.2, 0.3, 0.1, 0.2, 0.1]), 1, 50) == 1.0
    assert k_condition_estimate(_random_measure(8), 1, 500) >= 1.0
    with pytest.raises(DivisionDomainError):
        k_condition_estimate(_roots_of_unity(3), 1, 2)


def test_k_condition_estimate_single_and_irrational_atoms():
    assert k_condition_estimate(AtomicMeasure.from_arrays([1.0], [0.7]), 1, 10) == 1.0

    irrational = AtomicMeasure.from_arrays([2 * math.pi * math.sqrt(2), 2 * math.pi * math.sqrt(3)], [0.5, 0.5])
    value = k_condition_estimate(irrational, 1, 10**6)
    assert 1.0 <= value <= 1.0 + 1e-3


def test_lemma28_extract_on_near_periodic_measure():
    thetas = [0.0, math.pi / 2 + 1e-4, math.pi, 3 * math.pi / 2]
    mu = AtomicMeasure.from_arrays(thetas, [0.25, 0.25, 0.25, 0.25])
    result = lemma28_extract(mu, 0.01, 3, 20)
    assert result.indices == [4, 8, 12]
    assert abs(result.xi) == pytest.approx(1.0)
    assert result.dispersion <= result.bound
    expected = 2 * mu.total_mass - 2 * abs(fourier_coefficient(mu, 12))
    assert result.dispersion == pytest.approx(expected, abs=1e-12)

    with pytest.raises(NotFoundError):
        lemma28_extract(mu, 0.01, 10, 20)
    with pytest.raises(InvalidParameterError):
        lemma28_extract(mu, 1.5, 1, 20)


def test_absolute_convergence_partial_sums():
    ones = [1.0] * 10
    assert absolute_convergence_partial(ones, 1.0, 10) == 0.0
    assert absolute_convergence_partial(ones, 1j, 4) == pytest.approx(2.0)
    assert weighted_imaginary_average(ones, 1j, 4) == pytest.approx(0.5)
    with pytest.raises(InvalidParameterError):
        absolute_convergence_partial(ones, 1j, 11)
    with pytest.raises(InvalidParameterError):
        absolute_convergence_partial(ones, 2.0, 3)
    with pytest.raises(DivisionDomainError):
        weighted_imaginary_average([0.0, 0.0], 1j, 2)


def test_minimizing_sequence():
    mu = _roots_of_unity(6)
    result = minimizing_sequence(mu, [1e-9, 1e-9, 1e-9], 40)
    assert result.indices == [3, 6, 9]
    assert result.total <= result.target_total

    with pytest.raises(NotFoundError):
        minimizing_sequence(_random_measure(12), [1e-6], 10)
    with pytest.raises(InvalidParameterError):
        minimizing_sequence(mu, [0.0], 10)


def test_pseudomeasure_ratio():
    dirac = Pseudomeasure(coeff=lambda n: 1.0, bound=1.0)
    assert pseudomeasure_ratio(dirac, 10, 50, (10, 50)) == 1.0

    mu = _random_measure(21)
    p = measure_pseudomeasure(mu)
    ratio = pseudomeasure_ratio(p, 1, 200, (1, 200))
    assert ratio >= 1.0
    assert ratio == pytest.approx(k_condition_estimate(mu, 1, 200), rel=1e-12)

    decaying = Pseudomeasure(coeff=lambda n: 1.0 / (1 + abs(n)), bound=1.0)
    assert pseudomeasure_ratio(decaying, 10, 100, (10, 20)) == pytest.approx(11.0)

    vanishing = Pseudomeasure(coeff=lambda n: 0.0 if n == 0 else 1.0, bound=1.0)
    with pytest.raises(DivisionDomainError):
        pseudomeasure_ratio(vanishing, 0, 5, (0, 0))
    assert pseudomeasure_ratio(vanishing, 0, 5, (0, 3)) == 1.0

    unbounded = Pseudomeasure(coeff=lambda n: float(abs(n)), bound=10.0)
    with pytest.raises(CertificateError):
        pseudomeasure_ratio(unbounded, 0, 50, (1, 2))
    with pytest.raises(InvalidParameterError):
        pseudomeasure_ratio(unbounded, 5, 1, (1, 2))
    with pytest.raises(InvalidParameterError):
        pseudomeasure_ratio(unbounded, 0, 5, (3, 2))


def test_measure_text_formats():
    cantor = parse_measure_text("cantor 0.25 4 1.0 0.5 2.0\n")
    assert isinstance(cantor, CantorApproxMeasure)
    assert parse_measure_text(format_measure_text(cantor)) == cantor

    atomic = parse_measure_text("# two atoms\natom 0.1 0.5\natom 2.0 1.5\n")
    assert atomic.total_mass == pytest.approx(2.0)
    assert format_measure_text(parse_measure_text(format_measure_text(atomic))) == format_measure_text(atomic)

    with pytest.raises(SetFormatError):
        parse_measure_text("atom 0.1\n")
    with pytest.raises(SetFormatError):
        parse_measure_text("atom 0.1 1.0\ncantor 0.25 4 1.0 0.5 2.0\n")
    with pytest.raises(SetFormatError):
        parse_measure_text("cantor 0.75 4 1.0 0.5 2.0\n")
