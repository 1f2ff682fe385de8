import math

import numpy as np
import pytest
from pydantic import ValidationError

from powerbound import config
from powerbound.circle_sets import SymbolicCircleSet, example_family_cluster
from powerbound.errors import (
    InvalidParameterError,
    NonConvergenceError,
    OverflowGuardError,
    PreconditionError,
    RankDeficiencyError,
)
from powerbound.measures import AtomicMeasure
from powerbound.operator_lab import (
    DiagonalUnitary,
    SimilarityModel,
    block_model,
    check_lemma21,
    check_theorem25,
    check_theorem35,
    check_theorem211,
    check_theorem212,
    cluster_eigenangles,
    power_norm_profile,
    random_model,
    random_similarity,
    random_unitary,
    riesz_bounds,
    spectral_norm,
    verify_lemma11,
    weak_limit_gap,
)

SCHEDULE = [0.3, 0.1]


def _model(seed, d=3, kappa=4.0, eigenangles=None):
    return random_model(d, kappa, np.random.default_rng(seed), eigenangles)


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    assert spectral_norm(A) == pytest.approx(np.linalg.norm(A, 2), rel=1e-9)
    assert spectral_norm(np.zeros((3, 3))) == 0.0
    assert spectral_norm(np.diag([1.0, 3.0, 2.0])) == pytest.approx(3.0, rel=1e-9)


def test_spectral_norm_cap_reports_best_estimate(monkeypatch):
    monkeypatch.setattr(config, "SPECTRAL_NORM_MAX_ITERATIONS", 1)
    with pytest.raises(NonConvergenceError) as info:
        spectral_norm(np.diag([1.0, 2.0]))
    assert 0.0 < info.value.best <= 2.0


def test_random_similarity_has_exact_condition_number():
    rng = np.random.default_rng(1)
    Y = random_similarity(5, 7.5, rng)
    assert np.linalg.cond(Y) == pytest.approx(7.5, rel=1e-9)
    with pytest.raises(InvalidParameterError):
        random_similarity(1, 2.0, rng)
    with pytest.raises(InvalidParameterError):
        random_similarity(3, 0.5, rng)


def test_random_unitary_is_unitary():
    Q = random_unitary(4, np.random.default_rng(2))
    assert np.allclose(Q.conj().T @ Q, np.eye(4), atol=1e-12)


def test_model_validation():
    U = DiagonalUnitary(eigenangles=[0.1, 1.2])
    with pytest.raises(ValidationError):
        SimilarityModel(U=U, Y=[[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(ValidationError):
        SimilarityModel(U=U, Y=np.eye(3))
    with pytest.raises(ValidationError):
        DiagonalUnitary(eigenangles=[0.1, 0.2], block_labels=[0])


def test_model_caches_powers_and_condition_number():
    model = _model(3)
    assert np.allclose(model.T @ model.T_inv, np.eye(3), atol=1e-10)
    assert np.allclose(model.power(5), np.linalg.matrix_power(model.T, 5), atol=1e-9)
    assert model.kappa == pytest.approx(4.0, rel=1e-9)


def test_power_profile_sandwich():
    model = _model(4, kappa=5.0)
    for direction in ("forward", "backward"):
        norms = power_norm_profile(model, 200, direction)
        assert norms[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(norms >= 1.0 / model.kappa - 1e-9)
        assert np.all(norms <= model.kappa * (1 + 1e-9))
    forward = power_norm_profile(model, 50)
    for n in (1, 17, 50):
        assert forward[n] == pytest.approx(np.linalg.norm(model.power(n), 2), rel=1e-9)


def test_overflow_guard(monkeypatch):
    monkeypatch.setattr(config, "OVERFLOW_GUARD", 0.5)
    with pytest.raises(OverflowGuardError):
        power_norm_profile(_model(5), 10)


def test_riesz_bounds():
    Q = random_unitary(4, np.random.default_rng(6))
    lower, upper = riesz_bounds([Q[:, :2], Q[:, 2:]])
    assert lower == pytest.approx(1.0, abs=1e-12)
    assert upper == pytest.approx(1.0, abs=1e-12)

    skew = riesz_bounds([np.array([[1.0], [0.0]]), np.array([[1.0], [1.0]])])
    assert skew[0] == pytest.approx(1 - 1 / math.sqrt(2))
    assert skew[1] == pytest.approx(1 + 1 / math.sqrt(2))

    with pytest.raises(RankDeficiencyError):
        riesz_bounds([Q[:, :2], Q[:, :2]])
    with pytest.raises(RankDeficiencyError):
        riesz_bounds([Q[:, :1]])


def test_lemma21_has_no_violations():
    model = _model(7)
    x = np.random.default_rng(8).normal(size=3) + 0j
    report = check_lemma21(model, x, 300)
    assert report.satisfied
    assert report.details["violations"] == 0
    assert report.slack >= 0
    with pytest.raises(InvalidParameterError):
        check_lemma21(model, np.zeros(3), 10)


@pytest.mark.parametrize("seed", [10, 11, 12])
def test_theorem25_holds_on_random_models(seed):
    model = _model(seed, d=2, kappa=3.0)
    report = check_theorem25(model, 200, 0.05, SCHEDULE)
    assert report.satisfied
    assert report.bound_name == "thm25"
    assert report.details["a_inv_norm"] == pytest.approx(1.0, abs=1e-12)
    assert report.details["vector_satisfied"]
    for gap, tol in zip(report.details["weak_limit_gap"], SCHEDULE):
        assert gap <= tol + 1e-9
    assert report.Minv_window <= report.bound_value


def test_weak_limit_gap_at_identity():
    model = _model(13, d=2)
    assert weak_limit_gap(model, [0], np.ones(2)) == [0.0]


def test_theorem211_on_block_model():
    model = block_model([1, 2], 3.0, np.random.default_rng(14))
    assert model.U.blocks() == {0: [0], 1: [1, 2]}
    report = check_theorem211(model, 200, 0.05, SCHEDULE)
    assert report.satisfied
    assert report.details["biorthogonality"] < 1e-8
    assert report.details["riesz_satisfied"]
    assert report.details["C"] >= 1.0


def test_theorem211_three_blocks_in_six_dimensions():
    rng = np.random.default_rng(140)
    for _ in range(50):
        model = block_model([2, 2, 2], float(rng.uniform(1.5, 10.0)), rng)
        report = check_theorem211(model, 1000, 0.05, SCHEDULE)
        assert report.satisfied, report.details
        assert report.Minv_window <= report.bound_value
        assert report.details["riesz_satisfied"]


def test_theorem35_on_thin_set():
    E = SymbolicCircleSet(points=[2.0], clusters=[example_family_cluster(0.01)])
    rng = np.random.default_rng(15)
    model = _model(16, d=3, kappa=2.0, eigenangles=cluster_eigenangles(E, 3, rng))
    report = check_theorem35(model, E, 8, 100, 0.05)
    assert report.satisfied
    assert report.details["bound_M8"] <= report.details["bound_C_K"]
    assert report.details["piece_labels"] == [0, 0, 0]
    assert report.details["recurrence_q"] >= 1


def test_theorem35_preconditions():
    E = SymbolicCircleSet(points=[2.0], clusters=[example_family_cluster(0.01)])
    inside = _model(17, d=2, kappa=2.0, eigenangles=[2.0, E.clusters[0].limit_theta.theta])
    with pytest.raises(PreconditionError):
        check_theorem35(inside, E, 5, 10)
    outside = _model(17, d=2, kappa=2.0, eigenangles=[2.0, 4.0])
    with pytest.raises(PreconditionError):
        check_theorem35(outside, E, 8, 10)


def test_theorem212_on_roots_of_unity(monkeypatch):
    monkeypatch.setattr(config, "K_CONDITION_WINDOW", (1, 1000))
    thetas = [2 * math.pi * k / 4 for k in range(4)]
    model = _model(18, d=4, kappa=3.0, eigenangles=thetas)
    report = check_theorem212(model, AtomicMeasure.from_arrays(thetas, [1.0] * 4), 100, 0.05)
    assert report.satisfied
    assert report.details["K_est"] == 1.0

    with pytest.raises(PreconditionError):
        check_theorem212(model, AtomicMeasure.from_arrays([0.1, 0.2, 0.3, 0.4], [1.0] * 4), 100)


def test_lemma11_inverse_through_interpolation():
    model = _model(19, d=3, kappa=2.0)
    report = verify_lemma11(model, 3, 6)
    assert report.satisfied
    assert max(report.details["residuals"]) <= report.details["residual_limit"]
    assert all(norm >= 1.0 - 1e-6 for norm in report.details["interp_norms"])


def test_cluster_eigenangles_needs_enough_points():
    E = SymbolicCircleSet(points=[1.0, 2.0])
    with pytest.raises(PreconditionError):
        cluster_eigenangles(E, 3, np.random.default_rng(0))
    assert cluster_eigenangles(E, 2, np.random.default_rng(0)) == [1.0, 2.0]


def test_theorem35_constant_shrinks_with_K():
    E = SymbolicCircleSet(clusters=[example_family_cluster(0.05)])
    model = _model(20, d=2, kappa=3.0, eigenangles=cluster_eigenangles(E, 2, np.random.default_rng(21)))
    report = check_theorem35(model, E, 8, 100, 0.05)
    series = [report.details["bound_C_K_by_K"][k] for k in ("8", "16", "32")]
    assert series == sorted(series, reverse=True)


def test_theorem25_default_schedule_in_six_dimensions():
    model = _model(22, d=6, kappa=10.0)
    report = check_theorem25(model, 500, 0.05)
    assert report.satisfied
    assert len(report.details["subsequence"]) == len(config.WEAK_LIMIT_TOLERANCES)
