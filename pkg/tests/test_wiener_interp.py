import numpy as np
import pytest
from pydantic import ValidationError
from scipy.linalg import null_space
from scipy.optimize import linprog, minimize

from powerbound import config
from powerbound.errors import InfeasibleProblemError, NonConvergenceError
from powerbound.wiener_interp import (
    AnalyticPolynomial,
    InterpolationProblem,
    evaluate_on_operator,
    interpolate_min_l1,
    interpolation_constant,
    interpolation_profile,
)


def _nodes(thetas):
    return np.exp(1j * np.asarray(thetas))


def _random_problem(seed, m=3, degree=5):
    rng = np.random.default_rng(seed)
    nodes = _nodes(np.sort(rng.uniform(0, 2 * np.pi, m)))
    values = rng.normal(size=m) + 1j * rng.normal(size=m)
    return InterpolationProblem(nodes=nodes, values=values, degree=degree)


def _powell_oracle(problem, starts=6, seed=0):
    """Upper bound on the optimum by direct search over the null space."""
    A = problem.vandermonde()
    particular = np.linalg.lstsq(A, problem.values, rcond=None)[0]
    basis = null_space(A)
    k = basis.shape[1]

    def objective(w):
        return np.sum(np.abs(particular + basis @ (w[:k] + 1j * w[k:])))

    rng = np.random.default_rng(seed)
    best = objective(np.zeros(2 * k))
    for _ in range(starts):
        res = minimize(objective, rng.normal(size=2 * k), method="Powell",
                       options={"xtol": 1e-10, "ftol": 1e-12, "maxiter": 200000})
        best = min(best, res.fun)
    return best


def _polygon_lp_optimum(problem, directions=2048):
    """
    Optimum of the problem with |c| replaced by max_k Re(e^{-i phi_k} c).

    That gauge lies between cos(pi/P)|c| and |c|, so the true optimum is in
    [L, L / cos(pi/P)].
    """
    A = problem.vandermonde()
    m, n = A.shape
    phi = 2 * np.pi * np.arange(directions) / directions
    rows = []
    for j in range(n):
        block = np.zeros((directions, 3 * n))
        block[:, j] = np.cos(phi)
        block[:, n + j] = np.sin(phi)
        block[:, 2 * n + j] = -1.0
        rows.append(block)
    A_eq = np.block([[A.real, -A.imag, np.zeros((m, n))], [A.imag, A.real, np.zeros((m, n))]])
    b_eq = np.concatenate([problem.values.real, problem.values.imag])
    cost = np.concatenate([np.zeros(2 * n), np.ones(n)])
    bounds = [(None, None)] * (2 * n) + [(0, None)] * n
    res = linprog(cost, A_ub=np.vstack(rows), b_ub=np.zeros(n * directions), A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    assert res.success, res.message
    return res.fun, np.cos(np.pi / directions)


def _corpus_problem(index):
    rng = np.random.default_rng(100 + index)
    m = 1 + index % 3
    degree = m - 1 + (index // 3) % (8 - m)
    thetas = 2 * np.pi * (np.arange(m) + 0.6 * rng.random(m)) / m
    values = rng.normal(size=m) + 1j * rng.normal(size=m)
    return InterpolationProblem(nodes=_nodes(thetas), values=values, degree=degree)


def _assert_certified(problem, result, tol=1e-8):
    A = problem.vandermonde()
    assert result.residual <= tol
    assert np.max(np.abs(A @ result.polynomial.coeffs - problem.values)) <= tol
    assert np.max(np.abs(A.conj().T @ result.dual)) <= 1 + 1e-12
    lower = float(np.real(np.vdot(result.dual, problem.values)))
    assert lower <= result.norm + 1e-12
    assert result.norm - lower <= tol * max(1.0, result.norm) + 1e-12


def test_polynomial_evaluation_and_norm():
    f = AnalyticPolynomial(coeffs=[1.0, -2.0j, 0.5])
    assert f.degree == 2
    assert f.aplus_norm == pytest.approx(3.5)
    z = np.exp(0.3j)
    assert f.evaluate(z) == pytest.approx(1.0 - 2.0j * z + 0.5 * z ** 2)


def test_problem_validation():
    with pytest.raises(ValidationError):
        InterpolationProblem(nodes=[1.0, 2.0], values=[0.0, 0.0], degree=3)
    with pytest.raises(ValidationError):
        InterpolationProblem(nodes=[1.0, 1.0], values=[0.0, 1.0], degree=3)
    with pytest.raises(ValidationError):
        InterpolationProblem(nodes=[1.0], values=[0.0, 1.0], degree=3)


def test_degree_too_small_is_infeasible():
    problem = InterpolationProblem(nodes=_nodes([0.1, 1.0, 2.0]), values=[1, 1, 1], degree=1)
    with pytest.raises(InfeasibleProblemError):
        interpolate_min_l1(problem)


def test_single_node_norm_is_modulus():
    problem = InterpolationProblem(nodes=_nodes([0.7]), values=[2 - 1j], degree=3)
    result = interpolate_min_l1(problem)
    assert result.norm == pytest.approx(abs(2 - 1j), abs=1e-6)
    _assert_certified(problem, result)


def test_square_problem_has_unique_interpolant():
    problem = InterpolationProblem(nodes=_nodes([0.2, 2.5]), values=[1.0, 1j], degree=1)
    exact = np.linalg.solve(problem.vandermonde(), problem.values)
    result = interpolate_min_l1(problem)
    assert result.norm == pytest.approx(np.sum(np.abs(exact)), abs=1e-8)


def test_roots_of_unity_constant_is_one():
    nodes = np.exp(2j * np.pi * np.arange(5) / 5)
    assert interpolation_constant(nodes, 4, 4) == pytest.approx(1.0, abs=1e-8)
    assert interpolation_constant(nodes, 4, 9) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_problems_are_optimal(seed):
    problem = _random_problem(seed)
    result = interpolate_min_l1(problem)
    _assert_certified(problem, result)
    assert result.norm <= _powell_oracle(problem) + 1e-4


def test_norm_is_monotone_in_degree():
    rng = np.random.default_rng(9)
    nodes = _nodes(np.sort(rng.uniform(0, 2 * np.pi, 3)))
    values = rng.normal(size=3) + 1j * rng.normal(size=3)
    norms = [
        interpolate_min_l1(InterpolationProblem(nodes=nodes, values=values, degree=d)).norm
        for d in (2, 4, 6, 9)
    ]
    for lower, higher in zip(norms, norms[1:]):
        assert higher <= lower + 1e-6


def test_profile_is_independent_of_thread_count():
    nodes = _nodes([0.3, 1.4, 2.9, 4.4])
    serial = interpolation_profile(nodes, 3, 7, threads=1)
    pooled = interpolation_profile(nodes, 3, 7, threads=3)
    assert [r.norm for r in serial] == [r.norm for r in pooled]
    assert interpolation_constant(nodes, 3, 7) == max(r.norm for r in serial)


def test_nonconvergence_carries_best_iterate(monkeypatch):
    monkeypatch.setattr(config, "L1_MAX_ITERATIONS", 50)
    with pytest.raises(NonConvergenceError) as info:
        interpolate_min_l1(_random_problem(4), tol=1e-300)
    assert info.value.best is not None
    assert info.value.best.iterations <= 50


def test_evaluate_on_operator():
    rng = np.random.default_rng(2)
    coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
    f = AnalyticPolynomial(coeffs=coeffs)

    eigenvalues = np.exp(1j * rng.uniform(0, 2 * np.pi, 3))
    assert np.allclose(evaluate_on_operator(f, np.diag(eigenvalues)), np.diag(f.evaluate(eigenvalues)))

    T = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    direct = sum(c * np.linalg.matrix_power(T, n) for n, c in enumerate(coeffs))
    assert np.allclose(evaluate_on_operator(f, T), direct)


def test_fixed_corpus_matches_linear_programming_oracle():
    for index in range(30):
        problem = _corpus_problem(index)
        assert problem.nodes.size <= 3 and problem.degree <= 6
        result = interpolate_min_l1(problem, tol=1e-9)
        assert result.gap <= 1e-8
        lower, shrink = _polygon_lp_optimum(problem)
        assert lower - 1e-7 <= result.norm <= lower / shrink + 1e-6
        assert result.norm == pytest.approx(lower, abs=1e-4)
