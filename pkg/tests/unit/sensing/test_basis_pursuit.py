# tests/unit/sensing/test_basis_pursuit.py
from fractions import Fraction

import numpy as np
import pytest

from l1sections.analysis.random_kernel import random_sign_matrix
from l1sections.exceptions import DomainError, InfeasibleMeasurementError, SolverError
from l1sections.sensing.basis_pursuit import _refit_on_support, basis_pursuit, independent_rows, sigma_k


def test_zero_measurement_decodes_to_zero():
    result = basis_pursuit(np.array([[1.0, 2.0]]), np.array([0.0]))
    assert result.v.tolist() == [0.0, 0.0]
    assert result.method == "trivial"


def test_one_by_two_picks_the_cheaper_vertex():
    result = basis_pursuit(np.array([[1.0, 2.0]]), np.array([2.0]))
    assert result.v == pytest.approx([0.0, 1.0], abs=1e-8)
    assert result.objective == pytest.approx(1.0, abs=1e-8)
    assert result.residual <= 1e-8


def test_identity_returns_the_measurement():
    y = np.array([1.5, -2.0, 0.0, 3.25])
    result = basis_pursuit(np.eye(4), y)
    assert result.v == pytest.approx(y, abs=1e-8)


def test_duplicate_rows_are_dropped():
    A = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    assert independent_rows(A).size == 2
    result = basis_pursuit(A, np.array([1.0, 1.0, 1.0]))
    assert result.rows_used == 2
    assert result.v == pytest.approx([0.0, 1.0, 0.0], abs=1e-8)


def test_measurement_outside_the_range():
    with pytest.raises(InfeasibleMeasurementError, match="not in the range"):
        basis_pursuit(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]))


def test_shape_errors():
    with pytest.raises(DomainError):
        basis_pursuit(np.eye(3), np.ones(2))
    with pytest.raises(DomainError):
        basis_pursuit(np.eye(2), np.ones(2), methods=())


def test_objective_never_exceeds_the_true_signal(rng):
    M = random_sign_matrix(12, 24, seed=5)
    for _ in range(5):
        x = np.zeros(24)
        x[rng.choice(24, size=4, replace=False)] = rng.standard_normal(4)
        result = basis_pursuit(M, M.to_dense() @ x)
        assert result.objective <= np.abs(x).sum() + 1e-7


def test_decoding_is_scale_equivariant():
    M = random_sign_matrix(10, 20, seed=1)
    x = np.zeros(20)
    x[[2, 11]] = [1.5, -1.2]
    y = M.to_dense() @ x
    base = basis_pursuit(M, y).v
    for c in (-3.0, 0.25, 10.0):
        assert basis_pursuit(M, c * y).v == pytest.approx(c * base, abs=1e-6 * abs(c) + 1e-8)


def test_solver_failure_falls_back_to_the_next_method(mocker, caplog):
    solve = mocker.patch(
        "l1sections.sensing.basis_pursuit._solve_lp",
        side_effect=[SolverError("no luck"), np.array([0.0, 1.0])],
    )
    result = basis_pursuit(np.array([[1.0, 2.0]]), np.array([2.0]))
    assert result.method == "highs-ipm"
    assert solve.call_count == 2
    assert "LP method highs-ds failed" in caplog.text


def test_every_method_failing_raises(mocker):
    mocker.patch("l1sections.sensing.basis_pursuit._solve_lp", side_effect=SolverError("down"))
    with pytest.raises(SolverError, match="did not converge"):
        basis_pursuit(np.array([[1.0, 2.0]]), np.array([2.0]), methods=("highs-ds", "highs"))


def test_sigma_k_examples():
    assert sigma_k([3, 1, -2], 1) == 3
    assert sigma_k([3, 1, -2], 0) == 6
    assert sigma_k([3, 1, -2], 3) == 0
    assert sigma_k([3, 1, -2], 7) == 0
    assert sigma_k(np.array([0.5, -0.25, 2.0]), 1) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        sigma_k([1, 2], -1)


def test_sigma_k_is_exact_on_rationals():
    x = [Fraction(1, 3), Fraction(-1, 6), Fraction(5, 7)]
    assert sigma_k(x, 1) == Fraction(1, 2)
    values = [sigma_k(x, k) for k in range(4)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_refit_keeps_the_solution_when_it_would_raise_the_l1_norm():
    # rank-one support: the minimum-norm solution (0.3, 0.9) costs 1.2
    A = np.array([[1.0, 3.0], [1.0, 3.0]])
    y = np.array([3.0, 3.0])
    v = np.array([0.03, 0.99])
    assert _refit_on_support(A, y, v, tol_feas=1e-8) is v


def test_refit_polishes_a_well_posed_support():
    A = np.eye(3)
    v = np.array([1.0 + 1e-10, 0.0, 2.0])
    refit = _refit_on_support(A, np.array([1.0, 0.0, 2.0]), v, tol_feas=1e-8)
    assert refit.tolist() == [1.0, 0.0, 2.0]


def test_basis_pursuit_never_returns_a_costlier_refit(mocker):
    mocker.patch("l1sections.sensing.basis_pursuit._solve_lp", return_value=np.array([0.03, 0.99]))
    result = basis_pursuit(np.array([[1.0, 3.0], [1.0, 3.0]]), np.array([3.0, 3.0]))
    assert result.v == pytest.approx([0.03, 0.99])
    assert result.objective <= 1.02 + 1e-9
    assert result.residual <= 1e-8
