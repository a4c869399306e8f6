import numpy as np
import pytest

from lpsolve.errors import IndependenceError, ShapeError
from lpsolve.matcore import build_circulant
from lpsolve.models import ExperimentSet
from lpsolve.opfit import fit_operator_exact, fit_operator_ls, linear_regression, project_circulant
from lpsolve.pinv import solve_normal_equations


def test_exact_fit_recovers_operator(rng):
    A = rng.standard_normal((3, 4))
    X = rng.standard_normal((4, 4))
    np.testing.assert_allclose(fit_operator_exact((X, A @ X)), A, atol=1e-10)


def test_exact_fit_identity_experiments():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_allclose(fit_operator_exact(ExperimentSet(inputs=np.eye(2), outputs=A)), A)


def test_exact_fit_errors():
    with pytest.raises(ShapeError):
        fit_operator_exact((np.eye(3)[:, :2], np.ones((1, 2))))
    with pytest.raises(IndependenceError):
        fit_operator_exact(([[1, 2], [2, 4]], [[1, 1]]))
    with pytest.raises(ShapeError):
        fit_operator_exact((np.eye(2), np.ones((1, 3))))


def test_least_squares_fit_residual_is_orthogonal(rng):
    X = rng.standard_normal((3, 12))
    B = rng.standard_normal((2, 3)) @ X + 0.01 * rng.standard_normal((2, 12))
    fit = fit_operator_ls((X, B))
    assert not fit.rank_deficient
    assert fit.rank == 3
    residual = fit.operator @ X - B
    np.testing.assert_allclose(residual @ X.T, 0, atol=1e-10)
    assert fit.residual_norm == pytest.approx(np.linalg.norm(residual))


def test_least_squares_fit_matches_exact_when_square(rng):
    X = rng.standard_normal((3, 3))
    B = rng.standard_normal((2, 3))
    np.testing.assert_allclose(fit_operator_ls((X, B)).operator, fit_operator_exact((X, B)), atol=1e-10)


def test_too_few_experiments_flagged(rng, caplog):
    X = rng.standard_normal((4, 2))
    B = rng.standard_normal((1, 2))
    fit = fit_operator_ls((X, B))
    assert fit.rank_deficient
    assert fit.rank == 2
    # minimum norm operator reproduces the experiments and lies in their span
    np.testing.assert_allclose(fit.operator @ X, B, atol=1e-10)
    assert np.linalg.matrix_rank(np.vstack([X.T, fit.operator])) == 2
    assert "not unique" in caplog.text


def test_linear_regression_exact_weights(rng):
    w = np.array([0.5, -2.0, 3.0])
    X = rng.standard_normal((3, 20))
    np.testing.assert_allclose(linear_regression((X, w @ X)), w, atol=1e-10)


def test_linear_regression_line_fit():
    # fit b = w0 + w1 t through three points
    t = np.array([0.0, 1.0, 2.0])
    X = np.vstack([np.ones(3), t])
    w = linear_regression((X, [[1.0, 2.0, 4.0]]))
    np.testing.assert_allclose(w, [5.0 / 6.0, 1.5], atol=1e-12)


def test_linear_regression_matches_normal_equations(rng):
    X = rng.standard_normal((4, 15))
    b = rng.standard_normal(15)
    # one equation per experiment: X^T w = b
    np.testing.assert_allclose(linear_regression((X, b)), solve_normal_equations(X.T, b), atol=1e-10)


def test_linear_regression_requires_scalar_responses(rng):
    with pytest.raises(ShapeError):
        linear_regression((rng.standard_normal((2, 5)), rng.standard_normal((2, 5))))


def test_project_circulant_examples():
    np.testing.assert_allclose(project_circulant([[1, 2], [3, 4]]), [[2.5, 2.5], [2.5, 2.5]])
    C = build_circulant([1.0, 2.0, 3.0])
    np.testing.assert_allclose(project_circulant(C), C)


def test_project_circulant_is_orthogonal_projection(rng):
    A = rng.standard_normal((5, 5))
    P = project_circulant(A)
    for _ in range(5):
        C = build_circulant(rng.standard_normal(5))
        assert np.sum((A - P) * C) == pytest.approx(0.0, abs=1e-10)
    np.testing.assert_allclose(project_circulant(P), P, atol=1e-12)


def test_project_circulant_requires_square():
    with pytest.raises(ShapeError):
        project_circulant(np.ones((2, 3)))


def test_overdetermined_noiseless_fit_recovers_operator(rng):
    A = rng.standard_normal((3, 4))
    X = rng.standard_normal((4, 10))
    fit = fit_operator_ls(ExperimentSet(inputs=X, outputs=A @ X))
    np.testing.assert_allclose(fit.operator, A, atol=1e-9)
    assert fit.residual_norm <= 1e-9
