import numpy as np
import pytest

from conftest import random_rank_matrix
from lpsolve.errors import DomainError, ShapeError
from lpsolve.frames import mercedes_frame
from lpsolve.matcore import (
    as_matrix,
    build_circulant,
    build_convolution_matrix,
    build_dft_matrix,
    circulant_eigen_check,
    cyclic_convolve,
    frobenius_norm,
    lp_norm,
    rank,
    relative_residual,
    svd,
)


def test_svd_identity():
    s = svd(np.eye(3))
    np.testing.assert_allclose(s.sigma, [1, 1, 1])


def test_svd_diagonal_rank_one():
    s = svd(np.diag([3.0, 0.0]))
    np.testing.assert_allclose(s.sigma, [3.0, 0.0], atol=1e-15)


def test_svd_mercedes_squared_singular_values():
    s = svd(mercedes_frame().synthesis)
    np.testing.assert_allclose(s.sigma ** 2, [1.5, 1.5], atol=1e-3)


def test_svd_reconstructs_complex(rng):
    A = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    s = svd(A)
    assert np.all(np.diff(s.sigma) <= 0)
    np.testing.assert_allclose(s.reconstruct(), A, atol=1e-12)


@pytest.mark.parametrize("shape", [(6, 4), (4, 6), (5, 5)])
def test_svd_reconstructs_real(rng, shape):
    A = rng.standard_normal(shape)
    s = svd(A)
    assert np.linalg.norm(s.reconstruct() - A) <= 1e-11 * np.linalg.norm(A)
    np.testing.assert_allclose(s.U.T @ s.U, np.eye(min(shape)), atol=1e-12)


@pytest.mark.parametrize(
    "A, expected",
    [
        (np.eye(4), 4),
        (np.zeros((3, 2)), 0),
        ([[1, 2], [2, 4]], 1),
    ],
)
def test_rank(A, expected):
    assert rank(A) == expected


@pytest.mark.parametrize("m, n, r", [(5, 5, 5), (6, 3, 2), (3, 7, 3), (6, 6, 1)])
def test_rank_of_transpose_and_gram(rng, m, n, r):
    A = random_rank_matrix(rng, m, n, r)
    gram = A.conj().T @ A
    assert rank(A) == r
    assert rank(A.T) == r
    assert rank(gram, tol=1e-10 * np.linalg.norm(gram, 2)) == r


def test_rank_explicit_tol():
    assert rank(np.diag([1.0, 1e-3]), tol=1e-2) == 1


@pytest.mark.parametrize("p, expected", [(2, 5.0), (np.inf, 4.0), (1, 7.0)])
def test_lp_norm(p, expected):
    assert lp_norm([3, 4], p) == pytest.approx(expected)


def test_lp_norm_does_not_increase_with_p(rng):
    orders = [0.5, 1, 1.5, 2, 3, 10, 50, np.inf]
    for _ in range(10):
        x = rng.standard_normal(6)
        norms = [lp_norm(x, p) for p in orders]
        for smaller, larger in zip(norms[1:], norms[:-1]):
            assert smaller <= larger * (1 + 1e-12)


def test_lp_norm_zero_counts_nonzeros():
    assert lp_norm([0, 1e-9, 2, 0], 0) == 2
    assert lp_norm([0, 1e-9, 2, 0], 0, tol=1e-6) == 1


def test_lp_norm_large_p_does_not_overflow():
    assert lp_norm([1e200, 1e200], 10) == pytest.approx(1e200 * 2 ** 0.1)


def test_lp_norm_rejects_negative_p():
    with pytest.raises(DomainError):
        lp_norm([1, 2], -1)


def test_dft_small_sizes():
    np.testing.assert_allclose(build_dft_matrix(1), [[1]])
    np.testing.assert_allclose(build_dft_matrix(2), [[1, 1], [1, -1]], atol=1e-15)
    W = build_dft_matrix(4)
    assert W[1, 1] == pytest.approx(-1j)
    assert W[2, 2] == pytest.approx(1)


@pytest.mark.parametrize("n", [3, 8, 64])
def test_dft_matches_fft(n):
    np.testing.assert_allclose(build_dft_matrix(n), np.fft.fft(np.eye(n), axis=0), atol=1e-10)


def test_dft_rejects_nonpositive_size():
    with pytest.raises(DomainError):
        build_dft_matrix(0)


def test_convolution_matrix():
    np.testing.assert_allclose(build_convolution_matrix([1], 3), np.eye(3))
    H = build_convolution_matrix([1, 1], 3)
    np.testing.assert_allclose(H @ [1, 2, 3], [1, 3, 5, 3])
    h = [2.0, 3.0, 5.0]
    H = build_convolution_matrix(h, 3)
    assert H.shape == (5, 3)
    np.testing.assert_allclose(H[:, 0], [2, 3, 5, 0, 0])
    np.testing.assert_allclose(H[:, 2], [0, 0, 2, 3, 5])


def test_circulant():
    np.testing.assert_allclose(build_circulant([1, 0, 0, 0]), np.eye(4))
    np.testing.assert_allclose(build_circulant([0, 1]), [[0, 1], [1, 0]])
    C = build_circulant([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(C[:, 0], [1, 2, 3, 4])
    np.testing.assert_allclose(C[:, 1], [4, 1, 2, 3])


def test_cyclic_convolve_matches_circulant(rng):
    h = rng.standard_normal(7)
    x = rng.standard_normal(7)
    np.testing.assert_allclose(cyclic_convolve(h, x), build_circulant(h) @ x, atol=1e-12)


def test_cyclic_convolve_length_mismatch():
    with pytest.raises(ShapeError):
        cyclic_convolve([1, 2], [1, 2, 3])


@pytest.mark.parametrize(
    "h, eigenvalues",
    [
        ([1, 0, 0, 0], [1, 1, 1, 1]),
        ([0, 1, 0, 0], [1, -1j, -1, 1j]),
        ([1, 1, 1, 1], [4, 0, 0, 0]),
    ],
)
def test_circulant_eigen_check_examples(h, eigenvalues):
    result = circulant_eigen_check(h)
    np.testing.assert_allclose(result.eigenvalues, eigenvalues, atol=1e-12)
    assert result.residual < 1e-12


def test_dft_diagonalizes_random_circulants(rng):
    for _ in range(20):
        n = int(rng.integers(2, 17))
        h = rng.standard_normal(n)
        result = circulant_eigen_check(h)
        assert result.residual <= 1e-10 * frobenius_norm(build_circulant(h))


def test_relative_residual_zero_reference():
    assert relative_residual([[0.5]], [[0.0]]) == 0.5


def test_as_matrix_validation():
    with pytest.raises(ShapeError):
        as_matrix(np.zeros((0, 3)))
    with pytest.raises(DomainError):
        as_matrix([[1.0, np.nan]])
    assert as_matrix([1, 2, 3]).shape == (1, 3)
