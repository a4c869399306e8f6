"""
Dense matrix arithmetic, decompositions, norms and structured builders
"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg as scilin

from lpsolve.errors import DecompositionError, DomainError, ShapeError
from lpsolve.models import CirculantDiagonalization, SvdResult

logger = logging.getLogger(__name__)

EPS = np.finfo(np.float64).eps


def as_matrix(A, name: str = "A", operation: Optional[str] = None) -> np.ndarray:
    """Coerce to a finite, non-empty 2-D float or complex array"""
    arr = np.asarray(A)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"{name} must be a non-empty matrix, got shape {arr.shape}", operation=operation)
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries", operation=operation)
    return arr


def as_vector(x, name: str = "x", operation: Optional[str] = None) -> np.ndarray:
    """Coerce to a finite, non-empty 1-D float or complex array"""
    arr = np.asarray(x)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError(f"{name} must be a non-empty vector, got shape {arr.shape}", operation=operation)
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries", operation=operation)
    return arr


def hermitian(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose (plain transpose for real input)"""
    return A.conj().T if np.iscomplexobj(A) else A.T


def frobenius_norm(A) -> float:
    return float(np.linalg.norm(np.asarray(A), "fro"))


def relative_residual(X, reference) -> float:
    """||X - reference||_F / ||reference||_F, absolute when the reference is zero"""
    diff = frobenius_norm(np.asarray(X) - np.asarray(reference))
    scale = frobenius_norm(reference)
    return diff / scale if scale > 0 else diff


def svd(A) -> SvdResult:
    """Economy SVD with singular values in descending order"""
    A = as_matrix(A, operation="svd")
    try:
        U, sigma, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise DecompositionError(f"SVD did not converge: {e}", operation="svd") from e
    return SvdResult(U=U, sigma=sigma, V=hermitian(Vh))


def default_rank_tol(A: np.ndarray, sigma: np.ndarray) -> float:
    """max(M, N) * eps * sigma_max"""
    if sigma.size == 0:
        return 0.0
    return max(A.shape) * EPS * float(sigma[0])


def rank(A, tol: Optional[float] = None) -> int:
    """Number of singular values above tol"""
    A = as_matrix(A, operation="rank")
    sigma = svd(A).sigma
    if tol is None:
        tol = default_rank_tol(A, sigma)
    return int(np.count_nonzero(sigma > tol))


def lp_norm(x, p: float, tol: float = 0.0) -> float:
    """
    General l_p norm.

    p = inf gives max |x_i|; p = 0 gives the count of entries with |x_i| > tol
    (a pseudonorm). For 0 < p < 1 the value is returned although it is not a norm.
    """
    x = as_vector(x, operation="lp_norm")
    if np.isnan(p) or p < 0:
        raise DomainError(f"p must be nonnegative or infinity, got {p}", operation="lp_norm")
    mag = np.abs(x)
    if p == 0:
        return float(np.count_nonzero(mag > tol))
    if np.isinf(p):
        return float(mag.max())
    # scale by the max entry so large p does not overflow
    top = mag.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((mag / top) ** p) ** (1.0 / p))


def build_dft_matrix(n: int) -> np.ndarray:
    """Unnormalized DFT matrix W[n, k] = w^(nk), w = exp(-j 2 pi / N)"""
    if n < 1:
        raise DomainError(f"DFT size must be positive, got {n}", operation="build_dft_matrix")
    return scilin.dft(n)


def build_convolution_matrix(h, n_cols: int) -> np.ndarray:
    """(len(h) + n_cols - 1) x n_cols Toeplitz matrix for full linear convolution"""
    h = as_vector(h, name="h", operation="build_convolution_matrix")
    if n_cols < 1:
        raise DomainError(f"n_cols must be positive, got {n_cols}", operation="build_convolution_matrix")
    return scilin.convolution_matrix(h, n_cols, mode="full")


def build_circulant(h) -> np.ndarray:
    """N x N circulant: column 0 is h, each next column shifted down cyclically"""
    h = as_vector(h, name="h", operation="build_circulant")
    return scilin.circulant(h)


def cyclic_convolve(h, x) -> np.ndarray:
    """Direct cyclic convolution y[n] = sum_m h[m] x[(n - m) mod N]"""
    h = as_vector(h, name="h", operation="cyclic_convolve")
    x = as_vector(x, name="x", operation="cyclic_convolve")
    if h.size != x.size:
        raise ShapeError(f"lengths differ: {h.size} vs {x.size}", operation="cyclic_convolve")
    n = h.size
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return (x[idx] * h[None, :]).sum(axis=1)


def circulant_eigen_check(h) -> CirculantDiagonalization:
    """
    Diagonalize the circulant of h with the DFT basis.

    The eigenvalues are W h. V holds the basis vectors exp(+j 2 pi n k / N) as
    columns (conj(W)), so V^-1 = W / N and V^-1 C V should equal diag(W h).
    """
    h = as_vector(h, name="h", operation="circulant_eigen_check")
    n = h.size
    W = build_dft_matrix(n)
    C = build_circulant(h)
    eigenvalues = W @ h
    V = W.conj()
    V_inv = W / n
    residual = frobenius_norm(V_inv @ C @ V - np.diag(eigenvalues))
    logger.debug(f"circulant N={n}: diagonalization residual {residual:.3e}")
    return CirculantDiagonalization(eigenvalues=eigenvalues, residual=residual)
