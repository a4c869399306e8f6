"""
Moore-Penrose pseudoinverse engine
"""
import logging
from typing import Optional, Union

import numpy as np
import scipy.linalg as scilin
from pydantic import ValidationError

from lpsolve.config import settings
from lpsolve.errors import DomainError, ShapeError, SingularityError
from lpsolve.matcore import (
    as_matrix,
    as_vector,
    default_rank_tol,
    frobenius_norm,
    hermitian,
    rank,
    relative_residual,
    svd,
)
from lpsolve.models import (
    CaseLabel,
    PenroseReport,
    Solution,
    WeightMatrix,
    case_code_for,
)

logger = logging.getLogger(__name__)

SPAN_TOL = 1e-10
PENROSE_TOL = 1e-8
LIMIT_AGREEMENT_TOL = 1e-8

Weights = Union[WeightMatrix, np.ndarray, list]


def _cholesky(G: np.ndarray, operation: str, what: str):
    try:
        return scilin.cho_factor(G, lower=False, check_finite=False)
    except scilin.LinAlgError as e:
        raise SingularityError(f"{what} is singular; use pinv for rank-deficient systems", operation=operation) from e


def _weights(W: Weights, size: int, operation: str) -> WeightMatrix:
    if not isinstance(W, WeightMatrix):
        try:
            W = WeightMatrix(diag=np.asarray(W, dtype=np.float64).ravel())
        except ValidationError as e:
            raise DomainError(e.errors()[0]["msg"], operation=operation) from e
    if W.diag.size != size:
        raise ShapeError(f"expected {size} weights, got {W.diag.size}", operation=operation)
    return W


def svd_pinv(A, tol: Optional[float] = None) -> np.ndarray:
    """A+ = V diag(1/sigma_i for sigma_i > tol, else 0) U^H"""
    A = as_matrix(A, operation="pinv")
    s = svd(A)
    cutoff = default_rank_tol(A, s.sigma) if tol is None else tol
    keep = s.sigma > cutoff
    inv = np.zeros_like(s.sigma)
    np.divide(1.0, s.sigma, out=inv, where=keep)
    return (s.V * inv) @ hermitian(s.U)


def analytical_pinv(A) -> np.ndarray:
    """Inverse, over-specified or under-specified formula chosen by shape"""
    A = as_matrix(A, operation="pinv")
    m, n = A.shape
    Ah = hermitian(A)
    if m == n:
        try:
            return scilin.solve(A, np.eye(n, dtype=A.dtype))
        except scilin.LinAlgError as e:
            raise SingularityError("square matrix is singular", operation="pinv") from e
    if m > n:
        # [A^H A]^-1 A^H
        c = _cholesky(Ah @ A, "pinv", "A^H A")
        return scilin.cho_solve(c, Ah)
    # A^H [A A^H]^-1, using the Hermitian symmetry of A A^H
    c = _cholesky(A @ Ah, "pinv", "A A^H")
    return hermitian(scilin.cho_solve(c, A))


def pinv(A, tol: Optional[float] = None) -> np.ndarray:
    """
    Moore-Penrose pseudoinverse.

    Full-rank matrices use the closed-form solution for their shape; everything
    else goes through the SVD with singular values at or below tol treated as zero.
    """
    A = as_matrix(A, operation="pinv")
    m, n = A.shape
    sigma = svd(A).sigma
    cutoff = default_rank_tol(A, sigma) if tol is None else tol
    r = int(np.count_nonzero(sigma > cutoff))

    if r == min(m, n):
        try:
            logger.debug(f"pinv {m}x{n}: full rank, analytical path")
            return analytical_pinv(A)
        except SingularityError:
            logger.warning(f"pinv {m}x{n}: normal matrix numerically singular, using SVD")

    logger.debug(f"pinv {m}x{n}: rank {r}, SVD path")
    return svd_pinv(A, cutoff)


def limit_pinv(A, delta: Optional[float] = None) -> np.ndarray:
    """
    [A^H A + delta^2 I]^-1 A^H, checked against A^H [A A^H + delta^2 I]^-1.

    delta defaults to LPSOLVE_DELTA.
    """
    if delta is None:
        delta = settings.DELTA
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}", operation="limit_pinv")
    A = as_matrix(A, operation="limit_pinv")
    m, n = A.shape
    Ah = hermitian(A)
    d2 = delta * delta
    try:
        left = scilin.solve(Ah @ A + d2 * np.eye(n), Ah, assume_a="pos")
        right = hermitian(scilin.solve(A @ Ah + d2 * np.eye(m), A, assume_a="pos"))
    except scilin.LinAlgError as e:
        raise SingularityError(f"regularized matrix is singular: {e}", operation="limit_pinv") from e

    gap = frobenius_norm(left - right)
    if gap > LIMIT_AGREEMENT_TOL * max(1.0, frobenius_norm(left)):
        logger.warning(f"limit_pinv: left and right forms differ by {gap:.3e} at delta={delta}")
    return left


def verify_penrose(A, Aplus, tol: float = PENROSE_TOL) -> PenroseReport:
    """Relative residuals of the four Penrose conditions"""
    A = as_matrix(A, operation="verify_penrose")
    Aplus = as_matrix(Aplus, name="Aplus", operation="verify_penrose")
    m, n = A.shape
    if Aplus.shape != (n, m):
        raise ShapeError(
            f"candidate must be {n}x{m} for a {m}x{n} matrix, got {Aplus.shape[0]}x{Aplus.shape[1]}",
            operation="verify_penrose",
        )
    P = A @ Aplus
    Q = Aplus @ A
    residuals = [
        relative_residual(P @ A, A),
        relative_residual(Q @ Aplus, Aplus),
        relative_residual(hermitian(P), P),
        relative_residual(hermitian(Q), Q),
    ]
    return PenroseReport(residuals=residuals, tol=tol, passed=all(r <= tol for r in residuals))


def classify_case(A, b, tol: Optional[float] = None, rank_tol: Optional[float] = None) -> CaseLabel:
    """Assign one of the ten shape / rank / span cases"""
    A = as_matrix(A, operation="classify_case")
    b = as_vector(b, name="b", operation="classify_case")
    m, n = A.shape
    if b.size != m:
        raise ShapeError(f"b has length {b.size}, A has {m} rows", operation="classify_case")
    tol = SPAN_TOL if tol is None else tol

    r = rank(A, rank_tol)
    if r == m:
        # full row rank: the columns span everything
        b_in_span = True
    else:
        projected = A @ (pinv(A, rank_tol) @ b)
        b_in_span = bool(np.linalg.norm(projected - b) <= tol * max(1.0, np.linalg.norm(b)))

    return CaseLabel(code=case_code_for(m, n, r, b_in_span), m=m, n=n, r=r, b_in_span=b_in_span)


def solve_normal_equations(A, b) -> np.ndarray:
    """x = [A^H A]^-1 A^H b for full column rank A"""
    A = as_matrix(A, operation="solve_normal_equations")
    b = as_vector(b, name="b", operation="solve_normal_equations")
    m, n = A.shape
    if b.size != m:
        raise ShapeError(f"b has length {b.size}, A has {m} rows", operation="solve_normal_equations")
    if rank(A) < n:
        raise SingularityError(
            "A^H A is singular (rank-deficient columns); use pinv instead",
            operation="solve_normal_equations",
        )
    Ah = hermitian(A)
    c = _cholesky(Ah @ A, "solve_normal_equations", "A^H A")
    return scilin.cho_solve(c, Ah @ b)


def weighted_pinv_over(A, W: Weights) -> np.ndarray:
    """Weighted error pseudoinverse [A^H W^H W A]^-1 A^H W^H W"""
    A = as_matrix(A, operation="weighted_pinv_over")
    m, n = A.shape
    w = _weights(W, m, "weighted_pinv_over").diag
    WA = w[:, None] * A
    if rank(WA) < n:
        raise SingularityError("weighted normal matrix A^H W^H W A is singular", operation="weighted_pinv_over")
    WAh = hermitian(WA)
    c = _cholesky(WAh @ WA, "weighted_pinv_over", "A^H W^H W A")
    return scilin.cho_solve(c, WAh * w[None, :])


def weighted_pinv_under(A, W: Weights) -> np.ndarray:
    """Weighted norm pseudoinverse [W^H W]^-1 A^H [A [W^H W]^-1 A^H]^-1"""
    A = as_matrix(A, operation="weighted_pinv_under")
    m, n = A.shape
    W = _weights(W, n, "weighted_pinv_under")
    if not W.strictly_positive:
        raise DomainError("weights must be strictly positive: W^H W is inverted", operation="weighted_pinv_under")
    if rank(A) < m:
        raise SingularityError("A does not have full row rank", operation="weighted_pinv_under")
    winv2 = 1.0 / (W.diag * W.diag)
    AD = A * winv2[None, :]
    c = _cholesky(AD @ hermitian(A), "weighted_pinv_under", "A [W^H W]^-1 A^H")
    return hermitian(scilin.cho_solve(c, AD))


def general_solution(A, b, y, tol: Optional[float] = None) -> np.ndarray:
    """x = A+ b + (I - A+ A) y; y = 0 gives the minimum-norm solution"""
    A = as_matrix(A, operation="general_solution")
    b = as_vector(b, name="b", operation="general_solution")
    y = as_vector(y, name="y", operation="general_solution")
    m, n = A.shape
    if b.size != m:
        raise ShapeError(f"b has length {b.size}, A has {m} rows", operation="general_solution")
    if y.size != n:
        raise ShapeError(f"y has length {y.size}, A has {n} columns", operation="general_solution")
    Aplus = pinv(A, tol)
    return Aplus @ b + y - Aplus @ (A @ y)


def pinv_solve(A, b, tol: Optional[float] = None, span_tol: Optional[float] = None) -> Solution:
    """Minimum-norm least squares solution with its case label"""
    A = as_matrix(A, operation="solve")
    b = as_vector(b, name="b", operation="solve")
    case = classify_case(A, b, tol=span_tol, rank_tol=tol)
    x = pinv(A, tol) @ b
    return Solution(x=x, case=case, residual_norm=float(np.linalg.norm(A @ x - b)))
