"""
Bases, dual bases, frames and tight frames

Frame vectors are the columns of the synthesis matrix S (d x n). Analysis is
S^H x, synthesis is S c.
"""
import logging
from typing import Optional, Union

import numpy as np
import scipy.linalg as scilin

from lpsolve.errors import DomainError, NotAFrameError, ShapeError, SingularityError
from lpsolve.matcore import as_matrix, as_vector, build_dft_matrix, default_rank_tol, hermitian, svd
from lpsolve.models import FrameReport, FrameSystem, ParsevalReport

logger = logging.getLogger(__name__)

# entries of the rounded Mercedes frame carry three decimals
MERCEDES_TOL = 1e-3

FrameLike = Union[FrameSystem, np.ndarray, list]


def _frame(F: FrameLike) -> FrameSystem:
    if isinstance(F, FrameSystem):
        return F
    return FrameSystem(synthesis=as_matrix(F, name="frame", operation="frames"))


def frame_bounds(F: FrameLike, tight_tol: Optional[float] = None) -> FrameReport:
    """Frame bounds as the extreme eigenvalues of S S^H; tight_tol defaults to the frame's own"""
    F = _frame(F)
    if tight_tol is None:
        tight_tol = F.tight_tol
    S = F.synthesis
    sigma = svd(S).sigma
    if F.n < F.d or sigma.size < F.d or sigma[-1] <= default_rank_tol(S, sigma):
        raise NotAFrameError(f"{F.n} vectors do not span a {F.d}-dimensional space", lower=0.0, operation="frame_bounds")

    upper = float(sigma[0] ** 2)
    lower = float(sigma[F.d - 1] ** 2)
    tight = (upper - lower) <= tight_tol * upper
    norms = np.linalg.norm(S, axis=0)
    unit_norm = bool(np.all(np.abs(norms - 1.0) <= tight_tol))
    if unit_norm:
        redundancy = F.n / F.d
    elif tight:
        redundancy = lower
    else:
        redundancy = F.n / F.d
    return FrameReport(
        lower=lower,
        upper=upper,
        tight=tight,
        redundancy=redundancy,
        is_orthobasis=tight and abs(lower - 1.0) <= tight_tol and F.n == F.d,
    )


def dual_basis(F) -> np.ndarray:
    """Rows of F^-1 are the dual basis vectors"""
    F = as_matrix(F, name="basis", operation="dual_basis")
    if F.shape[0] != F.shape[1]:
        raise ShapeError(f"basis matrix must be square, got {F.shape[0]}x{F.shape[1]}", operation="dual_basis")
    try:
        return scilin.inv(F)
    except scilin.LinAlgError as e:
        raise SingularityError("basis vectors are linearly dependent", operation="dual_basis") from e


def dual_frame(F: FrameLike) -> np.ndarray:
    """Canonical dual S+ (n x d); S @ dual_frame(F) = I"""
    F = _frame(F)
    frame_bounds(F)
    S = F.synthesis
    # S has full row rank, so S+ = S^H [S S^H]^-1
    c = scilin.cho_factor(S @ hermitian(S))
    return hermitian(scilin.cho_solve(c, S))


def augmented_dual_frame(F: FrameLike, extra_rows) -> np.ndarray:
    """
    Dual frame from the augmentation construction.

    extra_rows (n - d rows of length n) are stacked under S, the square result
    is inverted and its first d columns returned. Different extra rows give
    different duals.
    """
    F = _frame(F)
    extra = as_matrix(extra_rows, name="extra_rows", operation="augmented_dual_frame")
    if extra.shape != (F.n - F.d, F.n):
        raise ShapeError(
            f"need {F.n - F.d}x{F.n} extra rows, got {extra.shape[0]}x{extra.shape[1]}",
            operation="augmented_dual_frame",
        )
    square = np.vstack([F.synthesis, extra])
    try:
        inverse = scilin.inv(square)
    except scilin.LinAlgError as e:
        raise SingularityError("augmented matrix is singular; pick independent rows", operation="augmented_dual_frame") from e
    return inverse[:, : F.d]


def analyze(F: FrameLike, x) -> np.ndarray:
    """Coefficients c_k = (f_k, x)"""
    F = _frame(F)
    x = as_vector(x, operation="analyze")
    if x.size != F.d:
        raise ShapeError(f"signal has length {x.size}, frame dimension is {F.d}", operation="analyze")
    return hermitian(F.synthesis) @ x


def synthesize(F: FrameLike, c) -> np.ndarray:
    """Weighted sum of frame vectors"""
    F = _frame(F)
    c = as_vector(c, name="c", operation="synthesize")
    if c.size != F.n:
        raise ShapeError(f"{c.size} coefficients for {F.n} frame vectors", operation="synthesize")
    return F.synthesis @ c


def parseval_check(F: FrameLike, x) -> ParsevalReport:
    """Coefficient energy over signal energy; the frame bound for tight frames, N for the DFT"""
    F = _frame(F)
    x = as_vector(x, operation="parseval_check")
    energy_signal = float(np.vdot(x, x).real)
    if energy_signal == 0:
        raise DomainError("signal energy is zero, the constant is undefined", operation="parseval_check")
    c = analyze(F, x)
    energy_coeffs = float(np.vdot(c, c).real)
    return ParsevalReport(
        energy_signal=energy_signal,
        energy_coeffs=energy_coeffs,
        constant=energy_coeffs / energy_signal,
    )


def mercedes_frame() -> FrameSystem:
    """Three unit vectors 120 degrees apart, entries rounded to three places"""
    return FrameSystem(synthesis=[[1.0, -0.5, -0.5], [0.0, 0.866, -0.866]], tight_tol=MERCEDES_TOL)


def equiangular_frame(n_vectors: int, rotation: float = 0.0) -> FrameSystem:
    """n unit vectors in the plane at angles rotation + 2 pi k / n"""
    if n_vectors < 2:
        raise DomainError(f"need at least 2 vectors to span the plane, got {n_vectors}", operation="equiangular_frame")
    angles = rotation + 2 * np.pi * np.arange(n_vectors) / n_vectors
    return FrameSystem(synthesis=np.vstack([np.cos(angles), np.sin(angles)]))


def rotate_frame(F: FrameLike, angle: float) -> FrameSystem:
    F = _frame(F)
    if F.d != 2:
        raise ShapeError(f"rotation is defined for planar frames, got d={F.d}", operation="rotate_frame")
    c, s = np.cos(angle), np.sin(angle)
    return FrameSystem(synthesis=np.array([[c, -s], [s, c]]) @ F.synthesis, tight_tol=F.tight_tol)


def dft_frame(n: int) -> FrameSystem:
    """Unnormalized DFT: analysis with this frame is W x"""
    return FrameSystem(synthesis=hermitian(build_dft_matrix(n)))


def tight_reconstruct(F: FrameLike, x, tight_tol: Optional[float] = None, bound: Optional[float] = None) -> np.ndarray:
    """x = (1/A) S S^H x for a tight frame with bound A"""
    F = _frame(F)
    if bound is None:
        report = frame_bounds(F, tight_tol=tight_tol)
        if not report.tight:
            raise DomainError(
                f"frame is not tight (bounds {report.lower:.6g}, {report.upper:.6g})",
                operation="tight_reconstruct",
            )
        bound = report.lower
    return synthesize(F, analyze(F, x)) / bound
