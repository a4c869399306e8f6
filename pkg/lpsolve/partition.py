"""
Mixed known/unknown solver for F X = Y

Rows of F are reordered so the K unknown entries of Y come first and columns so
the K known entries of X come first. The reordered system is split as

    [Y1]   [A  B] [X1]
    [Y2] = [C  D] [X2]

with X1 and Y2 given, and solved by eliminating X2 through D.
"""
import logging
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg as scilin

from lpsolve.errors import DomainError, RecoveryError, ShapeError, SingularityError, SpecError
from lpsolve.matcore import EPS, as_matrix, as_vector, build_dft_matrix
from lpsolve.models import PartitionedSystem, PartitionSolution, PartitionSpec, SparseRecovery

logger = logging.getLogger(__name__)

# reduced systems with a larger condition number are treated as singular
SINGULAR_COND = 1.0 / EPS
RECOVERY_COND = 1e12

SCHUR = "schur"
SUBSYSTEM = "subsystem"


def partition_spec(n: int, known_x_idx: Sequence[int], known_y_idx: Sequence[int]) -> PartitionSpec:
    return PartitionSpec(n=n, known_x_idx=list(known_x_idx), known_y_idx=list(known_y_idx))


def _complement(n: int, idx: Sequence[int]) -> List[int]:
    taken = set(int(i) for i in idx)
    return [i for i in range(n) if i not in taken]


def partition(F, spec: PartitionSpec) -> PartitionedSystem:
    """Reorder F and read off the A, B, C, D blocks"""
    F = as_matrix(F, name="F", operation="partition")
    if F.shape != (spec.n, spec.n):
        raise ShapeError(f"F must be {spec.n}x{spec.n}, got {F.shape[0]}x{F.shape[1]}", operation="partition")
    k = spec.k
    row_perm = spec.unknown_y_idx + spec.known_y_idx
    col_perm = spec.known_x_idx + spec.unknown_x_idx
    R = F[np.ix_(row_perm, col_perm)]
    return PartitionedSystem(
        Abl=R[:k, :k],
        Bbl=R[:k, k:],
        Cbl=R[k:, :k],
        Dbl=R[k:, k:],
        row_perm=row_perm,
        col_perm=col_perm,
    )


def _condition(M: np.ndarray) -> float:
    if M.size == 0:
        return 1.0
    return float(np.linalg.cond(M))


def _solve_block(D: np.ndarray, rhs: np.ndarray, operation: str, limit: float = SINGULAR_COND) -> np.ndarray:
    """D^-1 rhs, rejecting singular D"""
    if D.size == 0:
        return np.zeros((0,) + rhs.shape[1:], dtype=np.result_type(D, rhs))
    cond = _condition(D)
    if not np.isfinite(cond) or cond >= limit:
        raise SingularityError(
            f"D block singular (condition {cond:.3e}): elimination needs a nonsingular D",
            operation=operation,
        )
    try:
        lu = scilin.lu_factor(D, check_finite=False)
    except scilin.LinAlgError as e:
        raise SingularityError(f"D block singular: {e}", operation=operation) from e
    return scilin.lu_solve(lu, rhs, check_finite=False)


def partition_solve(F, spec: PartitionSpec, x_known, y_known) -> PartitionSolution:
    """
    Y1 = [A - B D^-1 C] X1 + B D^-1 Y2
    X2 = -D^-1 C X1 + D^-1 Y2
    """
    blocks = partition(F, spec)
    x1 = np.asarray(x_known).ravel()
    y2 = np.asarray(y_known).ravel()
    if x1.size != spec.k:
        raise ShapeError(f"expected {spec.k} known X values, got {x1.size}", operation="partition_solve")
    if y2.size != spec.n - spec.k:
        raise ShapeError(f"expected {spec.n - spec.k} known Y values, got {y2.size}", operation="partition_solve")

    rhs = y2 - blocks.Cbl @ x1
    x2 = _solve_block(blocks.Dbl, rhs, "partition_solve")
    y1 = blocks.Abl @ x1 + blocks.Bbl @ x2
    logger.debug(f"partition_solve n={spec.n} K={spec.k}")
    return PartitionSolution(y_unknown=y1, x_unknown=x2)


def _recovery_inputs(samples, sample_idx, other_idx, n: int, operation: str) -> Tuple[np.ndarray, PartitionSpec]:
    samples = as_vector(samples, name="samples", operation=operation)
    if not (samples.size == len(sample_idx) == len(other_idx)):
        raise ShapeError(
            f"{samples.size} samples, {len(sample_idx)} sample indices and {len(other_idx)} "
            f"spectral indices must agree",
            operation=operation,
        )
    if samples.size > n:
        raise ShapeError(f"K={samples.size} exceeds n={n}", operation=operation)
    spec = partition_spec(n, sample_idx, _complement(n, other_idx))
    return samples, spec


def sparse_dft_recover_detailed(samples, sample_idx, support_idx, n: int, method: str = SCHUR) -> SparseRecovery:
    """
    Spectrum of a K-sparse signal from K time samples.

    schur eliminates through D and applies the K x K reduced operator;
    subsystem solves the K x K sampled inverse DFT directly.
    """
    if len(set(support_idx)) != len(support_idx) or any(not 0 <= i < n for i in support_idx):
        raise SpecError("support indices must be distinct and in range", operation="sparse_dft_recover")
    samples, spec = _recovery_inputs(samples, sample_idx, support_idx, n, "sparse_dft_recover")
    # order samples to match the sorted index list
    order = np.argsort(np.asarray(sample_idx), kind="stable")
    x1 = samples[order]
    support = sorted(int(i) for i in support_idx)
    k = len(support)
    W = build_dft_matrix(n)

    if method == SCHUR:
        blocks = partition(W, spec)
        try:
            DinvC = _solve_block(blocks.Dbl, blocks.Cbl, "sparse_dft_recover", limit=RECOVERY_COND)
        except SingularityError as e:
            raise RecoveryError(e.message, operation="sparse_dft_recover") from e
        reduced = blocks.Abl - blocks.Bbl @ DinvC
        y_support = reduced @ x1
        condition = _condition(blocks.Dbl)
    elif method == SUBSYSTEM:
        G = W.conj()[np.ix_(spec.known_x_idx, support)] / n
        condition = _condition(G)
        if not np.isfinite(condition) or condition >= RECOVERY_COND:
            raise RecoveryError(f"sampled subsystem singular (condition {condition:.3e})", operation="sparse_dft_recover")
        reduced = G
        y_support = scilin.solve(G, x1)
    else:
        raise DomainError(f"unknown recovery method {method!r}", operation="sparse_dft_recover")

    spectrum = np.zeros(n, dtype=np.complex128)
    spectrum[support] = y_support
    logger.debug(f"sparse_dft_recover n={n} K={k} method={method} cond={condition:.3e}")
    return SparseRecovery(spectrum=spectrum, reduced_shape=reduced.shape, method=method, condition=condition)


def sparse_dft_recover(samples, sample_idx, support_idx, n: int) -> np.ndarray:
    return sparse_dft_recover_detailed(samples, sample_idx, support_idx, n).spectrum


def bandlimited_reconstruct(samples, sample_idx, band_idx, n: int) -> np.ndarray:
    """Full signal from K samples when its DFT vanishes off band_idx"""
    samples, spec = _recovery_inputs(samples, sample_idx, band_idx, n, "bandlimited_reconstruct")
    order = np.argsort(np.asarray(sample_idx), kind="stable")
    x1 = samples[order]
    blocks = partition(build_dft_matrix(n), spec)
    try:
        x2 = -_solve_block(blocks.Dbl, blocks.Cbl @ x1, "bandlimited_reconstruct", limit=RECOVERY_COND)
    except SingularityError as e:
        raise RecoveryError(e.message, operation="bandlimited_reconstruct") from e

    X = np.zeros(n, dtype=np.complex128)
    X[spec.known_x_idx] = x1
    X[spec.unknown_x_idx] = x2
    if not np.iscomplexobj(samples) and np.allclose(X.imag, 0.0, atol=1e-12 * max(1.0, np.abs(X).max())):
        # real samples of a real band-limited signal stay real
        return X.real
    return X
