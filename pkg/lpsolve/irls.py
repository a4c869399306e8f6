"""
Iterative reweighted least squares for L_p approximation

irls_over minimizes ||A x - b||_p for tall systems; irls_under finds the
minimum ||x||_p solution of A x = b for wide systems. Both start from the
pseudoinverse solution with p = 2 and move the working exponent toward the
target by the homotopy factor each iteration.
"""
import logging
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg as scilin

from lpsolve.errors import ShapeError, SingularityError
from lpsolve.matcore import as_matrix, as_vector, hermitian, rank
from lpsolve.models import (
    IrlsMode,
    IrlsOptions,
    IrlsResult,
    IterationRecord,
    MinimaxReport,
    UpdateMode,
)
from lpsolve.pinv import pinv

logger = logging.getLogger(__name__)

MINIMAX_P = 50.0
MINIMAX_MAX_ITERS = 30
SPARSE_P = 1.1
SPARSE_HOMOTOPY = 0.8
SPARSE_MAX_ITERS = 100


def _next_exponent(pk: float, p: float, k: float) -> float:
    if p >= 2:
        return min(p, k * pk)
    return max(p, k * pk)


def _update_factor(opts: IrlsOptions, pk: float, blend: bool) -> float:
    if not blend or opts.update_mode == UpdateMode.FULL:
        return 1.0
    if opts.update_mode == UpdateMode.PARTIAL:
        return opts.update_factor
    return 1.0 / (pk - 1.0)


def _system(A, b, operation: str) -> Tuple[np.ndarray, np.ndarray]:
    A = as_matrix(A, operation=operation)
    b = as_vector(b, name="b", operation=operation)
    if b.size != A.shape[0]:
        raise ShapeError(f"b has length {b.size}, A has {A.shape[0]} rows", operation=operation)
    return A, b


def _weighted_lstsq(A: np.ndarray, b: np.ndarray, w: np.ndarray) -> np.ndarray:
    """argmin ||diag(w) (A x - b)||_2"""
    WA = w[:, None] * A
    try:
        x, _, r, _ = scilin.lstsq(WA, w * b, check_finite=False)
    except scilin.LinAlgError as e:
        raise SingularityError(f"weighted least squares failed: {e}", operation="irls_over") from e
    if r < A.shape[1]:
        logger.warning(f"weighted system has rank {r} < {A.shape[1]}, using its minimum-norm solution")
    return x


def _error_weights(e: np.ndarray, pk: float, floor: float) -> np.ndarray:
    mag = np.abs(e)
    if pk < 2:
        mag = np.maximum(mag, floor)
    top = mag.max()
    if top == 0:
        return np.ones_like(mag)
    w = (mag / top) ** ((pk - 2) / 2)
    total = w.sum()
    if not np.isfinite(total) or total == 0:
        return np.ones_like(mag)
    return w / total


def _finish(x, records: List[IterationRecord], iterations: int, pk: float, opts: IrlsOptions) -> IrlsResult:
    last_step = records[-1].step if records else 0.0
    converged = bool(pk == opts.p and last_step <= opts.convergence_tol)
    return IrlsResult(
        x=x,
        iterations=iterations,
        trace=records if opts.trace else [],
        converged=converged,
        p=opts.p,
    )


def irls_over(A, b, opts: Optional[IrlsOptions] = None) -> IrlsResult:
    """Minimize the L_p equation error of an overdetermined system"""
    A, b = _system(A, b, "irls_over")
    m, n = A.shape
    if m < n:
        raise ShapeError(f"needs at least as many equations as unknowns, got {m}x{n}", operation="irls_over")
    if rank(A) < n:
        raise SingularityError("A does not have full column rank", operation="irls_over")
    opts = (opts or IrlsOptions()).resolved(IrlsMode.OVER)
    p, k = opts.p, opts.homotopy_factor
    norm_order = p if p > 2 else 2

    x = pinv(A) @ b
    pk = 2.0
    records: List[IterationRecord] = []
    iterations = 0
    for it in range(1, opts.max_iters + 1):
        pk = _next_exponent(pk, p, k)
        e = A @ x - b
        w = _error_weights(e, pk, opts.weight_floor)
        x_hat = _weighted_lstsq(A, b, w)
        q = _update_factor(opts, pk, blend=p > 2)
        x_new = q * x_hat + (1 - q) * x

        step = float(np.linalg.norm(x_new - x) / max(np.linalg.norm(x_new), np.finfo(float).tiny))
        x = x_new
        iterations = it
        error_norm = float(np.linalg.norm(A @ x - b, norm_order))
        records.append(IterationRecord(iteration=it, pk=pk, q=q, error_norm=error_norm, step=step))
        logger.debug(f"irls_over it={it} pk={pk:g} q={q:g} E={error_norm:.6e} step={step:.3e}")

        if opts.early_stop and pk == p and step <= opts.stop_tol:
            break

    return _finish(x, records, iterations, pk, opts)


def irls_under(A, b, opts: Optional[IrlsOptions] = None) -> IrlsResult:
    """Minimum L_p norm solution of an underdetermined system"""
    A, b = _system(A, b, "irls_under")
    m, n = A.shape
    if m > n:
        raise ShapeError(f"needs at most as many equations as unknowns, got {m}x{n}", operation="irls_under")
    if rank(A) < m:
        raise SingularityError("A does not have full row rank", operation="irls_under")
    opts = (opts or IrlsOptions()).resolved(IrlsMode.UNDER)
    p, k = opts.p, opts.homotopy_factor
    norm_order = p if p >= 2 else 1

    x = pinv(A) @ b
    pk = 2.0
    records: List[IterationRecord] = []
    iterations = 0
    for it in range(1, opts.max_iters + 1):
        pk = _next_exponent(pk, p, k)
        w = np.abs(x) ** ((2 - pk) / 2) + opts.weight_floor
        AW = A * w[None, :]
        try:
            c = scilin.cho_factor(AW @ hermitian(AW), check_finite=False)
        except scilin.LinAlgError as e:
            raise SingularityError(f"weighted system is singular: {e}", operation="irls_under") from e
        x_hat = w * (hermitian(AW) @ scilin.cho_solve(c, b))
        q = _update_factor(opts, pk, blend=p >= 2)
        x_new = q * x_hat + (1 - q) * x

        step = float(np.linalg.norm(x_new - x) / max(np.linalg.norm(x_new), np.finfo(float).tiny))
        x = x_new
        iterations = it
        error_norm = float(np.linalg.norm(x, norm_order))
        records.append(IterationRecord(iteration=it, pk=pk, q=q, error_norm=error_norm, step=step))
        logger.debug(f"irls_under it={it} pk={pk:g} q={q:g} E={error_norm:.6e} step={step:.3e}")

        if opts.early_stop and pk == p and step <= opts.stop_tol:
            break

    return _finish(x, records, iterations, pk, opts)


def _equal_ripple_refine(A: np.ndarray, b: np.ndarray, x: np.ndarray) -> Optional[np.ndarray]:
    """
    Solve N+1 equation subsystems for equal-magnitude errors.

    Subsets are drawn from the N+3 largest errors with signs taken from the
    current errors. Returns the candidate with the smallest overall maximum
    error, or None when no candidate improves on x.
    """
    if np.iscomplexobj(A) or np.iscomplexobj(b):
        return None
    m, n = A.shape
    e = A @ x - b
    current = np.abs(e).max()
    if m <= n or current <= np.finfo(float).eps * max(1.0, np.abs(b).max()):
        return None
    window = np.argsort(-np.abs(e), kind="stable")[: min(m, n + 3)]
    best, best_error = None, current
    for subset in combinations(sorted(window), n + 1):
        active = list(subset)
        signs = np.sign(e[active])
        signs[signs == 0] = 1.0
        system = np.hstack([A[active], -signs[:, None]])
        try:
            sol = scilin.solve(system, b[active])
        except scilin.LinAlgError:
            continue
        candidate = sol[:n]
        error = np.abs(A @ candidate - b).max()
        if error <= best_error:
            best, best_error = candidate, error
    if best is None:
        logger.warning(f"minimax refinement found no subsystem improving on {current:.6e}")
    return best


def minimax_solve(A, b, opts: Optional[IrlsOptions] = None, refine: bool = True) -> IrlsResult:
    """
    Chebyshev (L_inf) solution via large-p IRLS plus an equal-ripple refinement.

    When the refinement replaces x, refined is set and one more trace record
    describes the returned x; iterations still counts IRLS steps only.
    """
    A, b = _system(A, b, "minimax_solve")
    if opts is None:
        opts = IrlsOptions(p=MINIMAX_P, max_iters=MINIMAX_MAX_ITERS)
    elif opts.p is None:
        opts = opts.model_copy(update={"p": MINIMAX_P})
    result = irls_over(A, b, opts)
    if not refine:
        return result
    refined = _equal_ripple_refine(A, b, result.x)
    if refined is None:
        return result
    step = float(np.linalg.norm(refined - result.x) / max(np.linalg.norm(refined), np.finfo(float).tiny))
    error_norm = float(np.linalg.norm(A @ refined - b, result.p if result.p > 2 else 2))
    logger.debug(f"minimax refinement: E={error_norm:.6e} step={step:.3e}")
    trace = result.trace
    if trace:
        trace = trace + [
            IterationRecord(iteration=result.iterations + 1, pk=result.p, q=1.0, error_norm=error_norm, step=step)
        ]
    return result.model_copy(update={"x": refined, "trace": trace, "refined": True})


def check_minimax_characterization(A, b, x, rel_tol: float = 1e-3) -> MinimaxReport:
    """Count errors within rel_tol of the maximum magnitude; a minimax solution has at least N+1"""
    A, b = _system(A, b, "check_minimax_characterization")
    x = as_vector(x, operation="check_minimax_characterization")
    n = A.shape[1]
    mag = np.abs(A @ x - b)
    top = float(mag.max())
    indices = [int(i) for i in np.flatnonzero(mag >= (1 - rel_tol) * top)]
    return MinimaxReport(
        max_error=top,
        num_max_magnitude_errors=len(indices),
        indices=indices,
        satisfies_characterization=len(indices) >= n + 1,
    )


def sparse_solve(A, b, max_iters: int = SPARSE_MAX_ITERS) -> IrlsResult:
    """Sparse exact solution by minimum-L_1.1 IRLS"""
    opts = IrlsOptions(p=SPARSE_P, homotopy_factor=SPARSE_HOMOTOPY, max_iters=max(10, max_iters))
    return irls_under(A, b, opts)
