"""
IRLS, minimax and sparse solution commands
"""
import logging
from typing import Optional

import numpy as np

from lpsolve.commands import CommandRouter, meta
from lpsolve.config import settings
from lpsolve.irls import MINIMAX_MAX_ITERS, check_minimax_characterization, irls_over, irls_under, minimax_solve, sparse_solve
from lpsolve.matcore import lp_norm
from lpsolve.matrix_io import matrix_files
from lpsolve.models import CommandConfig, CommandName, CommandOutput, IrlsMode, IrlsOptions, IrlsResult

logger = logging.getLogger(__name__)

router = CommandRouter()


def _load_system(config: CommandConfig):
    return matrix_files.parse_matrix(config.inputs[0]), matrix_files.parse_vector(config.inputs[1])


def _options(config: CommandConfig, p: Optional[float] = None, iters: Optional[int] = None) -> IrlsOptions:
    return IrlsOptions(
        p=config.p if config.p is not None else p,
        homotopy_factor=config.homotopy,
        max_iters=config.iters or iters or settings.IRLS_MAX_ITERS,
        weight_floor=settings.IRLS_WEIGHT_FLOOR,
        trace=True,
    )


def _emit_trace(config: CommandConfig, result: IrlsResult):
    if config.trace:
        matrix_files.write_trace(config.trace, result)


def _last_error(result: IrlsResult) -> Optional[float]:
    return result.error_norms[-1] if result.trace else None


@router.command(CommandName.IRLS)
def irls_command(config: CommandConfig) -> CommandOutput:
    """Minimum L_p error (--mode over) or minimum L_p norm (--mode under)"""
    A, b = _load_system(config)
    opts = _options(config)
    if config.mode == IrlsMode.OVER:
        result = irls_over(A, b, opts)
    else:
        result = irls_under(A, b, opts)
    _emit_trace(config, result)
    logger.info(f"irls {config.mode.value}: {result.iterations} iterations, converged={result.converged}")
    return CommandOutput(
        result=result.x,
        meta=meta(
            iterations=result.iterations,
            converged=result.converged,
            mode=config.mode.value,
            p=result.p,
            error_norm=_last_error(result),
        ),
    )


@router.command(CommandName.MINIMAX)
def minimax_command(config: CommandConfig) -> CommandOutput:
    A, b = _load_system(config)
    opts = _options(config, p=settings.MINIMAX_P, iters=MINIMAX_MAX_ITERS)
    result = minimax_solve(A, b, opts)
    _emit_trace(config, result)
    report = check_minimax_characterization(A, b, result.x)
    return CommandOutput(
        result=result.x,
        meta=meta(
            iterations=result.iterations,
            converged=result.converged,
            refined=result.refined,
            p=result.p,
            max_error=report.max_error,
            extremal_indices=report.indices,
            characterization=report.satisfies_characterization,
        ),
    )


@router.command(CommandName.SPARSE)
def sparse_command(config: CommandConfig) -> CommandOutput:
    A, b = _load_system(config)
    result = sparse_solve(A, b, max_iters=config.iters or settings.SPARSE_MAX_ITERS)
    _emit_trace(config, result)
    x = result.x
    threshold = 1e-6 * float(np.abs(x).max())
    return CommandOutput(
        result=x,
        meta=meta(
            iterations=result.iterations,
            converged=result.converged,
            l1_norm=lp_norm(x, 1),
            nonzeros=int(lp_norm(x, 0, tol=threshold)),
        ),
    )
