"""
Pseudoinverse, case classification and Penrose check commands
"""
import logging

import numpy as np

from lpsolve.commands import CommandRouter, meta, span_tol
from lpsolve.config import settings
from lpsolve.matcore import rank
from lpsolve.matrix_io import matrix_files
from lpsolve.models import CommandConfig, CommandName, CommandOutput, IrlsMode
from lpsolve.pinv import (
    classify_case,
    limit_pinv,
    pinv,
    pinv_solve,
    verify_penrose,
    weighted_pinv_over,
    weighted_pinv_under,
)

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(CommandName.PINV)
def pinv_command(config: CommandConfig) -> CommandOutput:
    """A+ by the analytical or SVD path, or the limit formula when --delta is given"""
    A = matrix_files.parse_matrix(config.inputs[0])
    if config.delta is not None:
        Aplus = limit_pinv(A, config.delta)
        method = "limit"
    else:
        Aplus = pinv(A, settings.RANK_TOL)
        method = "pinv"
    return CommandOutput(
        result=Aplus,
        meta=meta(method=method, rank=rank(A, settings.RANK_TOL), delta=config.delta),
    )


@router.command(CommandName.CLASSIFY)
def classify_command(config: CommandConfig) -> CommandOutput:
    A = matrix_files.parse_matrix(config.inputs[0])
    b = matrix_files.parse_vector(config.inputs[1])
    label = classify_case(A, b, tol=span_tol(config), rank_tol=settings.RANK_TOL)
    return CommandOutput(
        result=label.code.value,
        meta=meta(
            case=label.code.value,
            m=label.m,
            n=label.n,
            r=label.r,
            b_in_span=label.b_in_span,
            description=label.description,
        ),
    )


@router.command(CommandName.SOLVE)
def solve_command(config: CommandConfig) -> CommandOutput:
    """
    Minimum-norm least squares solution.

    With --weights the weighted pseudoinverse is used: error weights (one per
    equation) with --mode over, norm weights (one per unknown) with --mode under.
    """
    A = matrix_files.parse_matrix(config.inputs[0])
    b = matrix_files.parse_vector(config.inputs[1])
    if config.weights is None:
        solution = pinv_solve(A, b, tol=settings.RANK_TOL, span_tol=span_tol(config))
        x, case = solution.x, solution.case
    else:
        w = matrix_files.parse_vector(config.weights)
        case = classify_case(A, b, tol=span_tol(config), rank_tol=settings.RANK_TOL)
        if config.mode == IrlsMode.OVER:
            x = weighted_pinv_over(A, w) @ b
        else:
            x = weighted_pinv_under(A, w) @ b
    residual = float(np.linalg.norm(A @ x - b))
    return CommandOutput(
        result=x,
        meta=meta(
            case=case.code.value,
            residual_norm=residual,
            weighted=config.weights is not None,
        ),
    )


@router.command(CommandName.PENROSE_CHECK)
def penrose_check_command(config: CommandConfig) -> CommandOutput:
    """Residuals of the four conditions; a failed check is a result, not an error"""
    A = matrix_files.parse_matrix(config.inputs[0])
    candidate = matrix_files.parse_matrix(config.inputs[1])
    tol = config.tol if config.tol is not None else settings.PENROSE_TOL
    report = verify_penrose(A, candidate, tol=tol)
    if not report.passed:
        logger.info(f"penrose-check failed: residuals {report.residuals}")
    return CommandOutput(
        result=report.residuals,
        meta=meta(passed=report.passed, tol=tol),
    )
