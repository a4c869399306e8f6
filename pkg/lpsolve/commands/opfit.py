"""
Operator fitting and regression commands
"""
import logging

from lpsolve.commands import CommandRouter, meta
from lpsolve.matrix_io import matrix_files
from lpsolve.models import CommandConfig, CommandName, CommandOutput, ExperimentSet
from lpsolve.opfit import fit_operator_ls, linear_regression

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(CommandName.FIT_OP)
def fit_op_command(config: CommandConfig) -> CommandOutput:
    """Operator A with A X ~ B; inputs are X then B"""
    experiments = ExperimentSet(
        inputs=matrix_files.parse_matrix(config.inputs[0]),
        outputs=matrix_files.parse_matrix(config.inputs[1]),
    )
    fit = fit_operator_ls(experiments)
    return CommandOutput(
        result=fit.operator,
        meta=meta(rank=fit.rank, rank_deficient=fit.rank_deficient, residual_norm=fit.residual_norm),
    )


@router.command(CommandName.REGRESS)
def regress_command(config: CommandConfig) -> CommandOutput:
    """Regression weights; inputs are the feature matrix (one column per experiment) and the responses"""
    experiments = ExperimentSet(
        inputs=matrix_files.parse_matrix(config.inputs[0]),
        outputs=matrix_files.parse_vector(config.inputs[1]).reshape(1, -1),
    )
    return CommandOutput(result=linear_regression(experiments), meta=meta(experiments=experiments.num_experiments))
