"""
Frame analysis command
"""
import logging

from lpsolve.commands import CommandRouter, meta
from lpsolve.frames import dual_frame, frame_bounds, parseval_check
from lpsolve.matrix_io import matrix_files
from lpsolve.models import CommandConfig, CommandName, CommandOutput, FrameSystem

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(CommandName.FRAME)
def frame_command(config: CommandConfig) -> CommandOutput:
    """
    Frame bounds [lower, upper] of the columns of the input matrix

    An optional second input is a signal whose Parseval constant is reported.
    """
    F = FrameSystem(synthesis=matrix_files.parse_matrix(config.inputs[0]))
    # without --tol the frame's default relative gap applies
    report = frame_bounds(F, tight_tol=config.tol)

    extra = {
        "tight": report.tight,
        "redundancy": report.redundancy,
        "is_orthobasis": report.is_orthobasis,
        "dual": dual_frame(F),
    }
    if len(config.inputs) > 1:
        parseval = parseval_check(F, matrix_files.parse_vector(config.inputs[1]))
        extra["parseval_constant"] = parseval.constant
        extra["energy_signal"] = parseval.energy_signal
        extra["energy_coeffs"] = parseval.energy_coeffs

    return CommandOutput(result=[report.lower, report.upper], meta=meta(**extra))
