"""
Batch command line front end
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from lpsolve import __version__
from lpsolve.commands import CommandRouter
from lpsolve.commands import frames, irls, opfit, partition, solve
from lpsolve.config import settings
from lpsolve.errors import LpSolveError, UsageError
from lpsolve.matrix_io import matrix_files
from lpsolve.models import CommandConfig, CommandName, IrlsMode, OutputFormat

logger = logging.getLogger(__name__)

router = CommandRouter()
router.include_router(solve.router)
router.include_router(irls.router)
router.include_router(frames.router)
router.include_router(partition.router)
router.include_router(opfit.router)

COMMAND_HELP = {
    CommandName.PINV: "pseudoinverse of A",
    CommandName.CLASSIFY: "case label of A x = b",
    CommandName.SOLVE: "minimum-norm least squares solution",
    CommandName.IRLS: "L_p approximation by iterative reweighted least squares",
    CommandName.MINIMAX: "Chebyshev (minimax) approximation",
    CommandName.SPARSE: "sparse exact solution of a wide system",
    CommandName.FRAME: "frame bounds, redundancy and dual frame",
    CommandName.PARTITION: "solve F X = Y with mixed known entries",
    CommandName.SPARSE_DFT: "spectrum of a sparse signal from samples",
    CommandName.SAMPLE_RECOVER: "band-limited signal from samples",
    CommandName.FIT_OP: "operator from input/output experiments",
    CommandName.REGRESS: "linear regression weights",
    CommandName.PENROSE_CHECK: "verify a candidate pseudoinverse",
}


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message, operation=self.prog.split()[-1])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="input CSV or JSON files")
    common.add_argument("--p", type=float, help="target exponent")
    common.add_argument(
        "--iters",
        type=int,
        help="number of iterations (default LPSOLVE_IRLS_MAX_ITERS; p near 1 needs more, about 60 for p=1.1)",
    )
    common.add_argument("--homotopy", type=float, help="homotopy factor applied to pk")
    common.add_argument("--tol", type=float, help="tolerance (default LPSOLVE_TOL)")
    common.add_argument("--delta", type=float, help="regularization for the limit pseudoinverse")
    common.add_argument("--weights", help="vector file of diagonal weights")
    common.add_argument("--mode", choices=[m.value for m in IrlsMode], default=IrlsMode.OVER.value)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--trace", help="write the per-iteration trace CSV here")

    parser = _Parser(prog="lpsolve", description="Pseudoinverses, L_p approximation, frames and partitioned solves")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name in CommandName:
        sub.add_parser(name.value, parents=[common], help=COMMAND_HELP[name])
    return parser


def parse_config(argv: Optional[List[str]] = None) -> CommandConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required")
    try:
        return CommandConfig(
            command=args.command,
            inputs=args.inputs,
            p=args.p,
            iters=args.iters,
            homotopy=args.homotopy,
            tol=args.tol,
            delta=args.delta,
            weights=args.weights,
            mode=args.mode,
            out=args.out,
            format=args.format or settings.get_output_format(),
            trace=args.trace,
        )
    except ValidationError as e:
        raise UsageError(f"invalid arguments: {e.errors()[0]['msg']}", operation=args.command) from e


def run(config: CommandConfig) -> int:
    """Execute one command; returns the process exit status"""
    logger.info(f"Running {config.command.value} on {config.inputs}")
    try:
        output = router.dispatch(config)
        matrix_files.write_output(output, config.format, config.out)
    except LpSolveError as e:
        logger.error(f"{config.command.value} failed: {e.diagnostic()}")
        print(e.diagnostic(), file=sys.stderr)
        return e.exit_code
    logger.info(f"Finished {config.command.value}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except LpSolveError as e:
        print(e.diagnostic(), file=sys.stderr)
        return e.exit_code
    return run(config)
