"""
Partitioned solve, sparse DFT recovery and band-limited sampling commands
"""
import logging

import numpy as np

from lpsolve.commands import CommandRouter, meta
from lpsolve.matrix_io import matrix_files
from lpsolve.models import (
    CommandConfig,
    CommandName,
    CommandOutput,
    PartitionRequest,
    SampleRecoverRequest,
    SparseDftRequest,
    complex_values,
)
from lpsolve.partition import bandlimited_reconstruct, partition_solve, partition_spec, sparse_dft_recover_detailed

logger = logging.getLogger(__name__)

router = CommandRouter()


def _maybe_real(values: np.ndarray) -> np.ndarray:
    return values.real.copy() if np.all(values.imag == 0) else values


@router.command(CommandName.PARTITION)
def partition_command(config: CommandConfig) -> CommandOutput:
    """Columns X and Y of the completed system F X = Y"""
    F = matrix_files.parse_matrix(config.inputs[0])
    request = matrix_files.load_request(config.inputs[1], PartitionRequest)
    spec = partition_spec(request.n, request.known_x_idx, request.known_y_idx)

    # values follow the order of the index lists in the request
    x_known = _maybe_real(complex_values(request.x_known))[np.argsort(request.known_x_idx, kind="stable")]
    y_known = _maybe_real(complex_values(request.y_known))[np.argsort(request.known_y_idx, kind="stable")]
    solution = partition_solve(F, spec, x_known, y_known)
    X, Y = solution.assemble(spec, x_known, y_known)
    return CommandOutput(result=np.column_stack([X, Y]), meta=meta(n=spec.n, k=spec.k))


@router.command(CommandName.SPARSE_DFT)
def sparse_dft_command(config: CommandConfig) -> CommandOutput:
    request = matrix_files.load_request(config.inputs[0], SparseDftRequest)
    recovery = sparse_dft_recover_detailed(
        complex_values(request.samples),
        request.sample_idx,
        request.support_idx,
        request.n,
    )
    return CommandOutput(
        result=recovery.spectrum,
        meta=meta(
            method=recovery.method,
            reduced_shape=list(recovery.reduced_shape),
            condition=recovery.condition,
        ),
    )


@router.command(CommandName.SAMPLE_RECOVER)
def sample_recover_command(config: CommandConfig) -> CommandOutput:
    request = matrix_files.load_request(config.inputs[0], SampleRecoverRequest)
    signal = bandlimited_reconstruct(
        _maybe_real(complex_values(request.samples)),
        request.sample_idx,
        request.band_idx,
        request.n,
    )
    return CommandOutput(result=signal, meta=meta(n=request.n, k=len(request.band_idx)))
