"""
Operator construction from input/output experiments (A X = B)
"""
import logging
from typing import Union

import numpy as np
import scipy.linalg as scilin

from lpsolve.errors import IndependenceError, ShapeError
from lpsolve.matcore import EPS, as_matrix, build_circulant, frobenius_norm, rank
from lpsolve.models import ExperimentSet, OperatorFit
from lpsolve.pinv import pinv

logger = logging.getLogger(__name__)

Experiments = Union[ExperimentSet, tuple]


def _experiments(E: Experiments) -> ExperimentSet:
    if isinstance(E, ExperimentSet):
        return E
    inputs, outputs = E
    inputs = as_matrix(inputs, name="inputs", operation="opfit")
    outputs = as_matrix(outputs, name="outputs", operation="opfit")
    if inputs.shape[1] != outputs.shape[1]:
        raise ShapeError(
            f"{inputs.shape[1]} input columns but {outputs.shape[1]} output columns",
            operation="opfit",
        )
    return ExperimentSet(inputs=inputs, outputs=outputs)


def fit_operator_exact(E: Experiments) -> np.ndarray:
    """A = B X^-1 for N independent experiments"""
    E = _experiments(E)
    X, B = E.inputs, E.outputs
    n, p = X.shape
    if p != n:
        raise ShapeError(
            f"exact fit needs {n} experiments for {n} inputs, got {p}; use fit_operator_ls",
            operation="fit_operator_exact",
        )
    cond = np.linalg.cond(X)
    if not np.isfinite(cond) or cond >= 1.0 / EPS:
        raise IndependenceError("experiment inputs are linearly dependent", operation="fit_operator_exact")
    try:
        # A X = B  <=>  X^T A^T = B^T
        return scilin.solve(X.T, B.T).T
    except scilin.LinAlgError as e:
        raise IndependenceError("experiment inputs are linearly dependent", operation="fit_operator_exact") from e


def fit_operator_ls(E: Experiments) -> OperatorFit:
    """
    A = B X+, minimizing ||A X - B||_F.

    With fewer experiments than inputs, or dependent inputs, this is the
    minimum Frobenius norm operator and the result is flagged rank deficient.
    """
    E = _experiments(E)
    X, B = E.inputs, E.outputs
    n = X.shape[0]
    r = rank(X)
    A = B @ pinv(X)
    deficient = r < n
    if deficient:
        logger.warning(f"fit_operator_ls: inputs have rank {r} < {n}, operator is not unique")
    return OperatorFit(
        operator=A,
        rank=r,
        rank_deficient=deficient,
        residual_norm=frobenius_norm(A @ X - B),
    )


def linear_regression(E: Experiments) -> np.ndarray:
    """Weights w with w^T x_k ~ b_k, the least squares solution of X^T w = b"""
    E = _experiments(E)
    if E.outputs.shape[0] != 1:
        raise ShapeError(
            f"regression needs scalar responses, outputs have {E.outputs.shape[0]} rows",
            operation="linear_regression",
        )
    return fit_operator_ls(E).operator.ravel()


def project_circulant(A) -> np.ndarray:
    """Nearest circulant in the Frobenius sense: average along cyclic diagonals"""
    A = as_matrix(A, operation="project_circulant")
    n, m = A.shape
    if n != m:
        raise ShapeError(f"circulant projection needs a square matrix, got {n}x{m}", operation="project_circulant")
    rows = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    cols = np.broadcast_to(np.arange(n)[None, :], (n, n))
    # column 0 of a circulant: c[k] = A[(i + k) mod n, i] for every i
    c = A[rows, cols].mean(axis=1)
    return build_circulant(c)
