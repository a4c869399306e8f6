import json

import numpy as np
import pytest

from lpsolve.matrix_io import MatrixFiles


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def files():
    return MatrixFiles(precision=17)


@pytest.fixture
def write_csv(tmp_path, files):
    """Write a matrix (or vector, as one column) and return its path"""
    counter = {"n": 0}

    def _write(values, name=None):
        counter["n"] += 1
        path = tmp_path / (name or f"m{counter['n']}.csv")
        path.write_text(files.format_matrix(np.asarray(values)))
        return str(path)

    return _write


@pytest.fixture
def write_json(tmp_path):
    def _write(payload, name="request.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return _write


def random_rank_matrix(rng, m, n, r):
    """m x n real matrix of rank exactly r"""
    if r == 0:
        return np.zeros((m, n))
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
