"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import logging

import numpy as np
import pytest

from quadfeatures.grids import dense_grid, sparse_grid
from quadfeatures.kernels import AnovaKernel, GaussianKernel

# Silence the per-iteration solver chatter
solver_logger = logging.getLogger('quadfeatures.solvers')
solver_logger.setLevel(logging.INFO)


def rng(seed=1234):
    return np.random.default_rng(seed)


@pytest.fixture
def unit_kernel():
    return GaussianKernel(0.5)


@pytest.fixture
def small_dense():
    return dense_grid(3, 2)


@pytest.fixture
def small_sparse():
    return sparse_grid(2, 3)


@pytest.fixture
def anova_kernel():
    return AnovaKernel([[1, 2], [3, 4]], GaussianKernel(0.5), d=4)


@pytest.fixture
def csv_file(tmp_path):
    def write(text, name='data.csv'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write
