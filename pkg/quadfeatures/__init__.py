"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import logging

from .bounds import BoundInputs, counts, poly_bound, sparse_bound, subgaussian_parameter  # noqa
from .easy import build_anova_feature_map, build_feature_map  # noqa
from .exceptions import (  # noqa
    QuadFeaturesError, QuadFeaturesArgumentError, QuadFeaturesSizeError,
    QuadFeaturesContractError, QuadFeaturesConvergenceError,
    QuadFeaturesConstructionError, QuadFeaturesEmbeddingError,
    QuadFeaturesParseError, QuadFeaturesConfigError
)
from .featuremaps import (  # noqa
    AnovaFeatureMap, FeatureMap, anova_compose, approx_kernel, embed,
    embed_grid_fast, load_feature_map, qmc_halton, rff
)
from .grids import (  # noqa
    GridQuadrature, MultiIndex, dense_grid, exactness_residual, sparse_grid,
    sample_dense_grid, subsample_dense_grid, subsample_grid
)
from .harness import (  # noqa
    Dataset, ErrorReport, SweepConfig, load_csv, max_error_empirical,
    rms_error, sample_pairs, sweep
)
from .kernels import AnovaKernel, GaussianKernel, anova_stats, eval_anova, eval_gaussian  # noqa
from .quad1d import QuadratureRule1D, SymTriDiag, gauss_hermite, integrate_1d, sym_tridiag_eigen  # noqa
from .solvers import NnlsSolution, bisect_lambda, construct_poly_exact, nnls, reweight  # noqa

version = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
