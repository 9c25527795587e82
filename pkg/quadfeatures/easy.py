"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import itertools
import logging

from .exceptions import QuadFeaturesArgumentError
from .featuremaps import FeatureMap, METHODS, anova_compose, qmc_halton, rff
from .grids import (
    DEFAULT_POINT_CAP, dense_grid, sample_dense_grid, sparse_grid
)
from .helpers import child_seed
from .kernels import UNIT_GAMMA, GaussianKernel
from .solvers import (
    DEFAULT_POOL_FACTOR, bisect_lambda, candidate_pool, construct_poly_exact,
    reweight
)

logger = logging.getLogger(__name__)

# Points per coordinate of dense grids and of the grids that subsampled and
# reweighted rules draw from; 11 points make a degree-21 exact rule
DEFAULT_L = 11
DEFAULT_LEVEL = 2
DEFAULT_DEGREE = 2


def normalize_method(method):
    """Maps a CLI spelling such as 'poly-exact' to its tag 'poly_exact'."""
    tag = str(method).replace('-', '_')
    if tag not in METHODS:
        raise QuadFeaturesArgumentError(
            'unknown method {0!r}, expected one of {1}'.format(
                method, ', '.join(m.replace('_', '-') for m in METHODS)
            )
        )
    return tag


def _require_D(method, D):
    if D is None:
        raise QuadFeaturesArgumentError('method {0} needs D'.format(method))
    return D


def build_feature_map(method, d, D=None, gamma=UNIT_GAMMA, seed=0, L=DEFAULT_L,
                      level=DEFAULT_LEVEL, degree=DEFAULT_DEGREE, pairs=None,
                      lam=None, target_D=None, pool_factor=DEFAULT_POOL_FACTOR,
                      cap=DEFAULT_POINT_CAP):
    """
    Build a feature map for the Gaussian kernel of bandwidth gamma with the
    named construction.

    :param method: one of rff, qmc, dense, sparse, subsampled, poly-exact
                   or reweighted (underscores are accepted too)
    :param d: the input dimension
    :param D: the number of frequencies (rff, qmc), draws (subsampled) or
              candidate points (poly-exact); the default target size for
              reweighted
    :param gamma: the kernel bandwidth
    :param seed: the master seed of randomised constructions
    :param L: points per coordinate of the dense grid (dense, subsampled,
              reweighted)
    :param level: the sparse-grid level A
    :param degree: the exactness degree R of poly-exact
    :param pairs: data pairs for reweighted, see helpers.as_pairs
    :param lam: a fixed l1 coefficient for reweighted; when omitted lambda
                is bisected until at most target_D points remain
    :param target_D: the reweighted support size (defaults to D)
    :param pool_factor: candidate pool size relative to target_D
    :param cap: the largest dense grid that is enumerated
    """

    method = normalize_method(method)

    if method == 'rff':
        return rff(d, _require_D(method, D), gamma, seed)
    if method == 'qmc':
        return qmc_halton(d, _require_D(method, D), gamma)

    if method == 'dense':
        grid = dense_grid(L, d, cap)
    elif method == 'sparse':
        grid = sparse_grid(level, d, cap)
    elif method == 'subsampled':
        grid = sample_dense_grid(L, d, _require_D(method, D), seed, cap)
    elif method == 'poly_exact':
        grid = construct_poly_exact(d, degree, _require_D(method, D), seed)
    else:
        if pairs is None:
            raise QuadFeaturesArgumentError('reweighted features need data pairs')
        target_D = target_D if target_D is not None else _require_D(method, D)
        candidates = candidate_pool(L, d, target_D, pool_factor, seed, cap)
        kernel = GaussianKernel(gamma)
        if lam is not None:
            grid = reweight(candidates, pairs, kernel, lam)
        else:
            lam, grid = bisect_lambda(candidates, pairs, kernel, target_D)
        logger.info('reweighted rule uses lambda=%r', lam)

    return FeatureMap(grid, method, gamma)


def build_anova_feature_map(kernel, method, D_S=None, seed=0, **kwargs):
    """
    Build an ANOVA feature map with one sub-map per subset of the kernel,
    each made by build_feature_map over the subset's coordinates.

    :param kernel: an AnovaKernel; its base bandwidth is used throughout
    :param method: the per-subset construction (reweighted is not supported)
    :param D_S: the per-subset D
    :param seed: the master seed; every subset gets its own child seed
    :param kwargs: further build_feature_map arguments (L, level, degree)
    """

    method = normalize_method(method)
    if method == 'reweighted':
        raise QuadFeaturesArgumentError('reweighted sub-maps are not supported for ANOVA kernels')

    index = itertools.count()

    def constructor(size, D):
        return build_feature_map(
            method, size, D=D, gamma=kernel.gamma, seed=child_seed(seed, next(index)), **kwargs
        )

    return anova_compose(kernel, constructor, D_S if D_S is not None else 1)
