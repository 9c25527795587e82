"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import numpy as np
import pytest

from quadfeatures.easy import (
    build_anova_feature_map, build_feature_map, normalize_method
)
from quadfeatures.exceptions import QuadFeaturesArgumentError
from quadfeatures.featuremaps import AnovaFeatureMap, FeatureMap
from quadfeatures.grids import exactness_residual
from quadfeatures.quad1d import gauss_hermite
from .fixtures import anova_kernel, rng  # noqa


def _pairs(d, n, seed):
    generator = rng(seed)
    return generator.standard_normal((n, d)), generator.standard_normal((n, d))


@pytest.mark.parametrize('method,tag', [
    ('rff', 'rff'), ('poly-exact', 'poly_exact'), ('poly_exact', 'poly_exact'),
    ('reweighted', 'reweighted'),
])
def test_normalize_method(method, tag):
    assert normalize_method(method) == tag


def test_normalize_method_rejects_unknown():
    with pytest.raises(QuadFeaturesArgumentError) as excinfo:
        normalize_method('orf')
    assert 'poly-exact' in str(excinfo.value)


def test_build_rff():
    fm = build_feature_map('rff', 3, D=20, gamma=0.25, seed=4)
    assert isinstance(fm, FeatureMap)
    assert (fm.method, fm.d, fm.D, fm.gamma) == ('rff', 3, 20, 0.25)


@pytest.mark.parametrize('method', ['rff', 'qmc', 'subsampled', 'poly-exact', 'reweighted'])
def test_build_requires_D(method):
    with pytest.raises(QuadFeaturesArgumentError):
        build_feature_map(method, 2, pairs=_pairs(2, 5, seed=0))


def test_build_qmc():
    fm = build_feature_map('qmc', 2, D=8)
    assert fm.method == 'qmc'
    assert np.array_equal(fm.frequencies, build_feature_map('qmc', 2, D=8, seed=99).frequencies)


def test_build_dense():
    fm = build_feature_map('dense', 2, L=3)
    assert fm.D == 9
    assert fm.nonnegative
    assert fm.grid.provenance == 'dense(L=3, d=2)'


def test_build_sparse():
    # Level 1: the origin with weight 1 - d and the points +-e_i with 1/2
    fm = build_feature_map('sparse', 3, level=1)
    assert fm.D == 7
    assert not fm.nonnegative
    assert np.allclose(np.sort(fm.weights), [-2.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_build_subsampled_enumerates_small_grids():
    fm = build_feature_map('subsampled', 2, D=50, L=5, seed=2)
    assert fm.D <= 25
    assert abs(fm.grid.weight_sum - 1.0) < 1e-12
    assert fm.grid.provenance.startswith('subsampled(')


def test_build_subsampled_samples_large_grids():
    fm = build_feature_map('subsampled', 40, D=100, seed=2)
    assert fm.d == 40
    assert np.all(np.isin(fm.grid.points, gauss_hermite(11).nodes))


def test_build_poly_exact():
    fm = build_feature_map('poly-exact', 2, D=100, degree=2, seed=0)
    assert fm.method == 'poly_exact'
    assert fm.nonnegative
    assert exactness_residual(fm.grid, 2) <= 1e-8


def test_build_reweighted_needs_pairs():
    with pytest.raises(QuadFeaturesArgumentError):
        build_feature_map('reweighted', 2, D=10)


def test_build_reweighted_with_fixed_lambda():
    fm = build_feature_map('reweighted', 2, D=10, L=5, pairs=_pairs(2, 40, seed=1), lam=0.0)
    assert fm.method == 'reweighted'
    assert fm.nonnegative
    assert 'lam=0.0' in fm.grid.provenance


def test_build_reweighted_bisects_to_target():
    fm = build_feature_map(
        'reweighted', 2, target_D=5, L=6, pool_factor=8, pairs=_pairs(2, 60, seed=2), seed=3
    )
    assert 0 < fm.D <= 5


def test_build_anova(anova_kernel):
    fm = build_anova_feature_map(anova_kernel, 'rff', D_S=16, seed=5)
    assert isinstance(fm, AnovaFeatureMap)
    assert fm.D == 32
    assert all(sub_map.d == 2 for sub_map in fm.sub_maps)
    # Every subset draws from its own seed
    assert not np.array_equal(fm.sub_maps[0].frequencies, fm.sub_maps[1].frequencies)

    again = build_anova_feature_map(anova_kernel, 'rff', D_S=16, seed=5)
    assert np.array_equal(again.sub_maps[1].frequencies, fm.sub_maps[1].frequencies)


def test_build_anova_rejects_reweighted(anova_kernel):
    with pytest.raises(QuadFeaturesArgumentError):
        build_anova_feature_map(anova_kernel, 'reweighted', D_S=4)
