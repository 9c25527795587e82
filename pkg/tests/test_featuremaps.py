"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import logging
import math

import numpy as np
import pytest
import scipy.special

from quadfeatures.easy import build_anova_feature_map
from quadfeatures.exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesEmbeddingError, QuadFeaturesParseError
)
from quadfeatures.featuremaps import (
    AnovaFeatureMap, FeatureMap, anova_compose, approx_kernel, embed,
    embed_grid_fast, fast_path_available, feature_map_from_json,
    inverse_normal_cdf, load_feature_map, qmc_halton, rff
)
from quadfeatures.grids import dense_grid
from quadfeatures.harness import unit_displacements
from quadfeatures.kernels import AnovaKernel, GaussianKernel
from .fixtures import anova_kernel, rng, small_dense, small_sparse  # noqa


def test_inverse_normal_cdf_matches_scipy():
    p = np.concatenate([
        np.logspace(-12, -1, 40),
        np.linspace(0.05, 0.95, 91),
        1.0 - np.logspace(-8, -1, 30),
    ])
    assert np.allclose(inverse_normal_cdf(p), scipy.special.ndtri(p), rtol=1e-12, atol=1e-8)
    assert inverse_normal_cdf([0.5])[0] == 0.0


@pytest.mark.parametrize('p', [0.0, 1.0, -0.5, 1.5])
def test_inverse_normal_cdf_rejects_probabilities(p):
    with pytest.raises(QuadFeaturesArgumentError):
        inverse_normal_cdf([0.5, p])


def test_feature_map_frequencies(small_dense):
    fm = FeatureMap(small_dense, 'dense', gamma=2.0)
    assert np.allclose(fm.frequencies, 2.0 * small_dense.points, rtol=0, atol=1e-15)
    assert fm.d == 2
    assert fm.D == 9
    assert fm.feature_length == 18
    assert fm.distinct_values() == [3, 3]
    assert repr(fm) == '<FeatureMap method=dense d=2 D=9 gamma=2.0>'
    with pytest.raises(ValueError):
        fm.frequencies[0, 0] = 1.0


def test_feature_map_rejects_unknown_method(small_dense):
    with pytest.raises(QuadFeaturesArgumentError):
        FeatureMap(small_dense, 'gauss')


def test_feature_map_json(tmp_path, small_sparse):
    fm = FeatureMap(small_sparse, 'sparse', gamma=0.3)
    path = str(tmp_path / 'map.json')
    fm.save(path)

    loaded = load_feature_map(path)
    assert isinstance(loaded, FeatureMap)
    assert loaded.method == 'sparse'
    assert loaded.gamma == 0.3
    assert np.array_equal(loaded.frequencies, fm.frequencies)
    assert np.array_equal(loaded.weights, fm.weights)


def test_feature_map_json_without_method(small_dense):
    document = small_dense.to_json()
    with pytest.raises(QuadFeaturesParseError):
        feature_map_from_json(document)


def test_approx_kernel_of_dense_map_is_accurate():
    kernel = GaussianKernel(0.5)
    fm = FeatureMap(dense_grid(12, 2), 'dense')
    U = unit_displacements(2, 300, seed=0)
    assert np.max(np.abs(fm.approx_displacements(U) - kernel.displacement(U))) < 1e-12


def test_approx_kernel_single_pair(small_dense):
    fm = FeatureMap(small_dense, 'dense')
    x, y = np.array([0.1, 0.2]), np.array([-0.3, 0.5])
    value = approx_kernel(fm, x, y)
    assert isinstance(value, float)
    assert abs(value - fm.approx_displacements(x - y)) < 1e-15


def test_embedding_inner_products_reproduce_kernel():
    fm = FeatureMap(dense_grid(5, 3), 'dense', gamma=0.3)
    X = rng(21).standard_normal((100, 3))

    features = embed(fm, X)
    assert features.shape == (100, 2 * fm.D)

    gram = features.dot(features.T)
    rows, columns = np.triu_indices(100)
    expected = fm.approx_kernel(X[rows], X[columns])
    assert np.max(np.abs(gram[rows, columns] - expected)) <= 1e-10


def test_fast_embedding_matches_embed():
    fm = FeatureMap(dense_grid(6, 3), 'dense', gamma=0.7)
    X = rng(22).standard_normal((100, 3))

    assert fast_path_available(fm)
    assert np.max(np.abs(embed_grid_fast(fm, X) - fm.embed(X))) <= 1e-12
    assert np.max(np.abs(embed_grid_fast(fm, X[0]) - fm.embed(X[0]))) <= 1e-12


def test_fast_embedding_falls_back_with_warning(caplog):
    fm = rff(2, 100, seed=1)
    X = rng(23).standard_normal((10, 2))

    assert not fast_path_available(fm)
    with caplog.at_level(logging.WARNING, logger='quadfeatures.featuremaps'):
        features = embed_grid_fast(fm, X)

    assert np.array_equal(features, fm.embed(X))
    assert 'fast embedding unavailable' in caplog.text


def test_signed_rules_cannot_be_embedded(small_sparse):
    fm = FeatureMap(small_sparse, 'sparse')
    X = rng(24).standard_normal((5, 3))

    with pytest.raises(QuadFeaturesEmbeddingError):
        fm.embed(X)
    with pytest.raises(QuadFeaturesEmbeddingError):
        embed_grid_fast(fm, X)

    assert np.all(np.isfinite(fm.approx_kernel(X, X[::-1])))


def test_rff_is_deterministic():
    first = rff(3, 50, seed=1)
    second = rff(3, 50, seed=1)
    other = rff(3, 50, seed=2)

    assert np.array_equal(first.frequencies, second.frequencies)
    assert not np.array_equal(first.frequencies, other.frequencies)
    assert np.all(first.weights == 1.0 / 50)
    assert first.grid.provenance == 'rff(D=50, d=3, seed=1)'


def test_rff_is_unbiased():
    # E[cos(omega . u)] = exp(-|u|^2 / 2) at gamma = 1/2 and |u| = 1
    u = np.array([0.6, 0.0, -0.8])
    estimates = np.array([rff(3, 10, seed=seed).approx_displacements(u) for seed in range(400)])
    error = estimates.std(ddof=1) / math.sqrt(len(estimates))
    assert abs(estimates.mean() - math.exp(-0.5)) <= 3 * error


def test_rff_rejects_sizes():
    with pytest.raises(QuadFeaturesArgumentError):
        rff(0, 10)
    with pytest.raises(QuadFeaturesArgumentError):
        rff(2, 2.5)


def test_qmc_halton_is_deterministic():
    fm = qmc_halton(2, 16)
    # Index 1 of the Halton sequence in bases 2 and 3
    assert fm.grid.points[0, 0] == 0.0
    assert abs(fm.grid.points[0, 1] - scipy.special.ndtri(1.0 / 3.0)) < 1e-12
    assert np.array_equal(fm.frequencies, qmc_halton(2, 16).frequencies)
    assert np.all(fm.weights == 1.0 / 16)


def test_qmc_halton_dimension_limit():
    with pytest.raises(QuadFeaturesArgumentError):
        qmc_halton(1001, 10)


def test_anova_map_matches_kernel(anova_kernel):
    fm = build_anova_feature_map(anova_kernel, 'dense', L=12)
    assert isinstance(fm, AnovaFeatureMap)
    assert fm.D == 2 * 12 ** 2

    U = unit_displacements(4, 500, seed=3)
    composite = np.abs(fm.approx_displacements(U) - anova_kernel.displacement(U))
    assert composite.max() <= 1e-8

    base = anova_kernel.base
    parts = np.zeros(len(U))
    for index, sub_map in enumerate(fm.sub_maps):
        block = U[:, anova_kernel.columns(index)]
        parts += np.abs(sub_map.approx_displacements(block) - base.displacement(block))
    assert np.all(composite <= parts + 1e-15)


def test_anova_map_embedding(anova_kernel):
    fm = build_anova_feature_map(anova_kernel, 'dense', L=4)
    X = rng(25).standard_normal((30, 4))

    features = fm.embed(X)
    assert features.shape == (30, fm.feature_length)
    rows, columns = np.triu_indices(30)
    gram = features.dot(features.T)
    assert np.max(np.abs(gram[rows, columns] - fm.approx_kernel(X[rows], X[columns]))) <= 1e-10

    assert fast_path_available(fm)
    assert np.max(np.abs(embed_grid_fast(fm, X) - features)) <= 1e-12


def test_anova_compose_counts(anova_kernel):
    calls = []

    def constructor(size, D):
        calls.append((size, D))
        return rff(size, D, seed=len(calls))

    fm = anova_compose(anova_kernel, constructor, 7)
    assert calls == [(2, 7), (2, 7)]
    assert fm.D == 14
    assert fm.nonnegative


def test_anova_map_rejects_mismatched_sub_maps(anova_kernel):
    with pytest.raises(QuadFeaturesArgumentError):
        AnovaFeatureMap(anova_kernel, [rff(2, 5)])
    with pytest.raises(QuadFeaturesArgumentError):
        AnovaFeatureMap(anova_kernel, [rff(2, 5), rff(3, 5)])


def test_anova_map_json(tmp_path, anova_kernel):
    fm = build_anova_feature_map(anova_kernel, 'sparse', level=1)
    path = str(tmp_path / 'anova_map.json')
    fm.save(path)

    loaded = load_feature_map(path)
    assert isinstance(loaded, AnovaFeatureMap)
    assert loaded.subsets == anova_kernel.subsets
    assert not loaded.nonnegative
    X = rng(26).standard_normal((5, 4))
    assert np.array_equal(loaded.approx_kernel(X, X[::-1]), fm.approx_kernel(X, X[::-1]))


def test_anova_map_with_other_base_kernel():
    k = AnovaKernel([[1], [2, 3]], GaussianKernel(1.5))
    fm = build_anova_feature_map(k, 'dense', L=8)
    assert fm.gamma == 1.5
    U = 0.3 * unit_displacements(3, 50, seed=4)
    assert np.max(np.abs(fm.approx_displacements(U) - k.displacement(U))) < 1e-6
