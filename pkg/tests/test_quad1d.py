"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import math

import numpy as np
import pytest

from quadfeatures.exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesConvergenceError
)
from quadfeatures.quad1d import (
    MAX_HERMITE_POINTS, QuadratureRule1D, SymTriDiag, gauss_hermite,
    gauss_rule_from_recurrence, integrate_1d, sym_tridiag_eigen
)
from .fixtures import rng
from .helpers import hermite_rule, normal_moment, sturm_eigenvalues


def test_sym_tridiag_rejects_bad_shapes():
    with pytest.raises(QuadFeaturesArgumentError):
        SymTriDiag([], [])
    with pytest.raises(QuadFeaturesArgumentError):
        SymTriDiag([1.0, 2.0], [1.0, 1.0])
    with pytest.raises(QuadFeaturesArgumentError):
        SymTriDiag([1.0, np.nan], [1.0])


def test_sym_tridiag_is_read_only():
    m = SymTriDiag([1.0, 2.0], [0.5])
    with pytest.raises(ValueError):
        m.diagonal[0] = 3.0


def test_eigen_single_entry():
    values, first = sym_tridiag_eigen(SymTriDiag([3.5], []))
    assert values.tolist() == [3.5]
    assert first.tolist() == [1.0]


def test_eigen_two_by_two():
    values, _ = sym_tridiag_eigen(SymTriDiag([0.0, 0.0], [1.0]))
    assert np.allclose(values, [-1.0, 1.0], atol=1e-14)


def test_eigen_two_by_two_first_components():
    _, first = sym_tridiag_eigen(SymTriDiag([0.0, 0.0], [1.0]))
    assert np.allclose(np.abs(first), 1.0 / math.sqrt(2.0), atol=1e-14)
    assert abs(np.sum(first ** 2) - 1.0) < 1e-14


@pytest.mark.parametrize('n', [3, 8, 25, 60])
def test_eigen_matches_sturm_bisection(n):
    generator = rng(n)
    diagonal = generator.standard_normal(n)
    off_diagonal = generator.standard_normal(n - 1)

    values, _ = sym_tridiag_eigen(SymTriDiag(diagonal, off_diagonal))

    reference = sturm_eigenvalues(diagonal, off_diagonal)
    assert np.all(np.diff(values) >= 0)
    assert np.max(np.abs(values - reference)) < 1e-10


@pytest.mark.parametrize('n', [5, 30])
def test_eigen_vectors_satisfy_definition(n):
    generator = rng(n + 1)
    m = SymTriDiag(generator.standard_normal(n), generator.uniform(0.1, 1.0, n - 1))

    values, vectors = sym_tridiag_eigen(m, vectors=True)

    dense = m.to_dense()
    assert np.max(np.abs(dense.dot(vectors) - vectors * values)) < 1e-11
    assert np.allclose(vectors.T.dot(vectors), np.eye(n), atol=1e-12)


def test_eigen_first_components_match_full_vectors():
    m = SymTriDiag([1.0, -2.0, 0.5, 4.0], [0.3, 1.1, 0.7])
    _, first = sym_tridiag_eigen(m)
    _, vectors = sym_tridiag_eigen(m, vectors=True)
    assert np.allclose(first, vectors[0], atol=1e-14)


def test_eigen_already_diagonal():
    values, first = sym_tridiag_eigen(SymTriDiag([3.0, 1.0, 2.0], [0.0, 0.0]))
    assert values.tolist() == [1.0, 2.0, 3.0]
    assert sorted(np.abs(first).tolist()) == [0.0, 0.0, 1.0]


def test_eigen_budget_exhausted():
    m = SymTriDiag(np.zeros(10), np.ones(9))
    with pytest.raises(QuadFeaturesConvergenceError) as excinfo:
        sym_tridiag_eigen(m, max_iter=1)
    assert excinfo.value.iterations == 1


def test_eigen_rejects_non_positive_tol():
    with pytest.raises(QuadFeaturesArgumentError):
        sym_tridiag_eigen(SymTriDiag([1.0], []), tol=0.0)


def test_rule_rejects_invalid_weights():
    with pytest.raises(QuadFeaturesArgumentError):
        QuadratureRule1D([0.0, 1.0], [0.5])
    with pytest.raises(QuadFeaturesArgumentError):
        QuadratureRule1D([1.0, 0.0], [0.5, 0.5])
    with pytest.raises(QuadFeaturesArgumentError):
        QuadratureRule1D([0.0, 1.0], [1.5, -0.5])
    with pytest.raises(QuadFeaturesArgumentError):
        QuadratureRule1D([0.0, 1.0], [0.4, 0.4])


def test_gauss_hermite_small_rules():
    one = gauss_hermite(1)
    assert one.nodes.tolist() == [0.0]
    assert one.weights.tolist() == [1.0]

    two = gauss_hermite(2)
    assert np.allclose(two.nodes, [-1.0, 1.0], atol=1e-14)
    assert np.allclose(two.weights, [0.5, 0.5], atol=1e-14)

    three = gauss_hermite(3)
    assert np.allclose(three.nodes, [-math.sqrt(3.0), 0.0, math.sqrt(3.0)], atol=1e-14)
    assert np.allclose(three.weights, [1.0 / 6, 2.0 / 3, 1.0 / 6], atol=1e-14)


@pytest.mark.parametrize('L', [4, 11, 20, 40])
def test_gauss_hermite_matches_numpy(L):
    rule = gauss_hermite(L)
    nodes, weights = hermite_rule(L)
    assert np.allclose(rule.nodes, nodes, rtol=0, atol=1e-12)
    assert np.allclose(rule.weights, weights, rtol=1e-9, atol=0)


@pytest.mark.parametrize('L', [2, 7, 50, 200])
def test_gauss_hermite_is_symmetric(L):
    rule = gauss_hermite(L)
    assert np.array_equal(rule.nodes, -rule.nodes[::-1])
    assert np.array_equal(rule.weights, rule.weights[::-1])
    assert rule.weights.min() > 0
    assert abs(rule.weights.sum() - 1.0) < 1e-14
    if L % 2:
        assert rule.nodes[L // 2] == 0.0


def test_gauss_hermite_exact_to_degree_2L_minus_1():
    for L in range(1, 21):
        rule = gauss_hermite(L)
        for p in range(2 * L):
            terms = rule.weights * rule.nodes ** p
            estimate = terms.sum()
            if p % 2:
                assert abs(estimate) <= 1e-9 * np.abs(terms).sum()
            else:
                assert abs(estimate - normal_moment(p)) <= 1e-9 * normal_moment(p)

        p = 2 * L
        estimate = float((rule.weights * rule.nodes ** p).sum())
        assert abs(estimate - normal_moment(p)) > 1e-6 * normal_moment(p)


def test_gauss_hermite_is_cached():
    assert gauss_hermite(9) is gauss_hermite(9)


@pytest.mark.parametrize('L', [0, -1, MAX_HERMITE_POINTS + 1, 2.5, True, 'x'])
def test_gauss_hermite_rejects_out_of_range(L):
    with pytest.raises((QuadFeaturesArgumentError, ValueError)):
        gauss_hermite(L)


def test_rule_from_recurrence_legendre():
    # Monic Legendre on [-1, 1] with mass 2: beta_k = k^2 / (4 k^2 - 1)
    L = 5
    k = np.arange(1, L, dtype=np.float64)
    beta = np.concatenate([[2.0], k * k / (4 * k * k - 1)])

    nodes, weights = gauss_rule_from_recurrence(np.zeros(L), beta)

    expected_nodes, expected_weights = np.polynomial.legendre.leggauss(L)
    assert np.allclose(nodes, expected_nodes, atol=1e-13)
    assert np.allclose(weights, expected_weights / 2.0, atol=1e-13)


def test_rule_from_recurrence_rejects_bad_coefficients():
    with pytest.raises(QuadFeaturesArgumentError):
        gauss_rule_from_recurrence([0.0, 0.0], [1.0])
    with pytest.raises(QuadFeaturesArgumentError):
        gauss_rule_from_recurrence([0.0, 0.0], [1.0, -1.0])


def test_integrate_1d():
    rule = gauss_hermite(30)
    assert abs(integrate_1d(rule, lambda x: x ** 4) - 3.0) < 1e-12
    # E[cos(w u)] = exp(-u^2 / 2)
    assert abs(integrate_1d(rule, lambda x: math.cos(0.7 * x)) - math.exp(-0.245)) < 1e-14
