"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

One-dimensional Gaussian quadrature for the standard normal density.

Rules are built with the Golub-Welsch construction: the nodes are the
eigenvalues of the Jacobi matrix of the orthogonal polynomial family and
the weights are the squared first components of its unit eigenvectors,
evaluated through the orthonormal recurrence.
"""

import functools
import logging
import math

import numpy as np

from .exceptions import QuadFeaturesArgumentError, QuadFeaturesConvergenceError

logger = logging.getLogger(__name__)

MAX_HERMITE_POINTS = 200
DEFAULT_EIGEN_TOL = 1e-14


class SymTriDiag(object):
    """
    A real symmetric tridiagonal matrix.

    :param diagonal: the n diagonal entries
    :param off_diagonal: the n - 1 entries below (and above) the diagonal
    """

    def __init__(self, diagonal, off_diagonal):
        diagonal = np.array(diagonal, dtype=np.float64).ravel()
        off_diagonal = np.array(off_diagonal, dtype=np.float64).ravel()

        if diagonal.size < 1:
            raise QuadFeaturesArgumentError('a tridiagonal matrix needs n >= 1')
        if off_diagonal.size != diagonal.size - 1:
            raise QuadFeaturesArgumentError(
                'expected {0} off-diagonal entries, got {1}'.format(
                    diagonal.size - 1, off_diagonal.size
                )
            )
        if not (np.all(np.isfinite(diagonal)) and np.all(np.isfinite(off_diagonal))):
            raise QuadFeaturesArgumentError('matrix entries must be finite')

        diagonal.flags.writeable = False
        off_diagonal.flags.writeable = False
        self.diagonal = diagonal
        self.off_diagonal = off_diagonal

    @property
    def n(self):
        return self.diagonal.size

    def norm(self):
        """The infinity norm (maximum absolute row sum)."""
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.off_diagonal)
        row[1:] += np.abs(self.off_diagonal)
        return float(row.max())

    def to_dense(self):
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    def __repr__(self):
        return '<{0} n={1}>'.format(self.__class__.__name__, self.n)


def sym_tridiag_eigen(m, tol=DEFAULT_EIGEN_TOL, vectors=False, max_iter=None):
    """
    Finds all eigenvalues of a symmetric tridiagonal matrix, together with
    the first components of the unit eigenvectors, by the implicit QL
    method with Wilkinson-style shifts.

    :param m: a SymTriDiag
    :param tol: relative tolerance used to split off converged eigenvalues
    :param vectors: return the full eigenvector matrix instead of only the
                    first components
    :param max_iter: the total QL iteration budget (defaults to 100 * n)
    :return: a tuple of the ascending eigenvalues and either the first
             eigenvector components or, with vectors=True, the matrix whose
             columns are the eigenvectors
    :raises QuadFeaturesConvergenceError: if the budget is exhausted
    """

    if tol <= 0:
        raise QuadFeaturesArgumentError('tol must be positive, got {0}'.format(tol))

    n = m.n
    d = np.array(m.diagonal, dtype=np.float64)
    e = np.zeros(n, dtype=np.float64)
    e[:n - 1] = m.off_diagonal

    # Only the rows of the rotation product we need are accumulated
    z = np.eye(n)[:(n if vectors else 1)].copy()

    anorm = m.norm()
    eps = np.finfo(np.float64).eps
    budget = max_iter if max_iter is not None else 100 * n
    iterations = 0

    for l in range(n):
        while True:
            # Look for a small subdiagonal element to split the matrix
            k = l
            while k < n - 1:
                dd = abs(d[k]) + abs(d[k + 1])
                if abs(e[k]) <= tol * dd or abs(e[k]) <= eps * anorm:
                    break
                k += 1
            if k == l:
                break

            iterations += 1
            if iterations > budget:
                raise QuadFeaturesConvergenceError(
                    'implicit QL did not converge after {0} iterations '
                    '(n={1})'.format(iterations - 1, n),
                    iterations=iterations - 1
                )

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[k] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False

            for i in range(k - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # Recover from underflow
                    d[i + 1] -= p
                    e[k] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b

                upper = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * upper
                z[:, i] = c * z[:, i] - s * upper

            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[k] = 0.0

    logger.debug('implicit QL converged: n=%d iterations=%d', n, iterations)

    order = np.argsort(d, kind='stable')
    if vectors:
        return d[order], z[:, order]
    return d[order], z[0, order]


class QuadratureRule1D(object):
    """
    A one-dimensional quadrature rule for a probability density.

    :param nodes: the strictly increasing quadrature nodes
    :param weights: the strictly positive weights, summing to one
    """

    def __init__(self, nodes, weights):
        nodes = np.array(nodes, dtype=np.float64).ravel()
        weights = np.array(weights, dtype=np.float64).ravel()

        if nodes.size < 1 or nodes.size != weights.size:
            raise QuadFeaturesArgumentError(
                'a rule needs matching nodes and weights, got {0} and {1}'.format(
                    nodes.size, weights.size
                )
            )
        if np.any(np.diff(nodes) <= 0):
            raise QuadFeaturesArgumentError('nodes must be strictly increasing')
        if np.any(weights <= 0):
            raise QuadFeaturesArgumentError('weights must be strictly positive')
        if abs(weights.sum() - 1.0) > 1e-12:
            raise QuadFeaturesArgumentError(
                'weights must sum to 1, got {0!r}'.format(weights.sum())
            )

        nodes.flags.writeable = False
        weights.flags.writeable = False
        self.nodes = nodes
        self.weights = weights

    @property
    def point_count(self):
        return self.nodes.size

    def __len__(self):
        return self.nodes.size

    def __repr__(self):
        return '<{0} L={1}>'.format(self.__class__.__name__, self.point_count)


def gauss_rule_from_recurrence(alpha, beta, tol=DEFAULT_EIGEN_TOL):
    """
    Builds the Gauss rule of a density given the three-term recurrence
    p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x) of its monic
    orthogonal polynomials.

    :param alpha: the L recurrence coefficients alpha_0 .. alpha_{L-1}
    :param beta: the L coefficients beta_0 .. beta_{L-1}; beta_0 is the
                 total mass of the density and only rescales the weights
    """

    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if alpha.size != beta.size or alpha.size < 1:
        raise QuadFeaturesArgumentError('alpha and beta must have the same length >= 1')
    if np.any(beta[1:] <= 0):
        raise QuadFeaturesArgumentError('beta_k must be positive for k >= 1')

    off_diagonal = np.sqrt(beta[1:])
    nodes, _ = sym_tridiag_eigen(SymTriDiag(alpha, off_diagonal), tol=tol)
    weights = 1.0 / christoffel_sum(nodes, alpha, off_diagonal)
    return nodes, weights / weights.sum()


def christoffel_sum(x, alpha, off_diagonal):
    """
    Evaluates sum_k q_k(x)^2 over the orthonormal polynomials q_0 .. q_{L-1}
    of the recurrence. At a node, its reciprocal is the squared first
    component of the unit eigenvector, with full relative accuracy even for
    tiny tail weights.

    :param x: the points to evaluate at
    :param alpha: the L diagonal recurrence coefficients
    :param off_diagonal: the L - 1 values sqrt(beta_k), k >= 1
    """
    x = np.asarray(x, dtype=np.float64)
    previous = np.zeros_like(x)
    current = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(len(off_diagonal)):
        lower = off_diagonal[k - 1] if k else 0.0
        upcoming = ((x - alpha[k]) * current - lower * previous) / off_diagonal[k]
        previous, current = current, upcoming
        total += current * current
    return total


@functools.lru_cache(maxsize=None)
def _hermite_rule(L):
    alpha = np.zeros(L)
    beta = np.arange(L, dtype=np.float64)
    beta[0] = 1.0
    nodes, weights = gauss_rule_from_recurrence(alpha, beta)

    # The normal density is symmetric; enforce it exactly on the result
    nodes = 0.5 * (nodes - nodes[::-1])
    if L % 2:
        nodes[L // 2] = 0.0
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / weights.sum()

    logger.debug('built Gauss-Hermite rule with L=%d', L)
    return QuadratureRule1D(nodes, weights)


def gauss_hermite(L):
    """
    The L-point Gauss rule for the standard normal density (probabilists'
    Hermite weight), exact for all polynomials of degree <= 2L - 1.

    :param L: the number of points, 1 <= L <= 200
    :raises QuadFeaturesArgumentError: if L is out of range
    """
    if isinstance(L, bool) or int(L) != L or not 1 <= L <= MAX_HERMITE_POINTS:
        raise QuadFeaturesArgumentError(
            'L must be an integer in 1..{0}, got {1!r}'.format(MAX_HERMITE_POINTS, L)
        )
    return _hermite_rule(int(L))


def integrate_1d(rule, f):
    """
    Applies a rule to a function: sum_l a_l f(w_l).

    :param rule: a QuadratureRule1D
    :param f: a real function of one real variable
    """
    values = np.array([f(float(x)) for x in rule.nodes], dtype=np.float64)
    return float(np.dot(rule.weights, values))
