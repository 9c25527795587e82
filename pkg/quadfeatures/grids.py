"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Multi-dimensional quadrature point sets for the standard normal spectrum.
"""

import functools
import logging
import math

import numpy as np

from .exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesContractError, QuadFeaturesParseError,
    QuadFeaturesSizeError
)
from .helpers import (
    STREAM_BUILD, count_multi_indices, derive_rng, mixed_normal_moment,
    monomial_terms, multi_indices, term_exponents
)
from .quad1d import MAX_HERMITE_POINTS, gauss_hermite
from .utils import read_json, write_json

logger = logging.getLogger(__name__)

DEFAULT_POINT_CAP = 10 ** 7
DEFAULT_CONSTRAINT_CAP = 10 ** 6

# Coordinates are matched after rounding to this many decimals when merging
MERGE_DECIMALS = 12

# A merged weight is treated as cancelled when it is this small relative to
# the absolute contributions it was summed from
CANCEL_TOL = 1e-14


def provenance(name, **params):
    """Formats a constructor name and its parameters, e.g. 'dense(L=3, d=2)'."""
    args = ', '.join('{0}={1!r}'.format(key, params[key]) for key in sorted(params))
    return '{0}({1})'.format(name, args)


class GridQuadrature(object):
    """
    A multi-dimensional quadrature rule: points omega_i (the rows of
    points) with signed weights a_i.

    Constructors guarantee their own weight sums; the type itself only
    requires a consistent, finite D x d layout. A rule may be empty (D == 0)
    when reweighting discards every point.

    :param points: a (D, d) array
    :param weights: the D weights
    :param provenance: a description of how the rule was built
    """

    def __init__(self, points, weights, provenance=''):
        points = np.array(points, dtype=np.float64)
        weights = np.array(weights, dtype=np.float64).ravel()

        if points.ndim != 2 or points.shape[1] < 1:
            raise QuadFeaturesArgumentError(
                'points must be a (D, d) array with d >= 1, got shape {0}'.format(points.shape)
            )
        if points.shape[0] != weights.size:
            raise QuadFeaturesArgumentError(
                'got {0} points but {1} weights'.format(points.shape[0], weights.size)
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise QuadFeaturesArgumentError('points and weights must be finite')

        points.flags.writeable = False
        weights.flags.writeable = False
        self.points = points
        self.weights = weights
        self.provenance = provenance

    @property
    def d(self):
        return self.points.shape[1]

    @property
    def D(self):
        return self.points.shape[0]

    @property
    def nonnegative(self):
        return bool(self.D == 0 or self.weights.min() >= 0)

    @property
    def weight_sum(self):
        return float(self.weights.sum())

    def __len__(self):
        return self.D

    def scaled(self, factor):
        """The same rule with every point multiplied by factor."""
        return GridQuadrature(self.points * factor, self.weights, self.provenance)

    def to_json(self):
        return {
            'd': self.d,
            'D': self.D,
            'points': self.points.tolist(),
            'weights': self.weights.tolist(),
            'nonnegative': self.nonnegative,
            'provenance': self.provenance,
        }

    @classmethod
    def from_json(cls, document):
        try:
            d = int(document['d'])
            D = int(document['D'])
            points = np.array(document['points'], dtype=np.float64).reshape(D, d)
            weights = document['weights']
        except (KeyError, TypeError, ValueError) as e:
            raise QuadFeaturesParseError('invalid grid document: {0}'.format(e))
        return cls(points, weights, document.get('provenance', ''))

    def save(self, path):
        write_json(path, self.to_json())

    @classmethod
    def load(cls, path):
        return cls.from_json(read_json(path))

    def __repr__(self):
        return (
            "<{0} d={1} D={2} nonnegative={3} provenance='{4}'>".format(
                self.__class__.__name__, self.d, self.D, self.nonnegative,
                self.provenance
            )
        )


class MultiIndex(object):
    """
    A level or exponent vector in N^d.

    :param entries: d non-negative integers
    """

    def __init__(self, entries):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise QuadFeaturesArgumentError(
                'multi-index entries must be non-negative, got {0}'.format(entries)
            )
        self.entries = entries

    @property
    def level(self):
        return sum(self.entries)

    def support(self):
        """The (coordinate, entry) pairs with a non-zero entry."""
        return [(i, e) for i, e in enumerate(self.entries) if e]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return '<{0} entries={1}>'.format(self.__class__.__name__, list(self.entries))


def merge_points(points, weights, decimals=MERGE_DECIMALS, drop_cancelled=False):
    """
    Merges rows that coincide after rounding, summing their weights.

    :param points: an (n, d) array
    :param weights: the n weights
    :param drop_cancelled: remove merged points whose contributions cancel
    :return: a tuple of the unique points (first occurrence kept) and their
             accumulated weights, ordered lexicographically
    """
    if points.shape[0] == 0:
        return points, weights

    keys = np.round(points, decimals) + 0.0
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    merged = np.bincount(inverse, weights=weights)
    merged_points = points[first]

    if drop_cancelled:
        magnitude = np.bincount(inverse, weights=np.abs(weights))
        keep = np.abs(merged) > CANCEL_TOL * magnitude
        logger.debug('dropping %d cancelled points', int((~keep).sum()))
        merged_points, merged = merged_points[keep], merged[keep]

    return merged_points, merged


def _check_dimension(d):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise QuadFeaturesArgumentError('d must be a positive integer, got {0!r}'.format(d))
    return int(d)


def dense_grid(L, d, cap=DEFAULT_POINT_CAP):
    """
    The tensor product of the L-point Gauss-Hermite rule with itself d
    times: L^d points with weights prod_i a_{l_i}.

    :param L: points per coordinate
    :param d: the dimension
    :param cap: the maximum number of points to enumerate
    :raises QuadFeaturesSizeError: if L^d exceeds cap
    """
    d = _check_dimension(d)
    rule = gauss_hermite(L)

    count = rule.point_count ** d
    if count > cap:
        raise QuadFeaturesSizeError(
            'dense grid needs L^d = {0}^{1} = {2} points, cap is {3}'.format(
                rule.point_count, d, count, cap
            ),
            count=count, cap=cap
        )

    # Row-major enumeration of the index tuples, matching the kron order below
    L = rule.point_count
    points = np.empty((count, d))
    for column in range(d):
        points[:, column] = np.tile(np.repeat(rule.nodes, L ** (d - 1 - column)), L ** column)
    weights = functools.reduce(np.kron, [rule.weights] * d)

    logger.info('built dense grid L=%d d=%d D=%d', L, d, count)
    return GridQuadrature(points, weights, provenance('dense', L=L, d=d))


@functools.lru_cache(maxsize=None)
def _difference_rule(level):
    """
    The signed one-dimensional rule G^{2^m} - G^{2^{m-1}} (G^1 at level 0),
    with coincident nodes merged.
    """
    if level == 0:
        rule = gauss_hermite(1)
        return rule.nodes, rule.weights

    fine = gauss_hermite(2 ** level)
    coarse = gauss_hermite(2 ** (level - 1))
    nodes = np.concatenate([fine.nodes, coarse.nodes])
    weights = np.concatenate([fine.weights, -coarse.weights])
    nodes, weights = merge_points(nodes[:, np.newaxis], weights)
    return nodes.ravel(), weights


def _sparse_terms(A, d, cap):
    """Yields the non-zero part of every multi-index with |m| <= A, checking the cap."""
    sizes = [_difference_rule(m)[0].size for m in range(A + 1)]
    total = 0
    for entries in multi_indices(d, A):
        index = MultiIndex(entries)
        support = index.support()
        total += math.prod(sizes[m] for _, m in support)
        if total > cap:
            raise QuadFeaturesSizeError(
                'sparse grid with A={0} d={1} needs more than {2} points'.format(A, d, cap),
                count=total, cap=cap
            )
        yield support


def sparse_grid(A, d, cap=DEFAULT_POINT_CAP):
    """
    The Smolyak sparse grid sum_{|m|_1 <= A} Delta_m, where Delta_m is the
    tensor product of the one-dimensional difference rules
    G^{2^m_i} - G^{2^{m_i - 1}} (G^1 for m_i = 0). Points shared across terms
    are merged with their signed weights summed; points whose contributions
    cancel exactly are removed, so weights may be negative but never zero.

    :param A: the level, a non-negative integer
    :param d: the dimension
    :param cap: the maximum number of points to enumerate before merging
    :raises QuadFeaturesSizeError: if the enumeration exceeds cap
    """
    d = _check_dimension(d)
    if isinstance(A, bool) or int(A) != A or A < 0:
        raise QuadFeaturesArgumentError('A must be a non-negative integer, got {0!r}'.format(A))
    A = int(A)
    if 2 ** A > MAX_HERMITE_POINTS:
        raise QuadFeaturesArgumentError(
            'level {0} needs a {1}-point rule, at most {2} are available'.format(
                A, 2 ** A, MAX_HERMITE_POINTS
            )
        )

    blocks, block_weights = [], []
    for support in _sparse_terms(A, d, cap):
        if not support:
            blocks.append(np.zeros((1, d)))
            block_weights.append(np.ones(1))
            continue

        rules = [_difference_rule(m) for _, m in support]
        axes = np.meshgrid(*[nodes for nodes, _ in rules], indexing='ij')
        block = np.zeros((axes[0].size, d))
        for (column, _), axis in zip(support, axes):
            block[:, column] = axis.ravel()
        blocks.append(block)
        block_weights.append(functools.reduce(np.kron, [weights for _, weights in rules]))

    points = np.concatenate(blocks)
    weights = np.concatenate(block_weights)
    points, weights = merge_points(points, weights, drop_cancelled=True)

    logger.info(
        'built sparse grid A=%d d=%d from %d contributions: D=%d', A, d,
        sum(w.size for w in block_weights), weights.size
    )
    return GridQuadrature(points, weights, provenance('sparse', A=A, d=d))


def _from_counts(points, counts, total, name, **params):
    keep = counts > 0
    return GridQuadrature(points[keep], counts[keep] / float(total), provenance(name, **params))


def _check_sample_size(D):
    if isinstance(D, bool) or int(D) != D or D < 1:
        raise QuadFeaturesArgumentError('D must be a positive integer, got {0!r}'.format(D))
    return int(D)


def subsample_grid(g, D, seed):
    """
    Draws D points from g with probability proportional to weight, with
    replacement; each draw carries weight 1/D and repeated draws are merged.

    :param g: a GridQuadrature with non-negative weights
    :param D: the number of draws
    :param seed: the master seed
    :raises QuadFeaturesContractError: if g has negative weights or is empty
    """
    D = _check_sample_size(D)
    if g.D == 0:
        raise QuadFeaturesContractError('cannot subsample an empty grid')
    if not g.nonnegative:
        raise QuadFeaturesContractError(
            'subsampling needs non-negative weights, min weight is {0!r}'.format(g.weights.min())
        )

    rng = derive_rng(seed, STREAM_BUILD)
    probabilities = g.weights / g.weights.sum()
    counts = rng.multinomial(D, probabilities)

    logger.debug('subsampled %d draws onto %d of %d points', D, int((counts > 0).sum()), g.D)
    return _from_counts(g.points, counts, D, 'subsampled', D=D, seed=seed, source=g.provenance)


def subsample_dense_grid(L, d, D, seed):
    """
    Weight-proportional subsample of dense_grid(L, d) drawn without
    enumerating its L^d points: the dense grid's weight distribution is the
    product of the one-dimensional weights, so each coordinate is drawn
    independently from the L-point rule.

    :param L: points per coordinate of the underlying dense grid
    :param d: the dimension
    :param D: the number of draws
    :param seed: the master seed
    """
    d = _check_dimension(d)
    D = _check_sample_size(D)
    rule = gauss_hermite(L)

    rng = derive_rng(seed, STREAM_BUILD)
    indices = rng.choice(rule.point_count, size=(D, d), p=rule.weights)
    unique, counts = np.unique(indices, axis=0, return_counts=True)

    logger.debug('subsampled dense grid L=%d d=%d: %d draws, %d distinct', L, d, D, counts.size)
    return _from_counts(rule.nodes[unique], counts, D, 'subsampled', D=D, L=L, d=d, seed=seed)


def sample_dense_grid(L, d, D, seed, cap=DEFAULT_POINT_CAP):
    """
    Weight-proportional subsample of dense_grid(L, d): enumerates the grid
    when it fits under cap, and draws coordinate by coordinate otherwise.
    """
    if gauss_hermite(L).point_count ** _check_dimension(d) <= cap:
        return subsample_grid(dense_grid(L, d, cap), D, seed)
    return subsample_dense_grid(L, d, D, seed)


def moment_system(points, R, cap=DEFAULT_CONSTRAINT_CAP):
    """
    Assembles the polynomial-exactness system: one row per monomial
    prod_l omega_l^{r_l} with sum r_l <= R, one column per point, and the
    analytic standard normal moments as the right-hand side.

    :param points: a (D, d) array of quadrature points
    :param R: the maximum total degree
    :param cap: the maximum number of constraints, C(d + R, d)
    :return: a tuple of the matrix, the right-hand side and the monomial
             terms (tuples of variable indices) labelling the rows
    :raises QuadFeaturesSizeError: if the constraint count exceeds cap
    """
    points = np.asarray(points, dtype=np.float64)
    if isinstance(R, bool) or int(R) != R or R < 0:
        raise QuadFeaturesArgumentError('R must be a non-negative integer, got {0!r}'.format(R))
    n_points, d = points.shape

    count = count_multi_indices(d, R)
    if count > cap:
        raise QuadFeaturesSizeError(
            'degree {0} in {1} dimensions needs C(d+R, d) = {2} constraints, cap is {3}'.format(
                R, d, count, cap
            ),
            count=count, cap=cap
        )

    matrix = np.empty((count, n_points))
    rhs = np.empty(count)
    terms = []
    rows = {}
    for row, term in enumerate(monomial_terms(d, int(R))):
        if term:
            # Extend the row of the monomial one degree lower
            matrix[row] = matrix[rows[term[:-1]]] * points[:, term[-1]]
        else:
            matrix[row] = 1.0
        rhs[row] = mixed_normal_moment(term_exponents(term).values())
        rows[term] = row
        terms.append(term)

    return matrix, rhs, terms


def exactness_residual(g, R, cap=DEFAULT_CONSTRAINT_CAP):
    """
    The largest absolute difference between an analytic standard normal
    moment of total degree <= R and the rule's estimate of it.

    :param g: a GridQuadrature
    :param R: the maximum total degree
    :param cap: the maximum number of constraints
    """
    matrix, rhs, _ = moment_system(g.points, R, cap)
    return float(np.max(np.abs(matrix.dot(g.weights) - rhs)))
