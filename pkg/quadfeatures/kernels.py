"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import math

import numpy as np

from .exceptions import QuadFeaturesArgumentError, QuadFeaturesParseError
from .helpers import as_rows
from .utils import read_json, write_json

# exp(-gamma t^2) with gamma = 1/2 has the standard normal spectrum
UNIT_GAMMA = 0.5


class GaussianKernel(object):
    """
    The shift-invariant Gaussian kernel k(u) = exp(-gamma |u|^2), which
    factors over coordinates as prod_i exp(-gamma u_i^2).

    :param gamma: the bandwidth; 1/2 matches the standard normal spectrum
    """

    def __init__(self, gamma=UNIT_GAMMA):
        gamma = float(gamma)
        if not gamma > 0 or not math.isfinite(gamma):
            raise QuadFeaturesArgumentError(
                'gamma must be positive and finite, got {0!r}'.format(gamma)
            )
        self.gamma = gamma

    @property
    def spectral_scale(self):
        """
        The factor sqrt(2 gamma) that maps standard normal frequencies to
        this kernel's spectrum.
        """
        return math.sqrt(2.0 * self.gamma)

    def one_dim(self, t):
        """The one-dimensional factor exp(-gamma t^2), elementwise."""
        t = np.asarray(t, dtype=np.float64)
        return np.exp(-self.gamma * t * t)

    def displacement(self, u):
        """
        Evaluates k on one displacement vector or on the rows of a matrix
        of displacements.
        """
        rows, is_single = as_rows(u)
        values = np.exp(-self.gamma * np.einsum('ij,ij->i', rows, rows))
        return float(values[0]) if is_single else values

    def __call__(self, x, y):
        x_rows, is_single = as_rows(x)
        y_rows, _ = as_rows(y, x_rows.shape[1])
        values = self.displacement(x_rows - y_rows)
        return float(values[0]) if is_single else values

    def __eq__(self, other):
        return isinstance(other, GaussianKernel) and self.gamma == other.gamma

    def __hash__(self):
        return hash(('gaussian', self.gamma))

    def __repr__(self):
        return '<{0} gamma={1!r}>'.format(self.__class__.__name__, self.gamma)


class AnovaKernel(object):
    """
    A sparse ANOVA kernel k(x, y) = sum_{S in subsets} prod_{i in S}
    k_1(x_i - y_i) over a hypergraph of index subsets.

    :param subsets: the hyperedges, each an iterable of 1-based indices
    :param base: the one-dimensional GaussianKernel k_1 (gamma = 1/2 when
                 omitted)
    :param d: the input dimension; defaults to the largest index used
    """

    def __init__(self, subsets, base=None, d=None):
        subsets = [tuple(sorted(int(i) for i in subset)) for subset in subsets]
        if not subsets:
            raise QuadFeaturesArgumentError('an ANOVA kernel needs at least one subset')

        if d is None:
            d = max(max(subset) for subset in subsets if subset) if any(subsets) else 0
        d = int(d)
        if d < 1:
            raise QuadFeaturesArgumentError('d must be a positive integer, got {0}'.format(d))

        for subset in subsets:
            if not subset:
                raise QuadFeaturesArgumentError('ANOVA subsets must be non-empty')
            if len(set(subset)) != len(subset):
                raise QuadFeaturesArgumentError(
                    'subset {0} repeats an index'.format(list(subset))
                )
            if subset[0] < 1 or subset[-1] > d:
                raise QuadFeaturesArgumentError(
                    'subset {0} has indices outside 1..{1}'.format(list(subset), d)
                )

        self.subsets = tuple(subsets)
        self.base = base if base is not None else GaussianKernel()
        self.d = d
        self._columns = [np.array(subset, dtype=np.intp) - 1 for subset in subsets]

    @property
    def gamma(self):
        return self.base.gamma

    def columns(self, index):
        """The 0-based column indices of the index-th subset."""
        return self._columns[index]

    def stats(self):
        """
        The hypergraph statistics: rank r = max |S|, degree (the largest
        number of subsets sharing one index) and size m = |subsets|.
        """
        membership = np.zeros(self.d, dtype=np.int64)
        for columns in self._columns:
            membership[columns] += 1
        rank = max(len(subset) for subset in self.subsets)
        return rank, int(membership.max()), len(self.subsets)

    def displacement(self, u):
        """
        Evaluates the kernel on one displacement vector or on the rows of a
        matrix of displacements.
        """
        rows, is_single = as_rows(u, self.d)
        factors = self.base.one_dim(rows)
        values = np.zeros(rows.shape[0])
        for columns in self._columns:
            values += np.prod(factors[:, columns], axis=1)
        return float(values[0]) if is_single else values

    def __call__(self, x, y):
        x_rows, is_single = as_rows(x, self.d)
        y_rows, _ = as_rows(y, self.d)
        values = self.displacement(x_rows - y_rows)
        return float(values[0]) if is_single else values

    def to_json(self):
        return {
            'd': self.d,
            'gamma': self.gamma,
            'subsets': [list(subset) for subset in self.subsets],
        }

    @classmethod
    def from_json(cls, document):
        """
        Builds a kernel from a {"d", "gamma", "subsets"} document with
        1-based indices.
        """
        try:
            d = document['d']
            subsets = document['subsets']
        except (KeyError, TypeError) as e:
            raise QuadFeaturesParseError(
                'ANOVA structure is missing field {0}'.format(e)
            )
        gamma = document.get('gamma', UNIT_GAMMA)
        return cls(subsets, base=GaussianKernel(gamma), d=d)

    @classmethod
    def load(cls, path):
        return cls.from_json(read_json(path))

    def save(self, path):
        write_json(path, self.to_json())

    def __repr__(self):
        rank, degree, size = self.stats()
        return '<{0} d={1} r={2} degree={3} m={4} gamma={5!r}>'.format(
            self.__class__.__name__, self.d, rank, degree, size, self.gamma
        )


def eval_gaussian(k, u):
    """
    Evaluates exp(-gamma |u|^2).

    :param k: a GaussianKernel
    :param u: a displacement vector
    """
    return k.displacement(u)


def eval_anova(k, x, y):
    """
    Evaluates sum_{S} prod_{i in S} k_1(x_i - y_i).

    :param k: an AnovaKernel
    :param x: a vector of dimension k.d
    :param y: a vector of dimension k.d
    :raises QuadFeaturesArgumentError: on a dimension mismatch
    """
    return k(x, y)


def anova_stats(k):
    """Returns (rank, degree, size) of an AnovaKernel."""
    return k.stats()
