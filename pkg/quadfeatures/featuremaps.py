"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Feature maps built from quadrature rules over the kernel spectrum, the
random Fourier and Halton baselines, and ANOVA composition.
"""

import logging
import math

import numpy as np
import scipy.special
from scipy.stats import qmc

from .exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesEmbeddingError, QuadFeaturesParseError
)
from .grids import GridQuadrature, provenance
from .helpers import STREAM_BUILD, as_rows, derive_rng
from .kernels import UNIT_GAMMA, AnovaKernel, GaussianKernel
from .utils import read_json, write_json

logger = logging.getLogger(__name__)

METHODS = ('rff', 'qmc', 'dense', 'sparse', 'subsampled', 'poly_exact', 'reweighted')

FAST_EMBED_VALUE_CAP = 64
MAX_HALTON_DIMENSION = 1000

# Rows of displacements evaluated at once are limited so that the cosine
# block holds at most this many entries
CHUNK_ENTRIES = 1 << 22

# Rational approximation of the standard normal quantile (Acklam)
_CENTRAL_NUMERATOR = [
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00
]
_CENTRAL_DENOMINATOR = [
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01, 1.0
]
_TAIL_NUMERATOR = [
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00
]
_TAIL_DENOMINATOR = [
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00, 1.0
]
_TAIL_BREAK = 0.02425


def inverse_normal_cdf(p):
    """
    The standard normal quantile function, elementwise on (0, 1): a
    rational approximation accurate to about 1e-9 followed by one Newton
    step on the normal CDF.

    :param p: probabilities strictly between 0 and 1
    """
    p = np.asarray(p, dtype=np.float64)
    if np.any((p <= 0) | (p >= 1)):
        raise QuadFeaturesArgumentError('probabilities must lie strictly between 0 and 1')

    x = np.empty_like(p)
    lower = p < _TAIL_BREAK
    upper = p > 1 - _TAIL_BREAK
    central = ~(lower | upper)

    q = p[central] - 0.5
    r = q * q
    x[central] = q * np.polyval(_CENTRAL_NUMERATOR, r) / np.polyval(_CENTRAL_DENOMINATOR, r)

    q = np.sqrt(-2.0 * np.log(p[lower]))
    x[lower] = np.polyval(_TAIL_NUMERATOR, q) / np.polyval(_TAIL_DENOMINATOR, q)

    q = np.sqrt(-2.0 * np.log1p(-p[upper]))
    x[upper] = -np.polyval(_TAIL_NUMERATOR, q) / np.polyval(_TAIL_DENOMINATOR, q)

    density = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return x - (scipy.special.ndtr(x) - p) / density


def _check_count(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise QuadFeaturesArgumentError('{0} must be a positive integer, got {1!r}'.format(name, value))
    return int(value)


class FeatureMap(object):
    """
    A quadrature rule over the unit Gaussian spectrum packaged for a kernel
    of bandwidth gamma: frequencies are the rule's points scaled by
    sqrt(2 gamma) and the kernel estimate is
    k~(x - y) = sum_i a_i cos(omega_i . (x - y)).

    :param grid: a GridQuadrature over the unit spectrum
    :param method: the tag of the constructor that built the grid
    :param gamma: the kernel bandwidth
    """

    method_tags = METHODS

    def __init__(self, grid, method, gamma=UNIT_GAMMA):
        if method not in self.method_tags:
            raise QuadFeaturesArgumentError(
                'unknown method {0!r}, expected one of {1}'.format(method, ', '.join(self.method_tags))
            )
        self.grid = grid
        self.method = method
        self.kernel = GaussianKernel(gamma)
        self.frequencies = grid.points * self.kernel.spectral_scale
        self.frequencies.flags.writeable = False

    @property
    def gamma(self):
        return self.kernel.gamma

    @property
    def d(self):
        return self.grid.d

    @property
    def D(self):
        return self.grid.D

    @property
    def weights(self):
        return self.grid.weights

    @property
    def nonnegative(self):
        return self.grid.nonnegative

    @property
    def feature_length(self):
        return 2 * self.D

    def approx_displacements(self, U):
        """
        The kernel estimate on one displacement vector or on every row of a
        matrix of displacements.
        """
        rows, is_single = as_rows(U, self.d)
        values = np.empty(rows.shape[0])
        chunk = max(1, CHUNK_ENTRIES // max(1, self.D))
        for start in range(0, rows.shape[0], chunk):
            block = rows[start:start + chunk]
            values[start:start + chunk] = np.cos(block.dot(self.frequencies.T)).dot(self.weights)
        return float(values[0]) if is_single else values

    def approx_kernel(self, x, y):
        x_rows, is_single = as_rows(x, self.d)
        y_rows, _ = as_rows(y, self.d)
        values = self.approx_displacements(x_rows - y_rows)
        return float(values[0]) if is_single else values

    def embed(self, X):
        """
        The real feature vector [sqrt(a_i) cos(omega_i . x)]_i followed by
        [sqrt(a_i) sin(omega_i . x)]_i, so that embeddings' inner products
        reproduce approx_kernel.

        :param X: one vector or an (n, d) matrix of rows
        :raises QuadFeaturesEmbeddingError: if the rule has negative weights
        """
        self._check_embeddable()
        rows, is_single = as_rows(X, self.d)
        features = self._features(rows.dot(self.frequencies.T))
        return features[0] if is_single else features

    def _check_embeddable(self):
        if not self.nonnegative:
            raise QuadFeaturesEmbeddingError(
                '{0} rule has negative weights and cannot be embedded; '
                'use approx_kernel instead'.format(self.method)
            )

    def _features(self, projections):
        scale = np.sqrt(self.weights)
        return np.hstack([np.cos(projections) * scale, np.sin(projections) * scale])

    def distinct_values(self):
        """The number of distinct frequency values in each coordinate."""
        return [np.unique(self.frequencies[:, j]).size for j in range(self.d)]

    def to_json(self):
        document = self.grid.to_json()
        document['method'] = self.method
        document['gamma'] = self.gamma
        return document

    @classmethod
    def from_json(cls, document):
        try:
            method = document['method']
        except (KeyError, TypeError):
            raise QuadFeaturesParseError('feature map document has no method')
        return cls(GridQuadrature.from_json(document), method, document.get('gamma', UNIT_GAMMA))

    def save(self, path):
        write_json(path, self.to_json())

    def __repr__(self):
        return '<{0} method={1} d={2} D={3} gamma={4!r}>'.format(
            self.__class__.__name__, self.method, self.d, self.D, self.gamma
        )


def rff(d, D, gamma=UNIT_GAMMA, seed=0):
    """
    Random Fourier features: D frequencies drawn i.i.d. from the kernel
    spectrum, each with weight 1/D.

    :param d: the input dimension
    :param D: the number of frequencies
    :param gamma: the kernel bandwidth
    :param seed: the master seed
    """
    d, D = _check_count('d', d), _check_count('D', D)
    rng = derive_rng(seed, STREAM_BUILD)
    points = rng.standard_normal((D, d))
    grid = GridQuadrature(points, np.full(D, 1.0 / D), provenance('rff', D=D, d=d, seed=seed))
    return FeatureMap(grid, 'rff', gamma)


def halton_points(d, D):
    """
    The first D points of the unscrambled Halton sequence in bases given by
    the first d primes, starting at index 1.
    """
    sampler = qmc.Halton(d, scramble=False)
    sampler.fast_forward(1)
    return sampler.random(D)


def qmc_halton(d, D, gamma=UNIT_GAMMA):
    """
    Quasi-Monte Carlo features: Halton points mapped through the inverse
    normal CDF per coordinate, each with weight 1/D. Deterministic.

    :param d: the input dimension, at most 1000
    :param D: the number of frequencies
    :param gamma: the kernel bandwidth
    """
    d, D = _check_count('d', d), _check_count('D', D)
    if d > MAX_HALTON_DIMENSION:
        raise QuadFeaturesArgumentError(
            'Halton features support d <= {0}, got {1}'.format(MAX_HALTON_DIMENSION, d)
        )
    points = inverse_normal_cdf(halton_points(d, D))
    grid = GridQuadrature(points, np.full(D, 1.0 / D), provenance('qmc', D=D, d=d))
    return FeatureMap(grid, 'qmc', gamma)


def approx_kernel(fm, x, y):
    """sum_i a_i cos(omega_i . (x - y)); signed weights are allowed."""
    return fm.approx_kernel(x, y)


def embed(fm, x):
    """The cos/sin embedding of x; see FeatureMap.embed."""
    return fm.embed(x)


def fast_path_available(fm, cap=FAST_EMBED_VALUE_CAP):
    """
    Whether embed_grid_fast can use the per-coordinate value tables, i.e.
    the rule is embeddable and no coordinate takes more than cap values.
    """
    if isinstance(fm, AnovaFeatureMap):
        return all(fast_path_available(sub, cap) for sub in fm.sub_maps)
    return fm.nonnegative and fm.D > 0 and max(fm.distinct_values()) <= cap


def embed_grid_fast(fm, X, cap=FAST_EMBED_VALUE_CAP):
    """
    Embeds data for a rule whose frequencies take few distinct values per
    coordinate: every data column is multiplied once by each distinct value
    and the projections omega_i . x are assembled by table lookups and
    additions. Falls back to embed (logging a warning) when some coordinate
    has more than cap distinct values.

    :param fm: a FeatureMap or AnovaFeatureMap
    :param X: one vector or an (n, d) matrix of rows
    """
    if isinstance(fm, AnovaFeatureMap):
        return fm.embed(X, fast=True)
    if not fast_path_available(fm, cap):
        fm._check_embeddable()
        logger.warning(
            'fast embedding unavailable for %s map (more than %d values per coordinate); using embed',
            fm.method, cap
        )
        return fm.embed(X)

    rows, is_single = as_rows(X, fm.d)
    projections = np.zeros((rows.shape[0], fm.D))
    for j in range(fm.d):
        values, lookup = np.unique(fm.frequencies[:, j], return_inverse=True)
        table = np.outer(rows[:, j], values)
        projections += table[:, lookup.ravel()]

    features = fm._features(projections)
    return features[0] if is_single else features


class AnovaFeatureMap(object):
    """
    The feature map of a sparse ANOVA kernel: one FeatureMap per subset,
    applied to that subset's coordinates. Kernel estimates add up over
    subsets and embeddings are concatenated.

    :param kernel: the AnovaKernel
    :param sub_maps: one FeatureMap per subset of kernel.subsets, in order
    """

    method = 'anova'

    def __init__(self, kernel, sub_maps):
        sub_maps = list(sub_maps)
        if len(sub_maps) != len(kernel.subsets):
            raise QuadFeaturesArgumentError(
                'expected {0} sub-maps, got {1}'.format(len(kernel.subsets), len(sub_maps))
            )
        for subset, sub_map in zip(kernel.subsets, sub_maps):
            if sub_map.d != len(subset):
                raise QuadFeaturesArgumentError(
                    'subset {0} needs a {1}-dimensional map, got d={2}'.format(
                        list(subset), len(subset), sub_map.d
                    )
                )
        self.kernel = kernel
        self.sub_maps = sub_maps

    @property
    def subsets(self):
        return self.kernel.subsets

    @property
    def gamma(self):
        return self.kernel.gamma

    @property
    def d(self):
        return self.kernel.d

    @property
    def D(self):
        return sum(sub_map.D for sub_map in self.sub_maps)

    @property
    def nonnegative(self):
        return all(sub_map.nonnegative for sub_map in self.sub_maps)

    @property
    def feature_length(self):
        return sum(sub_map.feature_length for sub_map in self.sub_maps)

    def _parts(self):
        for index, sub_map in enumerate(self.sub_maps):
            yield self.kernel.columns(index), sub_map

    def approx_displacements(self, U):
        rows, is_single = as_rows(U, self.d)
        values = np.zeros(rows.shape[0])
        for columns, sub_map in self._parts():
            values += sub_map.approx_displacements(rows[:, columns])
        return float(values[0]) if is_single else values

    def approx_kernel(self, x, y):
        x_rows, is_single = as_rows(x, self.d)
        y_rows, _ = as_rows(y, self.d)
        values = self.approx_displacements(x_rows - y_rows)
        return float(values[0]) if is_single else values

    def embed(self, X, fast=False):
        """
        Concatenates the sub-map embeddings of each subset's coordinates.

        :param fast: use embed_grid_fast for every sub-map
        """
        rows, is_single = as_rows(X, self.d)
        blocks = []
        for columns, sub_map in self._parts():
            part = rows[:, columns]
            blocks.append(embed_grid_fast(sub_map, part) if fast else sub_map.embed(part))
        features = np.hstack(blocks)
        return features[0] if is_single else features

    def to_json(self):
        document = self.kernel.to_json()
        document['method'] = self.method
        document['sub_maps'] = [sub_map.to_json() for sub_map in self.sub_maps]
        return document

    @classmethod
    def from_json(cls, document):
        kernel = AnovaKernel.from_json(document)
        try:
            sub_maps = [FeatureMap.from_json(part) for part in document['sub_maps']]
        except (KeyError, TypeError):
            raise QuadFeaturesParseError('ANOVA feature map document has no sub_maps')
        return cls(kernel, sub_maps)

    def save(self, path):
        write_json(path, self.to_json())

    def __repr__(self):
        return '<{0} subsets={1} D={2} gamma={3!r}>'.format(
            self.__class__.__name__, len(self.sub_maps), self.D, self.gamma
        )


def anova_compose(k, constructor, D_S):
    """
    Builds an ANOVA feature map by constructing one feature map per subset.

    :param k: an AnovaKernel
    :param constructor: called as constructor(len(S), D_S) for every subset
                        S in order; must return a FeatureMap of dimension
                        len(S)
    :param D_S: the per-subset feature count handed to the constructor
    """
    D_S = _check_count('D_S', D_S)
    sub_maps = [constructor(len(subset), D_S) for subset in k.subsets]
    fm = AnovaFeatureMap(k, sub_maps)
    rank, degree, size = k.stats()
    logger.info('composed ANOVA map: m=%d r=%d degree=%d D=%d', size, rank, degree, fm.D)
    return fm


def feature_map_from_json(document):
    """Rebuilds a FeatureMap or AnovaFeatureMap from its JSON document."""
    if isinstance(document, dict) and document.get('method') == AnovaFeatureMap.method:
        return AnovaFeatureMap.from_json(document)
    return FeatureMap.from_json(document)


def load_feature_map(path):
    return feature_map_from_json(read_json(path))
