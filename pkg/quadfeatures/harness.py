"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Datasets, empirical error measurement, parameter sweeps and timing.
"""

import csv
import logging
import math
import time

import numpy as np

from .easy import (
    DEFAULT_DEGREE, DEFAULT_L, DEFAULT_LEVEL, build_anova_feature_map,
    build_feature_map, normalize_method
)
from .exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesConfigError, QuadFeaturesParseError
)
from .featuremaps import embed_grid_fast, fast_path_available
from .helpers import (
    STREAM_DATA, STREAM_EVAL, STREAM_PAIRS, as_pairs, as_rows, derive_rng
)
from .kernels import UNIT_GAMMA, AnovaKernel, GaussianKernel
from .solvers import DEFAULT_POOL_FACTOR
from .utils import format_csv, read_json

logger = logging.getLogger(__name__)

DEFAULT_N_EVAL = 10 ** 5
DEFAULT_PAIRS = 500
DEFAULT_HELDOUT_PAIRS = 1000

# Rows embedded when timing a map inside a sweep
EMBED_SAMPLE_ROWS = 1000

REPORT_HEADER = [
    'method', 'd', 'D', 'gamma', 'M', 'max_err', 'rms_err', 'n_eval', 'seed',
    'build_ms', 'embed_ms'
]
TIMING_COLUMNS = ('build_ms', 'embed_ms')

BENCH_HEADER = ['method', 'd', 'D', 'n', 'embed_ms', 'fast_ms', 'max_dev', 'fast_path']


def elapsed_ms(start):
    return int(round((time.perf_counter() - start) * 1000))


class ErrorReport(object):
    """
    The empirical kernel approximation error of one feature map.

    :param max_err: the largest absolute error over the sample set
    :param rms_err: the root mean squared error over the same set
    :param M: the region diameter, or the largest observed displacement
              norm when errors are measured on data pairs
    """

    def __init__(self, method, d, D, gamma, M, max_err, rms_err, n_eval, seed,
                 build_ms=None, embed_ms=None):
        self.method = method
        self.d = d
        self.D = D
        self.gamma = gamma
        self.M = M
        self.max_err = max_err
        self.rms_err = rms_err
        self.n_eval = n_eval
        self.seed = seed
        self.build_ms = build_ms
        self.embed_ms = embed_ms

    def row(self):
        return [getattr(self, column) for column in REPORT_HEADER]

    def __repr__(self):
        return '<{0} method={1} D={2} M={3!r} max_err={4!r} rms_err={5!r}>'.format(
            self.__class__.__name__, self.method, self.D, self.M, self.max_err, self.rms_err
        )


class Dataset(object):
    """
    A rectangular table of finite reals.

    :param rows: an (n, d) array
    :param source: where the rows came from
    :param normalization: a (mean, scale) pair when the rows were
                          standardised
    """

    def __init__(self, rows, source=None, normalization=None):
        rows = np.array(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] < 1:
            raise QuadFeaturesArgumentError('dataset rows must be an (n, d) array, got shape {0}'.format(rows.shape))
        if not np.all(np.isfinite(rows)):
            raise QuadFeaturesArgumentError('dataset contains non-finite values')
        self.rows = rows
        self.source = source
        self.normalization = normalization

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def d(self):
        return self.rows.shape[1]

    def __len__(self):
        return self.n

    def standardized(self):
        """Each column shifted to mean 0 and scaled to unit variance."""
        mean = self.rows.mean(axis=0)
        scale = self.rows.std(axis=0)
        scale[scale == 0] = 1.0
        return Dataset((self.rows - mean) / scale, self.source, (mean, scale))

    def __repr__(self):
        return "<{0} n={1} d={2} source='{3}'>".format(self.__class__.__name__, self.n, self.d, self.source)


def _parse_row(cells, line):
    try:
        values = [float(cell) for cell in cells]
    except ValueError:
        raise QuadFeaturesParseError('line {0}: non-numeric cell'.format(line), line=line)
    if not all(math.isfinite(v) for v in values):
        raise QuadFeaturesParseError('line {0}: non-finite cell'.format(line), line=line)
    return values


def load_csv(path):
    """
    Reads comma-separated reals. A first row that does not parse as numbers
    is taken as a header and skipped; blank lines are ignored.

    :param path: the CSV file
    :raises QuadFeaturesParseError: on ragged rows or non-numeric cells,
                                    carrying the 1-based line number
    """
    rows = []
    width = None
    with open(path, newline='') as f:
        for line, cells in enumerate(csv.reader(f), 1):
            cells = [cell.strip() for cell in cells]
            if not cells or cells == ['']:
                continue
            if line == 1:
                try:
                    [float(cell) for cell in cells]
                except ValueError:
                    logger.debug('%s: skipping header %r', path, cells)
                    continue
            values = _parse_row(cells, line)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise QuadFeaturesParseError(
                    'line {0}: expected {1} columns, got {2}'.format(line, width, len(values)),
                    line=line
                )
            rows.append(values)

    if not rows:
        raise QuadFeaturesParseError('{0}: no data rows'.format(path))

    dataset = Dataset(rows, source=str(path))
    logger.info('loaded %s: %d rows, d=%d', path, dataset.n, dataset.d)
    return dataset


def synthetic_mixture(n, d=40, components=4, side=2.0, seed=0):
    """
    Rows from an equal-weight mixture of unit-covariance Gaussians whose
    means are the vertices of a regular simplex with the given side length.

    :param n: the number of rows
    :param d: the dimension, at least components
    :param components: the number of mixture components
    :param side: the distance between any two means
    :param seed: the master seed
    """
    if components < 1 or components > d:
        raise QuadFeaturesArgumentError(
            'need 1 <= components <= d, got components={0} d={1}'.format(components, d)
        )
    rng = derive_rng(seed, STREAM_DATA)
    means = np.zeros((components, d))
    means[np.arange(components), np.arange(components)] = side / math.sqrt(2.0)
    labels = rng.integers(0, components, size=n)
    rows = means[labels] + rng.standard_normal((n, d))
    return Dataset(
        rows, source='synthetic_mixture(n={0}, d={1}, components={2}, side={3!r}, seed={4})'.format(
            n, d, components, side, seed
        )
    )


def split_rows(ds, fraction=0.5, seed=0):
    """Splits a dataset into disjoint (first, second) parts, fraction in the first."""
    if not 0 < fraction < 1:
        raise QuadFeaturesArgumentError('fraction must lie in (0, 1), got {0!r}'.format(fraction))
    order = derive_rng(seed, STREAM_DATA, 1).permutation(ds.n)
    cut = int(round(fraction * ds.n))
    return (
        Dataset(ds.rows[order[:cut]], ds.source, ds.normalization),
        Dataset(ds.rows[order[cut:]], ds.source, ds.normalization)
    )


def sample_pairs(ds, n, seed):
    """
    Draws n pairs of distinct rows uniformly with replacement.

    :return: a tuple (X, Y) of (n, d) arrays
    :raises QuadFeaturesArgumentError: if the dataset has fewer than 2 rows
    """
    if ds.n < 2:
        raise QuadFeaturesArgumentError('sampling pairs needs at least 2 rows, got {0}'.format(ds.n))
    if n < 1:
        raise QuadFeaturesArgumentError('n must be positive, got {0!r}'.format(n))
    rng = derive_rng(seed, STREAM_PAIRS)
    first = rng.integers(0, ds.n, size=n)
    second = rng.integers(0, ds.n - 1, size=n)
    second += second >= first
    return ds.rows[first], ds.rows[second]


def unit_displacements(d, n, seed, stream=STREAM_EVAL):
    """
    n displacements with direction uniform on the sphere and radius uniform
    on [0, 1]; scaling by M gives samples over the ball of radius M.
    """
    rng = derive_rng(seed, stream)
    directions = rng.standard_normal((n, d))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1.0
    radii = rng.uniform(0.0, 1.0, size=n)
    return directions * (radii / norms)[:, np.newaxis]


def _errors(fm, kernel, U):
    return np.abs(kernel.displacement(U) - fm.approx_displacements(U))


def max_error_empirical(fm, kernel, M, n=DEFAULT_N_EVAL, seed=0):
    """
    The largest |k(u) - k~(u)| over n displacements with |u| <= M.

    :param fm: a FeatureMap or AnovaFeatureMap
    :param kernel: the exact kernel
    :param M: the region diameter
    :param n: the number of displacements
    :param seed: the master seed of the displacement sample
    """
    if n < 1:
        raise QuadFeaturesArgumentError('n must be positive, got {0!r}'.format(n))
    return float(_errors(fm, kernel, M * unit_displacements(fm.d, n, seed)).max())


def pair_errors(fm, kernel, pairs):
    """The (max, rms) absolute kernel error over data pairs."""
    X, Y = as_pairs(pairs, fm.d)
    errors = np.abs(np.atleast_1d(kernel(X, Y)) - np.atleast_1d(fm.approx_kernel(X, Y)))
    return float(errors.max()), float(np.sqrt(np.mean(errors ** 2)))


def rms_error(fm, kernel, pairs):
    """sqrt(mean (k(x, y) - k~(x, y))^2) over data pairs."""
    return pair_errors(fm, kernel, pairs)[1]


def evaluate(fm, kernel, M=1.0, n_eval=DEFAULT_N_EVAL, seed=0, pairs=None,
             build_ms=None, embed_ms=None):
    """
    Measures a map's error either on n_eval displacements inside the ball of
    radius M or, when pairs are given, on those data pairs.

    :return: an ErrorReport
    """
    if pairs is not None:
        X, Y = as_pairs(pairs, fm.d)
        max_err, rms_err = pair_errors(fm, kernel, (X, Y))
        M = float(np.linalg.norm(X - Y, axis=1).max())
        n_eval = X.shape[0]
    else:
        errors = _errors(fm, kernel, M * unit_displacements(fm.d, n_eval, seed))
        max_err, rms_err = float(errors.max()), float(np.sqrt(np.mean(errors ** 2)))

    return ErrorReport(
        fm.method, fm.d, fm.D, fm.gamma, M, max_err, rms_err, n_eval, seed,
        build_ms, embed_ms
    )


def _time_embedding(fm, d, seed):
    if not fm.nonnegative:
        return None
    sample = derive_rng(seed, STREAM_EVAL, 1).standard_normal((EMBED_SAMPLE_ROWS, d))
    start = time.perf_counter()
    fm.embed(sample)
    return elapsed_ms(start)


def _listify(key, value, kind):
    values = value if isinstance(value, list) else [value]
    try:
        values = [kind(v) for v in values]
    except (TypeError, ValueError):
        raise QuadFeaturesConfigError('{0}: expected {1} values, got {2!r}'.format(key, kind.__name__, value), key=key)
    if not values:
        raise QuadFeaturesConfigError('{0}: must not be empty'.format(key), key=key)
    return values


class SweepConfig(object):
    """
    The grid of methods, sizes, diameters and seeds a sweep evaluates.
    Construct from a JSON document with from_dict or load; every field has
    the name of its JSON key ('lambda' is stored as lam).
    """

    keys = (
        'methods', 'd', 'D', 'M', 'seeds', 'gamma', 'L', 'level', 'degree',
        'n_eval', 'data', 'pairs', 'heldout_pairs', 'lambda', 'target_D',
        'pool_factor', 'anova', 'out'
    )

    def __init__(self, methods, d=None, D=None, M=(1.0,), seeds=(0,),
                 gamma=UNIT_GAMMA, L=DEFAULT_L, level=DEFAULT_LEVEL,
                 degree=DEFAULT_DEGREE, n_eval=DEFAULT_N_EVAL, data=None,
                 pairs=DEFAULT_PAIRS, heldout_pairs=DEFAULT_HELDOUT_PAIRS,
                 lam=None, target_D=None, pool_factor=DEFAULT_POOL_FACTOR,
                 anova=None, out='-'):

        try:
            self.methods = [normalize_method(m) for m in _listify('methods', methods, str)]
        except QuadFeaturesArgumentError as e:
            raise QuadFeaturesConfigError('methods: {0}'.format(e), key='methods')

        self.d = self._positive('d', d) if d is not None else None
        self.D = [self._positive('D', v) for v in _listify('D', D, int)] if D is not None else [None]
        self.M = _listify('M', list(M) if isinstance(M, tuple) else M, float)
        self.seeds = _listify('seeds', list(seeds) if isinstance(seeds, tuple) else seeds, int)
        self.gamma = self._positive('gamma', gamma, float)
        self.L = self._positive('L', L)
        self.level = self._non_negative('level', level)
        self.degree = self._non_negative('degree', degree)
        self.n_eval = self._positive('n_eval', n_eval)
        self.data = data
        self.pairs = self._positive('pairs', pairs)
        self.heldout_pairs = self._positive('heldout_pairs', heldout_pairs)
        self.lam = self._non_negative('lambda', lam, float) if lam is not None else None
        self.target_D = self._positive('target_D', target_D) if target_D is not None else None
        self.pool_factor = self._positive('pool_factor', pool_factor, float)
        self.anova = anova
        self.out = out

        if any(m < 0 for m in self.M):
            raise QuadFeaturesConfigError('M: diameters must be non-negative', key='M')
        if self.d is None and data is None and anova is None:
            raise QuadFeaturesConfigError('d: required unless data or anova is given', key='d')
        needs_D = [m for m in self.methods if m not in ('dense', 'sparse')]
        if needs_D and self.D == [None]:
            raise QuadFeaturesConfigError('D: required by {0}'.format(', '.join(needs_D)), key='D')

    @staticmethod
    def _positive(key, value, kind=int):
        try:
            value = kind(value)
        except (TypeError, ValueError):
            raise QuadFeaturesConfigError('{0}: expected a number, got {1!r}'.format(key, value), key=key)
        if not value > 0:
            raise QuadFeaturesConfigError('{0}: must be positive, got {1!r}'.format(key, value), key=key)
        return value

    @staticmethod
    def _non_negative(key, value, kind=int):
        try:
            value = kind(value)
        except (TypeError, ValueError):
            raise QuadFeaturesConfigError('{0}: expected a number, got {1!r}'.format(key, value), key=key)
        if value < 0:
            raise QuadFeaturesConfigError('{0}: must be non-negative, got {1!r}'.format(key, value), key=key)
        return value

    @classmethod
    def from_dict(cls, document):
        if not isinstance(document, dict):
            raise QuadFeaturesConfigError('a sweep configuration must be a JSON object')
        for key in document:
            if key not in cls.keys:
                raise QuadFeaturesConfigError('unknown configuration key {0!r}'.format(key), key=key)
        if 'methods' not in document:
            raise QuadFeaturesConfigError('methods: required', key='methods')
        kwargs = dict(document)
        if 'lambda' in kwargs:
            kwargs['lam'] = kwargs.pop('lambda')
        return cls(**kwargs)

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))

    def __repr__(self):
        return '<{0} methods={1} D={2} M={3} seeds={4}>'.format(
            self.__class__.__name__, self.methods, self.D, self.M, self.seeds
        )


def _load_data(config, d):
    if config.data == 'synthetic':
        return synthetic_mixture(10 ** 4, d=d or 40, seed=config.seeds[0])
    return load_csv(config.data)


def sweep_reports(config):
    """
    Evaluates every (method, D, seed) map on every diameter M, or on held-out
    data pairs when the configuration names a dataset. Dense and sparse
    rules do not depend on D and are built once per seed. Displacement
    samples are shared by all maps of a seed.

    :return: a list of ErrorReport in configuration order
    """

    kernel = AnovaKernel.load(config.anova) if config.anova else GaussianKernel(config.gamma)
    if isinstance(kernel, AnovaKernel):
        kernel = AnovaKernel(kernel.subsets, GaussianKernel(config.gamma), kernel.d)

    dataset = _load_data(config, config.d) if config.data else None
    d = kernel.d if config.anova else (dataset.d if dataset is not None else config.d)

    reports = []
    for seed in config.seeds:
        if dataset is not None:
            train, heldout = split_rows(dataset, 0.5, seed)
            train_pairs = sample_pairs(train, config.pairs, seed)
            eval_pairs = sample_pairs(heldout, config.heldout_pairs, seed)
            unit = None
        else:
            unit = unit_displacements(d, config.n_eval, seed)
            # Training displacements for reweighting cover the largest diameter
            train_u = max(config.M) * unit_displacements(d, config.pairs, seed, STREAM_PAIRS)
            train_pairs = (train_u, np.zeros_like(train_u))
            eval_pairs = None

        for method in config.methods:
            sizes = [None] if method in ('dense', 'sparse') else config.D
            for D in sizes:
                start = time.perf_counter()
                if config.anova:
                    fm = build_anova_feature_map(
                        kernel, method, D_S=D, seed=seed, L=config.L,
                        level=config.level, degree=config.degree
                    )
                else:
                    fm = build_feature_map(
                        method, d, D=D, gamma=config.gamma, seed=seed, L=config.L,
                        level=config.level, degree=config.degree, pairs=train_pairs,
                        lam=config.lam, target_D=config.target_D,
                        pool_factor=config.pool_factor
                    )
                build_ms = elapsed_ms(start)
                embed_ms = _time_embedding(fm, d, seed)

                if eval_pairs is not None:
                    reports.append(evaluate(
                        fm, kernel, seed=seed, pairs=eval_pairs,
                        build_ms=build_ms, embed_ms=embed_ms
                    ))
                    continue

                for M in config.M:
                    errors = _errors(fm, kernel, M * unit)
                    reports.append(ErrorReport(
                        fm.method, d, fm.D, config.gamma, M, float(errors.max()),
                        float(np.sqrt(np.mean(errors ** 2))), config.n_eval, seed,
                        build_ms, embed_ms
                    ))
                logger.info('sweep cell method=%s D=%s seed=%d done', method, fm.D, seed)

    return reports


def format_reports(reports):
    """Renders ErrorReports as CSV text with the report header."""
    return format_csv(REPORT_HEADER, [report.row() for report in reports])


def sweep(config):
    """Runs a sweep and returns its CSV report as text."""
    return format_reports(sweep_reports(config))


class BenchReport(object):
    """Timings of the plain and the table-driven embedding of one dataset."""

    def __init__(self, method, d, D, n, embed_ms, fast_ms, max_dev, fast_path):
        self.method = method
        self.d = d
        self.D = D
        self.n = n
        self.embed_ms = embed_ms
        self.fast_ms = fast_ms
        self.max_dev = max_dev
        self.fast_path = fast_path

    def row(self):
        return [getattr(self, column) for column in BENCH_HEADER]

    def __repr__(self):
        return '<{0} method={1} embed_ms={2} fast_ms={3} fast_path={4}>'.format(
            self.__class__.__name__, self.method, self.embed_ms, self.fast_ms, self.fast_path
        )


def bench(fm, X, repeats=3):
    """
    Times embed against embed_grid_fast on the rows of X, keeping the best
    of repeats runs of each, and records their largest elementwise
    difference.

    :param fm: an embeddable FeatureMap
    :param X: an (n, d) data matrix
    """
    rows, _ = as_rows(X, fm.d)
    fast_path = fast_path_available(fm)

    def best_of(function):
        best, result = None, None
        for _ in range(max(1, int(repeats))):
            start = time.perf_counter()
            result = function(rows)
            taken = elapsed_ms(start)
            best = taken if best is None else min(best, taken)
        return best, result

    embed_ms, plain = best_of(fm.embed)
    fast_ms, fast = best_of(lambda data: embed_grid_fast(fm, data))
    max_dev = float(np.max(np.abs(plain - fast))) if plain.size else 0.0

    report = BenchReport(fm.method, fm.d, fm.D, rows.shape[0], embed_ms, fast_ms, max_dev, fast_path)
    logger.info('bench: %r', report)
    return report
