"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

The quadfeatures command line: build, eval, sweep, embed and bench.
"""

import argparse
import logging
import sys

from .easy import (
    DEFAULT_DEGREE, DEFAULT_L, DEFAULT_LEVEL, build_anova_feature_map,
    build_feature_map, normalize_method
)
from .exceptions import QuadFeaturesArgumentError, QuadFeaturesError
from .featuremaps import (
    AnovaFeatureMap, embed_grid_fast, fast_path_available, load_feature_map
)
from .harness import (
    BENCH_HEADER, DEFAULT_HELDOUT_PAIRS, DEFAULT_N_EVAL, DEFAULT_PAIRS,
    SweepConfig, bench, evaluate, format_reports, load_csv, sample_pairs,
    split_rows, sweep, synthetic_mixture
)
from .helpers import STREAM_EVAL, derive_rng
from .kernels import UNIT_GAMMA, AnovaKernel, GaussianKernel
from .solvers import DEFAULT_POOL_FACTOR
from .utils import write_csv, write_json, write_matrix_csv, write_text

logger = logging.getLogger(__name__)

METHOD_CHOICES = ['rff', 'qmc', 'dense', 'sparse', 'subsampled', 'poly-exact', 'reweighted']

# Rows of the random matrix bench uses when no data is given
BENCH_ROWS = 1000


def _add_map_arguments(parser):
    parser.add_argument('--method', choices=METHOD_CHOICES, help='feature map construction')
    parser.add_argument('--map', help='a serialized feature map to use instead of building one')
    parser.add_argument('--d', type=int, help='input dimension')
    parser.add_argument('--D', type=int, help='number of features (per subset with --anova)')
    parser.add_argument('--L', type=int, default=DEFAULT_L, help='points per coordinate of dense grids')
    parser.add_argument('--level', type=int, default=DEFAULT_LEVEL, help='sparse grid level A')
    parser.add_argument('--degree', type=int, default=DEFAULT_DEGREE, metavar='R', help='exactness degree')
    parser.add_argument('--gamma', type=float, default=UNIT_GAMMA, help='kernel bandwidth')
    parser.add_argument('--seed', type=int, default=0, help='master seed')
    parser.add_argument('--data', help="CSV dataset, or 'synthetic' for the Gaussian mixture")
    parser.add_argument('--pairs', type=int, default=DEFAULT_PAIRS, metavar='n', help='training pairs')
    parser.add_argument('--heldout-pairs', type=int, default=DEFAULT_HELDOUT_PAIRS, help='evaluation pairs')
    parser.add_argument('--lambda', dest='lam', type=float, help='l1 coefficient for reweighting')
    parser.add_argument('--target-D', dest='target_D', type=int, help='support size for lambda bisection')
    parser.add_argument('--pool-factor', type=float, default=DEFAULT_POOL_FACTOR, help='candidate pool ratio')
    parser.add_argument('--anova', help='ANOVA structure JSON')
    parser.add_argument('--out', default='-', help="output path ('-' for stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='quadfeatures',
        description='Quadrature-based feature maps for Gaussian and ANOVA kernels.'
    )
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more logging (repeatable)')
    parser.add_argument('-q', '--quiet', action='store_true', help='only log errors')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    build = commands.add_parser('build', help='construct and serialize a feature map')
    _add_map_arguments(build)

    evaluate_parser = commands.add_parser('eval', help='error report for one feature map')
    _add_map_arguments(evaluate_parser)
    evaluate_parser.add_argument('--diameter', type=float, default=1.0, metavar='M', help='region diameter')
    evaluate_parser.add_argument('--n-eval', type=int, default=DEFAULT_N_EVAL, help='displacement samples')

    sweep_parser = commands.add_parser('sweep', help='error reports over a grid of parameters')
    _add_map_arguments(sweep_parser)
    sweep_parser.add_argument('--config', help='sweep configuration JSON')
    sweep_parser.add_argument('--diameter', type=float, action='append', metavar='M', help='region diameter (repeatable)')
    sweep_parser.add_argument('--n-eval', type=int, default=DEFAULT_N_EVAL, help='displacement samples')

    embed_parser = commands.add_parser('embed', help='write the features of a dataset as CSV')
    _add_map_arguments(embed_parser)

    bench_parser = commands.add_parser('bench', help='time embed against the fast grid embedding')
    _add_map_arguments(bench_parser)
    bench_parser.add_argument('--repeats', type=int, default=3, help='timing repetitions')

    return parser


def _load_dataset(args, d=None):
    if args.data == 'synthetic':
        return synthetic_mixture(10 ** 4, d=d or args.d or 40, seed=args.seed)
    return load_csv(args.data)


def _kernel(args, fm=None):
    if isinstance(fm, AnovaFeatureMap):
        return fm.kernel
    gamma = fm.gamma if fm is not None else args.gamma
    if args.anova:
        structure = AnovaKernel.load(args.anova)
        return AnovaKernel(structure.subsets, GaussianKernel(gamma), structure.d)
    return GaussianKernel(gamma)


def _feature_map(args):
    """Loads --map or builds the map the flags describe."""
    if args.map:
        return load_feature_map(args.map)
    if not args.method:
        raise QuadFeaturesArgumentError('either --method or --map is required')

    if args.anova:
        return build_anova_feature_map(
            _kernel(args), args.method, D_S=args.D, seed=args.seed, L=args.L,
            level=args.level, degree=args.degree
        )

    pairs = None
    d = args.d
    if normalize_method(args.method) == 'reweighted':
        if not args.data:
            raise QuadFeaturesArgumentError('reweighted features need --data')
        train, _ = split_rows(_load_dataset(args), 0.5, args.seed)
        pairs = sample_pairs(train, args.pairs, args.seed)
        d = train.d
    if d is None:
        raise QuadFeaturesArgumentError('--d is required')

    return build_feature_map(
        args.method, d, D=args.D, gamma=args.gamma, seed=args.seed, L=args.L,
        level=args.level, degree=args.degree, pairs=pairs, lam=args.lam,
        target_D=args.target_D, pool_factor=args.pool_factor
    )


def command_build(args):
    fm = _feature_map(args)
    write_json(args.out, fm.to_json())


def command_eval(args):
    fm = _feature_map(args)
    kernel = _kernel(args, fm)
    if args.data:
        _, heldout = split_rows(_load_dataset(args, fm.d), 0.5, args.seed)
        report = evaluate(fm, kernel, seed=args.seed, pairs=sample_pairs(heldout, args.heldout_pairs, args.seed))
    else:
        report = evaluate(fm, kernel, args.diameter, args.n_eval, args.seed)
    write_text(args.out, format_reports([report]))


def command_sweep(args):
    if args.config:
        config = SweepConfig.load(args.config)
        out = config.out if args.out == '-' else args.out
    else:
        if not args.method:
            raise QuadFeaturesArgumentError('either --config or --method is required')
        config = SweepConfig(
            [args.method], d=args.d, D=args.D, M=args.diameter or [1.0], seeds=[args.seed],
            gamma=args.gamma, L=args.L, level=args.level, degree=args.degree,
            n_eval=args.n_eval, data=args.data, pairs=args.pairs,
            heldout_pairs=args.heldout_pairs, lam=args.lam, target_D=args.target_D,
            pool_factor=args.pool_factor, anova=args.anova
        )
        out = args.out
    write_text(out, sweep(config))


def _embed_rows(fm, rows):
    if fast_path_available(fm):
        return embed_grid_fast(fm, rows)
    return fm.embed(rows)


def command_embed(args):
    if not args.data:
        raise QuadFeaturesArgumentError('embed needs --data')
    fm = _feature_map(args)
    dataset = _load_dataset(args, fm.d)
    write_matrix_csv(args.out, _embed_rows(fm, dataset.rows))


def command_bench(args):
    fm = _feature_map(args)
    if args.data:
        rows = _load_dataset(args, fm.d).rows
    else:
        rows = derive_rng(args.seed, STREAM_EVAL).standard_normal((BENCH_ROWS, fm.d))
    write_csv(args.out, BENCH_HEADER, [bench(fm, rows, args.repeats).row()])


COMMANDS = {
    'build': command_build,
    'eval': command_eval,
    'sweep': command_sweep,
    'embed': command_embed,
    'bench': command_bench,
}


def configure_logging(verbose, quiet):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s')


def main(argv=None):
    """
    Runs the command line and returns the exit status: 0 on success, 2 on
    a quadfeatures error (reported on stderr).
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        COMMANDS[args.command](args)
    except QuadFeaturesError as e:
        sys.stderr.write('quadfeatures {0}: {1}\n'.format(args.command, e))
        return 2
    return 0


