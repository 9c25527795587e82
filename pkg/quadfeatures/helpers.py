"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import itertools
import math
from collections import Counter

import numpy as np

from .exceptions import QuadFeaturesArgumentError

# Stream identifiers mixed into a master seed so that every consumer of
# randomness gets its own reproducible generator
STREAM_BUILD = 0
STREAM_EVAL = 1
STREAM_PAIRS = 2
STREAM_DATA = 4


def double_factorial(n):
    """
    Returns n!! as an exact integer, with (-1)!! == 0!! == 1.

    :param n: an integer >= -1
    """
    if n < -1:
        raise QuadFeaturesArgumentError(
            'double factorial is undefined for {0}'.format(n)
        )
    return math.prod(range(n, 0, -2))


def normal_moment(p):
    """
    The p-th moment of the standard normal distribution: 0 for odd p and
    (p - 1)!! for even p.

    :param p: a non-negative integer
    """
    if p % 2:
        return 0
    return double_factorial(p - 1)


def mixed_normal_moment(exponents):
    """
    The moment E[prod_l w_l^{r_l}] of a standard normal vector, which factors
    over coordinates.

    :param exponents: the per-coordinate exponents r_l
    """
    return math.prod(normal_moment(r) for r in exponents)


def monomial_terms(d, R):
    """
    Enumerates every monomial of total degree <= R in d variables as a
    tuple of variable indices (a variable appears once per power), in order
    of increasing degree. The empty tuple is the constant monomial.

    :param d: the number of variables
    :param R: the maximum total degree
    """
    for degree in range(R + 1):
        for term in itertools.combinations_with_replacement(range(d), degree):
            yield term


def term_exponents(term):
    """Collapses a monomial term into {variable: exponent}."""
    return Counter(term)


def multi_indices(d, A):
    """
    Enumerates every multi-index m in N^d with |m|_1 <= A, in lexicographic
    order of the (sparse) level assignments.

    :param d: the dimension
    :param A: the maximum total level
    """
    if d == 0:
        yield ()
        return
    for first in range(A + 1):
        for rest in multi_indices(d - 1, A - first):
            yield (first,) + rest


def count_multi_indices(d, A):
    """The number of multi-indices in N^d with |m|_1 <= A, C(d + A, A)."""
    return math.comb(d + A, A)


def derive_rng(seed, *streams):
    """
    Builds a numpy Generator from a master seed and stream identifiers so
    that independent consumers never share random draws.

    :param seed: the master seed
    :param streams: non-negative integers naming the stream
    """
    return np.random.default_rng(
        np.random.SeedSequence([int(seed)] + [int(s) for s in streams])
    )


def as_rows(values, d=None):
    """
    Normalises a single vector or a matrix of vectors into a 2-d float array.

    :param values: a vector of length d or an (n, d) matrix
    :param d: the expected dimension, if known
    :return: a tuple containing the (n, d) array and a boolean indicating
             whether a single vector was passed in
    """
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 1:
        is_single = True
        array = array[np.newaxis, :]
    elif array.ndim == 2:
        is_single = False
    else:
        raise QuadFeaturesArgumentError(
            'expected a vector or matrix, got an array of shape {0}'.format(
                array.shape
            )
        )

    if d is not None and array.shape[1] != d:
        raise QuadFeaturesArgumentError(
            'dimension mismatch: expected {0} columns, got {1}'.format(
                d, array.shape[1]
            )
        )

    if not np.all(np.isfinite(array)):
        raise QuadFeaturesArgumentError('input contains non-finite values')

    return array, is_single


def as_pairs(pairs, d=None):
    """
    Normalises data pairs into two (n, d) arrays.

    :param pairs: either a tuple (X, Y) of two (n, d) arrays or a sequence
                  of (x, y) vector pairs
    :param d: the expected dimension, if known
    :return: a tuple (X, Y)
    """
    if isinstance(pairs, tuple) and len(pairs) == 2 and np.ndim(pairs[0]) == 2:
        X, Y = pairs
    else:
        pairs = list(pairs)
        if not pairs:
            raise QuadFeaturesArgumentError('at least one pair is required')
        X = [x for x, _ in pairs]
        Y = [y for _, y in pairs]

    X, _ = as_rows(np.atleast_2d(X), d)
    Y, _ = as_rows(np.atleast_2d(Y), X.shape[1])
    if X.shape != Y.shape or X.shape[0] == 0:
        raise QuadFeaturesArgumentError(
            'pairs need matching non-empty sides, got {0} and {1}'.format(X.shape, Y.shape)
        )
    return X, Y


def child_seed(seed, index):
    """A reproducible integer seed for the index-th member of a family."""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(1)
    return int(state[0])
