"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Independent reference computations the tests compare against.
"""

import itertools
import math

import numpy as np


def sturm_count(diagonal, off_diagonal, x):
    """The number of eigenvalues below x of a symmetric tridiagonal matrix."""
    count = 0
    q = diagonal[0] - x
    for i in range(len(diagonal)):
        if i:
            q = diagonal[i] - x - off_diagonal[i - 1] ** 2 / q
        if q == 0:
            q = -1e-300
        if q < 0:
            count += 1
    return count


def sturm_eigenvalues(diagonal, off_diagonal, iterations=200):
    """All eigenvalues, ascending, by bisection on the Sturm count."""
    diagonal = np.asarray(diagonal, dtype=np.float64)
    off_diagonal = np.asarray(off_diagonal, dtype=np.float64)
    radius = np.abs(diagonal).copy()
    radius[:-1] += np.abs(off_diagonal)
    radius[1:] += np.abs(off_diagonal)
    bound = float(radius.max()) + 1.0

    values = []
    for k in range(len(diagonal)):
        lo, hi = -bound, bound
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if sturm_count(diagonal, off_diagonal, mid) > k:
                hi = mid
            else:
                lo = mid
        values.append(0.5 * (lo + hi))
    return np.array(values)


def brute_force_nnls(M, b, penalty=0.0):
    """
    Minimises 1/2 |M a - b|^2 + penalty sum(a), a >= 0, by solving the
    unconstrained problem on every support and keeping the best feasible
    candidate.

    :return: a tuple of the minimiser and the objective
    """
    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    p = M.shape[1]

    def objective(a):
        r = M.dot(a) - b
        return 0.5 * r.dot(r) + penalty * a.sum()

    best, best_value = np.zeros(p), objective(np.zeros(p))
    for size in range(1, p + 1):
        for support in itertools.combinations(range(p), size):
            columns = M[:, support]
            gram = columns.T.dot(columns)
            rhs = columns.T.dot(b) - penalty
            x = np.linalg.lstsq(gram, rhs, rcond=None)[0]
            if np.any(x < 0):
                continue
            a = np.zeros(p)
            a[list(support)] = x
            value = objective(a)
            if value < best_value:
                best, best_value = a, value
    return best, best_value


def proximal_nnls(M, b, penalty, iterations=20000):
    """The same objective as brute_force_nnls by projected gradient descent."""
    M = np.asarray(M, dtype=np.float64)
    step = 1.0 / np.linalg.norm(M, 2) ** 2
    a = np.zeros(M.shape[1])
    for _ in range(iterations):
        gradient = M.T.dot(M.dot(a) - b) + penalty
        a = np.maximum(a - step * gradient, 0.0)
    r = M.dot(a) - b
    return a, 0.5 * r.dot(r) + penalty * a.sum()


def hermite_rule(L):
    """Probabilists' Gauss-Hermite nodes and weights from numpy, weights summing to 1."""
    nodes, weights = np.polynomial.hermite_e.hermegauss(L)
    return nodes, weights / weights.sum()


def smolyak_combination(A, d):
    """
    The Smolyak rule by the combination technique: full tensor rules of
    G^{n(l_1)} x ... x G^{n(l_d)} with n(0) = 1 and n(l) = 2^l, for
    A - d + 1 <= |l| <= A, with coefficient (-1)^(A - |l|) C(d - 1, A - |l|).
    Duplicate points are not merged.

    :return: a tuple of points and weights
    """
    def level_rule(level):
        return hermite_rule(1 if level == 0 else 2 ** level)

    blocks, block_weights = [], []
    for levels in itertools.product(range(A + 1), repeat=d):
        total = sum(levels)
        if total > A or total < A - d + 1:
            continue
        coefficient = (-1) ** (A - total) * math.comb(d - 1, A - total)
        rules = [level_rule(level) for level in levels]
        points = np.array(list(itertools.product(*[nodes for nodes, _ in rules])))
        weights = np.array([math.prod(w) for w in itertools.product(*[w for _, w in rules])])
        blocks.append(points)
        block_weights.append(coefficient * weights)
    return np.concatenate(blocks), np.concatenate(block_weights)


def cosine_estimate(points, weights, U):
    """sum_i a_i cos(omega_i . u) for every row u of U."""
    return np.cos(np.atleast_2d(U).dot(np.atleast_2d(points).T)).dot(weights)


def normal_moment(p):
    """E[w^p] for a standard normal w."""
    if p % 2:
        return 0.0
    return float(math.prod(range(p - 1, 0, -2)))


def _key(point, decimals=12):
    return tuple(round(float(x), decimals) + 0.0 for x in point)


def tensor_grid_union(A, d):
    """
    The distinct points of every full tensor rule
    G^{n(l_1)} x ... x G^{n(l_d)} with |l| <= A, by enumeration.

    :return: a set of points rounded to 12 decimals
    """
    union = set()
    for levels in itertools.product(range(A + 1), repeat=d):
        if sum(levels) > A:
            continue
        axes = [hermite_rule(1 if level == 0 else 2 ** level)[0] for level in levels]
        union.update(_key(point) for point in itertools.product(*axes))
    return union


def cancelled_points(A, d):
    """
    The points of tensor_grid_union(A, d) whose combined Smolyak weight is
    zero: absent from the combination technique or summing to rounding
    noise there.
    """
    points, weights = smolyak_combination(A, d)
    totals, magnitudes = {}, {}
    for point, weight in zip(points, weights):
        key = _key(point)
        totals[key] = totals.get(key, 0.0) + weight
        magnitudes[key] = magnitudes.get(key, 0.0) + abs(weight)
    return {
        key for key in tensor_grid_union(A, d)
        if abs(totals.get(key, 0.0)) <= 1e-10 * magnitudes.get(key, 0.0)
    }
