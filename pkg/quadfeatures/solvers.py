"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Non-negative least squares and the quadrature constructors built on it.
"""

import logging
import math

import numpy as np
import scipy.linalg

from .exceptions import (
    QuadFeaturesArgumentError, QuadFeaturesConstructionError,
    QuadFeaturesConvergenceError
)
from .grids import (
    DEFAULT_CONSTRAINT_CAP, DEFAULT_POINT_CAP, GridQuadrature, moment_system,
    provenance, sample_dense_grid
)
from .helpers import STREAM_BUILD, as_pairs, derive_rng

logger = logging.getLogger(__name__)

DEFAULT_NNLS_TOL = 1e-10
DEFAULT_EXACTNESS_TOL = 1e-8
DEFAULT_POOL_FACTOR = 4
DEFAULT_BISECT_ITERS = 30

# Relative KKT violation above which an accepted solution is reported
KKT_WARN_TOL = 1e-8

# Doublings of the upper lambda before giving up on reaching the target
MAX_LAMBDA_DOUBLINGS = 64

# Relative residual below which a column counts as a combination of the
# passive columns
SPAN_TOL = 1e-10


class NnlsSolution(object):
    """
    The result of a non-negative least squares solve.

    :param a: the non-negative solution vector
    :param residual_norm: |M a - b|
    :param iterations: the number of active-set changes performed
    :param history: the objective after every outer iteration
    :param penalty: the l1 coefficient c of the objective
                    1/2 |M a - b|^2 + c sum(a)
    """

    def __init__(self, a, residual_norm, iterations, history=(), penalty=0.0):
        self.a = a
        self.residual_norm = residual_norm
        self.iterations = iterations
        self.history = list(history)
        self.penalty = penalty

    @property
    def active_set(self):
        """Indices held at the constraint a == 0."""
        return np.flatnonzero(self.a == 0)

    @property
    def support(self):
        return np.flatnonzero(self.a > 0)

    @property
    def nnz(self):
        return int(np.count_nonzero(self.a))

    @property
    def objective(self):
        return 0.5 * self.residual_norm ** 2 + self.penalty * float(self.a.sum())

    def __repr__(self):
        return '<{0} nnz={1} residual_norm={2!r} iterations={3}>'.format(
            self.__class__.__name__, self.nnz, self.residual_norm, self.iterations
        )


class _PassiveSet(object):
    """
    The columns currently free to move, with their Gram matrix kept up to
    date as columns enter and leave.
    """

    def __init__(self, M, q):
        self.M = M
        self.q = q
        self.columns = []
        self.gram = np.empty((0, 0))

    def add(self, j):
        column = self.M[:, j]
        k = len(self.columns)
        gram = np.empty((k + 1, k + 1))
        gram[:k, :k] = self.gram
        if k:
            cross = self.M[:, self.columns].T.dot(column)
            gram[:k, k] = cross
            gram[k, :k] = cross
        gram[k, k] = column.dot(column)
        self.gram = gram
        self.columns.append(j)

    def remove(self, dropped):
        keep = [i for i, c in enumerate(self.columns) if c not in dropped]
        self.gram = self.gram[np.ix_(keep, keep)]
        self.columns = [self.columns[i] for i in keep]

    def _solve_gram(self, rhs):
        try:
            factor = scipy.linalg.cho_factor(self.gram)
            return scipy.linalg.cho_solve(factor, rhs)
        except (scipy.linalg.LinAlgError, ValueError):
            return scipy.linalg.lstsq(self.gram, rhs)[0]

    def solve(self):
        return self._solve_gram(self.q[self.columns])

    def span_coefficients(self, j):
        """
        The coefficients t with M[:, j] == M[:, columns] t when column j lies
        in the span of the passive columns, else None.
        """
        if not self.columns:
            return None
        column = self.M[:, j]
        basis = self.M[:, self.columns]
        t = self._solve_gram(basis.T.dot(column))
        if np.linalg.norm(column - basis.dot(t)) > SPAN_TOL * np.linalg.norm(column):
            return None
        return t


def kkt_violation(M, b, a, penalty=0.0):
    """
    The largest violation of the optimality conditions of
    min 1/2 |M a - b|^2 + penalty sum(a) subject to a >= 0, relative to
    |M^T b|: the gradient must vanish on the support and be non-negative
    elsewhere.
    """
    M = np.asarray(M, dtype=np.float64)
    gradient = M.T.dot(M.dot(a) - b) + penalty
    scale = np.linalg.norm(M.T.dot(b)) or 1.0
    positive = a > 0
    on_support = np.abs(gradient[positive]).max() if positive.any() else 0.0
    off_support = (-gradient[~positive]).max() if (~positive).any() else 0.0
    return max(on_support, off_support, 0.0) / scale


def nnls(M, b, tol=DEFAULT_NNLS_TOL, max_iter=None, penalty=0.0):
    """
    Solves min 1/2 |M a - b|^2 + penalty * sum(a) subject to a >= 0 with
    the Lawson-Hanson active-set method. A positive penalty shifts the
    gradient by a constant, which is how an l1 term on non-negative
    variables folds into the same iteration.

    :param M: an (n, p) matrix
    :param b: an n-vector
    :param tol: a variable enters the passive set only while its negative
                gradient exceeds tol * |M^T b|
    :param max_iter: the budget of active-set changes (defaults to 3 * p)
    :param penalty: the non-negative l1 coefficient
    :raises QuadFeaturesConvergenceError: if the budget is exhausted; the
                                          best iterate is attached as
                                          solution
    """

    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).ravel()
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise QuadFeaturesArgumentError('M must be a non-empty matrix, got shape {0}'.format(M.shape))
    if b.size != M.shape[0]:
        raise QuadFeaturesArgumentError(
            'b has {0} entries but M has {1} rows'.format(b.size, M.shape[0])
        )
    if not tol > 0:
        raise QuadFeaturesArgumentError('tol must be positive, got {0!r}'.format(tol))
    if penalty < 0:
        raise QuadFeaturesArgumentError('penalty must be non-negative, got {0!r}'.format(penalty))

    n, p = M.shape
    budget = max_iter if max_iter is not None else 3 * p

    Mtb = M.T.dot(b)
    threshold = tol * np.linalg.norm(Mtb)
    q = Mtb - penalty

    def objective(x):
        r = M.dot(x) - b
        return 0.5 * r.dot(r) + penalty * x.sum()

    def fail(x, iterations, history):
        best = NnlsSolution(x.copy(), float(np.linalg.norm(M.dot(x) - b)), iterations, history, penalty)
        raise QuadFeaturesConvergenceError(
            'NNLS did not converge within {0} iterations (p={1})'.format(budget, p),
            iterations=iterations, solution=best
        )

    x = np.zeros(p)
    passive = np.zeros(p, dtype=bool)
    blocked = np.zeros(p, dtype=bool)
    active = _PassiveSet(M, q)
    history = [objective(x)]
    iterations = 0

    while True:
        w = q - M.T.dot(M.dot(x))
        eligible = ~passive & ~blocked & (w > threshold)
        if not eligible.any():
            break

        iterations += 1
        if iterations > budget:
            fail(x, iterations - 1, history)

        j = int(np.argmax(np.where(eligible, w, -np.inf)))
        t = active.span_coefficients(j) if penalty > 0 else None
        if t is not None and np.any(t > 0):
            # Column j is a combination of the passive columns; moving weight
            # onto it keeps M x fixed and lowers the penalty until a passive
            # variable reaches zero
            columns = np.array(active.columns)
            current = x[columns]
            shrinking = t > 0
            ratios = current[shrinking] / t[shrinking]
            step = ratios.min()
            x[columns] = current - step * t
            x[columns[shrinking][np.argmin(ratios)]] = 0.0
            x[j] = step

            dropped = set(int(c) for c in columns[x[columns] <= 0])
            x[list(dropped)] = 0.0
            passive[list(dropped)] = False
            active.remove(dropped)
            logger.debug('NNLS pivot: column %d replaces %s', j, sorted(dropped))

        passive[j] = True
        active.add(j)

        while True:
            z = active.solve()
            if np.all(z > 0):
                x[:] = 0.0
                x[active.columns] = z
                blocked[:] = False
                break

            iterations += 1
            if iterations > budget:
                fail(x, iterations - 1, history)

            # Step towards z until the first passive variable hits zero
            columns = np.array(active.columns)
            current = x[columns]
            crossing = z <= 0
            ratios = current[crossing] / (current[crossing] - z[crossing])
            alpha = ratios.min()
            x[columns] = current + alpha * (z - current)
            x[columns[crossing][np.argmin(ratios)]] = 0.0

            dropped = set(int(c) for c in columns[x[columns] <= 0])
            x[list(dropped)] = 0.0
            passive[list(dropped)] = False
            active.remove(dropped)
            if alpha == 0 and j in dropped:
                blocked[j] = True
            if not active.columns:
                break

        history.append(objective(x))
        logger.debug(
            'NNLS iteration %d: passive=%d objective=%.6e', iterations,
            len(active.columns), history[-1]
        )

    if penalty == 0 and active.columns:
        # Re-solve on the final support with QR for accuracy
        polished = scipy.linalg.lstsq(M[:, active.columns], b)[0]
        if np.all(polished > 0):
            x[active.columns] = polished

    solution = NnlsSolution(x, float(np.linalg.norm(M.dot(x) - b)), iterations, history, penalty)

    violation = kkt_violation(M, b, x, penalty)
    if violation > KKT_WARN_TOL:
        logger.warning('NNLS accepted with relative KKT violation %.3e', violation)

    logger.debug('NNLS finished: %r', solution)
    return solution


def construct_poly_exact(d, R, D, seed, tol=DEFAULT_EXACTNESS_TOL,
                         cap=DEFAULT_CONSTRAINT_CAP, nnls_tol=DEFAULT_NNLS_TOL):
    """
    Builds a non-negative rule exact for every polynomial of total degree
    <= R: D candidate points are drawn from the standard normal spectrum
    and weighted by NNLS against the analytic moments.

    :param d: the dimension
    :param R: the even exactness degree
    :param D: the number of candidate points; C(d + R, d) or more is
              recommended
    :param seed: the master seed for the candidate draw
    :param tol: the largest acceptable moment residual
    :raises QuadFeaturesConstructionError: if the residual exceeds tol;
                                           retrying with a larger D may help
    """

    if isinstance(R, bool) or int(R) != R or R < 0 or R % 2:
        raise QuadFeaturesArgumentError('R must be a non-negative even integer, got {0!r}'.format(R))
    if isinstance(D, bool) or int(D) != D or D < 1:
        raise QuadFeaturesArgumentError('D must be a positive integer, got {0!r}'.format(D))
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise QuadFeaturesArgumentError('d must be a positive integer, got {0!r}'.format(d))

    rng = derive_rng(seed, STREAM_BUILD)
    points = rng.standard_normal((int(D), int(d)))
    matrix, rhs, _ = moment_system(points, int(R), cap)

    solution = nnls(matrix, rhs, tol=nnls_tol)
    keep = solution.a > 0
    residual = float(np.max(np.abs(matrix[:, keep].dot(solution.a[keep]) - rhs)))

    if residual > tol:
        raise QuadFeaturesConstructionError(
            'moment residual {0:.3e} exceeds {1:.1e} with {2} constraints and D={3}; '
            'try more candidate points'.format(residual, tol, rhs.size, D),
            residual=residual
        )

    logger.info(
        'built poly-exact rule d=%d R=%d from %d candidates: %d points, residual %.3e',
        d, R, D, int(keep.sum()), residual
    )
    return GridQuadrature(
        points[keep], solution.a[keep],
        provenance('poly_exact', D=int(D), R=int(R), d=int(d), seed=seed, residual=residual)
    )


class _ReweightProblem(object):
    """The cosine design matrix and kernel targets shared across lambdas."""

    def __init__(self, candidates, pairs, kernel):
        scale = getattr(kernel, 'spectral_scale', None)
        if scale is None:
            raise QuadFeaturesArgumentError(
                'reweighting needs a shift-invariant kernel with a spectral scale, got {0!r}'.format(kernel)
            )
        if candidates.D == 0:
            raise QuadFeaturesArgumentError('reweighting needs at least one candidate point')

        X, Y = as_pairs(pairs, candidates.d)
        self.candidates = candidates
        self.n = X.shape[0]
        self.matrix = np.cos((X - Y).dot(candidates.points.T) * scale)
        self.target = np.atleast_1d(kernel(X, Y))

    def penalty_ceiling(self):
        """The lambda at and above which every weight is zero."""
        return 2.0 * np.linalg.norm(self.matrix.T.dot(self.target)) / self.n

    def solve(self, lam, tol=DEFAULT_NNLS_TOL):
        if lam < 0:
            raise QuadFeaturesArgumentError('lambda must be non-negative, got {0!r}'.format(lam))

        # (1/n)|Ma - b|^2 + lam sum(a) is (2/n) times 1/2 |Ma - b|^2 + (n lam / 2) sum(a)
        solution = nnls(self.matrix, self.target, tol=tol, penalty=self.n * lam / 2.0)
        keep = solution.a > 0
        weights = solution.a[keep]
        if not keep.any():
            logger.warning('reweighting with lambda=%r kept no points', lam)

        return GridQuadrature(
            self.candidates.points[keep], weights,
            provenance(
                'reweighted', lam=float(lam), n=self.n, sum=float(weights.sum()),
                source=self.candidates.provenance
            )
        )


def reweight(candidates, pairs, kernel, lam=0.0, tol=DEFAULT_NNLS_TOL):
    """
    Replaces the weights of candidate points by those minimising the mean
    squared kernel error on data pairs plus an l1 penalty:
    (1/n)|M a - b|^2 + lam * sum(a), a >= 0, where
    M[l, i] = cos(omega_i . (x_l - y_l)) and b[l] = k(x_l - y_l). Points with
    zero weight are dropped and the weights are not renormalised.

    :param candidates: a GridQuadrature whose points are kept
    :param pairs: data pairs, see helpers.as_pairs
    :param kernel: a GaussianKernel
    :param lam: the non-negative l1 coefficient
    """
    return _ReweightProblem(candidates, pairs, kernel).solve(lam, tol)


def bisect_lambda(candidates, pairs, kernel, target_D, lam_hi=1.0,
                  iters=DEFAULT_BISECT_ITERS, tol=DEFAULT_NNLS_TOL,
                  return_bracket=False):
    """
    Bisects on the l1 coefficient to bring the support of the reweighted
    rule down to at most target_D points.

    :param target_D: the largest acceptable number of points
    :param lam_hi: the initial upper end, doubled until it meets the target
    :param iters: the fixed number of bisection steps
    :param return_bracket: also return (lam_lo, lam_hi), where lam_lo is
                           the largest lambda tried whose support exceeded
                           target_D (0 when lambda = 0 already meets it)
    :return: a tuple (lambda, GridQuadrature), extended with the bracket
             when requested
    """

    if isinstance(target_D, bool) or int(target_D) != target_D or target_D < 1:
        raise QuadFeaturesArgumentError('target_D must be a positive integer, got {0!r}'.format(target_D))
    if not lam_hi > 0:
        raise QuadFeaturesArgumentError('lam_hi must be positive, got {0!r}'.format(lam_hi))

    problem = _ReweightProblem(candidates, pairs, kernel)

    def done(lam, grid, lo, hi):
        logger.info('bisection chose lambda=%r with D=%d (target %d)', lam, grid.D, target_D)
        if return_bracket:
            return lam, grid, (lo, hi)
        return lam, grid

    grid = problem.solve(0.0, tol)
    if grid.D <= target_D:
        return done(0.0, grid, 0.0, 0.0)

    hi = float(lam_hi)
    best = problem.solve(hi, tol)
    doublings = 0
    while best.D > target_D:
        doublings += 1
        if doublings > MAX_LAMBDA_DOUBLINGS:
            raise QuadFeaturesConvergenceError(
                'lambda bracket did not reach D <= {0} after {1} doublings'.format(target_D, doublings - 1),
                iterations=doublings - 1
            )
        hi *= 2.0
        best = problem.solve(hi, tol)

    lo = 0.0
    best_lam = hi
    for _ in range(int(iters)):
        mid = 0.5 * (lo + hi)
        grid = problem.solve(mid, tol)
        logger.debug('bisection bracket [%r, %r]: lambda=%r gives D=%d', lo, hi, mid, grid.D)
        if grid.D <= target_D:
            hi = mid
            if grid.D >= best.D:
                best, best_lam = grid, mid
        else:
            lo = mid

    return done(best_lam, best, lo, hi)


def candidate_pool(L, d, target_D, pool_factor=DEFAULT_POOL_FACTOR, seed=0,
                   cap=DEFAULT_POINT_CAP):
    """
    Draws pool_factor * target_D candidates by weight-proportional
    subsampling of the L-point dense Gaussian quadrature grid. Grids above
    cap are sampled coordinate by coordinate instead of being enumerated.

    :param L: points per coordinate of the dense grid
    :param d: the dimension
    :param target_D: the size of the final reweighted rule
    :param pool_factor: the ratio of draws to target_D
    :param seed: the master seed
    """
    if pool_factor < 1:
        raise QuadFeaturesArgumentError('pool_factor must be at least 1, got {0!r}'.format(pool_factor))

    draws = int(math.ceil(pool_factor * target_D))
    pool = sample_dense_grid(L, d, draws, seed, cap)

    logger.info('candidate pool: %d draws from L=%d d=%d, %d distinct', draws, L, d, pool.D)
    return pool
