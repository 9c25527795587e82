"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.

Closed-form error bounds and point counts for quadrature features.
"""

import math

from .exceptions import QuadFeaturesArgumentError


def subgaussian_parameter(gamma):
    """
    The subgaussian parameter b of the spectrum of exp(-gamma |u|^2), which
    is N(0, 2 gamma I): b = sqrt(2 gamma), so b = 1 at gamma = 1/2.
    """
    if not gamma > 0:
        raise QuadFeaturesArgumentError('gamma must be positive, got {0!r}'.format(gamma))
    return math.sqrt(2.0 * gamma)


def _check_nonnegative(**values):
    for name, value in values.items():
        if value < 0:
            raise QuadFeaturesArgumentError('{0} must be non-negative, got {1!r}'.format(name, value))


def poly_bound(b, M, R):
    """
    The maximum-error bound 3 (e b^2 M^2 / R)^(R/2) for a non-negative rule
    exact to total degree R over a region of diameter M.

    :param b: the subgaussian parameter of the spectrum
    :param M: the region diameter
    :param R: the exactness degree, even and at least 2
    :raises QuadFeaturesArgumentError: if R is odd or below 2
    """
    if isinstance(R, bool) or int(R) != R or R < 2 or R % 2:
        raise QuadFeaturesArgumentError('R must be an even integer >= 2, got {0!r}'.format(R))
    _check_nonnegative(b=b, M=M)
    return 3.0 * (math.e * b * b * M * M / R) ** (R / 2)


def sparse_bound(b, M, A, d):
    """
    The sparse-grid maximum-error bound 2^d (12 e b^2 M^2 / A)^A, which
    holds once A >= 24 e b^2 M^2.

    :return: the bound, or None when A is below the threshold
    """
    _check_nonnegative(b=b, M=M, A=A, d=d)
    if A < 24.0 * math.e * b * b * M * M:
        return None
    if A == 0:
        # Only reachable with M == 0
        return 0.0
    return 2.0 ** d * (12.0 * math.e * b * b * M * M / A) ** A


def counts(d, R, A, L):
    """
    Exact point and constraint counts as Python integers.

    :return: a tuple of the number of degree-R moment constraints C(d+R, d),
             the dense grid size L^d and the sparse grid size bound
             3^A C(d+A, A)
    """
    _check_nonnegative(d=d, R=R, A=A, L=L)
    d, R, A, L = int(d), int(R), int(A), int(L)
    return math.comb(d + R, d), L ** d, 3 ** A * math.comb(d + A, A)


class BoundInputs(object):
    """
    The parameters the bounds depend on.

    :param b: the subgaussian parameter
    :param M: the region diameter
    :param R: the exactness degree
    :param A: the sparse-grid level
    :param d: the dimension
    """

    def __init__(self, b=1.0, M=1.0, R=2, A=0, d=1):
        if not b > 0:
            raise QuadFeaturesArgumentError('b must be positive, got {0!r}'.format(b))
        _check_nonnegative(M=M, A=A)
        self.b = b
        self.M = M
        self.R = R
        self.A = A
        self.d = d

    @classmethod
    def for_gamma(cls, gamma, **kwargs):
        return cls(b=subgaussian_parameter(gamma), **kwargs)

    def poly(self):
        return poly_bound(self.b, self.M, self.R)

    def sparse(self):
        return sparse_bound(self.b, self.M, self.A, self.d)

    def __repr__(self):
        return '<{0} b={1!r} M={2!r} R={3} A={4} d={5}>'.format(
            self.__class__.__name__, self.b, self.M, self.R, self.A, self.d
        )
