"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""


class QuadFeaturesError(Exception):
    """The base quadfeatures exception which covers all exceptions raised."""
    pass


class QuadFeaturesArgumentError(QuadFeaturesError, ValueError):
    """Raised when an argument is out of range or has the wrong shape."""
    pass


class QuadFeaturesSizeError(QuadFeaturesArgumentError):
    """
    Raised when a construction would exceed a configured point or
    constraint cap.

    :param count: the number of points or constraints requested
    :param cap: the cap that was exceeded
    """

    def __init__(self, message, count=None, cap=None):
        super(QuadFeaturesSizeError, self).__init__(message)
        self.count = count
        self.cap = cap


class QuadFeaturesContractError(QuadFeaturesArgumentError):
    """Raised when a rule does not satisfy a precondition (e.g. signs)."""
    pass


class QuadFeaturesConvergenceError(QuadFeaturesError):
    """
    Raised when an iterative solver runs out of iterations.

    :param iterations: the number of iterations performed
    :param solution: the best iterate found, when the solver has one
    """

    def __init__(self, message, iterations=None, solution=None):
        super(QuadFeaturesConvergenceError, self).__init__(message)
        self.iterations = iterations
        self.solution = solution


class QuadFeaturesConstructionError(QuadFeaturesError):
    """
    Raised when a quadrature rule could not be constructed to the
    requested accuracy; the caller may retry with more candidate points.
    """

    def __init__(self, message, residual=None):
        super(QuadFeaturesConstructionError, self).__init__(message)
        self.residual = residual


class QuadFeaturesEmbeddingError(QuadFeaturesError):
    """
    Raised when a feature embedding is requested for a rule with negative
    weights; use approx_kernel for such rules instead.
    """
    pass


class QuadFeaturesParseError(QuadFeaturesError, ValueError):
    """Raised when an input file cannot be parsed."""

    def __init__(self, message, line=None):
        super(QuadFeaturesParseError, self).__init__(message)
        self.line = line


class QuadFeaturesConfigError(QuadFeaturesError, ValueError):
    """Raised when a sweep configuration contains an invalid key or value."""

    def __init__(self, message, key=None):
        super(QuadFeaturesConfigError, self).__init__(message)
        self.key = key
