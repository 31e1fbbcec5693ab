# -*- coding: utf-8 -*-
"""Exceptions."""


class ConsistencyException(Exception):
    """Rasied when the internal consistency is broken."""
    pass

class InvalidParameterError(ValueError):
    """Raised when a parameter lies outside the domain of the operation (negative noncentrality, alpha outside (0,1), theta outside the parameter space..)."""
    pass

class DimensionMismatchError(ValueError):
    """Raised when an observation vector does not match the dimension of the model."""
    pass

class InvalidSpecError(ValueError):
    """Raised when a confidence interval specification violates 0 <= beta <= 1-alpha or alpha in (0,1)."""
    pass

class MismatchedObservationError(ValueError):
    """Raised when combining objects computed from different observations (i.e. an interval and a confidence curve)."""
    pass

class UnknownFigureError(ValueError):
    """Raised when asking for a figure dataset which is not known."""
    pass

class NumericalFailureError(ArithmeticError):
    """Raised when a numerical procedure (root finding, quadrature, series summation) cannot reach the required tolerance."""
    pass
