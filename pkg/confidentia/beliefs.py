# -*- coding: utf-8 -*-
"""Consonant belief functions built from a confidence distribution or from a posterior: the plausibility
contour, the belief and the plausibility of propositions, and the belief-based test."""

from collections import namedtuple
import numpy as np
from .datastructures import Proposition, is_unbounded
from .utilities import check_nonnegative, check_probability, as_array, from_array
from .exceptions import InvalidParameterError

# Setup logging
import logging
logger = logging.getLogger(__name__)

BeliefTestResult = namedtuple('BeliefTestResult', ['reject', 'belief'])


class BeliefCurve(object):
    """The consonant belief function induced by a base distribution on the parameter space, through the
    plausibility contour pls(theta) = 1 - |2F(theta) - 1|.

    With an atom at zero the contour is taken as min(1, 2F(theta), 2(1 - F(theta-))), which coincides with
    the above for theta > 0 and equals one at zero when the atom is at least one half, so that the contour
    always peaks at the median.

    Args:
        source: a ``ConfidenceCurve`` (CD base) or a ``PosteriorCurve`` (UP base).
    """

    def __init__(self, source):
        for attribute in ('cdf', 'atom', 'median', 'method'):
            if not hasattr(source, attribute):
                raise InvalidParameterError('Cannot build a belief curve on "{}" (no {})'.format(source.__class__.__name__, attribute))
        self.source = source
        self.base = source.method
        self.median = source.median

    def __repr__(self):
        return 'BeliefCurve(base={}, median={})'.format(self.base, self.median)

    def cdf(self, theta):
        return self.source.cdf(theta)

    @property
    def atom(self):
        return self.source.atom


#=========================
#  Vectorised core
#=========================

def _plausibility_values(cdf_value, theta):
    """The contour at theta from the base distribution function value there."""
    cdf_value = np.asarray(cdf_value, dtype=float)
    if theta == 0:
        return np.minimum(1.0, 2.0 * cdf_value)
    return np.clip(1.0 - np.abs(2.0 * cdf_value - 1.0), 0.0, 1.0)


def _sup_plausibility(part, cdf, atom):
    """The supremum of the contour over an interval, from the position of the median: one if the median is
    in the closure of the interval, the contour at the end closest to the median otherwise."""
    lower, upper, lower_closed, _ = part
    atom = np.asarray(atom, dtype=float)
    if lower == 0 and not lower_closed:
        # Excluding zero: the supremum is the right limit of the contour there
        supremum = np.where(atom >= 0.5, 1.0 - np.abs(2.0 * atom - 1.0), 1.0)
    else:
        supremum = np.ones_like(atom)
    if lower > 0:
        lower_value = np.asarray(cdf(lower), dtype=float)
        supremum = np.where(lower_value > 0.5, _plausibility_values(lower_value, lower), supremum)
    if not is_unbounded(upper):
        upper_value = np.asarray(cdf(upper), dtype=float)
        supremum = np.where(upper_value < 0.5, _plausibility_values(upper_value, upper), supremum)
    return supremum


def belief_values(proposition, cdf, atom):
    """Compute beliefs for many observations at once.

    Args:
        proposition(Proposition): the proposition.
        cdf: a function returning, for a point theta, the base distribution function values at theta for all
             the observations (an array).
        atom: the atoms at zero of the base distributions (an array, zeros for posteriors).
    """
    atom = np.asarray(atom, dtype=float)
    supremum = np.zeros_like(atom)
    for part in proposition.complement_parts():
        supremum = np.maximum(supremum, _sup_plausibility(part, cdf, atom))
    return np.clip(1.0 - supremum, 0.0, 1.0)


def plausibility_values(proposition, cdf, atom):
    """Compute the plausibility sup_A pls of a proposition for many observations at once (see belief_values)."""
    atom = np.asarray(atom, dtype=float)
    supremum = np.zeros_like(atom)
    for part in proposition.parts():
        supremum = np.maximum(supremum, _sup_plausibility(part, cdf, atom))
    return supremum


#=========================
#  Operations
#=========================

def _check_proposition(proposition):
    if not isinstance(proposition, Proposition):
        raise InvalidParameterError('Expected a Proposition (got "{}")'.format(proposition.__class__.__name__))


def plausibility(theta, belief_curve):
    """The plausibility contour at theta (not negative). Works element-wise on arrays."""
    theta, scalar = as_array(check_nonnegative(theta, 'theta', clamp_round_off=True))
    cdf_values = np.asarray(belief_curve.cdf(theta), dtype=float)
    # Left limit of the distribution function: zero at zero, continuous elsewhere
    left_values = np.where(theta == 0, 0.0, cdf_values)
    values = np.minimum(1.0, np.minimum(2.0 * cdf_values, 2.0 * (1.0 - left_values)))
    return from_array(np.clip(values, 0.0, 1.0), scalar)


def belief(proposition, belief_curve):
    """The belief Bel(A) = 1 - sup of the contour over the complement of A."""
    _check_proposition(proposition)
    return float(belief_values(proposition, belief_curve.cdf, belief_curve.atom))


def plausibility_of_set(proposition, belief_curve):
    """The plausibility Pl(A) = sup of the contour over A, so that Bel(A) + Pl(not A) = 1."""
    _check_proposition(proposition)
    return float(plausibility_values(proposition, belief_curve.cdf, belief_curve.atom))


def belief_test(null_proposition, belief_curve, alpha):
    """Test a null proposition with the belief as p-value: reject if Bel(A) <= alpha.

    Returns:
        BeliefTestResult: the decision and the belief value.
    """
    alpha = check_probability(alpha, 'alpha', open_interval=True)
    value = belief(null_proposition, belief_curve)
    logger.debug('Belief of %s is %s (alpha=%s)', null_proposition, value, alpha)
    return BeliefTestResult(value <= alpha, value)
