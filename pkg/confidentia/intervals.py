# -*- coding: utf-8 -*-
"""Confidence interval procedures built on the quantiles of D, the classification of observed intervals
and the confidence the confidence distribution gives to an observed interval."""

import numpy as np
from .models import Model
from .datastructures import Proposition, is_unbounded, float_to_bound
from .utilities import check_nonnegative, check_probability, is_close, ROUND_OFF_TOLERANCE
from .exceptions import InvalidSpecError, InvalidParameterError, MismatchedObservationError

# Setup logging
import logging
logger = logging.getLogger(__name__)

TWO_SIDED = 'two-sided'
ONE_SIDED = 'one-sided'
EMPTY = 'empty'
POINT_ZERO = 'point-zero'
INTERVAL_KINDS = (TWO_SIDED, ONE_SIDED, EMPTY, POINT_ZERO)

# Integer codes of the kinds, as returned by ci_bounds
KIND_CODES = {kind: code for code, kind in enumerate(INTERVAL_KINDS)}


#=========================
#  Specification
#=========================

class IntervalSpec(object):
    """A confidence interval procedure [q^-1_{1-alpha-beta}(D), q^-1_{1-beta}(D)), with the upper end included
    if closed is set.

    Args:
        alpha(float): the confidence level, in (0,1).
        beta(float): the probability allocated to the upper tail, in [0, 1-alpha]. With beta=0 or
                     beta=1-alpha the procedure is one-sided.
        closed(bool): if the interval includes its upper end.
    """

    def __init__(self, alpha, beta=0.0, closed=False):
        try:
            alpha = check_probability(alpha, 'alpha', open_interval=True)
            beta = check_probability(beta, 'beta', open_interval=False)
        except InvalidParameterError as e:
            raise InvalidSpecError(str(e))
        if beta > 1.0 - alpha + ROUND_OFF_TOLERANCE:
            raise InvalidSpecError('The upper tail allocation beta={} exceeds 1-alpha={}'.format(beta, 1.0 - alpha))
        self.alpha = alpha
        self.beta = min(beta, 1.0 - alpha)
        self.closed = bool(closed)

    def __repr__(self):
        return 'IntervalSpec(alpha={}, beta={}, closed={})'.format(self.alpha, self.beta, self.closed)

    @property
    def lower_level(self):
        """The level 1-alpha-beta whose quantile inverse gives the lower end."""
        level = 1.0 - self.alpha - self.beta
        return level if level > ROUND_OFF_TOLERANCE else 0.0

    @property
    def upper_level(self):
        """The level 1-beta whose quantile inverse gives the upper end."""
        return 1.0 - self.beta


#=========================
#  Observed interval
#=========================

class ObservedInterval(object):
    """An observed confidence interval. Empty intervals keep the observation they come from.

    Args:
        lower(float): the lower end.
        upper(float): the upper end, or ``UNBOUNDED``.
        kind(str): one of ``two-sided``, ``one-sided``, ``empty`` or ``point-zero``.
        closed(bool): if the upper end belongs to the interval.
        d(float): the observed value of D.
    """

    def __init__(self, lower, upper, kind, closed, d):
        if kind not in INTERVAL_KINDS:
            raise InvalidParameterError('Unknown interval kind "{}"'.format(kind))
        if not is_unbounded(upper) and upper < lower:
            raise InvalidParameterError('Interval upper end {} below the lower end {}'.format(upper, lower))
        if kind == EMPTY and closed:
            raise InvalidParameterError('Empty intervals come from half-open procedures only')
        if kind == POINT_ZERO and not closed:
            raise InvalidParameterError('The interval {0} comes from closed procedures only')
        self.lower = float(lower)
        self.upper = upper if is_unbounded(upper) else float(upper)
        self.kind = kind
        self.closed = bool(closed)
        self.d = float(d)

    def __repr__(self):
        if self.kind == EMPTY:
            return '[0, 0)'
        if self.kind == POINT_ZERO:
            return '{0}'
        return '[{}, {}{}'.format(self.lower, self.upper, ']' if self.closed and not is_unbounded(self.upper) else ')')

    def contains(self, theta):
        if self.kind == EMPTY:
            return False
        if self.kind == POINT_ZERO:
            return theta == 0
        if theta < self.lower:
            return False
        if is_unbounded(self.upper):
            return True
        return theta <= self.upper if self.closed else theta < self.upper

    def as_proposition(self):
        if self.kind == EMPTY:
            return Proposition.empty()
        if self.kind == POINT_ZERO:
            return Proposition.point(0.0)
        return Proposition(self.lower, self.upper, True, self.closed)


#=========================
#  Operations
#=========================

def _check_spec_and_model(spec, model):
    if not isinstance(spec, IntervalSpec):
        raise InvalidSpecError('Expected an IntervalSpec (got "{}")'.format(spec.__class__.__name__))
    if not isinstance(model, Model):
        raise InvalidParameterError('Expected a Model (got "{}")'.format(model.__class__.__name__))


def ci_thresholds(spec, model):
    """The values of d separating the kinds of observed intervals: q_{1-alpha-beta}(0) (above it the
    interval is two-sided) and q_{1-beta}(0) (at or below it the interval is empty, or {0} if closed)."""
    _check_spec_and_model(spec, model)
    return model.d_quantile_at_boundary(spec.lower_level), model.d_quantile_at_boundary(spec.upper_level)


def ci_observe(d, spec, model):
    """Compute and classify the observed confidence interval for the observed d.

    Args:
        d(float): the observed value of D.
        spec(IntervalSpec): the procedure.
        model(Model): the model.

    Returns:
        ObservedInterval: the observed interval.
    """
    _check_spec_and_model(spec, model)
    d = float(check_nonnegative(d, 'd'))
    two_sided_threshold, empty_threshold = ci_thresholds(spec, model)

    if d > two_sided_threshold:
        lower = float(model.d_quantile_inverse(spec.lower_level, d))
        upper = float_to_bound(model.d_quantile_inverse(spec.upper_level, d))
        return ObservedInterval(lower, upper, TWO_SIDED, spec.closed, d)
    if empty_threshold < d <= two_sided_threshold:
        upper = float_to_bound(model.d_quantile_inverse(spec.upper_level, d))
        return ObservedInterval(0.0, upper, ONE_SIDED, spec.closed, d)
    if spec.closed:
        return ObservedInterval(0.0, 0.0, POINT_ZERO, True, d)
    return ObservedInterval(0.0, 0.0, EMPTY, False, d)


def ci_bounds(ds, spec, model):
    """Compute the observed intervals for many observations at once.

    Returns:
        tuple: the lower ends, the upper ends (infinite if unbounded) and the kind codes (see ``KIND_CODES``),
        as numpy arrays.
    """
    _check_spec_and_model(spec, model)
    ds = np.atleast_1d(check_nonnegative(ds, 'd')).astype(float)
    two_sided_threshold, empty_threshold = ci_thresholds(spec, model)

    two_sided = ds > two_sided_threshold
    one_sided = (ds > empty_threshold) & ~two_sided
    kinds = np.full(ds.size, KIND_CODES[POINT_ZERO if spec.closed else EMPTY])
    kinds[two_sided] = KIND_CODES[TWO_SIDED]
    kinds[one_sided] = KIND_CODES[ONE_SIDED]

    lower = np.zeros(ds.size)
    upper = np.zeros(ds.size)
    if np.any(two_sided):
        lower[two_sided] = model.d_quantile_inverse(spec.lower_level, ds[two_sided])
    bounded = two_sided | one_sided
    if np.any(bounded):
        upper[bounded] = model.d_quantile_inverse(spec.upper_level, ds[bounded])
    return lower, upper, kinds


def ci_contains(theta, lower, upper, kinds, closed):
    """Check, element-wise, if the intervals returned by ``ci_bounds`` contain theta."""
    inside_upper = theta <= upper if closed else theta < upper
    bounded = (kinds == KIND_CODES[TWO_SIDED]) | (kinds == KIND_CODES[ONE_SIDED])
    point_zero = (kinds == KIND_CODES[POINT_ZERO]) & (theta == 0)
    return (bounded & (lower <= theta) & inside_upper) | point_zero


def ci_confidence(interval, curve):
    """The confidence the confidence distribution assigns to an observed interval: alpha for two-sided
    intervals, 1-beta for one-sided ones and the point mass M(d) for the empty interval and for {0}.

    Args:
        interval(ObservedInterval): the observed interval.
        curve(ConfidenceCurve): the confidence curve for the same observation.
    """
    if not is_close(interval.d, curve.d, rel_tol=1e-12, abs_tol=1e-12):
        raise MismatchedObservationError('Interval observed at d={} but curve built at d={}'.format(interval.d, curve.d))
    if interval.kind in (EMPTY, POINT_ZERO):
        return curve.point_mass
    upper = 1.0 if is_unbounded(interval.upper) else float(curve.eval(interval.upper))
    if interval.kind == ONE_SIDED:
        return upper
    return upper - float(curve.eval(interval.lower))
