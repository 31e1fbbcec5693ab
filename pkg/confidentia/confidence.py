# -*- coding: utf-8 -*-
"""The confidence distribution of a norm parameter: its curve, point mass at zero and density, the
confidence of propositions, and the detection of point masses from the quantiles of the statistic."""

from collections import namedtuple
import numpy as np
from scipy import stats
from .models import Model, CurvedNormalModel, Observation
from .datastructures import Proposition
from .utilities import check_nonnegative, check_finite, as_array, from_array
from .exceptions import InvalidParameterError, ConsistencyException

# Setup logging
import logging
logger = logging.getLogger(__name__)

# Levels at which the quantile limits are probed by has_point_mass
PROBE_LEVELS = (0.05, 0.5, 0.95)

# Distance from the boundary of the sample space above which a quantile limit counts as interior
INTERIOR_TOLERANCE = 1e-6


#=========================
#  Confidence curve
#=========================

class ConfidenceCurve(object):
    """The confidence distribution C(theta;d) = P_theta(D >= d) for an observed d.

    The mass at the lower end of the parameter space is stored explicitly as ``point_mass`` and is
    included in the curve: ``cdf(0)`` equals ``point_mass``. The curve is immutable once built.

    Args:
        model(Model): the model of D.
        d(float): the observed value of D.
    """

    method = 'CD'

    def __init__(self, model, d):
        if not isinstance(model, Model):
            raise InvalidParameterError('Expected a Model (got "{}")'.format(model.__class__.__name__))
        self.model = model
        self.d = float(check_nonnegative(d, 'd'))
        self.point_mass = float(model.point_mass(self.d))
        if not 0.0 <= self.point_mass <= 1.0:
            raise ConsistencyException('Point mass out of [0,1]: {}'.format(self.point_mass))
        self._median = None

    def __repr__(self):
        return 'ConfidenceCurve(model={}, d={}, point_mass={})'.format(self.model, self.d, self.point_mass)

    @property
    def atom(self):
        return self.point_mass

    def eval(self, theta):
        """Evaluate C(theta;d). Works element-wise on arrays."""
        return self.model.cd(theta, self.d)

    def cdf(self, theta):
        return self.eval(theta)

    def density(self, theta):
        """The continuous part c+(theta;d) of the confidence density."""
        return self.model.cd_density(theta, self.d)

    @property
    def median(self):
        """The smallest theta where the curve reaches one half (zero when the point mass is at least one half)."""
        if self._median is None:
            self._median = float(self.model.d_quantile_inverse(0.5, self.d))
        return self._median


#=========================
#  Operations
#=========================

def cd_eval(theta, curve):
    """Evaluate the confidence distribution C(theta;d) of the curve at theta (not negative)."""
    return curve.eval(theta)


def point_mass(curve):
    """Get the point mass M(d) = C({0};d) of the confidence distribution."""
    return curve.point_mass


def confidence_density(theta, curve):
    """Evaluate the continuous part of the confidence density at theta > 0. The atom at zero is
    never reported as a density value: query it with ``point_mass``."""
    theta_array = check_finite(theta, 'theta')
    if np.any(theta_array <= 0):
        raise InvalidParameterError('The confidence density is defined for theta > 0, use point_mass at zero (got "{}")'.format(theta))
    return curve.density(theta)


def confidence_of_set(proposition, curve):
    """Get the confidence C(A;d) the curve assigns to a proposition A: the point mass if zero belongs to A
    plus the increments of C over the intervals of A."""
    if not isinstance(proposition, Proposition):
        raise InvalidParameterError('Expected a Proposition (got "{}")'.format(proposition.__class__.__name__))
    return proposition.mass(curve.cdf, curve.atom)


#=========================
#  Point mass detection
#=========================

PointMassDiagnostic = namedtuple('PointMassDiagnostic', ['has_point_mass', 'alpha', 'boundary', 'limit', 'limits'])


def _quantile_limit(model, alpha, boundary, direction):
    """Estimate the limit of q_alpha(theta) when theta tends to a boundary of the parameter space, approaching
    from the given direction (+1 from below the upper end or towards plus infinity, -1 otherwise)."""
    if np.isfinite(boundary):
        thetas = boundary - direction * 10.0**-np.arange(1, 9)
        quantiles = np.asarray(model.d_quantile(alpha, thetas))
        # Linear extrapolation from the two probes closest to the boundary
        slope = (quantiles[-1] - quantiles[-2]) / (thetas[-1] - thetas[-2])
        return float(quantiles[-1] + slope * (boundary - thetas[-1]))
    thetas = direction * 10.0**np.arange(1, 4)
    quantiles = np.asarray(model.d_quantile(alpha, thetas))
    if abs(quantiles[-1]) > 2 * abs(quantiles[-2]):
        return float(np.copysign(np.inf, quantiles[-1]))
    return float(quantiles[-1])


def _is_interior(value, space):
    lower, upper = space
    if not np.isfinite(value):
        return False
    above = (not np.isfinite(lower)) or (value - lower > INTERIOR_TOLERANCE)
    below = (not np.isfinite(upper)) or (upper - value > INTERIOR_TOLERANCE)
    return above and below


def has_point_mass(model):
    """Check if the confidence distribution of the model has a point mass, by evaluating the limits of the
    quantiles q_alpha(theta) of D when theta tends to the boundaries of the parameter space. The distribution
    has a point mass if some limit lies in the interior of the sample space of D.

    Args:
        model(Model): the model, providing ``d_quantile``, ``parameter_space`` and ``sample_space``.

    Returns:
        PointMassDiagnostic: a named tuple with the flag, the offending level, boundary and limit (None if
        no point mass) and the list of all the (alpha, boundary, limit) probes.
    """
    limits = []
    offending = None
    lower, upper = model.parameter_space
    for alpha in PROBE_LEVELS:
        for boundary, direction in ((lower, -1), (upper, 1)):
            limit = _quantile_limit(model, alpha, boundary, direction)
            logger.debug('Quantile limit at level %s towards %s: %s', alpha, boundary, limit)
            limits.append((alpha, boundary, limit))
            if offending is None and _is_interior(limit, model.sample_space):
                offending = (alpha, boundary, limit)
    if offending is None:
        return PointMassDiagnostic(False, None, None, None, limits)
    return PointMassDiagnostic(True, offending[0], offending[1], offending[2], limits)


#=========================
#  Curved model
#=========================

def curved_cd(theta, observation, use_abs=False):
    """The confidence distribution of the curved normal model Y ~ N(theta, theta^2) at theta > 0.

    Args:
        theta(float): the parameter (or an array of parameters).
        observation(Observation): the observation.
        use_abs(bool): if set, use the statistic D=|Y|, which gives a proper distribution function without
                       point mass. Otherwise use Y itself, whose curve tends to 1-Phi(-1) as theta grows.
    """
    if not isinstance(observation, Observation):
        raise InvalidParameterError('Expected an Observation (got "{}")'.format(observation.__class__.__name__))
    model = CurvedNormalModel()
    if use_abs:
        return model.cd(theta, observation.d)
    theta, scalar = as_array(model._check_theta(theta))
    y = observation.y[0]
    return from_array(stats.norm.sf((y - theta) / theta), scalar)
