# -*- coding: utf-8 -*-
"""Data structures shared by the inference modules: the unbounded sentinel and the propositions on the parameter space."""

import numpy as np
from .utilities import is_numerical
from .exceptions import InvalidParameterError, ConsistencyException

# Setup logging
import logging
logger = logging.getLogger(__name__)


#======================
#  Unbounded sentinel
#======================

class Unbounded(object):
    """The upper end of the parameter space. Compares greater than any number but does not support
    arithmetic, so it cannot silently propagate as a float infinity. Comes pre-instantiated as ``UNBOUNDED``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Unbounded, cls).__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'UNBOUNDED'

    def __str__(self):
        return 'inf'

    def __eq__(self, other):
        return isinstance(other, Unbounded)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash('confidentia.UNBOUNDED')

    def __gt__(self, other):
        return not isinstance(other, Unbounded)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Unbounded)

UNBOUNDED = Unbounded()


def is_unbounded(value):
    return isinstance(value, Unbounded)


def bound_to_float(value):
    """Internal conversion of a bound to a float for vectorised comparisons (UNBOUNDED becomes inf)."""
    if is_unbounded(value):
        return np.inf
    return float(value)


def float_to_bound(value):
    """Inverse of bound_to_float, for values leaving the vectorised code."""
    if is_unbounded(value):
        return value
    value = float(value)
    if np.isinf(value):
        if value < 0:
            raise ConsistencyException('Got a negative infinite bound')
        return UNBOUNDED
    return value


#======================
#  Propositions
#======================

class Proposition(object):
    """A proposition on the parameter space [0, inf), as a single interval with open or closed ends,
    or the complement of such an interval.

    Args:
        lower(float): the lower end of the interval.
        upper(float): the upper end of the interval, or ``UNBOUNDED``.
        lower_closed(bool): if the lower end belongs to the interval.
        upper_closed(bool): if the upper end belongs to the interval (ignored for ``UNBOUNDED``).
        complemented(bool): if the proposition is the complement of the interval.
    """

    def __init__(self, lower=0.0, upper=UNBOUNDED, lower_closed=True, upper_closed=False, complemented=False):

        if not is_numerical(lower):
            raise InvalidParameterError('Proposition lower end must be numerical (got "{}")'.format(lower))
        lower = float(lower)
        if not np.isfinite(lower) or lower < 0:
            raise InvalidParameterError('Proposition lower end must be finite and not negative (got "{}")'.format(lower))

        if is_unbounded(upper):
            upper_closed = False
        else:
            if not is_numerical(upper):
                raise InvalidParameterError('Proposition upper end must be numerical or UNBOUNDED (got "{}")'.format(upper))
            upper = float(upper)
            if not np.isfinite(upper):
                raise InvalidParameterError('Use UNBOUNDED for an unbounded upper end (got "{}")'.format(upper))
            if upper < lower:
                raise InvalidParameterError('Proposition upper end "{}" is below the lower end "{}"'.format(upper, lower))

        self.lower = lower
        self.upper = upper
        self.lower_closed = bool(lower_closed)
        self.upper_closed = bool(upper_closed)
        self.complemented = bool(complemented)

    @classmethod
    def interval(cls, lower, upper, lower_closed=True, upper_closed=True):
        return cls(lower, upper, lower_closed, upper_closed)

    @classmethod
    def point(cls, theta):
        """The singleton {theta}."""
        return cls(theta, theta, True, True)

    @classmethod
    def whole(cls):
        """The whole parameter space."""
        return cls(0.0, UNBOUNDED, True, False)

    @classmethod
    def empty(cls):
        return cls(0.0, UNBOUNDED, True, False, complemented=True)

    @classmethod
    def at_most(cls, radius):
        """The collision proposition [0, R]."""
        return cls(0.0, radius, True, True)

    @classmethod
    def greater_than(cls, radius):
        """The non-collision proposition (R, inf)."""
        return cls(radius, UNBOUNDED, False, False)

    @classmethod
    def around(cls, center, radius):
        """The open interval (center-radius, center+radius) intersected with the parameter space."""
        if radius <= 0:
            raise InvalidParameterError('Radius must be positive (got "{}")'.format(radius))
        lower = center - radius
        if lower < 0:
            return cls(0.0, center + radius, True, False)
        return cls(lower, center + radius, False, False)

    def complement(self):
        return Proposition(self.lower, self.upper, self.lower_closed, self.upper_closed, not self.complemented)

    def __repr__(self):
        interval = '{}{}, {}{}'.format('[' if self.lower_closed else '(', self.lower,
                                       self.upper, ']' if self.upper_closed else ')')
        if self.complemented:
            return 'not {}'.format(interval)
        return interval

    def __eq__(self, other):
        if not isinstance(other, Proposition):
            return False
        return self.parts() == other.parts()

    @property
    def interval_is_empty(self):
        """If the underlying interval (not complemented) has no points."""
        if is_unbounded(self.upper):
            return False
        return self.upper == self.lower and not (self.lower_closed and self.upper_closed)

    def _interval_parts(self):
        if self.interval_is_empty:
            return []
        return [(self.lower, self.upper, self.lower_closed, self.upper_closed)]

    def _complement_parts(self):
        if self.interval_is_empty:
            return [(0.0, UNBOUNDED, True, False)]
        parts = []
        # Left of the interval
        if self.lower > 0:
            parts.append((0.0, self.lower, True, not self.lower_closed))
        elif not self.lower_closed:
            parts.append((0.0, 0.0, True, True))
        # Right of the interval
        if not is_unbounded(self.upper):
            parts.append((self.upper, UNBOUNDED, not self.upper_closed, False))
        return parts

    def parts(self):
        """The disjoint intervals making up the proposition, as (lower, upper, lower_closed, upper_closed) tuples."""
        if self.complemented:
            return self._complement_parts()
        return self._interval_parts()

    def complement_parts(self):
        """The disjoint intervals making up the complement of the proposition."""
        if self.complemented:
            return self._interval_parts()
        return self._complement_parts()

    def contains(self, theta):
        """Check if theta belongs to the proposition. Works element-wise on arrays."""
        theta_array = np.asarray(theta, dtype=float)
        inside = np.zeros(theta_array.shape, dtype=bool)
        for lower, upper, lower_closed, upper_closed in self.parts():
            above = theta_array >= lower if lower_closed else theta_array > lower
            if is_unbounded(upper):
                below = True
            else:
                below = theta_array <= upper if upper_closed else theta_array < upper
            inside = inside | (above & below)
        if inside.ndim == 0:
            return bool(inside)
        return inside

    def mass(self, cdf, atom):
        """Compute the mass of the proposition under a distribution on [0, inf) whose only atom is at zero.

        Args:
            cdf: the distribution function, right-continuous and including the atom (``cdf(0)=atom``).
                 Can work on arrays, in which case the mass is computed element-wise.
            atom: the mass at zero (float or array).
        """
        total = 0.0
        for lower, upper, lower_closed, upper_closed in self.parts():
            if not is_unbounded(upper) and upper == lower:
                # Singleton: only zero carries mass
                if lower == 0:
                    total = total + atom
                continue
            upper_value = 1.0 if is_unbounded(upper) else cdf(upper)
            if lower == 0:
                lower_value = 0.0 if lower_closed else atom
            else:
                lower_value = cdf(lower)
            total = total + (upper_value - lower_value)
        return np.clip(total, 0.0, 1.0) if isinstance(total, np.ndarray) else min(max(float(total), 0.0), 1.0)
