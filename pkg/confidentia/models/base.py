# -*- coding: utf-8 -*-
"""Provides the base model class and the observation data structure."""

import numpy as np
from ..exceptions import InvalidParameterError, DimensionMismatchError
from ..datastructures import float_to_bound
from ..utilities import check_nonnegative, check_probability, check_seed, is_positive_integer
from ..utilities import as_array, from_array, draw_replicates, block_generator, REPLICATES_PER_BLOCK

# Setup logging
import logging
logger = logging.getLogger(__name__)


#======================
#  Observation
#======================

class Observation(object):
    """An observation: the raw measurements y and the derived statistic d.

    Args:
        y(tuple): the raw measurements.
        d(float): the value of the statistic D for these measurements. If not given, the
                  Euclidean norm of y is used.
    """

    def __init__(self, y, d=None):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if y.ndim != 1 or y.size == 0:
            raise DimensionMismatchError('Observation measurements must be a non-empty vector (got shape {})'.format(y.shape))
        if not np.all(np.isfinite(y)):
            raise InvalidParameterError('Observation measurements must be finite (got "{}")'.format(y))
        self.y = tuple(float(value) for value in y)
        self.d = float(np.linalg.norm(y)) if d is None else float(d)
        if self.d < 0:
            raise InvalidParameterError('Observation statistic must not be negative (got "{}")'.format(self.d))

    def __repr__(self):
        return 'Observation(y={}, d={})'.format(self.y, self.d)

    def __eq__(self, other):
        if not isinstance(other, Observation):
            return False
        return self.y == other.y and self.d == other.d

    def __hash__(self):
        return hash((self.y, self.d))


#======================
#  Base Model
#======================

class Model(object):
    """A statistical model for the scalar statistic D, indexed by a parameter theta. It plays the role of the
    model configuration: subclasses hold the known quantities (dimension, standard deviation, collision radius).

    Public methods validate their arguments and then call the corresponding ``_``-prefixed hook, which
    subclasses implement vectorised over numpy arrays. A model that does not implement a hook raises
    ``NotImplementedError`` on the public call.

    Args:
        R(float): the combined radius of the collision propositions, optional.
    """

    kind = None
    dimension = None

    # The parameter and the sample spaces of D, as (lower, upper) floats
    parameter_space = (0.0, np.inf)
    sample_space = (0.0, np.inf)

    def __init__(self, R=None):
        if R is not None:
            R = float(check_nonnegative(R, 'R'))
        self.R = R

    def __repr__(self):
        return '{}()'.format(self.__class__.__name__)

    def _check_theta(self, theta):
        return check_nonnegative(theta, 'theta', clamp_round_off=True)

    def _check_d(self, d):
        return check_nonnegative(d, 'd')

    def _call_hook(self, name, *args):
        try:
            hook = getattr(self, name)
        except AttributeError:
            raise NotImplementedError('Operation "{}" is not implemented for model {}'.format(name.lstrip('_'), self.__class__.__name__))
        return hook(*args)

    #--------------------
    # Observations
    #--------------------

    def observe(self, y):
        """Turn raw measurements into an observation, computing the statistic d."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if self.dimension is not None and y.size != self.dimension:
            raise DimensionMismatchError('Model {} expects {} measurements (got {})'.format(self, self.dimension, y.size))
        return Observation(y, d=self._call_hook('_observe', y))

    def sample(self, theta, n, seed):
        """Sample n observations at the parameter theta. The result only depends on (theta, n, seed)."""
        theta = float(self._check_theta(theta))
        n = self._check_n(n)
        seed = check_seed(seed)
        observations = []
        for block, start in enumerate(range(0, n, REPLICATES_PER_BLOCK)):
            size = min(REPLICATES_PER_BLOCK, n - start)
            measurements = self._call_hook('_draw_y', block_generator(seed, 0, block), theta, size)
            observations.extend(self.observe(y) for y in measurements)
        return observations

    def sample_d(self, theta, n, seed, stream=0):
        """Sample n values of the statistic D at the parameter theta, as a numpy array. Replicates come in fixed
        blocks with their own random stream, so the result only depends on (theta, n, seed, stream)."""
        theta = float(self._check_theta(theta))
        n = self._check_n(n)
        return draw_replicates(lambda rng, size: self._call_hook('_draw_d', rng, theta, size), n, seed, stream)

    @staticmethod
    def _check_n(n):
        if not is_positive_integer(n):
            raise InvalidParameterError('The number of replicates must be a positive integer (got "{}")'.format(n))
        return int(n)

    #--------------------
    # Quantiles
    #--------------------

    def d_quantile(self, alpha, theta):
        """The quantile q_alpha(theta) such that P_theta(D <= q_alpha(theta)) = 1-alpha, for alpha in (0,1)."""
        alpha = check_probability(alpha, 'alpha', open_interval=True)
        theta, scalar = as_array(self._check_theta(theta))
        return from_array(self._call_hook('_d_quantile', alpha, theta), scalar)

    def d_quantile_inverse(self, alpha, d):
        """The inverse q_alpha^-1(d) of the quantile function in theta, clamped to the lower end of the parameter
        space where it is not defined. Gives the lower end for alpha=0 and ``UNBOUNDED`` (infinity on arrays) for alpha=1."""
        alpha = check_probability(alpha, 'alpha', open_interval=False)
        d, scalar = as_array(self._check_d(d))
        if alpha == 0.0:
            return from_array(np.full(d.shape, self.parameter_space[0]), scalar)
        if alpha == 1.0:
            if scalar:
                return float_to_bound(np.inf)
            return np.full(d.shape, np.inf)
        return from_array(self._call_hook('_d_quantile_inverse', alpha, d), scalar)

    def d_quantile_at_boundary(self, alpha):
        """The quantile q_alpha at the lower end of the parameter space (its limit there if the end is excluded).
        Infinity for alpha=0 and the lower end of the sample space for alpha=1."""
        alpha = check_probability(alpha, 'alpha', open_interval=False)
        if alpha == 0.0:
            return np.inf
        if alpha == 1.0:
            return self.sample_space[0]
        return float(self._call_hook('_boundary_quantile', alpha))

    def _boundary_quantile(self, alpha):
        return self._call_hook('_d_quantile', alpha, np.asarray(self.parameter_space[0], dtype=float))

    #--------------------
    # Confidence
    #--------------------

    def cd(self, theta, d):
        """The confidence distribution C(theta;d) = P_theta(D >= d)."""
        theta, d, scalar = self._theta_and_d(theta, d)
        return from_array(self._call_hook('_cd', theta, d), scalar)

    def cd_density(self, theta, d):
        """The continuous part of the confidence density, the derivative of C(theta;d) in theta."""
        theta, d, scalar = self._theta_and_d(theta, d)
        return from_array(self._call_hook('_cd_density', theta, d), scalar)

    def point_mass(self, d):
        """The mass the confidence distribution puts at the lower end of the parameter space."""
        d, scalar = as_array(self._check_d(d))
        return from_array(self._call_hook('_point_mass', d), scalar)

    def _theta_and_d(self, theta, d):
        theta, theta_scalar = as_array(self._check_theta(theta))
        d, d_scalar = as_array(self._check_d(d))
        theta, d = np.broadcast_arrays(theta, d)
        return theta, d, theta_scalar and d_scalar


#======================
#  Functional interface
#======================

def observe(y, model):
    """Turn raw measurements into an observation under the given model."""
    return model.observe(y)


def sample_data(theta, model, n, seed):
    """Sample n observations from the model at the parameter theta."""
    return model.sample(theta, n, seed)
