# -*- coding: utf-8 -*-
"""The curved normal model: Y ~ N(theta, theta^2) with theta > 0 and D = |Y|."""

import numpy as np
from scipy import stats
from .base import Model
from ..exceptions import InvalidParameterError, DimensionMismatchError
from ..utilities import check_finite

# Setup logging
import logging
logger = logging.getLogger(__name__)


class CurvedNormalModel(Model):
    """The curved normal model, where the standard deviation equals the mean. The statistic D/theta follows a
    folded normal with shape 1, so the quantiles of D scale with theta and the confidence distribution built
    on D has no point mass. Theta is strictly positive: at zero the model is degenerate.

    Args:
        R(float): the combined radius of the collision propositions, optional.
    """

    kind = 'CurvedNormal'
    dimension = 1
    parameter_space = (0.0, np.inf)
    sample_space = (0.0, np.inf)

    # Shape of the folded normal law of D/theta
    FOLDING = 1.0

    def __repr__(self):
        return 'CurvedNormalModel()'

    def _check_theta(self, theta):
        theta = check_finite(theta, 'theta')
        if np.any(theta <= 0):
            raise InvalidParameterError('The curved normal model is defined for theta > 0 only (got "{}")'.format(theta))
        return theta

    def _observe(self, y):
        if y.size != 1:
            raise DimensionMismatchError('The curved normal model expects a single measurement (got {})'.format(y.size))
        return float(abs(y[0]))

    def _draw_y(self, rng, theta, size):
        return (theta + theta * rng.standard_normal(size)).reshape(size, 1)

    def _draw_d(self, rng, theta, size):
        return np.abs(self._draw_y(rng, theta, size)[:, 0])

    def _d_quantile(self, alpha, theta):
        return theta * stats.foldnorm.ppf(1.0 - alpha, self.FOLDING)

    def _boundary_quantile(self, alpha):
        # The quantiles scale with theta and vanish at the excluded lower end
        return 0.0

    def _d_quantile_inverse(self, alpha, d):
        return d / stats.foldnorm.ppf(1.0 - alpha, self.FOLDING)

    def _cd(self, theta, d):
        return stats.foldnorm.sf(d / theta, self.FOLDING)

    def _cd_density(self, theta, d):
        u = d / theta
        return stats.foldnorm.pdf(u, self.FOLDING) * u / theta

    def _point_mass(self, d):
        return np.zeros_like(d)
