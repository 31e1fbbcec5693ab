# -*- coding: utf-8 -*-
"""The normal mean norm model: Y ~ N(mu, sigma^2 I_k) with sigma known, theta = ||mu|| and D = ||Y||."""

import numpy as np
from scipy import stats
from .base import Model
from ..numerics import ChiSqParams, noncentral_chisq_sf, noncentral_chisq_pdf
from ..numerics import _d_quantile, _d_quantile_inverse
from ..utilities import check_positive, check_degrees_of_freedom

# Setup logging
import logging
logger = logging.getLogger(__name__)


class NormMeanModel(Model):
    """The model of the norm of a normal mean vector, D^2/sigma^2 ~ chi2_k(theta^2/sigma^2). With k=2 it is
    the satellite conjunction problem (D the measured miss distance), with large k the Stein problem.

    Args:
        k(int): the dimension.
        sigma(float): the known standard deviation of each coordinate.
        R(float): the combined radius of the collision propositions, optional.
    """

    kind = 'NormMean'

    def __init__(self, k=2, sigma=1.0, R=None):
        self.k = check_degrees_of_freedom(k)
        self.sigma = float(check_positive(sigma, 'sigma'))
        super(NormMeanModel, self).__init__(R=R)

    def __repr__(self):
        return 'NormMeanModel(k={}, sigma={})'.format(self.k, self.sigma)

    @property
    def dimension(self):
        return self.k

    def _observe(self, y):
        return float(np.linalg.norm(y))

    def _noncentrality(self, theta):
        return (np.asarray(theta, dtype=float) / self.sigma)**2

    def _draw_d(self, rng, theta, size):
        # One chi-square draw per replicate instead of k normal draws
        ncp = self._noncentrality(theta)
        if ncp > 0:
            x = rng.noncentral_chisquare(self.k, ncp, size)
        else:
            x = rng.chisquare(self.k, size)
        return self.sigma * np.sqrt(x)

    def _draw_y(self, rng, theta, size):
        # The law of D is invariant under rotations of the mean, which can so lie on the first axis
        y = self.sigma * rng.standard_normal((size, self.k))
        y[:, 0] += theta
        return y

    def _d_quantile(self, alpha, theta):
        return _d_quantile(alpha, theta, self.sigma, self.k)

    def _d_quantile_inverse(self, alpha, d):
        return _d_quantile_inverse(alpha, d, self.sigma, self.k)

    def _cd(self, theta, d):
        return noncentral_chisq_sf((d / self.sigma)**2, ChiSqParams(self.k, self._noncentrality(theta)))

    def _cd_density(self, theta, d):
        # The derivative of the chi2_k survival function in the noncentrality is the chi2_(k+2) density
        density = noncentral_chisq_pdf((d / self.sigma)**2, ChiSqParams(self.k + 2, self._noncentrality(theta)))
        return 2.0 * theta / self.sigma**2 * density

    def _point_mass(self, d):
        return stats.chi2.sf((d / self.sigma)**2, self.k)
