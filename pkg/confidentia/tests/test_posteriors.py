import unittest
import os
from unittest import mock
import numpy as np
from scipy import stats, integrate
from ..models import NormMeanModel, CurvedNormalModel, Observation
from ..datastructures import Proposition
from ..posteriors import up_cdf, up_density, up_quantile, jeffreys_prior, rp_cdf_batch, rp_posterior
from ..posteriors import PosteriorCurve, GfdSample, gfd_sample
from ..exceptions import InvalidParameterError
from ..simulations import dkw_bound
from .. import posteriors

# Setup logging
from .. import logger
logger.setup()

# Full sample sizes only with extended testing
EXTENDED_TESTING = os.environ.get('EXTENDED_TESTING', 'False') == 'True'


class TestUniformPriorPosterior(unittest.TestCase):

    def test_golden_values(self):
        self.assertAlmostEqual(up_cdf(2.0, 1.0, sigma=1.0, k=2), 0.731, delta=1e-3)
        self.assertLessEqual(up_cdf(2.0, 1.0, sigma=100.0, k=2), 1e-3)

    def test_swapped_roles(self):
        # G(theta;d) is the chi2_k distribution function with theta and d swapped
        self.assertAlmostEqual(up_cdf(3.0, 2.0, sigma=1.5, k=3), stats.ncx2.cdf((3.0 / 1.5)**2, 3, (2.0 / 1.5)**2), places=10)
        self.assertEqual(up_cdf(0.0, 2.0), 0.0)

    def test_density(self):
        mass, _ = integrate.quad(lambda theta: up_density(theta, 2.0, sigma=1.0, k=3), 0, 25)
        self.assertAlmostEqual(mass, 1.0, places=6)
        step = 1e-5
        derivative = (up_cdf(2.5 + step, 2.0, k=3) - up_cdf(2.5 - step, 2.0, k=3)) / (2 * step)
        self.assertAlmostEqual(up_density(2.5, 2.0, k=3), derivative, places=6)

    def test_quantile(self):
        theta = up_quantile(0.3, 2.0, sigma=2.0, k=4)
        self.assertAlmostEqual(up_cdf(theta, 2.0, sigma=2.0, k=4), 0.3, places=9)
        medians = up_quantile(0.5, np.array([0.5, 1.0, 4.0]))
        self.assertEqual(medians.shape, (3,))
        self.assertTrue(np.all(np.diff(medians) > 0))

        with self.assertRaises(InvalidParameterError):
            up_quantile(1.0, 2.0)

    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            up_cdf(-1.0, 1.0)
        with self.assertRaises(InvalidParameterError):
            up_cdf(1.0, -1.0)
        with self.assertRaises(InvalidParameterError):
            up_cdf(1.0, 1.0, sigma=0.0)
        with self.assertRaises(InvalidParameterError):
            up_cdf(1.0, 1.0, k=0)


class TestReferencePosterior(unittest.TestCase):

    def test_golden_values(self):
        self.assertAlmostEqual(rp_posterior(2.0, 1.0, sigma=1.0, k=2), 0.891, delta=0.02)
        self.assertAlmostEqual(rp_posterior(2.0, 1.0, sigma=100.0, k=2), 0.016, delta=0.01)

    def test_curve(self):
        curve = PosteriorCurve(NormMeanModel(k=2, sigma=1.0), 1.5, method='RP')
        thetas = np.linspace(0.0, 10.0, 41)
        values = curve.cdf(thetas)
        self.assertEqual(values[0], 0.0)
        self.assertAlmostEqual(values[-1], 1.0, places=7)
        self.assertTrue(np.all(np.diff(values) >= 0))
        self.assertEqual(curve.atom, 0.0)

        # Quantiles and median
        self.assertAlmostEqual(curve.cdf(curve.median), 0.5, places=4)
        self.assertAlmostEqual(curve.cdf(curve.quantile(0.9)), 0.9, places=4)

        # Density integrates to one
        grid = np.linspace(0.0, 12.0, 24001)
        self.assertAlmostEqual(integrate.trapezoid(curve.density(grid), grid), 1.0, places=4)

    def test_batch(self):
        ds = np.array([0.0, 0.5, 2.0, 6.0])
        thetas = np.array([0.5, 2.0, 5.0])
        batch = rp_cdf_batch(thetas, ds, sigma=1.0, k=2)
        self.assertEqual(batch.shape, (4, 3))
        for i, d in enumerate(ds):
            curve = PosteriorCurve(NormMeanModel(k=2, sigma=1.0), d, method='RP')
            np.testing.assert_allclose(batch[i], curve.cdf(thetas), atol=1e-8)

        # The cached and the recomputed prior tables agree
        np.testing.assert_allclose(rp_cdf_batch(thetas, ds, k=3, prior='jeffreys', use_cache=True),
                                   rp_cdf_batch(thetas, ds, k=3, prior='jeffreys', use_cache=False), atol=1e-12)

    def test_point_null(self):
        # No atom at zero: the p-value of theta=0 is zero whatever the observation
        for d in [0.0, 0.2, 1.0, 4.0]:
            for method in ['UP', 'RP']:
                curve = PosteriorCurve(NormMeanModel(k=2, sigma=1.0), d, method=method)
                self.assertEqual(Proposition.point(0.0).mass(curve.cdf, curve.atom), 0.0)

    def test_quadrature_refinement(self):
        model = NormMeanModel(k=2, sigma=1.0)
        with mock.patch.object(posteriors.logger, 'warning') as warning:
            reference = PosteriorCurve(model, 1.0, method='RP')
            warning.assert_not_called()
        self.assertEqual(reference._grid.size, posteriors.MIN_LINEAR_PANELS + posteriors.GEOMETRIC_POINTS + 2)

        # Grids are refined up to the cap while the error estimate is above the tolerance
        with mock.patch.object(posteriors, 'RICHARDSON_TOLERANCE', 1e-15), \
             mock.patch.object(posteriors, 'MAX_LINEAR_PANELS', 4 * posteriors.MIN_LINEAR_PANELS), \
             mock.patch.object(posteriors.logger, 'warning') as warning:
            refined = PosteriorCurve(model, 1.0, method='RP')
            self.assertEqual(warning.call_count, 1)
        self.assertEqual(refined._grid.size, 4 * posteriors.MIN_LINEAR_PANELS + posteriors.GEOMETRIC_POINTS + 2)
        self.assertAlmostEqual(refined.eval(2.0), reference.eval(2.0), delta=1e-5)

    def test_large_k(self):
        # Stein problem: the posterior concentrates close to the observed norm
        curve = PosteriorCurve(NormMeanModel(k=100, sigma=1.0), 12.0, method='RP')
        self.assertGreater(curve.median, 0.0)
        self.assertAlmostEqual(curve.cdf(40.0), 1.0, places=6)

    def test_jeffreys(self):
        # Positive and tending to the location model value (one) far from zero
        values = jeffreys_prior(np.array([0.5, 2.0, 30.0]), sigma=1.0, k=2)
        self.assertTrue(np.all(values > 0))
        self.assertAlmostEqual(values[-1], 1.0, delta=0.02)
        # Scales as 1/sigma
        self.assertAlmostEqual(jeffreys_prior(4.0, sigma=2.0, k=2), jeffreys_prior(2.0, sigma=1.0, k=2) / 2.0, places=8)

        curve = PosteriorCurve(NormMeanModel(k=2, sigma=1.0), 1.0, method='RP', prior='jeffreys')
        self.assertTrue(0.0 < curve.cdf(2.0) < 1.0)

    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            PosteriorCurve(NormMeanModel(), 1.0, method='XP')
        with self.assertRaises(InvalidParameterError):
            PosteriorCurve(NormMeanModel(), 1.0, method='RP', prior='flat')
        with self.assertRaises(InvalidParameterError):
            PosteriorCurve(CurvedNormalModel(), 1.0)


class TestPosteriorCurve(unittest.TestCase):

    def test_uniform_prior_curve(self):
        curve = PosteriorCurve(NormMeanModel(k=2, sigma=1.0), 1.0)
        self.assertEqual(curve.method, 'UP')
        self.assertAlmostEqual(curve.eval(2.0), 0.731, delta=1e-3)
        self.assertAlmostEqual(Proposition.at_most(2.0).mass(curve.cdf, curve.atom), 0.731, delta=1e-3)
        self.assertAlmostEqual(curve.cdf(curve.median), 0.5, places=9)


class TestGeneralizedFiducial(unittest.TestCase):

    def test_sample(self):
        observation = Observation([1.0, 2.0])
        sample = gfd_sample(observation, 5000, seed=3)
        self.assertEqual(sample.n, 5000)
        self.assertEqual(sample.values.shape, (5000,))
        self.assertTrue(np.all(sample.values >= 0))

        # Reproducible
        np.testing.assert_array_equal(sample.values, gfd_sample(observation, 5000, seed=3).values)

        # The empirical distribution function
        self.assertEqual(sample.cdf(0.0), 0.0)
        self.assertEqual(sample.cdf(np.inf), 1.0)

    def test_sup_distance_in_two_dimensions(self):
        observation = Observation([2.0, 0.0])
        n = 1000000 if EXTENDED_TESTING else 100000
        sample = gfd_sample(observation, n, seed=7)
        result = stats.kstest(sample.values, lambda theta: up_cdf(theta, 2.0, sigma=1.0, k=2))
        self.assertLess(result.statistic, 0.005 if EXTENDED_TESTING else dkw_bound(n))

    def test_equals_the_uniform_prior_posterior(self):
        observation = Observation([1.0, 2.0, 2.0])
        sample = gfd_sample(observation, 20000, seed=5, sigma=1.5)
        result = stats.kstest(sample.values, lambda theta: up_cdf(theta, observation.d, sigma=1.5, k=3))
        self.assertLess(result.statistic, 0.015)

    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            gfd_sample(1.0, 10, seed=0)
        with self.assertRaises(InvalidParameterError):
            gfd_sample(Observation([1.0]), 0, seed=0)
        with self.assertRaises(InvalidParameterError):
            GfdSample([1.0, -1.0], 0, 2)
