import unittest
import numpy as np
from scipy import stats, integrate
from ..models import Model, NormMeanModel, CurvedNormalModel, Observation
from ..datastructures import Proposition
from ..confidence import ConfidenceCurve, cd_eval, point_mass, confidence_density, confidence_of_set
from ..confidence import has_point_mass, curved_cd
from ..utilities import check_finite
from ..exceptions import InvalidParameterError

# Setup logging
from .. import logger
logger.setup()


class LocationModel(Model):
    """The normal location model D ~ N(theta, 1) on the whole real line, whose confidence distribution
    has no point mass."""

    kind = 'Location'
    dimension = 1
    parameter_space = (-np.inf, np.inf)
    sample_space = (-np.inf, np.inf)

    def _check_theta(self, theta):
        return check_finite(theta, 'theta')

    def _check_d(self, d):
        return check_finite(d, 'd')

    def _d_quantile(self, alpha, theta):
        return theta + stats.norm.ppf(1.0 - alpha)


class OpenIntervalModel(Model):
    """D ~ N(theta, 1) with theta restricted to (0,1) and D on the whole real line. The quantiles tend to
    interior values at both ends of the parameter space."""

    kind = 'OpenInterval'
    dimension = 1
    parameter_space = (0.0, 1.0)
    sample_space = (-np.inf, np.inf)

    def _check_d(self, d):
        return check_finite(d, 'd')

    def _d_quantile(self, alpha, theta):
        return theta + stats.norm.ppf(1.0 - alpha)


class TestConfidenceCurve(unittest.TestCase):

    def test_curve(self):
        curve = ConfidenceCurve(NormMeanModel(k=2, sigma=1.0), 1.0)
        self.assertEqual(curve.method, 'CD')
        self.assertEqual(curve.d, 1.0)
        self.assertAlmostEqual(cd_eval(2.0, curve), 0.918, delta=1e-3)
        self.assertAlmostEqual(point_mass(curve), np.exp(-0.5), places=12)
        self.assertEqual(curve.atom, curve.point_mass)

        # The curve includes the point mass
        self.assertAlmostEqual(cd_eval(0.0, curve), point_mass(curve), places=12)

        # Arrays
        values = cd_eval(np.array([0.0, 1.0, 2.0]), curve)
        self.assertEqual(values.shape, (3,))

        # Median: C(median;d) = 1/2 when the point mass is below one half
        far_curve = ConfidenceCurve(NormMeanModel(k=2, sigma=1.0), 2.0)
        self.assertAlmostEqual(cd_eval(far_curve.median, far_curve), 0.5, places=9)
        self.assertEqual(curve.median, 0.0)

        with self.assertRaises(InvalidParameterError):
            ConfidenceCurve(NormMeanModel(), -1.0)
        with self.assertRaises(InvalidParameterError):
            ConfidenceCurve('model', 1.0)

    def test_golden_point_mass(self):
        self.assertAlmostEqual(point_mass(ConfidenceCurve(NormMeanModel(), 0.2)), 0.980, delta=1e-3)
        self.assertAlmostEqual(point_mass(ConfidenceCurve(NormMeanModel(), 2.0)), np.exp(-2.0), places=12)

    def test_median_at_zero(self):
        # With a point mass above one half the median is zero
        curve = ConfidenceCurve(NormMeanModel(), 0.2)
        self.assertEqual(curve.median, 0.0)

    def test_point_mass_below_the_truth(self):
        # M(D) <= C(theta0;D) for every replicate
        model = NormMeanModel(k=2, sigma=1.0)
        ds = model.sample_d(1.0, 5000, seed=5)
        self.assertTrue(np.all(model.point_mass(ds) <= model.cd(1.0, ds)))

        # The point mass vanishes with the noise
        means = [np.mean(NormMeanModel(k=2, sigma=sigma).point_mass(NormMeanModel(k=2, sigma=sigma).sample_d(1.0, 5000, seed=6)))
                 for sigma in [1.0, 0.3, 0.1, 0.03]]
        self.assertTrue(np.all(np.diff(means) < 0))
        self.assertLess(means[-1], 1e-6)

    def test_density(self):
        curve = ConfidenceCurve(NormMeanModel(k=2, sigma=1.0), 1.0)
        # The density and the point mass add up to one
        mass = point_mass(curve) + integrate.trapezoid(confidence_density(np.linspace(1e-9, 12.0, 20001), curve), np.linspace(1e-9, 12.0, 20001))
        self.assertAlmostEqual(mass, 1.0, places=5)

        with self.assertRaises(InvalidParameterError):
            confidence_density(0.0, curve)
        with self.assertRaises(InvalidParameterError):
            confidence_density(np.array([1.0, -1.0]), curve)

    def test_confidence_of_set(self):
        curve = ConfidenceCurve(NormMeanModel(k=2, sigma=1.0), 1.0)
        self.assertAlmostEqual(confidence_of_set(Proposition.at_most(2.0), curve), 0.918, delta=1e-3)
        self.assertAlmostEqual(confidence_of_set(Proposition.at_most(2.0), curve)
                               + confidence_of_set(Proposition.greater_than(2.0), curve), 1.0, places=12)
        self.assertAlmostEqual(confidence_of_set(Proposition.point(0.0), curve), point_mass(curve), places=12)
        self.assertEqual(confidence_of_set(Proposition.point(1.0), curve), 0.0)
        self.assertEqual(confidence_of_set(Proposition.whole(), curve), 1.0)
        self.assertEqual(confidence_of_set(Proposition.empty(), curve), 0.0)

        # Excluding zero removes the point mass
        self.assertAlmostEqual(confidence_of_set(Proposition(0.0, 2.0, False, True), curve),
                               cd_eval(2.0, curve) - point_mass(curve), places=12)

        with self.assertRaises(InvalidParameterError):
            confidence_of_set((0, 2), curve)

    def test_large_sigma(self):
        # At sigma=100 the collision gets almost full confidence
        curve = ConfidenceCurve(NormMeanModel(k=2, sigma=100.0), 1.0)
        self.assertAlmostEqual(confidence_of_set(Proposition.at_most(2.0), curve), 1.0, delta=1e-3)


class TestPointMassDetection(unittest.TestCase):

    def test_norm_mean(self):
        diagnostic = has_point_mass(NormMeanModel(k=2, sigma=1.0))
        self.assertTrue(diagnostic.has_point_mass)
        self.assertEqual(diagnostic.alpha, 0.05)
        self.assertEqual(diagnostic.boundary, 0.0)
        self.assertAlmostEqual(diagnostic.limit, 2.448, delta=1e-3)
        self.assertTrue(has_point_mass(NormMeanModel(k=100, sigma=5.0)).has_point_mass)

    def test_location(self):
        diagnostic = has_point_mass(LocationModel())
        self.assertFalse(diagnostic.has_point_mass)
        self.assertIsNone(diagnostic.limit)
        self.assertEqual(len(diagnostic.limits), 6)
        for _, _, limit in diagnostic.limits:
            self.assertTrue(np.isinf(limit))

    def test_curved_normal(self):
        self.assertFalse(has_point_mass(CurvedNormalModel()).has_point_mass)

    def test_open_interval(self):
        # Interior limits at both ends: point masses at both ends
        diagnostic = has_point_mass(OpenIntervalModel())
        self.assertTrue(diagnostic.has_point_mass)
        self.assertAlmostEqual(diagnostic.limit, stats.norm.ppf(0.95), places=5)


class TestCurvedCD(unittest.TestCase):

    def test_raw_statistic(self):
        # Using Y itself the curve does not reach one
        observation = Observation([1.0])
        self.assertAlmostEqual(curved_cd(1e8, observation), 0.8413, delta=1e-4)
        self.assertAlmostEqual(curved_cd(2.0, observation), stats.norm.sf(-0.5), places=12)

    def test_absolute_value(self):
        observation = Observation([-1.0])
        self.assertAlmostEqual(curved_cd(2.0, observation, use_abs=True), CurvedNormalModel().cd(2.0, 1.0), places=12)
        self.assertGreater(curved_cd(1e8, observation, use_abs=True), 1 - 1e-6)

    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            curved_cd(0.0, Observation([1.0]))
        with self.assertRaises(InvalidParameterError):
            curved_cd(1.0, 1.0)
