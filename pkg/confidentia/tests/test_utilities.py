import unittest
import numpy as np
from ..utilities import is_numerical, is_positive_integer, is_close, check_finite, check_nonnegative
from ..utilities import check_positive, check_probability, check_degrees_of_freedom, check_seed
from ..utilities import as_array, from_array, to_significant_string, block_generator, draw_replicates
from ..utilities import REPLICATES_PER_BLOCK
from ..exceptions import InvalidParameterError

# Setup logging
from .. import logger
logger.setup()


class TestChecks(unittest.TestCase):

    def test_is_numerical(self):
        self.assertTrue(is_numerical(1))
        self.assertTrue(is_numerical(1.5))
        self.assertTrue(is_numerical(np.float64(2.0)))
        self.assertTrue(is_numerical(np.array(2.0)))
        self.assertFalse(is_numerical(True))
        self.assertFalse(is_numerical('1'))
        self.assertFalse(is_numerical(None))

    def test_is_positive_integer(self):
        self.assertTrue(is_positive_integer(1))
        self.assertTrue(is_positive_integer(np.int64(100)))
        self.assertFalse(is_positive_integer(0))
        self.assertFalse(is_positive_integer(2.0))
        self.assertFalse(is_positive_integer(True))

    def test_is_close(self):
        self.assertTrue(is_close(1.0, 1.0 + 1e-12))
        self.assertFalse(is_close(1.0, 1.001))
        self.assertTrue(is_close(0.0, 1e-13, abs_tol=1e-12))

    def test_parameter_checks(self):
        np.testing.assert_array_equal(check_finite([1.0, 2.0], 'x'), [1.0, 2.0])
        with self.assertRaises(InvalidParameterError):
            check_finite(np.inf, 'x')
        with self.assertRaises(InvalidParameterError):
            check_finite(np.nan, 'x')

        self.assertEqual(check_nonnegative(0.0, 'x'), 0.0)
        with self.assertRaises(InvalidParameterError):
            check_nonnegative(-1e-15, 'x')
        # Round-off below zero clamped if asked for
        self.assertEqual(check_nonnegative(-1e-15, 'x', clamp_round_off=True), 0.0)
        with self.assertRaises(InvalidParameterError):
            check_nonnegative(-1e-6, 'x', clamp_round_off=True)

        with self.assertRaises(InvalidParameterError):
            check_positive(0.0, 'x')

        self.assertEqual(check_probability(0.5, 'p'), 0.5)
        self.assertEqual(check_probability(1.0, 'p', open_interval=False), 1.0)
        with self.assertRaises(InvalidParameterError):
            check_probability(1.0, 'p')
        with self.assertRaises(InvalidParameterError):
            check_probability('0.5', 'p')

        self.assertEqual(check_degrees_of_freedom(3), 3)
        with self.assertRaises(InvalidParameterError):
            check_degrees_of_freedom(2.5)

        self.assertEqual(check_seed(0), 0)
        with self.assertRaises(InvalidParameterError):
            check_seed(-1)
        with self.assertRaises(InvalidParameterError):
            check_seed(1.0)


class TestArraysAndFormatting(unittest.TestCase):

    def test_scalars_and_arrays(self):
        array, scalar = as_array(2)
        self.assertTrue(scalar)
        self.assertEqual(from_array(array * 2, scalar), 4.0)
        self.assertIsInstance(from_array(array * 2, scalar), float)

        array, scalar = as_array([1, 2])
        self.assertFalse(scalar)
        np.testing.assert_array_equal(from_array(array, scalar), [1.0, 2.0])

    def test_significant_digits(self):
        self.assertEqual(to_significant_string(0.918234567), '0.918235')
        self.assertEqual(to_significant_string(2.0), '2')
        self.assertEqual(to_significant_string(np.nan), '')
        self.assertEqual(to_significant_string(None), '')
        self.assertEqual(to_significant_string(np.inf), 'inf')
        self.assertEqual(to_significant_string(1234567.0, 3), '1.23e+06')


class TestRandomStreams(unittest.TestCase):

    def test_block_generator(self):
        first = block_generator(1, 0, 0).random(5)
        np.testing.assert_array_equal(first, block_generator(1, 0, 0).random(5))
        self.assertFalse(np.array_equal(first, block_generator(1, 1, 0).random(5)))
        self.assertFalse(np.array_equal(first, block_generator(1, 0, 1).random(5)))
        self.assertFalse(np.array_equal(first, block_generator(2, 0, 0).random(5)))

    def test_draw_replicates(self):
        draw = lambda rng, size: rng.standard_normal(size)
        values = draw_replicates(draw, REPLICATES_PER_BLOCK + 10, seed=3)
        self.assertEqual(values.shape, (REPLICATES_PER_BLOCK + 10,))

        # Prefixes do not depend on the number of replicates
        np.testing.assert_array_equal(values[:100], draw_replicates(draw, 100, seed=3))
        np.testing.assert_array_equal(values[REPLICATES_PER_BLOCK:], block_generator(3, 0, 1).standard_normal(10))

        self.assertEqual(draw_replicates(draw, 0, seed=3).size, 0)
        with self.assertRaises(InvalidParameterError):
            draw_replicates(draw, 10, seed=-3)
