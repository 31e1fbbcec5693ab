import unittest
import os
import io
import json
import tempfile
from contextlib import redirect_stdout, redirect_stderr
from unittest import mock
import numpy as np
from ..cli import run, build_parser, RunConfig, output_path, COLUMNS, DEFAULT_THETA_POINTS
from ..cli import EXIT_OK, EXIT_USAGE, OUTPUT_DIR_VARIABLE
from ..storages import CSVFileStorage
from ..simulations import REPORT_COLUMNS

# Setup logging
from .. import logger
logger.setup()

# Set test data path
TEST_DATA_PATH = '/'.join(os.path.realpath(__file__).split('/')[0:-1]) + '/test_data/'


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def run_table(self, *argv):
        filename = os.path.join(self.temp_dir.name, 'output.csv')
        self.assertEqual(run(list(argv) + ['--out', filename]), EXIT_OK)
        return CSVFileStorage(filename).get()

    def test_cd(self):
        table = self.run_table('cd', '--d', '1', '--theta', '0', '2')
        self.assertEqual(list(table.columns), COLUMNS['cd'])
        self.assertAlmostEqual(table['confidence'][0], np.exp(-0.5), places=5)
        self.assertAlmostEqual(table['confidence'][1], 0.918, delta=1e-3)
        self.assertAlmostEqual(table['point_mass'][1], np.exp(-0.5), places=5)
        # No density at zero, where the point mass sits
        self.assertTrue(np.isnan(table['density'][0]))
        self.assertGreater(table['density'][1], 0)

        # From the raw measurements
        table = self.run_table('cd', '--y', '0.6', '0.8', '--theta', '2')
        self.assertAlmostEqual(table['d'][0], 1.0, places=5)
        self.assertEqual(table['k'][0], 2)
        self.assertAlmostEqual(table['confidence'][0], 0.918, delta=1e-3)

        # Default evaluation points
        self.assertEqual(len(self.run_table('cd', '--d', '1')), DEFAULT_THETA_POINTS)

    def test_cd_curved_normal(self):
        table = self.run_table('cd', '--model', 'curved_normal', '--d', '1')
        self.assertEqual(len(table), DEFAULT_THETA_POINTS - 1)
        self.assertTrue(np.all(table['theta'] > 0))
        self.assertTrue(np.all(np.isnan(table['sigma'])))
        self.assertTrue(np.all(table['point_mass'] == 0))

    def test_ci(self):
        table = self.run_table('ci', '--d', '2', '--alpha', '0.9', '--beta', '0.05')
        self.assertEqual(list(table.columns), COLUMNS['ci'])
        self.assertEqual(table['kind'][0], 'one-sided')
        self.assertEqual(table['lower'][0], 0.0)
        self.assertAlmostEqual(table['upper'][0], 3.451, delta=1e-3)
        self.assertAlmostEqual(table['confidence'][0], 0.95, places=5)

        table = self.run_table('ci', '--d', '0.2', '--alpha', '0.9', '--beta', '0.05')
        self.assertEqual(table['kind'][0], 'empty')
        self.assertAlmostEqual(table['confidence'][0], 0.980, delta=1e-3)

        table = self.run_table('ci', '--d', '3', '--alpha', '0.9')
        self.assertEqual(table['kind'][0], 'two-sided')
        self.assertTrue(np.isinf(table['upper'][0]))

    def test_posterior(self):
        table = self.run_table('posterior', '--d', '1', '--theta', '2')
        self.assertEqual(list(table.columns), COLUMNS['posterior'])
        self.assertEqual(table['method'][0], 'UP')
        self.assertAlmostEqual(table['cdf'][0], 0.731, delta=1e-3)

        table = self.run_table('posterior', '--d', '1', '--theta', '2', '--method', 'RP')
        self.assertAlmostEqual(table['cdf'][0], 0.891, delta=0.02)

    def test_belief(self):
        table = self.run_table('belief', '--d', '1', '--R', '2', '--theta', '0.5', '1')
        self.assertEqual(list(table.columns), COLUMNS['belief'])
        self.assertEqual(table['base'][0], 'CD')
        self.assertEqual(table['proposition'][0], '[0.0, 2.0]')
        self.assertAlmostEqual(table['belief'][0], 0.836, delta=1e-3)
        self.assertTrue(np.all((table['plausibility'] >= 0) & (table['plausibility'] <= 1)))

        # Without a radius there is no proposition
        table = self.run_table('belief', '--d', '1', '--theta', '1', '--base', 'UP')
        self.assertTrue(np.isnan(table['belief'][0]))

    def test_assess(self):
        table = self.run_table('assess', '--d', '1', '--sigma', '1', '--k', '2', '--R', '2')
        self.assertEqual(list(table.columns), COLUMNS['assess'])
        self.assertAlmostEqual(table['C'][0], 0.918, delta=1e-3)
        self.assertAlmostEqual(table['G'][0], 0.731, delta=1e-3)
        self.assertAlmostEqual(table['RP'][0], 0.891, delta=0.02)
        self.assertAlmostEqual(table['Bel'][0], 0.836, delta=1e-3)
        self.assertAlmostEqual(table['Bel_G'][0], 2 * table['G'][0] - 1, delta=1e-5)

        # Large sigma: full confidence in collision, no probability of it
        table = self.run_table('assess', '--d', '1', '--sigma', '100', '--R', '2')
        self.assertAlmostEqual(table['C'][0], 1.0, delta=1e-3)
        self.assertLessEqual(table['G'][0], 1e-3)

    def test_json_and_standard_output(self):
        output = io.StringIO()
        with redirect_stdout(output):
            self.assertEqual(run(['cd', '--d', '1', '--theta', '2', '--format', 'json']), EXIT_OK)
        records = json.loads(output.getvalue())
        self.assertEqual(len(records), 1)
        self.assertAlmostEqual(records[0]['confidence'], 0.918, delta=1e-3)
        self.assertIn('confidence_display', records[0])

    def test_sim(self):
        table = self.run_table('sim', 'coverage', '--theta0', '1', '2', '--reps', '500', '--beta', '0.1', '--seed', '3')
        self.assertEqual(list(table.columns), REPORT_COLUMNS)
        self.assertEqual(len(table), 2)
        self.assertTrue(np.all(table['seed'] == 3))
        self.assertTrue(np.all(np.abs(table['estimate'] - 0.8) < 0.1))

        table = self.run_table('sim', 'null-belief', '--theta0', '1', '--reps', '500')
        self.assertEqual(table['experiment'][0], 'null-belief')
        self.assertGreater(table['estimate'][0], 0.5)

        # Null belief of the collision proposition at its boundary
        table = self.run_table('sim', 'null-belief', '--theta0', '2', '--null-interval', 'collision', '--R', '2', '--reps', '2000')
        self.assertEqual(table['theta'][0], 2.0)
        self.assertLess(abs(table['estimate'][0] - 0.5), 0.05)

        # Test statistics go in the value column, not in the estimate
        table = self.run_table('sim', 'pit', '--theta0', '1', '--reps', '2000')
        self.assertEqual(table['experiment'][0], 'pit')
        self.assertTrue(np.isnan(table['estimate'][0]))
        self.assertTrue(np.isnan(table['mc_se'][0]))
        self.assertLess(table['value'][0], table['bound'][0])

    def test_figure(self):
        table = self.run_table('figure', 'ci')
        self.assertEqual(list(table.columns), REPORT_COLUMNS)
        thresholds = table[table['method'] == 'two-sided-threshold']['value']
        self.assertTrue(np.any(np.abs(thresholds - 2.448) < 1e-3))
        self.assertTrue(np.any(np.abs(thresholds - 1.449) < 1e-3))

    def test_usage_errors(self):
        with redirect_stderr(io.StringIO()):
            # Missing observation
            self.assertEqual(run(['cd']), EXIT_USAGE)
            self.assertEqual(run(['cd', '--d', '1', '--y', '1']), EXIT_USAGE)
            # Invalid parameters
            self.assertEqual(run(['cd', '--d', '-1']), EXIT_USAGE)
            self.assertEqual(run(['cd', '--d', '1', '--sigma', '0']), EXIT_USAGE)
            self.assertEqual(run(['ci', '--d', '1', '--alpha', '1.5']), EXIT_USAGE)
            self.assertEqual(run(['ci', '--d', '1', '--alpha', '0.9', '--beta', '0.2']), EXIT_USAGE)
            self.assertEqual(run(['cd', '--y', '1', '2', '--k', '3']), EXIT_USAGE)
            self.assertEqual(run(['assess', '--d', '1']), EXIT_USAGE)
            self.assertEqual(run(['sim', 'coverage', '--reps', '0']), EXIT_USAGE)
            self.assertEqual(run(['figure', 'histogram']), EXIT_USAGE)
            self.assertEqual(run(['sim', 'null-belief', '--epsilon', '0']), EXIT_USAGE)
            self.assertEqual(run(['sim', 'null-belief', '--null-interval', 'outside']), EXIT_USAGE)


class TestRunConfig(unittest.TestCase):

    def test_config(self):
        args = build_parser().parse_args(['cd', '--y', '3', '4'])
        config = RunConfig(args)
        self.assertEqual(config.d, 5.0)
        self.assertEqual(config.k, 2)
        self.assertEqual(config.sigma, 1.0)
        thetas = config.thetas()
        self.assertEqual(thetas[0], 0.0)
        self.assertAlmostEqual(thetas[-1], 10.0)

    def test_output_path(self):
        self.assertIsNone(output_path(None))
        with mock.patch.dict(os.environ, {OUTPUT_DIR_VARIABLE: '/tmp/results'}):
            self.assertEqual(output_path('table.csv'), '/tmp/results/table.csv')
            self.assertEqual(output_path('/data/table.csv'), '/data/table.csv')
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(output_path('table.csv'), 'table.csv')


class TestGoldenHeaders(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.temp_dir.cleanup()

    def header(self, filename):
        with open(filename) as csv_file:
            return csv_file.readline().strip()

    def test_headers(self):
        commands = {
            'cd': ['cd', '--d', '1', '--theta', '1'],
            'ci': ['ci', '--d', '1', '--alpha', '0.9'],
            'posterior': ['posterior', '--d', '1', '--theta', '1'],
            'belief': ['belief', '--d', '1', '--theta', '1', '--R', '2'],
            'assess': ['assess', '--d', '1', '--R', '2'],
            'sim': ['sim', 'test-size', '--reps', '100'],
        }
        for name, argv in commands.items():
            filename = os.path.join(self.temp_dir.name, name + '.csv')
            self.assertEqual(run(argv + ['--out', filename]), EXIT_OK)
            self.assertEqual(self.header(filename), self.header(os.path.join(TEST_DATA_PATH, 'golden', name + '.csv')))
