# -*- coding: utf-8 -*-
"""The command line interface: evaluate confidence and posterior curves, compute and assess intervals
and beliefs, run the Monte Carlo experiments and emit the figure datasets, as CSV or JSON tables."""

import os
import sys
import argparse
import numpy as np
import pandas as pd
from . import logger as confidentia_logger
from .models import get_model, NormMeanModel, CurvedNormalModel, Observation
from .datastructures import Proposition, bound_to_float
from .confidence import ConfidenceCurve, cd_eval, point_mass, confidence_density, confidence_of_set
from .posteriors import PosteriorCurve, PRIOR_KINDS
from .intervals import IntervalSpec, ci_observe, ci_confidence
from .beliefs import BeliefCurve, plausibility, belief
from .simulations import ExperimentGrid, SimReport, FIGURES, figure_data, coverage_sim, average_cdf_sim
from .simulations import collision_confidence_sim, false_confidence_probe, null_belief_probe, test_size_probe
from .simulations import bel_g_floor_probe, pit_test
from .storages import CSVFileStorage, JSONFileStorage
from .utilities import check_nonnegative, check_positive, check_seed, is_positive_integer
from .exceptions import InvalidParameterError, InvalidSpecError, UnknownFigureError, DimensionMismatchError
from .exceptions import MismatchedObservationError, NumericalFailureError

# Setup logging
import logging
logger = logging.getLogger(__name__)

COMMANDS = ('cd', 'ci', 'posterior', 'belief', 'assess', 'sim', 'figure')

EXPERIMENTS = ('coverage', 'cumulatives', 'collision', 'false-confidence', 'null-belief', 'test-size',
               'bel-g-floor', 'pit')

FORMATS = ('csv', 'json')

# Column order of the tables emitted by every command (sim and figure emit the report columns)
COLUMNS = {
    'cd': ['d', 'sigma', 'k', 'theta', 'confidence', 'point_mass', 'density'],
    'ci': ['d', 'alpha', 'beta', 'closed', 'kind', 'lower', 'upper', 'confidence'],
    'posterior': ['d', 'sigma', 'k', 'theta', 'method', 'cdf', 'density'],
    'belief': ['d', 'sigma', 'k', 'base', 'median', 'theta', 'plausibility', 'proposition', 'belief'],
    'assess': ['d', 'sigma', 'k', 'R', 'C', 'G', 'RP', 'Bel', 'Bel_G'],
}

# Evaluation points used when no --theta is given
DEFAULT_THETA_POINTS = 31

OUTPUT_DIR_VARIABLE = 'CONFIDENTIA_OUTPUT_DIR'

EXIT_OK = 0
EXIT_NUMERICAL_FAILURE = 1
EXIT_USAGE = 2

USAGE_ERRORS = (InvalidParameterError, InvalidSpecError, UnknownFigureError, DimensionMismatchError,
                MismatchedObservationError)


#=========================
#  Parser
#=========================

def _add_output_arguments(parser):
    parser.add_argument('--format', choices=FORMATS, default='csv', help='Output format (default: csv).')
    parser.add_argument('--out', default=None, help='Output file (default: standard output). A bare file name goes '
                                                    'in the directory set by {}, if any.'.format(OUTPUT_DIR_VARIABLE))
    parser.add_argument('--seed', type=int, default=0, help='Seed of the random numbers (default: 0).')
    parser.add_argument('--loglevel', default=None, help='Log level (default: from CONFIDENTIA_LOGLEVEL, or CRITICAL).')


def _add_problem_arguments(parser, models=False):
    observed = parser.add_mutually_exclusive_group(required=True)
    observed.add_argument('--d', type=float, help='The observed value of D.')
    observed.add_argument('--y', type=float, nargs='+', help='The raw measurements.')
    parser.add_argument('--sigma', type=float, default=1.0, help='The known standard deviation (default: 1).')
    parser.add_argument('--k', type=int, default=None, help='The dimension (default: the number of measurements, or 2).')
    parser.add_argument('--R', type=float, default=None, help='The combined radius of the collision proposition.')
    if models:
        parser.add_argument('--model', choices=('norm_mean', 'curved_normal'), default='norm_mean',
                            help='The model of D (default: norm_mean).')


def _add_spec_arguments(parser, required=True):
    parser.add_argument('--alpha', type=float, required=required, default=None if required else 0.8,
                        help='The confidence level.')
    parser.add_argument('--beta', type=float, default=0.0, help='The probability of the upper tail (default: 0).')
    parser.add_argument('--closed', action='store_true', help='Include the upper end of the intervals.')


def build_parser():
    parser = argparse.ArgumentParser(prog='confidentia', description='Confidence distribution inference on the norm of a normal mean.')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    cd_parser = subparsers.add_parser('cd', help='Evaluate the confidence distribution, its point mass and density.')
    _add_problem_arguments(cd_parser, models=True)
    cd_parser.add_argument('--theta', type=float, nargs='+', help='Evaluation points.')
    _add_output_arguments(cd_parser)

    ci_parser = subparsers.add_parser('ci', help='Compute, classify and assess the observed confidence interval.')
    _add_problem_arguments(ci_parser, models=True)
    _add_spec_arguments(ci_parser)
    _add_output_arguments(ci_parser)

    posterior_parser = subparsers.add_parser('posterior', help='Evaluate a marginal posterior of the norm.')
    _add_problem_arguments(posterior_parser)
    posterior_parser.add_argument('--method', choices=('UP', 'RP'), default='UP', help='The posterior (default: UP).')
    posterior_parser.add_argument('--rp-prior', choices=PRIOR_KINDS, default='reference', help='The prior of RP.')
    posterior_parser.add_argument('--theta', type=float, nargs='+', help='Evaluation points.')
    _add_output_arguments(posterior_parser)

    belief_parser = subparsers.add_parser('belief', help='Evaluate the plausibility contour and the belief of collision.')
    _add_problem_arguments(belief_parser, models=True)
    belief_parser.add_argument('--base', choices=('CD', 'UP'), default='CD', help='The base distribution (default: CD).')
    belief_parser.add_argument('--theta', type=float, nargs='+', help='Evaluation points.')
    _add_output_arguments(belief_parser)

    assess_parser = subparsers.add_parser('assess', help='Assess the collision proposition [0, R] with every method.')
    _add_problem_arguments(assess_parser)
    assess_parser.add_argument('--rp-prior', choices=PRIOR_KINDS, default='reference', help='The prior of RP.')
    _add_output_arguments(assess_parser)

    sim_parser = subparsers.add_parser('sim', help='Run a Monte Carlo experiment.')
    sim_parser.add_argument('experiment', choices=EXPERIMENTS)
    sim_parser.add_argument('--theta0', type=float, nargs='+', default=[1.0], help='The true parameters.')
    sim_parser.add_argument('--sigma', type=float, nargs='+', default=[1.0], help='The standard deviations.')
    sim_parser.add_argument('--k', type=int, nargs='+', default=[2], help='The dimensions.')
    sim_parser.add_argument('--R', type=float, default=2.0, help='The combined radius (default: 2).')
    sim_parser.add_argument('--theta', type=float, nargs='+', default=None, help='Evaluation points of the cumulatives.')
    sim_parser.add_argument('--method', default='CD', help='The method: CD, UP, RP, BelCD or BelUP (default: CD).')
    sim_parser.add_argument('--hypothesis', choices=('collision', 'no-collision'), default='collision',
                            help='The proposition of the false confidence and test size probes.')
    sim_parser.add_argument('--epsilon', type=float, default=0.1, help='Half width of the null belief interval.')
    sim_parser.add_argument('--null-interval', choices=('around', 'collision'), default='around',
                            help='The true interval of the null belief probe: (theta0-epsilon, theta0+epsilon) or [0, R].')
    sim_parser.add_argument('--rp-prior', choices=PRIOR_KINDS, default='reference', help='The prior of RP.')
    sim_parser.add_argument('--reps', type=int, default=10000, help='Replicates per cell (default: 10000).')
    sim_parser.add_argument('--jobs', type=int, default=1, help='Parallel workers (default: 1).')
    _add_spec_arguments(sim_parser, required=False)
    _add_output_arguments(sim_parser)

    figure_parser = subparsers.add_parser('figure', help='Compute the dataset of a figure.')
    figure_parser.add_argument('name', help='The figure: {}.'.format(', '.join(FIGURES)))
    figure_parser.add_argument('--reps', type=int, default=None, help='Replicates per cell (default: per figure).')
    figure_parser.add_argument('--jobs', type=int, default=1, help='Parallel workers (default: 1).')
    figure_parser.add_argument('--rp-prior', choices=PRIOR_KINDS, default='reference', help='The prior of RP.')
    _add_output_arguments(figure_parser)

    return parser


#=========================
#  Run configuration
#=========================

class RunConfig(object):
    """The validated configuration of a run, built from the parsed command line arguments.

    Args:
        args(argparse.Namespace): the parsed arguments.
    """

    def __init__(self, args):
        self.command = args.command
        if self.command not in COMMANDS:
            raise InvalidParameterError('Unknown command "{}"'.format(self.command))
        self.args = args
        self.seed = check_seed(args.seed)
        self.format = args.format
        self.out = output_path(args.out)

        self.model = None
        self.observation = None
        self.spec = None
        if self.command in ('cd', 'ci', 'posterior', 'belief', 'assess'):
            self.model = self._build_model(args)
            self.observation = self._build_observation(args)
        if self.command == 'ci':
            self.spec = IntervalSpec(args.alpha, args.beta, args.closed)
        if self.command == 'assess' and self.model.R is None:
            raise InvalidParameterError('The assess command needs the radius --R')
        if self.command in ('sim', 'figure'):
            for label in ('reps', 'jobs'):
                value = getattr(args, label)
                if value is not None and not is_positive_integer(value):
                    raise InvalidParameterError('--{} must be a positive integer (got "{}")'.format(label, value))
        if self.command == 'sim':
            check_nonnegative(args.theta0, 'theta0')
            check_positive(args.sigma, 'sigma')
            self.spec = IntervalSpec(args.alpha, args.beta, args.closed)

    def __repr__(self):
        return 'RunConfig(command={}, model={}, observation={}, out={}, format={})'.format(self.command, self.model, self.observation, self.out, self.format)

    @staticmethod
    def _build_model(args):
        kind = getattr(args, 'model', 'norm_mean')
        if kind == 'curved_normal':
            return get_model(kind, R=args.R)
        k = args.k
        if k is None:
            k = len(args.y) if args.y is not None else 2
        return get_model(kind, k=k, sigma=args.sigma, R=args.R)

    def _build_observation(self, args):
        if args.y is not None:
            return self.model.observe(args.y)
        d = float(check_nonnegative(args.d, 'd'))
        return Observation([d], d=d)

    @property
    def d(self):
        return self.observation.d

    @property
    def sigma(self):
        return getattr(self.model, 'sigma', np.nan)

    @property
    def k(self):
        return getattr(self.model, 'k', self.model.dimension)

    def thetas(self):
        """The evaluation points: the given ones, or an evenly spaced grid covering the bulk of the curve."""
        if self.args.theta is not None:
            return np.asarray(check_nonnegative(self.args.theta, 'theta'), dtype=float)
        scale = self.sigma if np.isfinite(self.sigma) else max(self.d, 1.0)
        upper = self.d + 5.0 * scale
        if isinstance(self.model, CurvedNormalModel):
            return np.linspace(0.0, upper, DEFAULT_THETA_POINTS)[1:]
        return np.linspace(0.0, upper, DEFAULT_THETA_POINTS)


def output_path(out):
    """The output file: None for the standard output, a bare file name goes in the default output directory."""
    if out is None:
        return None
    output_dir = os.environ.get(OUTPUT_DIR_VARIABLE)
    if output_dir and not os.path.dirname(out):
        return os.path.join(output_dir, out)
    return out


#=========================
#  Commands
#=========================

def _cd_table(config):
    curve = ConfidenceCurve(config.model, config.d)
    thetas = config.thetas()
    densities = np.full(thetas.size, np.nan)
    positive = thetas > 0
    if np.any(positive):
        densities[positive] = confidence_density(thetas[positive], curve)
    return pd.DataFrame({'d': config.d, 'sigma': config.sigma, 'k': config.k, 'theta': thetas,
                         'confidence': np.atleast_1d(cd_eval(thetas, curve)), 'point_mass': point_mass(curve),
                         'density': densities}, columns=COLUMNS['cd'])


def _ci_table(config):
    interval = ci_observe(config.d, config.spec, config.model)
    confidence = ci_confidence(interval, ConfidenceCurve(config.model, config.d))
    logger.info('Observed interval %s (%s) with confidence %s', interval, interval.kind, confidence)
    row = dict(d=config.d, alpha=config.spec.alpha, beta=config.spec.beta, closed=config.spec.closed, kind=interval.kind,
               lower=interval.lower, upper=bound_to_float(interval.upper), confidence=confidence)
    return pd.DataFrame([row], columns=COLUMNS['ci'])


def _posterior_table(config):
    curve = PosteriorCurve(config.model, config.d, method=config.args.method, prior=config.args.rp_prior)
    thetas = config.thetas()
    return pd.DataFrame({'d': config.d, 'sigma': config.sigma, 'k': config.k, 'theta': thetas, 'method': curve.method,
                         'cdf': np.atleast_1d(curve.cdf(thetas)), 'density': np.atleast_1d(curve.density(thetas))},
                        columns=COLUMNS['posterior'])


def _base_curve(config, base):
    if base == 'CD':
        return ConfidenceCurve(config.model, config.d)
    return PosteriorCurve(config.model, config.d, method='UP')


def _belief_table(config):
    belief_curve = BeliefCurve(_base_curve(config, config.args.base))
    thetas = config.thetas()
    if config.model.R is not None:
        proposition = Proposition.at_most(config.model.R)
        proposition_label, belief_value = repr(proposition), belief(proposition, belief_curve)
    else:
        proposition_label, belief_value = None, np.nan
    return pd.DataFrame({'d': config.d, 'sigma': config.sigma, 'k': config.k, 'base': belief_curve.base,
                         'median': belief_curve.median, 'theta': thetas,
                         'plausibility': np.atleast_1d(plausibility(thetas, belief_curve)),
                         'proposition': proposition_label, 'belief': belief_value}, columns=COLUMNS['belief'])


def _assess_table(config):
    collision = Proposition.at_most(config.model.R)
    cd_curve = ConfidenceCurve(config.model, config.d)
    up_curve = PosteriorCurve(config.model, config.d, method='UP')
    rp_curve = PosteriorCurve(config.model, config.d, method='RP', prior=config.args.rp_prior)
    row = dict(d=config.d, sigma=config.sigma, k=config.k, R=config.model.R,
               C=confidence_of_set(collision, cd_curve),
               G=collision.mass(up_curve.cdf, up_curve.atom),
               RP=collision.mass(rp_curve.cdf, rp_curve.atom),
               Bel=belief(collision, BeliefCurve(cd_curve)),
               Bel_G=belief(collision, BeliefCurve(up_curve)))
    return pd.DataFrame([row], columns=COLUMNS['assess'])


def _hypothesis(args):
    if args.hypothesis == 'collision':
        return Proposition.at_most(args.R)
    return Proposition.greater_than(args.R)


def _probe_rows(report, args, seed, probe):
    for theta0 in args.theta0:
        for sigma in args.sigma:
            for k in args.k:
                probe(report, theta0, NormMeanModel(k=k, sigma=sigma, R=args.R), dict(theta0=theta0, sigma=sigma, k=k))
    return report


def _null_belief_interval(args, theta0):
    if args.null_interval == 'collision':
        return Proposition.at_most(args.R)
    return Proposition.around(theta0, args.epsilon)


def run_experiment(config):
    """Run the Monte Carlo experiment of a ``sim`` run configuration.

    Returns:
        SimReport: the report.
    """
    args = config.args
    seed = config.seed
    experiment = args.experiment

    if experiment in ('coverage', 'cumulatives', 'collision'):
        grid = ExperimentGrid(args.theta0, args.sigma, args.k, args.reps, seed)
        if experiment == 'coverage':
            return coverage_sim(grid, args.method, config.spec, prior=args.rp_prior, n_jobs=args.jobs)
        if experiment == 'cumulatives':
            thetas = args.theta if args.theta is not None else np.linspace(0.0, 12.0, 49)
            return average_cdf_sim(grid, thetas, n_jobs=args.jobs)
        return collision_confidence_sim(grid, args.R, prior=args.rp_prior, n_jobs=args.jobs)

    report = SimReport(experiment, seed)
    alpha = config.spec.alpha

    if experiment == 'false-confidence':
        def probe(report, theta0, model, fields):
            result = false_confidence_probe(theta0, _hypothesis(args), alpha, args.method, model, args.reps, seed, args.rp_prior)
            report.add(args.method, result.estimate, result.mc_se, result.n_reps, alpha=alpha, theta=args.R, **fields)
    elif experiment == 'test-size':
        def probe(report, theta0, model, fields):
            result = test_size_probe(_hypothesis(args), args.method, alpha, theta0, model, args.reps, seed, args.rp_prior)
            report.add(args.method, result.estimate, result.mc_se, result.n_reps, alpha=alpha, theta=args.R, **fields)
    elif experiment == 'null-belief':
        base = args.method[3:] if args.method.startswith('Bel') else args.method
        def probe(report, theta0, model, fields):
            result = null_belief_probe(theta0, base=base, model=model, n_reps=args.reps, seed=seed,
                                       proposition=_null_belief_interval(args, theta0))
            theta = args.R if args.null_interval == 'collision' else theta0
            report.add(args.method, result.estimate, result.mc_se, result.n_reps, theta=theta, **fields)
    elif experiment == 'bel-g-floor':
        def probe(report, theta0, model, fields):
            result = bel_g_floor_probe(args.R, model.sigma, model.k, args.reps, seed)
            report.add(args.method, result.estimate, result.mc_se, result.n_reps, theta=args.R, **fields)
    else:
        # The value is the Kolmogorov-Smirnov statistic and the bound its 0.999 DKW band
        def probe(report, theta0, model, fields):
            result = pit_test(theta0, model, args.reps, seed)
            report.add_value(args.method, result.statistic, result.dkw_bound, args.reps, theta=theta0, **fields)

    return _probe_rows(report, args, seed, probe)


#=========================
#  Output
#=========================

def write_table(table, out=None, format='csv'):
    """Write a table (DataFrame or report) on a file or on the standard output."""
    if format not in FORMATS:
        raise InvalidParameterError('Unknown format "{}" (choices: {})'.format(format, ', '.join(FORMATS)))
    storage = CSVFileStorage(out) if format == 'csv' else JSONFileStorage(out)
    storage.put(table, overwrite=True)


def figures(name, seed=0, out=None, format='csv', n_reps=None, n_jobs=1, prior='reference'):
    """Compute the dataset of a figure and write it as a long format table.

    Args:
        name(str): the figure, one of ``ci``, ``cumulatives``, ``coverage`` or ``collision``.
        seed(int): the seed.
        out(str): the output file, or None for the standard output.

    Returns:
        SimReport: the dataset.
    """
    report = figure_data(name, seed=seed, n_reps=n_reps, n_jobs=n_jobs, prior=prior)
    write_table(report, output_path(out), format)
    return report


TABLES = {
    'cd': _cd_table,
    'ci': _ci_table,
    'posterior': _posterior_table,
    'belief': _belief_table,
    'assess': _assess_table,
}


def run(argv=None):
    """Run the command line with the given arguments.

    Returns:
        int: the exit code, 0 on success, 2 on usage errors and invalid parameters, 1 on numerical failures.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    if args.loglevel:
        confidentia_logger.setup(level=args.loglevel, force=True)
    else:
        confidentia_logger.setup()

    try:
        config = RunConfig(args)
        logger.debug('Running %s', config)
        if config.command == 'figure':
            figures(args.name, seed=config.seed, out=config.out, format=config.format,
                    n_reps=args.reps, n_jobs=args.jobs, prior=args.rp_prior)
        elif config.command == 'sim':
            write_table(run_experiment(config), config.out, config.format)
        else:
            write_table(TABLES[config.command](config), config.out, config.format)
    except USAGE_ERRORS as e:
        sys.stderr.write('confidentia {}: error: {}\n'.format(args.command, e))
        return EXIT_USAGE
    except NumericalFailureError as e:
        sys.stderr.write('confidentia {}: numerical failure: {}\n'.format(args.command, e))
        return EXIT_NUMERICAL_FAILURE
    return EXIT_OK


def main():
    sys.exit(run())
