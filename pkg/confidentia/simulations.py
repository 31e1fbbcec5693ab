# -*- coding: utf-8 -*-
"""Seeded Monte Carlo experiments: coverage of interval procedures, average distribution functions,
average confidences and beliefs of collision, false confidence, null belief and test size probes."""

import itertools
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import numpy as np
import pandas as pd
from scipy import stats
from .models import Model, NormMeanModel
from .datastructures import Proposition
from .intervals import IntervalSpec, ci_bounds, ci_contains
from .posteriors import up_cdf, up_quantile, rp_cdf_batch, PRIOR_KINDS
from .beliefs import belief_values
from .utilities import check_nonnegative, check_positive, check_probability, check_seed, check_degrees_of_freedom
from .utilities import is_positive_integer, ROUND_OFF_TOLERANCE
from .exceptions import InvalidParameterError, UnknownFigureError, ConsistencyException

# Setup logging
import logging
logger = logging.getLogger(__name__)

METHODS = ('CD', 'UP', 'RP', 'BelCD', 'BelUP')

# Degenerate zero standard deviations in grids are replaced by this value
ZERO_SIGMA_REPLACEMENT = 1e-3

REPORT_COLUMNS = ['experiment', 'method', 'alpha', 'beta', 'theta0', 'sigma', 'k', 'theta', 'd',
                  'estimate', 'mc_se', 'value', 'bound', 'n_reps', 'seed']

ProbeEstimate = namedtuple('ProbeEstimate', ['estimate', 'mc_se', 'n_reps'])
NullBeliefEstimate = namedtuple('NullBeliefEstimate', ['estimate', 'mc_se', 'median_outside', 'n_reps'])
KSResult = namedtuple('KSResult', ['statistic', 'pvalue', 'dkw_bound'])


#=========================
#  Grid and report
#=========================

class ExperimentGrid(object):
    """The grid of an experiment: true parameters, standard deviations and dimensions, plus the number
    of replicates per cell and the seed.

    Args:
        thetas: the true parameters theta0, not negative.
        sigmas: the standard deviations, not negative (zeros are replaced by 1e-3).
        ks: the dimensions, positive integers.
        n_reps(int): the number of replicates per cell.
        seed(int): the seed.
    """

    def __init__(self, thetas, sigmas=(1.0,), ks=(2,), n_reps=10000, seed=0):
        thetas = [float(theta) for theta in np.atleast_1d(check_nonnegative(thetas, 'theta'))]
        sigmas = [float(sigma) for sigma in np.atleast_1d(check_nonnegative(sigmas, 'sigma'))]
        if not thetas or not sigmas or not len(ks):
            raise InvalidParameterError('Experiment grids must not be empty')
        if 0.0 in sigmas:
            logger.info('Replacing zero sigma by %s in the experiment grid', ZERO_SIGMA_REPLACEMENT)
            sigmas = [sigma if sigma > 0 else ZERO_SIGMA_REPLACEMENT for sigma in sigmas]
        if not is_positive_integer(n_reps):
            raise InvalidParameterError('The number of replicates must be a positive integer (got "{}")'.format(n_reps))
        self.thetas = thetas
        self.sigmas = sigmas
        self.ks = [check_degrees_of_freedom(k) for k in ks]
        self.n_reps = int(n_reps)
        self.seed = check_seed(seed)

    def __repr__(self):
        return 'ExperimentGrid(thetas={}, sigmas={}, ks={}, n_reps={}, seed={})'.format(self.thetas, self.sigmas, self.ks, self.n_reps, self.seed)

    def cells(self):
        """The cells of the grid as (stream, theta0, sigma, k) tuples. The stream (the index of the cell)
        identifies the random numbers of the cell."""
        return [(stream, theta, sigma, k) for stream, (theta, sigma, k) in enumerate(itertools.product(self.thetas, self.sigmas, self.ks))]

    def sample(self, stream, theta0, sigma, k):
        return NormMeanModel(k=k, sigma=sigma).sample_d(theta0, self.n_reps, self.seed, stream=stream)


class SimReport(object):
    """The result of an experiment, as rows of the long format described by ``REPORT_COLUMNS``.

    Args:
        experiment(str): the experiment identifier.
        seed(int): the seed.
    """

    def __init__(self, experiment, seed):
        self.experiment = experiment
        self.seed = seed
        self.rows = []

    def __repr__(self):
        return 'SimReport(experiment={}, seed={}, rows={})'.format(self.experiment, self.seed, len(self.rows))

    def __len__(self):
        return len(self.rows)

    def _row(self, method, n_reps, fields):
        row = {column: np.nan for column in REPORT_COLUMNS}
        unknown = set(fields) - set(REPORT_COLUMNS)
        if unknown:
            raise InvalidParameterError('Unknown report fields: {}'.format(', '.join(sorted(unknown))))
        row.update(fields)
        row.update(experiment=self.experiment, method=method, n_reps=int(n_reps), seed=self.seed)
        return row

    def add(self, method, estimate, mc_se, n_reps, **fields):
        """Add a Monte Carlo estimate, a proportion or an average of values in [0,1], with its standard error."""
        estimate = float(estimate)
        if not -ROUND_OFF_TOLERANCE <= estimate <= 1.0 + ROUND_OFF_TOLERANCE:
            raise ConsistencyException('Estimates must lie in [0,1] (got "{}")'.format(estimate))
        estimate = min(max(estimate, 0.0), 1.0)
        row = self._row(method, n_reps, fields)
        row.update(estimate=estimate, mc_se=float(mc_se))
        self.rows.append(row)

    def add_value(self, method, value, bound=np.nan, n_reps=1, **fields):
        """Add a quantity which is not a proportion (an interval end, a threshold, a test statistic), with an
        optional bound to compare it against. These rows have no estimate."""
        row = self._row(method, n_reps, fields)
        row.update(value=float(value), bound=float(bound))
        self.rows.append(row)

    def extend(self, rows):
        self.rows.extend(rows)

    def to_frame(self):
        """The report as a pandas DataFrame, with the columns in the order of ``REPORT_COLUMNS``."""
        return pd.DataFrame(self.rows, columns=REPORT_COLUMNS)

    def _select(self, column, method, fields):
        selected = []
        for row in self.rows:
            if method is not None and row['method'] != method:
                continue
            if all(row[field] == value for field, value in fields.items()):
                selected.append(row[column])
        return np.array(selected)

    def estimates(self, method=None, **fields):
        """The estimates of the rows matching the given method and fields."""
        return self._select('estimate', method, fields)

    def values(self, method=None, **fields):
        """The values of the rows matching the given method and fields."""
        return self._select('value', method, fields)


def proportion_se(estimate, n):
    """Monte Carlo standard error of a proportion."""
    return float(np.sqrt(estimate * (1.0 - estimate) / n))


def mean_se(values):
    """Monte Carlo standard error of a mean."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


def dkw_bound(n, level=0.999):
    """The Dvoretzky-Kiefer-Wolfowitz band: the sup distance between the empirical and the true distribution
    functions exceeds it with probability at most 1-level."""
    return float(np.sqrt(np.log(2.0 / (1.0 - level)) / (2.0 * n)))


def _run_cells(function, cells, n_jobs):
    """Run the function on every cell, in a thread pool if n_jobs > 1. The rows are returned in cell order,
    and every cell draws from its own random stream, so results do not depend on n_jobs."""
    if not is_positive_integer(n_jobs):
        raise InvalidParameterError('The number of jobs must be a positive integer (got "{}")'.format(n_jobs))
    if n_jobs == 1:
        results = [function(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as executor:
            results = list(executor.map(function, cells))
    rows = []
    for cell_rows in results:
        rows.extend(cell_rows)
    return rows


def _check_method(method, allowed=METHODS):
    if method not in allowed:
        raise InvalidParameterError('Unknown method "{}" (choices: {})'.format(method, ', '.join(allowed)))
    return method


def _check_prior(prior):
    if prior not in PRIOR_KINDS:
        raise InvalidParameterError('Unknown prior "{}" (choices: {})'.format(prior, ', '.join(PRIOR_KINDS)))
    return prior


#=========================
#  Per-replicate curves
#=========================

class _ReplicateCurves(object):
    """The base distribution functions of a method for many observations at once, evaluated lazily at the
    points asked for (and cached, as the reference posterior is costly)."""

    def __init__(self, method, model, ds, prior='reference'):
        self.method = method
        self.model = model
        self.ds = ds
        self.prior = prior
        self._cache = {}
        if method in ('CD', 'BelCD'):
            self.atom = model.point_mass(ds)
        else:
            self.atom = np.zeros(ds.size)

    def cdf(self, theta):
        theta = float(theta)
        if theta not in self._cache:
            if self.method in ('CD', 'BelCD'):
                values = self.model.cd(theta, self.ds)
            elif self.method in ('UP', 'BelUP'):
                values = up_cdf(theta, self.ds, self.model.sigma, self.model.k)
            else:
                values = rp_cdf_batch([theta], self.ds, self.model.sigma, self.model.k, prior=self.prior)[:, 0]
            self._cache[theta] = np.asarray(values, dtype=float)
        return self._cache[theta]

    def confidence(self, proposition):
        """The confidence, probability or belief the method gives to the proposition, for every observation."""
        if self.method in ('BelCD', 'BelUP'):
            return belief_values(proposition, self.cdf, self.atom)
        return proposition.mass(self.cdf, self.atom)

    def medians(self):
        if self.method in ('CD', 'BelCD'):
            return self.model.d_quantile_inverse(0.5, self.ds)
        if self.method in ('UP', 'BelUP'):
            return up_quantile(0.5, self.ds, self.model.sigma, self.model.k)
        raise InvalidParameterError('Medians are available for the CD and UP bases only')


def _posterior_interval_covers(cdf_at_truth, spec):
    """Coverage of the equal-tail posterior interval [F^-1(1-alpha-beta), F^-1(1-beta)) for a continuous
    posterior F: it contains theta0 if and only if 1-alpha-beta <= F(theta0) < 1-beta."""
    covered = cdf_at_truth >= spec.lower_level
    if spec.upper_level < 1.0:
        covered = covered & (cdf_at_truth < spec.upper_level)
    return covered


#=========================
#  Experiments
#=========================

def coverage_sim(grid, method, spec, prior='reference', n_jobs=1):
    """Estimate the coverage probability of interval procedures on every cell of the grid.

    For the CD the intervals are the observed confidence intervals of the procedure; for UP and RP they
    are the equal-tail posterior intervals with the same tail split.

    Args:
        grid(ExperimentGrid): the experiment grid.
        method(str): ``CD``, ``UP`` or ``RP``.
        spec(IntervalSpec): the interval procedure.
        prior(str): the prior of the reference posterior.
        n_jobs(int): the number of parallel workers.

    Returns:
        SimReport: the coverage estimates, one row per cell.
    """
    method = _check_method(method, ('CD', 'UP', 'RP'))
    prior = _check_prior(prior)
    if not isinstance(spec, IntervalSpec):
        raise InvalidParameterError('Expected an IntervalSpec (got "{}")'.format(spec.__class__.__name__))

    def run_cell(cell):
        stream, theta0, sigma, k = cell
        model = NormMeanModel(k=k, sigma=sigma)
        ds = grid.sample(stream, theta0, sigma, k)
        if method == 'CD':
            lower, upper, kinds = ci_bounds(ds, spec, model)
            covered = ci_contains(theta0, lower, upper, kinds, spec.closed)
        else:
            covered = _posterior_interval_covers(_ReplicateCurves(method, model, ds, prior).cdf(theta0), spec)
        estimate = float(np.mean(covered))
        logger.debug('Coverage of %s at theta0=%s sigma=%s k=%s: %s', method, theta0, sigma, k, estimate)
        return [dict(theta0=theta0, sigma=sigma, k=k, alpha=spec.alpha, beta=spec.beta, method=method,
                     estimate=estimate, mc_se=proportion_se(estimate, grid.n_reps), n_reps=grid.n_reps)]

    report = SimReport('coverage', grid.seed)
    for row in _run_cells(run_cell, grid.cells(), n_jobs):
        report.add(**row)
    return report


def average_cdf_sim(grid, thetas, methods=('CD', 'UP'), n_jobs=1):
    """Average, over the replicates of every cell, the distribution functions C(theta;D) and G(theta;D)
    at the evaluation points thetas."""
    for method in methods:
        _check_method(method, ('CD', 'UP'))
    thetas = [float(theta) for theta in np.atleast_1d(check_nonnegative(thetas, 'theta'))]

    def run_cell(cell):
        stream, theta0, sigma, k = cell
        model = NormMeanModel(k=k, sigma=sigma)
        ds = grid.sample(stream, theta0, sigma, k)
        rows = []
        for method in methods:
            curves = _ReplicateCurves(method, model, ds)
            for theta in thetas:
                values = curves.cdf(theta)
                rows.append(dict(theta0=theta0, sigma=sigma, k=k, theta=theta, method=method,
                                 estimate=float(np.mean(values)), mc_se=mean_se(values), n_reps=grid.n_reps))
        return rows

    report = SimReport('cumulatives', grid.seed)
    for row in _run_cells(run_cell, grid.cells(), n_jobs):
        report.add(**row)
    return report


def collision_confidence_sim(grid, R, methods=('CD', 'BelCD', 'UP', 'BelUP'), prior='reference', n_jobs=1):
    """Average, over the replicates of every cell, the confidence, belief or probability each method gives
    to the collision proposition [0, R]."""
    R = float(check_positive(R, 'R'))
    for method in methods:
        _check_method(method)
    prior = _check_prior(prior)
    collision = Proposition.at_most(R)

    def run_cell(cell):
        stream, theta0, sigma, k = cell
        model = NormMeanModel(k=k, sigma=sigma, R=R)
        ds = grid.sample(stream, theta0, sigma, k)
        rows = []
        for method in methods:
            values = _ReplicateCurves(method, model, ds, prior).confidence(collision)
            rows.append(dict(theta0=theta0, sigma=sigma, k=k, theta=R, method=method,
                             estimate=float(np.mean(values)), mc_se=mean_se(values), n_reps=grid.n_reps))
        return rows

    report = SimReport('collision', grid.seed)
    for row in _run_cells(run_cell, grid.cells(), n_jobs):
        report.add(**row)
    return report


#=========================
#  Probes
#=========================

def _probe_sample(model, theta0, n_reps, seed):
    if not isinstance(model, Model):
        raise InvalidParameterError('Expected a Model (got "{}")'.format(model.__class__.__name__))
    return model.sample_d(theta0, n_reps, seed)


def _check_proposition(proposition):
    if not isinstance(proposition, Proposition):
        raise InvalidParameterError('Expected a Proposition (got "{}")'.format(proposition.__class__.__name__))


def false_confidence_probe(theta0, proposition, alpha, method, model=None, n_reps=10000, seed=0, prior='reference'):
    """Estimate the probability P_theta0{confidence(A;D) >= 1-alpha} that a method gives high confidence to
    the proposition A, which is false when theta0 is not in A.

    Returns:
        ProbeEstimate: the estimate with its Monte Carlo standard error.
    """
    _check_proposition(proposition)
    alpha = check_probability(alpha, 'alpha', open_interval=True)
    method = _check_method(method)
    model = model or NormMeanModel()
    if proposition.contains(theta0):
        logger.warning('The proposition %s is true at theta0=%s', proposition, theta0)
    ds = _probe_sample(model, theta0, n_reps, seed)
    values = _ReplicateCurves(method, model, ds, _check_prior(prior)).confidence(proposition)
    estimate = float(np.mean(values >= 1.0 - alpha))
    return ProbeEstimate(estimate, proportion_se(estimate, n_reps), n_reps)


def null_belief_probe(theta0, epsilon=None, base='CD', model=None, n_reps=10000, seed=0, proposition=None):
    """Estimate the probability P_theta0{Bel(I;D) = 0} that the consonant belief gives no belief at all to a
    true interval I, by default (theta0-epsilon, theta0+epsilon). Also estimates P_theta0{median(D) not in I},
    which it equals.

    Returns:
        NullBeliefEstimate: the estimate, its standard error and the median-based estimate.
    """
    base = _check_method(base, ('CD', 'UP'))
    model = model or NormMeanModel()
    if proposition is None:
        if epsilon is None:
            raise InvalidParameterError('Either epsilon or the proposition must be given')
        proposition = Proposition.around(theta0, float(check_positive(epsilon, 'epsilon')))
    _check_proposition(proposition)
    ds = _probe_sample(model, theta0, n_reps, seed)
    curves = _ReplicateCurves('Bel' + base, model, ds)
    null = belief_values(proposition, curves.cdf, curves.atom) == 0.0
    estimate = float(np.mean(null))
    median_outside = float(np.mean(~proposition.contains(curves.medians())))
    return NullBeliefEstimate(estimate, proportion_se(estimate, n_reps), median_outside, n_reps)


def test_size_probe(hypothesis, method, alpha, theta0, model=None, n_reps=10000, seed=0, prior='reference'):
    """Estimate the rejection rate of the test rejecting the null hypothesis when the method's confidence,
    probability or belief of it is at most alpha. It is the size of the test if theta0 is in the hypothesis,
    its power otherwise.

    Returns:
        ProbeEstimate: the estimate with its Monte Carlo standard error.
    """
    _check_proposition(hypothesis)
    alpha = check_probability(alpha, 'alpha', open_interval=True)
    method = _check_method(method)
    model = model or NormMeanModel()
    ds = _probe_sample(model, theta0, n_reps, seed)
    p_values = _ReplicateCurves(method, model, ds, _check_prior(prior)).confidence(hypothesis)
    estimate = float(np.mean(p_values <= alpha))
    return ProbeEstimate(estimate, proportion_se(estimate, n_reps), n_reps)


def bel_g_floor_probe(R=2.0, sigma=1.0, k=2, n_reps=10000, seed=0):
    """Estimate P_{theta0=R}{Bel_G([0,R];D) = 0} for the belief built on the uniform prior posterior: the
    belief test of the collision proposition rejects at least this often at theta0=R, whatever alpha."""
    R = float(check_positive(R, 'R'))
    model = NormMeanModel(k=k, sigma=sigma, R=R)
    ds = model.sample_d(R, n_reps, seed)
    curves = _ReplicateCurves('BelUP', model, ds)
    estimate = float(np.mean(belief_values(Proposition.at_most(R), curves.cdf, curves.atom) == 0.0))
    return ProbeEstimate(estimate, proportion_se(estimate, n_reps), n_reps)


def pit_sample(theta0, model, n, seed):
    """The confidence distribution at the true parameter, C(theta0;D), for n sampled observations."""
    if not isinstance(model, Model):
        raise InvalidParameterError('Expected a Model (got "{}")'.format(model.__class__.__name__))
    ds = model.sample_d(theta0, n, seed)
    return np.asarray(model.cd(theta0, ds), dtype=float)


def pit_test(theta0, model, n, seed):
    """Kolmogorov-Smirnov test of the uniformity of C(theta0;D), with the 0.999-level DKW bound."""
    result = stats.kstest(pit_sample(theta0, model, n, seed), 'uniform')
    return KSResult(float(result.statistic), float(result.pvalue), dkw_bound(n))


#=========================
#  Figures
#=========================

FIGURES = ('ci', 'cumulatives', 'coverage', 'collision')

FIGURE_REPLICATES = {'ci': 1, 'cumulatives': 10000, 'coverage': 10000, 'collision': 100000}


def _ci_figure(seed):
    model = NormMeanModel(k=2, sigma=1.0)
    report = SimReport('ci', seed)
    ds = np.round(np.arange(0.0, 6.0 + 1e-9, 0.05), 10)
    for alpha in (0.95, 0.9, 0.6):
        spec = IntervalSpec(alpha, 0.05)
        two_sided_threshold, empty_threshold = model.d_quantile_at_boundary(spec.lower_level), model.d_quantile_at_boundary(spec.upper_level)
        fields = dict(alpha=alpha, beta=spec.beta, sigma=model.sigma, k=model.k)
        report.add_value('two-sided-threshold', two_sided_threshold, **fields)
        report.add_value('empty-threshold', empty_threshold, **fields)
        lower, upper, kinds = ci_bounds(ds, spec, model)
        for d, lower_value, upper_value in zip(ds, lower, upper):
            report.add_value('lower', lower_value, d=d, **fields)
            report.add_value('upper', upper_value, d=d, **fields)
    return report


def figure_data(name, seed=0, n_reps=None, n_jobs=1, prior='reference'):
    """Compute the dataset of a figure: ``ci`` (interval ends and thresholds), ``cumulatives`` (average
    distribution functions), ``coverage`` (coverage of 80% intervals) or ``collision`` (average confidences
    and beliefs of collision).

    Returns:
        SimReport: the dataset, in long format.
    """
    if name not in FIGURES:
        raise UnknownFigureError('Unknown figure "{}" (choices: {})'.format(name, ', '.join(FIGURES)))
    seed = check_seed(seed)
    n_reps = n_reps or FIGURE_REPLICATES[name]
    logger.info('Computing figure "%s" with %s replicates (seed=%s)', name, n_reps, seed)

    if name == 'ci':
        return _ci_figure(seed)

    if name == 'cumulatives':
        grid = ExperimentGrid([1.0, 8.0], [0.1, 1.0, 5.0, 20.0], [2], n_reps, seed)
        return average_cdf_sim(grid, np.linspace(0.0, 12.0, 49), n_jobs=n_jobs)

    if name == 'coverage':
        grid = ExperimentGrid([0.0, 0.5, 1.0, 2.0, 4.0, 8.0], [1.0, 5.0, 20.0], [2, 100], n_reps, seed)
        report = SimReport('coverage', seed)
        # Two-sided (equal tails) and one-sided (upper bound) 80% intervals
        for beta in (0.1, 0.2):
            spec = IntervalSpec(0.8, beta)
            for method in ('CD', 'UP', 'RP'):
                report.extend(coverage_sim(grid, method, spec, prior=prior, n_jobs=n_jobs).rows)
        return report

    sigmas = [float(sigma) for sigma in np.arange(0.5, 20.0 + 1e-9, 0.5)]
    grid = ExperimentGrid([1.0, 8.0], sigmas, [2], n_reps, seed)
    return collision_confidence_sim(grid, 2.0, prior=prior, n_jobs=n_jobs)
