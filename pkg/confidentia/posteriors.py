# -*- coding: utf-8 -*-
"""Posterior distributions of the norm parameter: the uniform-prior marginal posterior (the integrated
confidence distribution), the reference posterior computed by quadrature, and the generalized fiducial sampler."""

from functools import lru_cache
import numpy as np
from scipy import integrate
from .models import NormMeanModel, Observation
from .numerics import ChiSqParams, noncentral_chisq_cdf, d_logpdf, d_loglikelihood, _chisq_ppf, _d_quantile_inverse
from .utilities import check_nonnegative, check_positive, check_degrees_of_freedom, check_probability
from .utilities import as_array, from_array, draw_replicates, is_positive_integer
from .exceptions import InvalidParameterError, NumericalFailureError

# Setup logging
import logging
logger = logging.getLogger(__name__)

POSTERIOR_METHODS = ('UP', 'RP')
PRIOR_KINDS = ('reference', 'jeffreys')

# Reference posterior quadrature
MIN_LINEAR_PANELS = 2048
MAX_LINEAR_PANELS = 16384
GEOMETRIC_POINTS = 199
POSTERIOR_TAIL_TOLERANCE = 1e-8
POSTERIOR_SUPPORT_LEVEL = 1e-10
# A tenth of the 1e-4 accuracy required of the distribution function
RICHARDSON_TOLERANCE = 1e-5
MIN_NORMALISATION_MASS = 1e-300
MAX_SUPPORT_EXTENSIONS = 10

# Fisher information of the marginal model of D (standardised, sigma=1)
FISHER_QUADRATURE_POINTS = 4001
JEFFREYS_TABLE_MAX = 64.0

# Grid cells evaluated at once
MAX_CELLS = 2**22


#=========================
#  Uniform prior posterior
#=========================

def _check_problem(d, sigma, k):
    d = check_nonnegative(d, 'd')
    sigma = float(check_positive(sigma, 'sigma'))
    k = check_degrees_of_freedom(k)
    return d, sigma, k


def up_cdf(theta, d, sigma=1.0, k=2):
    """The marginal posterior distribution function G(theta;d) of the norm under the uniform prior on the mean,
    that is the chi2_k distribution function with the roles of theta and d swapped. Works element-wise on arrays."""
    theta = check_nonnegative(theta, 'theta', clamp_round_off=True)
    d, sigma, k = _check_problem(d, sigma, k)
    return noncentral_chisq_cdf((theta / sigma)**2, ChiSqParams(k, (d / sigma)**2))


def up_density(theta, d, sigma=1.0, k=2):
    """The marginal posterior density g(theta;d), the density of sigma*sqrt(chi2_k(d^2/sigma^2)) at theta."""
    theta, theta_scalar = as_array(check_nonnegative(theta, 'theta', clamp_round_off=True))
    d, sigma, k = _check_problem(d, sigma, k)
    d, d_scalar = as_array(d)
    return from_array(np.exp(d_logpdf(theta, d, sigma, k)), theta_scalar and d_scalar)


def up_quantile(p, d, sigma=1.0, k=2):
    """The quantile of the uniform prior posterior at probability p in (0,1)."""
    p = check_probability(p, 'p', open_interval=True)
    d, sigma, k = _check_problem(d, sigma, k)
    d, scalar = as_array(d)
    return from_array(sigma * np.sqrt(_chisq_ppf(p, k, (d / sigma)**2)), scalar)


#=========================
#  Jeffreys prior
#=========================

def _fisher_information(t, k):
    """Fisher information of the marginal model of D with sigma=1, at the (standardised) parameters t. The score
    is taken by central differences and integrated against the density with Simpson's rule."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    info = np.empty(t.size)
    fractions = np.linspace(0.0, 1.0, FISHER_QUADRATURE_POINTS)
    chunk = max(1, MAX_CELLS // FISHER_QUADRATURE_POINTS)
    for start in range(0, t.size, chunk):
        stop = min(start + chunk, t.size)
        tt = t[start:stop, None]
        step = np.maximum(1e-4, 1e-4 * tt)
        x = (tt + np.sqrt(k) + 15.0) * fractions[None, :]
        log_density = d_logpdf(x, tt, 1.0, k)
        with np.errstate(invalid='ignore'):
            score = (d_logpdf(x, np.abs(tt + step), 1.0, k) - d_logpdf(x, np.abs(tt - step), 1.0, k)) / (2.0 * step)
        # Where the density vanishes (d=0 for k>1) the contribution is zero
        integrand = np.where(np.isfinite(log_density) & np.isfinite(score), score**2 * np.exp(log_density), 0.0)
        info[start:stop] = integrate.simpson(integrand, x=x, axis=1)
    return info


def _compute_jeffreys_table(k):
    t = np.concatenate([[0.0], np.geomspace(1e-8, 1e-2, 120, endpoint=False), np.linspace(1e-2, JEFFREYS_TABLE_MAX, 1600)])
    info = _fisher_information(t, k)
    if np.any(info[1:] <= 0):
        logger.warning('Non-positive Fisher information for k=%s at %s points, clamped to zero', k, np.sum(info[1:] <= 0))
    return t, np.sqrt(np.maximum(info, 0.0))


@lru_cache(maxsize=32)
def _jeffreys_table(k):
    logger.debug('Computing the Jeffreys prior table for k=%s', k)
    return _compute_jeffreys_table(k)


def jeffreys_prior(theta, sigma=1.0, k=2):
    """The (unnormalised) Jeffreys prior sqrt(I(theta)) of the one-parameter marginal model of D, with the Fisher
    information I computed by numerical quadrature. Works element-wise on arrays."""
    theta, scalar = as_array(check_nonnegative(theta, 'theta', clamp_round_off=True))
    sigma = float(check_positive(sigma, 'sigma'))
    k = check_degrees_of_freedom(k)
    info = _fisher_information(theta.ravel() / sigma, k).reshape(theta.shape) / sigma**2
    return from_array(np.sqrt(np.maximum(info, 0.0)), scalar)


def _log_prior(thetas, sigma, k, prior, use_cache):
    if prior == 'reference':
        # Flat in the norm: the reference prior with the direction of the mean as nuisance
        return np.zeros_like(thetas)
    t_table, root_info = _jeffreys_table(k) if use_cache else _compute_jeffreys_table(k)
    # Beyond the table the information is at its location-model limit
    values = np.interp(thetas / sigma, t_table, root_info, right=root_info[-1])
    with np.errstate(divide='ignore'):
        return np.log(values)


def _check_prior(prior):
    if prior not in PRIOR_KINDS:
        raise InvalidParameterError('Unknown prior "{}" (choices: {})'.format(prior, ', '.join(PRIOR_KINDS)))
    return prior


#=========================
#  Reference posterior
#=========================

def _reference_layout(panels=MIN_LINEAR_PANELS):
    """The grid layout on [0,1] shared by the posterior grids with the given number of linear panels, refined
    geometrically at the lower end."""
    return np.concatenate([[0.0], np.geomspace(1e-9, 1e-3, GEOMETRIC_POINTS, endpoint=False),
                           np.linspace(1e-3, 1.0, panels + 1)])


def _posterior_support(ds, sigma, k):
    """Initial support of the posteriors: where the confidence curve is between 1e-10 and 1-1e-10, widened
    by sigma, and at least up to d + 12 sigma."""
    lower = np.maximum(_d_quantile_inverse(POSTERIOR_SUPPORT_LEVEL, ds, sigma, k) - sigma, 0.0)
    upper = np.maximum(ds + 12.0 * sigma, _d_quantile_inverse(1.0 - POSTERIOR_SUPPORT_LEVEL, ds, sigma, k) + sigma)
    return lower, upper


def _rp_rows(ds, lower, upper, sigma, k, prior, use_cache, layout):
    """Normalised posterior on the grids lower + (upper-lower)*layout, one row per observation. Returns the grids,
    the distribution function and the density values, the estimated tail mass left out of each grid and the
    estimated relative quadrature error."""
    span = upper - lower
    grids = lower[:, None] + span[:, None] * layout[None, :]
    log_posterior = _log_prior(grids, sigma, k, prior, use_cache) + d_loglikelihood(grids, ds[:, None], sigma, k)
    shift = np.max(log_posterior, axis=1)
    if not np.all(np.isfinite(shift)):
        raise NumericalFailureError('Posterior not finite on the grid for d={}'.format(ds[~np.isfinite(shift)][:3]))
    weights = np.exp(log_posterior - shift[:, None])

    mass = integrate.trapezoid(weights, x=grids, axis=1)
    if not np.all(np.isfinite(mass)) or np.any(mass < MIN_NORMALISATION_MASS):
        raise NumericalFailureError('Posterior normalisation mass too small or not finite for d={}'.format(ds[:3]))

    # Richardson estimate against the grid with half the points
    coarse = integrate.trapezoid(weights[:, ::2], x=grids[:, ::2], axis=1)
    error = np.abs(mass - coarse) / 3.0 / mass

    density = weights / mass[:, None]
    cdf = integrate.cumulative_trapezoid(weights, x=grids, axis=1, initial=0) / mass[:, None]
    tail = density[:, -1] * sigma + np.where(lower > 0, density[:, 0] * sigma, 0.0)
    return grids, cdf, density, tail, error


def _rp_supported(ds, sigma, k, prior, use_cache, layout):
    """Posteriors of the observations ds on the given layout, extending the support of each until the tail mass
    left out is below POSTERIOR_TAIL_TOLERANCE. Returns the lower ends, the spans, the cdf and density rows and
    the quadrature error estimates."""
    lower, upper = _posterior_support(ds, sigma, k)
    cdf = np.empty((ds.size, layout.size))
    density = np.empty((ds.size, layout.size))
    error = np.empty(ds.size)
    pending = np.arange(ds.size)
    for extension in range(MAX_SUPPORT_EXTENSIONS + 1):
        _, cdf[pending], density[pending], tail, error[pending] = _rp_rows(ds[pending], lower[pending], upper[pending],
                                                                           sigma, k, prior, use_cache, layout)
        wide = tail > POSTERIOR_TAIL_TOLERANCE
        if not np.any(wide):
            break
        pending = pending[wide]
        half_span = (upper[pending] - lower[pending]) / 2.0
        lower[pending] = np.maximum(lower[pending] - half_span, 0.0)
        upper[pending] = upper[pending] + half_span
        logger.debug('Extending the posterior support for %s observations', pending.size)
    else:
        raise NumericalFailureError('Cannot bound the posterior tail mass below {}'.format(POSTERIOR_TAIL_TOLERANCE))
    return lower, upper - lower, cdf, density, error


def _rp_chunks(ds, sigma, k, prior, use_cache, panels=MIN_LINEAR_PANELS, indexes=None):
    """Yield (indexes, layout, lower ends, spans, cdf rows, density rows) for the observations ds, by chunks.
    The observations whose quadrature error estimate is above RICHARDSON_TOLERANCE are computed again with
    twice the panels, up to MAX_LINEAR_PANELS."""
    if indexes is None:
        indexes = np.arange(ds.size)
    layout = _reference_layout(panels)
    chunk = max(1, MAX_CELLS // layout.size)
    rough = []
    for start in range(0, indexes.size, chunk):
        group = indexes[start:start + chunk]
        lower, span, cdf, density, error = _rp_supported(ds[group], sigma, k, prior, use_cache, layout)
        coarse = error > RICHARDSON_TOLERANCE
        if np.any(coarse) and panels >= MAX_LINEAR_PANELS:
            logger.warning('Posterior quadrature error estimate %s above %s with %s panels',
                           np.max(error), RICHARDSON_TOLERANCE, panels)
            coarse[:] = False
        fine = ~coarse
        if np.any(fine):
            yield group[fine], layout, lower[fine], span[fine], cdf[fine], density[fine]
        rough.append(group[coarse])
    rough = np.concatenate(rough) if rough else np.array([], dtype=int)
    if rough.size:
        logger.debug('Refining the posterior grid to %s panels for %s observations', 2 * panels, rough.size)
        for result in _rp_chunks(ds, sigma, k, prior, use_cache, 2 * panels, rough):
            yield result


def _interpolate_rows(layout, lower, span, values, thetas, outside):
    """Interpolate linearly, for every row, the values on the grid lower + span*layout at the points thetas.
    Below the grid the first value is returned, above it the outside value."""
    position = (thetas[None, :] - lower[:, None]) / span[:, None]
    clipped = np.clip(position, 0.0, 1.0)
    index = np.clip(np.searchsorted(layout, clipped, side='right') - 1, 0, layout.size - 2)
    fraction = (clipped - layout[index]) / (layout[index + 1] - layout[index])
    rows = np.arange(values.shape[0])[:, None]
    interpolated = values[rows, index] * (1.0 - fraction) + values[rows, index + 1] * fraction
    return np.where(position > 1.0, outside, interpolated)


def rp_cdf_batch(thetas, ds, sigma=1.0, k=2, prior='reference', use_cache=True):
    """Evaluate the reference posterior distribution function at the points thetas for many observations at once.

    Args:
        thetas: the points where to evaluate (array).
        ds: the observed values of D (array).
        sigma(float): the known standard deviation.
        k(int): the dimension.
        prior(str): ``reference`` (flat in the norm) or ``jeffreys`` (of the marginal model of D).
        use_cache(bool): if to use the cached Jeffreys prior table.

    Returns:
        numpy.ndarray: a matrix with one row per observation and one column per point.
    """
    thetas = np.atleast_1d(check_nonnegative(thetas, 'theta', clamp_round_off=True)).astype(float)
    ds, sigma, k = _check_problem(ds, sigma, k)
    ds = np.atleast_1d(ds).astype(float)
    prior = _check_prior(prior)
    result = np.empty((ds.size, thetas.size))
    for indexes, layout, lower, span, cdf, _ in _rp_chunks(ds, sigma, k, prior, use_cache):
        result[indexes] = _interpolate_rows(layout, lower, span, cdf, thetas, 1.0)
    return result


def rp_posterior(theta, d, sigma=1.0, k=2, prior='reference'):
    """The reference posterior distribution function of the norm at theta, given d."""
    return PosteriorCurve(NormMeanModel(k=k, sigma=sigma), d, method='RP', prior=prior).eval(theta)


#=========================
#  Posterior curve
#=========================

class PosteriorCurve(object):
    """A marginal posterior distribution of the norm, with no atom at zero.

    Args:
        model(NormMeanModel): the model.
        d(float): the observed value of D.
        method(str): ``UP`` (uniform prior on the mean, in closed form) or ``RP`` (reference posterior,
                     computed by quadrature on an adaptive grid).
        prior(str): for the reference posterior, ``reference`` or ``jeffreys``.
    """

    atom = 0.0

    def __init__(self, model, d, method='UP', prior='reference'):
        if not isinstance(model, NormMeanModel):
            raise InvalidParameterError('Posteriors are available for the normal mean norm model only (got "{}")'.format(model.__class__.__name__))
        if method not in POSTERIOR_METHODS:
            raise InvalidParameterError('Unknown posterior method "{}" (choices: {})'.format(method, ', '.join(POSTERIOR_METHODS)))
        self.model = model
        self.d = float(check_nonnegative(d, 'd'))
        self.method = method
        self.prior = _check_prior(prior)
        self._median = None
        if method == 'RP':
            (_, layout, lower, span, cdf, density), = _rp_chunks(np.array([self.d]), model.sigma, model.k, self.prior, True)
            self._grid = lower[0] + span[0] * layout
            self._cdf = cdf[0]
            self._density = density[0]

    def __repr__(self):
        return 'PosteriorCurve(method={}, model={}, d={})'.format(self.method, self.model, self.d)

    def eval(self, theta):
        """Evaluate the posterior distribution function at theta. Works element-wise on arrays."""
        if self.method == 'UP':
            return up_cdf(theta, self.d, self.model.sigma, self.model.k)
        theta, scalar = as_array(check_nonnegative(theta, 'theta', clamp_round_off=True))
        return from_array(np.interp(theta, self._grid, self._cdf, left=0.0, right=1.0), scalar)

    def cdf(self, theta):
        return self.eval(theta)

    def density(self, theta):
        if self.method == 'UP':
            return up_density(theta, self.d, self.model.sigma, self.model.k)
        theta, scalar = as_array(check_nonnegative(theta, 'theta', clamp_round_off=True))
        return from_array(np.interp(theta, self._grid, self._density, left=0.0, right=0.0), scalar)

    def quantile(self, p):
        """The posterior quantile at probability p in (0,1)."""
        if self.method == 'UP':
            return up_quantile(p, self.d, self.model.sigma, self.model.k)
        p = check_probability(p, 'p', open_interval=True)
        return float(np.interp(p, self._cdf, self._grid))

    @property
    def median(self):
        if self._median is None:
            self._median = float(self.quantile(0.5))
        return self._median


#=========================
#  Fiducial sampler
#=========================

class GfdSample(object):
    """A sample from the generalized fiducial distribution of the norm.

    Args:
        values: the sampled values, not negative.
        seed(int): the seed used.
        n(int): the sample size.
    """

    def __init__(self, values, seed, n):
        values = np.asarray(values, dtype=float)
        if values.size != n:
            raise InvalidParameterError('Sample size mismatch ({} values for n={})'.format(values.size, n))
        if np.any(values < 0):
            raise InvalidParameterError('Fiducial values must not be negative')
        self.values = values
        self.seed = seed
        self.n = n

    def __repr__(self):
        return 'GfdSample(n={}, seed={})'.format(self.n, self.seed)

    def cdf(self, theta):
        """The empirical distribution function of the sample."""
        ordered = np.sort(self.values)
        theta, scalar = as_array(theta)
        return from_array(np.searchsorted(ordered, theta, side='right') / float(self.n), scalar)


def gfd_sample(observation, n, seed, sigma=1.0):
    """Sample the generalized fiducial distribution of the norm given an observation. Inverting the data
    generating equation Y = mu + sigma*U and taking the norm gives sigma*sqrt(chi2_k(d^2/sigma^2)), which is
    drawn directly.

    Args:
        observation(Observation): the observation (k measurements).
        n(int): the sample size.
        seed(int): the seed.
        sigma(float): the known standard deviation.
    """
    if not isinstance(observation, Observation):
        raise InvalidParameterError('Expected an Observation (got "{}")'.format(observation.__class__.__name__))
    if not is_positive_integer(n):
        raise InvalidParameterError('The sample size must be a positive integer (got "{}")'.format(n))
    sigma = float(check_positive(sigma, 'sigma'))
    k = len(observation.y)
    ncp = (observation.d / sigma)**2

    def draw(rng, size):
        if ncp > 0:
            return sigma * np.sqrt(rng.noncentral_chisquare(k, ncp, size))
        return sigma * np.sqrt(rng.chisquare(k, size))

    return GfdSample(draw_replicates(draw, n, seed), seed, n)
