# -*- coding: utf-8 -*-
"""Special functions: the central and noncentral chi-square distribution functions, the quantiles
of the statistic D=||Y|| and their inverse, and the vectorised root finder backing every inversion.

All the functions work both on scalars (returning floats) and on numpy arrays (returning arrays),
so that the Monte Carlo experiments can evaluate them on many replicates at once.
"""

import numpy as np
from scipy import special
from scipy import stats
from .utilities import as_array, from_array, check_nonnegative, check_positive, check_probability
from .utilities import check_degrees_of_freedom
from .datastructures import UNBOUNDED
from .exceptions import InvalidParameterError, NumericalFailureError

# Setup logging
import logging
logger = logging.getLogger(__name__)

# Poisson weights left out of the noncentral series must sum below this
SERIES_TOLERANCE = 1e-14

# Residual allowed on the distribution function at a computed quantile
QUANTILE_TOLERANCE = 1e-10

# Relative bracket width at which the root finder stops
ROOT_X_TOLERANCE = 1e-13

# Elements times series terms evaluated at once (memory bound of the vectorised series)
MAX_SERIES_CELLS = 2**22

# Below this argument the Bessel function is evaluated by its power series
BESSEL_SERIES_THRESHOLD = 1.0
BESSEL_SERIES_TERMS = 30


#=========================
#  Parameters
#=========================

class ChiSqParams(object):
    """The parameters of a noncentral chi-square distribution.

    Args:
        df(int): the degrees of freedom, a positive integer.
        ncp(float): the noncentrality, finite and not negative. Can be a numpy array, in which case
                    the distribution functions are evaluated element-wise.
    """

    def __init__(self, df, ncp=0.0):
        self.df = check_degrees_of_freedom(df)
        ncp, scalar = as_array(check_nonnegative(ncp, 'ncp'))
        self.ncp = from_array(ncp, scalar)

    def __repr__(self):
        return 'ChiSqParams(df={}, ncp={})'.format(self.df, self.ncp)

    @property
    def is_scalar(self):
        return np.ndim(self.ncp) == 0


class QuantileQuery(object):
    """A query for the quantile q_alpha(theta) of D, the value such that P_theta(D <= q) = 1-alpha.

    Args:
        alpha(float): the upper tail level, in (0,1).
        theta(float): the norm parameter, not negative.
        sigma(float): the known standard deviation of each coordinate.
        k(int): the dimension.
    """

    def __init__(self, alpha, theta, sigma=1.0, k=2):
        self.alpha = check_probability(alpha, 'alpha', open_interval=True)
        self.theta = float(check_nonnegative(theta, 'theta', clamp_round_off=True))
        self.sigma = float(check_positive(sigma, 'sigma'))
        self.k = check_degrees_of_freedom(k)

    def __repr__(self):
        return 'QuantileQuery(alpha={}, theta={}, sigma={}, k={})'.format(self.alpha, self.theta, self.sigma, self.k)


#=========================
#  Poisson mixture series
#=========================

def _poisson_left_out(mu, lower, upper):
    safe_mu = np.where(mu > 0, mu, 1.0)
    left_out = stats.poisson.cdf(lower - 1, safe_mu) + stats.poisson.sf(upper, safe_mu)
    return np.where(mu > 0, left_out, 0.0)


def _poisson_window(mu):
    """Get, for each Poisson mean, the first index and the common number of terms to sum so that
    the weights left out are below SERIES_TOLERANCE. The window is centred on the modal index."""
    spread = 9.0 * np.sqrt(mu) + 15.0
    for _ in range(10):
        lower = np.maximum(np.floor(mu - spread), 0.0)
        upper = np.ceil(mu + spread)
        left_out = _poisson_left_out(mu, lower, upper)
        if np.all(left_out < SERIES_TOLERANCE):
            width = int(np.max(upper - lower)) + 1 if mu.size else 1
            return lower.astype(np.int64), width
        spread = spread * 1.5
    raise NumericalFailureError('Cannot bound the Poisson series remainder below {} (max mean {})'.format(SERIES_TOLERANCE, np.max(mu)))


def _poisson_series(x, df, ncp, term):
    """Sum, element-wise, the Poisson mixture of central chi-square terms

        sum_j Pois(j; ncp/2) * term(df/2 + j, x/2)

    where term is a regularised incomplete gamma function (lower for the distribution function,
    upper for the survival function)."""
    x, ncp = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(ncp, dtype=float))
    shape = x.shape
    x = x.ravel()
    mu = ncp.ravel() / 2.0
    lower, width = _poisson_window(mu)
    offsets = np.arange(width)
    chunk = max(1, MAX_SERIES_CELLS // width)
    result = np.empty(x.size)
    for start in range(0, x.size, chunk):
        stop = min(start + chunk, x.size)
        j = lower[start:stop, None] + offsets[None, :]
        m = mu[start:stop, None]
        weights = np.exp(special.xlogy(j, m) - m - special.gammaln(j + 1.0))
        result[start:stop] = np.sum(weights * term(df / 2.0 + j, x[start:stop, None] / 2.0), axis=1)
    return np.clip(result, 0.0, 1.0).reshape(shape)


#=========================
#  Distribution functions
#=========================

def _prepare(x, params):
    x = check_nonnegative(x, 'x')
    scalar = np.ndim(x) == 0 and params.is_scalar
    return x, scalar


def noncentral_chisq_cdf(x, params):
    """Distribution function P(X <= x) of X ~ chi2_df(ncp).

    Args:
        x(float): the point (or array of points) where to evaluate, not negative.
        params(ChiSqParams): the distribution parameters.
    """
    x, scalar = _prepare(x, params)
    return from_array(_poisson_series(x, params.df, params.ncp, special.gammainc), scalar)


def noncentral_chisq_sf(x, params):
    """Survival function P(X > x) of X ~ chi2_df(ncp), summed directly (not as one minus the
    distribution function) to keep the relative accuracy in the upper tail."""
    x, scalar = _prepare(x, params)
    return from_array(_poisson_series(x, params.df, params.ncp, special.gammaincc), scalar)


def _log_scaled_bessel_ratio(nu, z):
    """Compute log(Gamma(nu+1) (z/2)^-nu I_nu(z)) - z, which tends to 0 as z goes to 0."""
    z = np.asarray(z, dtype=float)
    result = np.empty_like(z)
    with np.errstate(divide='ignore', over='ignore', under='ignore', invalid='ignore'):
        scaled = special.ive(nu, z)
        use_bessel = (z >= BESSEL_SERIES_THRESHOLD) & (scaled > 0) & np.isfinite(scaled)
    z_bessel = z[use_bessel]
    result[use_bessel] = special.gammaln(nu + 1.0) - nu * np.log(z_bessel / 2.0) + np.log(scaled[use_bessel])

    # Power series for small arguments (or where the scaled Bessel function underflows)
    z_series = z[~use_bessel]
    quarter_square = z_series * z_series / 4.0
    term = np.ones_like(z_series)
    total = np.ones_like(z_series)
    for m in range(1, BESSEL_SERIES_TERMS + 1):
        term = term * quarter_square / (m * (nu + m))
        total = total + term
    result[~use_bessel] = np.log(total) - z_series
    return result


def noncentral_chisq_logpdf(x, params):
    """Log density of chi2_df(ncp), using the Bessel closed form of the density."""
    x, scalar = _prepare(x, params)
    x, ncp = np.broadcast_arrays(x, np.asarray(params.ncp, dtype=float))
    nu = params.df / 2.0 - 1.0
    with np.errstate(divide='ignore', invalid='ignore'):
        logpdf = (-np.log(2.0) - 0.5 * (np.sqrt(x) - np.sqrt(ncp))**2 + special.xlogy(nu, x / 2.0)
                  - special.gammaln(nu + 1.0) + _log_scaled_bessel_ratio(nu, np.sqrt(ncp * x)))
    return from_array(logpdf, scalar)


def noncentral_chisq_pdf(x, params):
    """Density of chi2_df(ncp)."""
    logpdf = noncentral_chisq_logpdf(x, params)
    return from_array(np.exp(logpdf), np.ndim(logpdf) == 0)


def d_logpdf(d, theta, sigma, k):
    """Log density of the statistic D at d, where D^2/sigma^2 ~ chi2_k(theta^2/sigma^2). Works element-wise
    on arrays, is used as the likelihood of theta and assumes validated arguments."""
    d = np.asarray(d, dtype=float)
    theta = np.asarray(theta, dtype=float)
    nu = k / 2.0 - 1.0
    with np.errstate(divide='ignore', invalid='ignore'):
        return (-0.5 * ((d - theta) / sigma)**2 + special.xlogy(k - 1.0, d) - nu * np.log(2.0 * sigma**2)
                - 2.0 * np.log(sigma) - special.gammaln(nu + 1.0)
                + _log_scaled_bessel_ratio(nu, d * theta / sigma**2))


#=========================
#  Root finding
#=========================

def find_root(func, target, lower, upper, increasing=True, xtol=ROOT_X_TOLERANCE, ftol=0.0, max_iterations=300):
    """Find, element-wise, where a monotone function reaches a target value.

    The upper end of the bracket is expanded geometrically until it straddles the target, then the
    bracket is shrunk with the Illinois variant of false position, with a bisection step every fourth
    iteration. Elements where the function is already at or above the target at the lower end get the
    lower end as root.

    Args:
        func: a function taking an array of points and the array of the element indexes they belong to,
              returning the function values.
        target: the target values (array, one per element).
        lower: the lower ends of the brackets.
        upper: the initial upper ends of the brackets.
        increasing(bool): if the function is increasing (otherwise decreasing).
        xtol(float): the relative bracket width at which to stop.
        ftol(float): the function residual at which to stop.
        max_iterations(int): the maximum number of iterations.

    Returns:
        numpy.ndarray: the roots.
    """
    target = np.array(target, dtype=float).ravel()
    size = target.size
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (size,)).copy()
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (size,)).copy()
    everything = np.arange(size)
    sign = 1.0 if increasing else -1.0

    g_lower = sign * (func(lower, everything) - target)
    g_upper = sign * (func(upper, everything) - target)

    # Expand the bracket
    expansions = 0
    while True:
        short = everything[(g_upper < 0) & (g_lower < 0)]
        if short.size == 0:
            break
        if expansions >= 64:
            raise NumericalFailureError('Cannot bracket the root for {} elements (last upper end {})'.format(short.size, upper[short][:3]))
        width = upper[short] - lower[short]
        lower[short] = upper[short]
        g_lower[short] = g_upper[short]
        upper[short] = upper[short] + 2.0 * width
        g_upper[short] = sign * (func(upper[short], short) - target[short])
        expansions += 1
    if expansions:
        logger.debug('Root bracket expanded %s times', expansions)

    root = np.where(g_lower >= 0, lower, upper)
    active = everything[(g_lower < 0) & (g_upper > 0)]
    last_side = np.zeros(size, dtype=int)

    iteration = 0
    while active.size:
        if iteration >= max_iterations:
            raise NumericalFailureError('Root finding did not converge in {} iterations for {} elements'.format(max_iterations, active.size))
        a = lower[active]
        b = upper[active]
        g_a = g_lower[active]
        g_b = g_upper[active]
        with np.errstate(divide='ignore', invalid='ignore'):
            x = b - g_b * (b - a) / (g_b - g_a)
        bisect = (iteration % 4 == 3) | ~np.isfinite(x) | (x <= a) | (x >= b)
        x = np.where(bisect, 0.5 * (a + b), x)
        g_x = sign * (func(x, active) - target[active])
        root[active] = x

        above = g_x > 0
        moved_upper = active[above]
        moved_lower = active[~above]
        # Illinois: when the same end moves twice in a row, halve the value kept at the other end
        g_lower[moved_upper[last_side[moved_upper] == 1]] *= 0.5
        g_upper[moved_lower[last_side[moved_lower] == -1]] *= 0.5
        upper[moved_upper] = x[above]
        g_upper[moved_upper] = g_x[above]
        last_side[moved_upper] = 1
        lower[moved_lower] = x[~above]
        g_lower[moved_lower] = g_x[~above]
        last_side[moved_lower] = -1

        converged = (np.abs(g_x) <= ftol) | ((upper[active] - lower[active]) <= xtol * (1.0 + np.abs(x)))
        active = active[~converged]
        iteration += 1

    logger.debug('Root finding converged in %s iterations', iteration)
    return root


#=========================
#  Quantiles
#=========================

def _check_residual(values, targets, what):
    """Check the distribution function residual at computed quantiles against QUANTILE_TOLERANCE. Close to
    floating point resolution (very large noncentralities) it cannot always be met, so it only warns."""
    residual = np.abs(values - targets)
    exceeding = residual > QUANTILE_TOLERANCE
    if np.any(exceeding):
        logger.warning('%s residual %s above %s for %s elements', what, np.max(residual), QUANTILE_TOLERANCE, np.sum(exceeding))
    return residual


def _chisq_ppf(p, df, ncp):
    """Vectorised quantile of chi2_df(ncp) for p in (0,1), assuming validated arguments."""
    p, ncp = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(ncp, dtype=float))
    shape = p.shape
    p = p.ravel()
    ncp = ncp.ravel()
    upper = df + ncp + 10.0 * np.sqrt(2.0 * (df + 2.0 * ncp)) + 10.0

    # Work on the survival function in the upper half, where it keeps the relative accuracy
    lower_half = p <= 0.5
    roots = np.empty(p.size)
    if np.any(lower_half):
        ncp_lower = ncp[lower_half]
        roots[lower_half] = find_root(lambda x, i: _poisson_series(x, df, ncp_lower[i], special.gammainc),
                                      p[lower_half], 0.0, upper[lower_half], increasing=True)
        _check_residual(_poisson_series(roots[lower_half], df, ncp_lower, special.gammainc), p[lower_half], 'Quantile')
    if np.any(~lower_half):
        ncp_upper = ncp[~lower_half]
        roots[~lower_half] = find_root(lambda x, i: _poisson_series(x, df, ncp_upper[i], special.gammaincc),
                                       1.0 - p[~lower_half], 0.0, upper[~lower_half], increasing=False)
        _check_residual(_poisson_series(roots[~lower_half], df, ncp_upper, special.gammaincc), 1.0 - p[~lower_half], 'Quantile')
    return roots.reshape(shape)


def noncentral_chisq_ppf(p, params):
    """Quantile function of chi2_df(ncp), for p in (0,1)."""
    p_array, p_scalar = as_array(p)
    if not np.all((p_array > 0) & (p_array < 1)):
        raise InvalidParameterError('Probability must be in (0,1) (got "{}")'.format(p))
    return from_array(_chisq_ppf(p_array, params.df, params.ncp), p_scalar and params.is_scalar)


def _d_quantile(alpha, theta, sigma, k):
    """Vectorised q_alpha(theta), assuming validated arguments."""
    theta = np.asarray(theta, dtype=float)
    return sigma * np.sqrt(_chisq_ppf(1.0 - alpha, k, (theta / sigma)**2))


def d_quantile(query):
    """Compute the quantile q_alpha(theta) of D, such that P_theta(D <= q_alpha(theta)) = 1-alpha.

    Args:
        query(QuantileQuery): the quantile query (alpha, theta, sigma, k).

    Returns:
        float: the quantile.
    """
    if not isinstance(query, QuantileQuery):
        raise InvalidParameterError('Expected a QuantileQuery (got "{}")'.format(query.__class__.__name__))
    return float(_d_quantile(query.alpha, query.theta, query.sigma, query.k))


def _d_quantile_inverse(alpha, d, sigma, k):
    """Vectorised q_alpha^-1(d), assuming validated arguments and alpha in (0,1). Where d <= q_alpha(0) the
    inverse is clamped to zero."""
    d = np.asarray(d, dtype=float)
    shape = d.shape
    d = d.ravel()
    x = (d / sigma)**2
    inverse = np.zeros(d.size)
    # d > q_alpha(0) if and only if P_0(D >= d) < alpha
    defined = stats.chi2.sf(x, k) < alpha
    if np.any(defined):
        x_defined = x[defined]
        # C(theta;d) = P_theta(D >= d) increases in theta and equals alpha at the inverse
        inverse[defined] = find_root(lambda theta, i: _poisson_series(x_defined[i], k, (theta / sigma)**2, special.gammaincc),
                                     np.full(x_defined.size, alpha), 0.0, d[defined] + 10.0 * sigma, increasing=True)
        _check_residual(_poisson_series(x_defined, k, (inverse[defined] / sigma)**2, special.gammaincc), alpha, 'Quantile inverse')
    return inverse.reshape(shape)


def d_quantile_inverse(alpha, d, sigma=1.0, k=2):
    """Compute the inverse q_alpha^-1(d) of the quantile function, i.e. the theta such that q_alpha(theta)=d.

    For d <= q_alpha(0) the inverse is not defined and zero is returned. For alpha=0 the result is zero, for
    alpha=1 it is ``UNBOUNDED``.

    Args:
        alpha(float): the level, in [0,1].
        d(float): the observed value of D, not negative.
        sigma(float): the known standard deviation of each coordinate.
        k(int): the dimension.
    """
    alpha = check_probability(alpha, 'alpha', open_interval=False)
    d = float(check_nonnegative(d, 'd'))
    sigma = float(check_positive(sigma, 'sigma'))
    k = check_degrees_of_freedom(k)
    if alpha == 0.0:
        return 0.0
    if alpha == 1.0:
        return UNBOUNDED
    return float(_d_quantile_inverse(alpha, d, sigma, k))


def d_loglikelihood(theta, d, sigma, k):
    """Log likelihood of theta given the observed d, up to an additive term depending on d only. Unlike
    d_logpdf it stays finite at d=0, where the likelihood reduces to exp(-theta^2/(2 sigma^2))."""
    theta = np.asarray(theta, dtype=float)
    d = np.asarray(d, dtype=float)
    return -0.5 * ((d - theta) / sigma)**2 + _log_scaled_bessel_ratio(k / 2.0 - 1.0, d * theta / sigma**2)
