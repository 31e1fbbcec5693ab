# -*- coding: utf-8 -*-
"""Utility functions."""

import math
import numpy as np
from .exceptions import InvalidParameterError

# Setup logging
import logging
logger = logging.getLogger(__name__)

# Parameters slightly below zero because of round-off are clamped to zero
ROUND_OFF_TOLERANCE = 1e-12

# Random draws are generated in fixed-size blocks, each with its own counter-based stream
REPLICATES_PER_BLOCK = 4096


def is_numerical(item):
    """Check if item is numerical (float or int, not bool)"""
    if isinstance(item, bool):
        return False
    if isinstance(item, (float, int, np.integer, np.floating)):
        return True
    try:
        # Handle numpy 0-d arrays and similar
        float(item)
        item + 1
        return True
    except:
        return False


def is_positive_integer(item):
    """Check if item is a positive integer (integral floats as 2.0 are not accepted)"""
    if isinstance(item, bool):
        return False
    if isinstance(item, (int, np.integer)):
        return item >= 1
    return False


#==============================
# Floating point comparisons
#==============================
def is_close(a, b, rel_tol=1e-09, abs_tol=0.0):
    return abs(a-b) <= max(rel_tol * max(abs(a), abs(b)), abs_tol)


#==============================
# Parameter checks
#==============================

def check_finite(value, label):
    array = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(array)):
        raise InvalidParameterError('Parameter "{}" must be finite (got "{}")'.format(label, value))
    return array


def check_nonnegative(value, label, clamp_round_off=False):
    """Check that a value (or all the values of an array) is finite and not negative. If clamp_round_off
    is set, values just below zero because of round-off (down to -1e-12) are clamped to zero with a warning."""
    array = check_finite(value, label)
    if np.any(array < 0):
        if clamp_round_off and np.all(array >= -ROUND_OFF_TOLERANCE):
            logger.warning('Parameter "%s" slightly negative (%s), clamped to zero', label, value)
            array = np.maximum(array, 0.0)
        else:
            raise InvalidParameterError('Parameter "{}" must not be negative (got "{}")'.format(label, value))
    return array


def check_positive(value, label):
    array = check_finite(value, label)
    if np.any(array <= 0):
        raise InvalidParameterError('Parameter "{}" must be positive (got "{}")'.format(label, value))
    return array


def check_probability(value, label, open_interval=True):
    """Check that a value is a probability, in (0,1) if open_interval is set, in [0,1] otherwise."""
    if not is_numerical(value):
        raise InvalidParameterError('Parameter "{}" must be numerical (got "{}")'.format(label, value))
    value = float(value)
    if open_interval:
        if not 0.0 < value < 1.0:
            raise InvalidParameterError('Parameter "{}" must be in (0,1) (got "{}")'.format(label, value))
    else:
        if not 0.0 <= value <= 1.0:
            raise InvalidParameterError('Parameter "{}" must be in [0,1] (got "{}")'.format(label, value))
    return value


def check_degrees_of_freedom(df):
    if not is_positive_integer(df):
        raise InvalidParameterError('Degrees of freedom must be a positive integer (got "{}")'.format(df))
    return int(df)


#==============================
# Scalars and arrays
#==============================

def as_array(value):
    """Return the value as a float numpy array together with a flag telling if it was a scalar."""
    array = np.asarray(value, dtype=float)
    return array, array.ndim == 0


def from_array(array, scalar):
    """Return a float if the input was a scalar, the array otherwise (the inverse of as_array)."""
    if scalar:
        return float(np.asarray(array).reshape(-1)[0])
    return array


def to_significant_string(value, digits=6):
    """Format a number with the given significant digits (empty string for missing values)."""
    if value is None:
        return ''
    try:
        if math.isnan(value):
            return ''
    except TypeError:
        return str(value)
    return '{:.{}g}'.format(value, digits)


#==============================
# Random streams
#==============================

def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise InvalidParameterError('The seed must be a non-negative integer (got "{}")'.format(seed))
    return int(seed)


def block_generator(seed, stream, block):
    """Get the random generator for a block of replicates. It is a deterministic function of (seed, stream,
    block) only, using the counter-based Philox bit generator, so the replicates of a block are the same
    whatever the order (or the worker) in which blocks are generated."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream, block])))


def draw_replicates(draw, n, seed, stream=0):
    """Draw n replicates by blocks. The draw argument is a function taking a generator and a size and
    returning an array of that size. Replicate i comes from block i // REPLICATES_PER_BLOCK."""
    seed = check_seed(seed)
    chunks = []
    for block, start in enumerate(range(0, n, REPLICATES_PER_BLOCK)):
        size = min(REPLICATES_PER_BLOCK, n - start)
        chunks.append(np.asarray(draw(block_generator(seed, stream, block), size), dtype=float))
    if not chunks:
        return np.empty(0)
    return np.concatenate(chunks)
