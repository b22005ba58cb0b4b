"""
Classical estimators on log-spacings above the threshold X_{n-k,n}.

Both sum over i = 0, ..., k-1 with divisor k; the variant with the sum starting at i = 1 is a
typographical form of the same estimator.
"""
import math

import numpy as np

from src.error import DegenerateSampleError, DomainError, FractionBoundsError
from src.estimators.sample import Sample

# Spread 1 - M1^2/M2 below this counts as zero (equal spacings up to rounding).
DEGENERACY_TOLERANCE = 1e-12


def log_spacings(sample: Sample, k: int) -> np.ndarray:
    """
    ln X_{n-i,n} - ln X_{n-k,n} for i = 0, ..., k-1.

    :param sample: (Sample) observations
    :param k: (int) number of top order statistics, 1 <= k < n
    :return: (np.ndarray) k non-negative spacings, largest first
    """
    if isinstance(k, bool) or int(k) != k or not 1 <= k < sample.n:
        raise FractionBoundsError('Need 1 <= k < n, got k={}, n={}'.format(k, sample.n))
    k = int(k)
    threshold = sample.values[sample.n - 1 - k]
    if threshold <= 0:
        raise DomainError('Threshold X_(n-k,n) = {} must be positive'.format(threshold))
    return np.log(sample.values[sample.n - k:][::-1]) - math.log(threshold)


def hill(sample: Sample, k: int) -> float:
    return math.fsum(log_spacings(sample, k)) / k


def moment(sample: Sample, k: int) -> float:
    """
    Moment estimator M1 + 1 - 1/2 (1 - M1^2/M2)^{-1}.

    :param sample: (Sample) observations
    :param k: (int) number of top order statistics
    :return: (float) estimate
    """
    spacings = log_spacings(sample, k)
    first = math.fsum(spacings) / k
    second = math.fsum(spacings * spacings) / k
    if second <= 0:
        raise DegenerateSampleError('All log-spacings vanish')

    ratio = first * first / second
    if 1.0 - ratio <= DEGENERACY_TOLERANCE:
        raise DegenerateSampleError('Log-spacings have no spread (M1^2/M2 = {})'.format(ratio))
    return first + 1.0 - 0.5 / (1.0 - ratio)
