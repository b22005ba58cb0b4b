"""
Location and scale invariant estimators built on excesses over X_{n-k,n}.

All statistics use the log excess ratios

    L_i = ln[(X_{n-i,n} - X_{n-k,n}) / (X_{n-k0,n} - X_{n-k,n})],  i = 0, ..., k0 - 1,

which are unchanged by shifting or rescaling the sample.
"""
import math

import numpy as np

from src.asymptotics.special import gamma_fn
from src.error import DegenerateSampleError, DomainError, TieError
from src.estimators.estimate import Estimate, Method
from src.estimators.sample import FractionPair, Sample


def log_excess_ratios(sample: Sample, fp: FractionPair) -> np.ndarray:
    """
    The k0 log excess ratios L_0, ..., L_{k0-1}, all non-negative.

    :param sample: (Sample) observations
    :param fp: (FractionPair) (k0, k) with k < n
    :return: (np.ndarray) log ratios, largest order statistic first
    """
    fp.check(sample.n)
    values = sample.values
    n = sample.n
    threshold = values[n - 1 - fp.k]
    denominator = values[n - 1 - fp.k0] - threshold
    if not denominator > 0:
        raise TieError('X_(n-k0,n) and X_(n-k,n) are tied (k0={}, k={})'.format(fp.k0, fp.k))

    excesses = values[n - fp.k0:][::-1] - threshold
    return np.log(excesses / denominator)


def power_mean(log_ratios: np.ndarray, alpha: float) -> float:
    """ (1/k0) sum of L_i^alpha with compensated summation; alpha = 0 gives 1 """
    return math.fsum(np.power(log_ratios, alpha)) / log_ratios.size


def m_alpha(sample: Sample, fp: FractionPair, alpha: float) -> float:
    """
    The statistic M^(alpha)(k0, k), the mean of L_i^alpha.

    :param sample: (Sample) observations
    :param fp: (FractionPair) (k0, k)
    :param alpha: (float) power, positive
    :return: (float) statistic value, non-negative
    """
    if not alpha > 0:
        raise DomainError('alpha must be positive, got {}'.format(alpha))
    return power_mean(log_excess_ratios(sample, fp), alpha)


def fraga_alves(sample: Sample, fp: FractionPair) -> float:
    return m_alpha(sample, fp, 1.0)


def gamma_from_log_ratios(log_ratios: np.ndarray, alpha: float) -> float:
    """
    Gamma(alpha) / M^(alpha-1) * (M^(2 alpha) / Gamma(2 alpha + 1))^{1/2} on given log ratios.

    :param log_ratios: (np.ndarray) log excess ratios
    :param alpha: (float) tuning parameter, at least 1
    :return: (float) estimate
    """
    if not alpha >= 1:
        raise DomainError('alpha must be at least 1, got {}'.format(alpha))

    denominator = power_mean(log_ratios, alpha - 1.0)
    if not denominator > 0:
        raise DegenerateSampleError('M^(alpha-1) vanishes for alpha={}'.format(alpha))
    return gamma_fn(alpha) / denominator * math.sqrt(power_mean(log_ratios, 2.0 * alpha) / gamma_fn(2.0 * alpha + 1.0))


def gamma_hat(sample: Sample, fp: FractionPair, alpha: float) -> Estimate:
    value = gamma_from_log_ratios(log_excess_ratios(sample, fp), alpha)
    return Estimate(value=value, method=Method.NEW_FAMILY, k=fp.k, alpha=float(alpha), k0=fp.k0)
