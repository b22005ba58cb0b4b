"""
Closed-form constants of the asymptotic theory of the new estimator family.
"""
import math
from logging import getLogger

import numpy as np
from scipy.optimize import bisect

from src.asymptotics.special import gamma_fn
from src.error import BracketError, DomainError, NullBiasError

logger = getLogger(__name__)

ALPHA0_BRACKET = (1.0, 64.0)


def sigma_alpha(alpha: float) -> float:
    """ sqrt(Gamma(2 alpha + 1) - Gamma(alpha + 1)^2), the standard deviation of (ln Y)^alpha for standard Pareto Y """
    if not alpha > 0:
        raise DomainError('alpha must be positive, got {}'.format(alpha))
    return math.sqrt(max(gamma_fn(2.0 * alpha + 1.0) - gamma_fn(alpha + 1.0) ** 2, 0.0))


def mu_gamma_ratio(beta: float, rho: float) -> float:
    """
    mu_beta(rho) / Gamma(beta) = ((1 - rho)^{-beta} - 1) / rho.

    The right-hand side extends continuously to beta = 0, where it vanishes; this is the value
    used for the mu_{alpha-1} / Gamma(alpha-1) term at alpha = 1.

    :param beta: (float) order, non-negative
    :param rho: (float) below 1 and non-zero
    :return: (float) the ratio
    """
    if not beta >= 0:
        raise DomainError('beta must be non-negative, got {}'.format(beta))
    if not rho < 1 or rho == 0:
        raise DomainError('rho must satisfy rho < 1 and rho != 0, got {}'.format(rho))
    return math.expm1(-beta * math.log1p(-rho)) / rho


def mu_alpha(alpha: float, rho: float) -> float:
    """
    mu_alpha(rho) = Gamma(alpha)/rho * (1 - (1 - rho)^alpha) / (1 - rho)^alpha.

    Equals E[(ln Y)^{alpha-1} (Y^rho - 1)/rho] for standard Pareto Y.

    :param alpha: (float) positive order
    :param rho: (float) below 1 and non-zero
    :return: (float) mu_alpha(rho)
    """
    if not alpha > 0:
        raise DomainError('alpha must be positive, got {}'.format(alpha))
    return gamma_fn(alpha) * mu_gamma_ratio(alpha, rho)


def v_alpha(alpha: float) -> float:
    """
    Asymptotic variance factor V_alpha of the new estimator, V_1 = 1.25.

    :param alpha: (float) tuning parameter, at least 1
    :return: (float) V_alpha
    """
    if not alpha >= 1:
        raise DomainError('V_alpha needs alpha >= 1, got {}'.format(alpha))
    g_alpha = gamma_fn(alpha)
    g_two_alpha = gamma_fn(2.0 * alpha)
    return 0.25 * (
        gamma_fn(4.0 * alpha) / (alpha * g_two_alpha ** 2)
        + 4.0 * gamma_fn(2.0 * alpha - 1.0) / g_alpha ** 2
        - 2.0 * gamma_fn(3.0 * alpha) / (alpha * g_alpha * g_two_alpha)
        - 1.0
    )


def b_alpha(alpha: float, gamma: float) -> float:
    """ Dominant bias coefficient (1 + gamma)^{1-alpha} - (1 + gamma)^{-2 alpha}/2 - 1/2 """
    if not gamma >= 0:
        raise DomainError('b_alpha needs gamma >= 0, got {}'.format(gamma))
    log_base = math.log1p(gamma)
    return math.exp((1.0 - alpha) * log_base) - 0.5 * math.exp(-2.0 * alpha * log_base) - 0.5


def alpha0(gamma: float) -> float:
    """
    Null-bias tuning parameter: the alpha >= 1 with b_alpha(gamma) = 0.

    :param gamma: (float) positive tail index
    :return: (float) ln(1 + gamma + sqrt((1 + gamma)^2 - 1)) / ln(1 + gamma)
    """
    if not gamma > 0:
        raise DomainError('alpha0 needs gamma > 0, got {}'.format(gamma))
    return math.log1p(gamma + math.sqrt(gamma * (gamma + 2.0))) / math.log1p(gamma)


def alpha0_bisect(gamma: float) -> float:
    """
    alpha0 by bisection of alpha -> b_alpha(gamma) on [1, 64].

    :param gamma: (float) positive tail index
    :return: (float) root
    """
    if not gamma > 0:
        raise DomainError('alpha0 needs gamma > 0, got {}'.format(gamma))

    lower, upper = ALPHA0_BRACKET
    f_lower, f_upper = b_alpha(lower, gamma), b_alpha(upper, gamma)
    if np.sign(f_lower) == np.sign(f_upper):
        raise BracketError('b_alpha({}) has no sign change on [{}, {}]'.format(gamma, lower, upper))
    return bisect(b_alpha, lower, upper, args=(gamma,), xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)


def areff(alpha: float, gamma: float) -> float:
    """
    Asymptotic relative efficiency of the new estimator against Fraga Alves' estimator, both at
    their MSE-optimal k0: V_alpha^{-gamma/(2 gamma+1)} [gamma / ((1+gamma)|b_alpha(gamma)|)]^{1/(2 gamma+1)}.

    :param alpha: (float) tuning parameter, at least 1
    :param gamma: (float) positive tail index
    :return: (float) efficiency, above 1 when the new estimator wins
    """
    if not gamma > 0:
        raise DomainError('areff needs gamma > 0, got {}'.format(gamma))
    bias = b_alpha(alpha, gamma)
    if bias == 0:
        raise NullBiasError('areff is undefined at the null-bias alpha for gamma={}'.format(gamma))

    exponent = 1.0 / (2.0 * gamma + 1.0)
    return v_alpha(alpha) ** (-gamma * exponent) * (gamma / ((1.0 + gamma) * abs(bias))) ** exponent
