"""
Asymptotic MSE of the new estimator and its MSE-optimal lower fraction k0.

All k0 formulas return reals; `round_fraction` turns them into usable integers.
"""
import math
from enum import Enum
from logging import getLogger
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from src.asymptotics.constants import b_alpha, v_alpha
from src.asymptotics.context import AsymptoticContext
from src.error import DomainError, FractionBoundsError, NoRootError, NullBiasError, ParameterError, SignError

logger = getLogger(__name__)

# Geometric scan used to bracket the D1 root: 2^j for j in this range.
D1_SCAN_EXPONENTS = range(-60, 200)

D1_RESIDUAL_TOLERANCE = 1e-10


class Branch(Enum):
    """ Which optimal-fraction formula is active """
    OPT1 = 'k0_opt1'
    OPT2 = 'k0_opt2'
    OPT3 = 'k0_opt3'
    BALANCED = 'd1'


class FractionChoice(NamedTuple):
    value: float
    branch: Branch
    ratio: Optional[float] = None


def _check_fractions(k0: float, k: float, n: float):
    if not 0 < k0 < k < n:
        raise DomainError('Need 0 < k0 < k < n, got k0={}, k={}, n={}'.format(k0, k, n))


def _remainder_scale(ctx: AsymptoticContext) -> float:
    """ c gamma b_alpha(-rho) / (gamma + rho), the coefficient of (k0/n)^{-rho} in the bias """
    if ctx.c is None:
        raise ParameterError('The constant c is required when gamma > -rho')
    return ctx.c * ctx.gamma * b_alpha(ctx.alpha, -ctx.rho) / (ctx.gamma + ctx.rho)


def threshold_exponent(ctx: AsymptoticContext) -> float:
    """ -rho (2 gamma + 1) / (gamma (1 - 2 rho)), the exponent of n separating the regimes of k """
    if not ctx.has_finite_rho:
        raise ParameterError('The regime threshold needs a finite rho')
    return -ctx.rho * (2.0 * ctx.gamma + 1.0) / (ctx.gamma * (1.0 - 2.0 * ctx.rho))


def bias_components(ctx: AsymptoticContext, k0: float, k: float, n: float) -> Tuple[float, float]:
    """
    The two dominant bias terms for gamma > -rho.

    :return: (tuple) b_alpha(gamma) (k0/k)^gamma and c gamma b_alpha(-rho)/(gamma+rho) (k0/n)^{-rho};
        the asymptotic bias is their difference
    """
    _check_fractions(k0, k, n)
    return (
        b_alpha(ctx.alpha, ctx.gamma) * (k0 / k) ** ctx.gamma,
        _remainder_scale(ctx) * (k0 / n) ** (-ctx.rho),
    )


def mse_asymptotic(ctx: AsymptoticContext, k0: float, k: float, n: float, include_log_term: bool = False) -> float:
    """
    Asymptotic MSE of the new estimator at (k0, k, n).

    For gamma <= -rho (or rho = NEG_INF) it is gamma^2 V/k0 + b^2 (k0/k)^{2 gamma}. At the boundary
    gamma + rho = 0 the logarithmic remainder gamma b A(n/k) (k0/k)^gamma ln(k0/k) can be added to the
    bias with include_log_term. For gamma > -rho the remainder term enters the bias.

    :param ctx: (AsymptoticContext) parameters
    :param k0: (float) lower fraction
    :param k: (float) upper fraction
    :param n: (float) sample size
    :param include_log_term: (bool) add the boundary logarithmic remainder when gamma + rho = 0
    :return: (float) asymptotic MSE
    """
    _check_fractions(k0, k, n)
    gamma = ctx.gamma
    variance = gamma * gamma * v_alpha(ctx.alpha) / k0

    if ctx.bias_dominated_by_k:
        bias = b_alpha(ctx.alpha, gamma) * (k0 / k) ** gamma
        if include_log_term and ctx.has_finite_rho and gamma + ctx.rho == 0 and ctx.c is not None:
            a_of_n_over_k = ctx.c * (n / k) ** ctx.rho
            bias += gamma * b_alpha(ctx.alpha, gamma) * a_of_n_over_k * (k0 / k) ** gamma * math.log(k0 / k)
    else:
        k_term, n_term = bias_components(ctx, k0, k, n)
        bias = k_term - n_term

    return variance + bias * bias


def k0_opt1(ctx: AsymptoticContext, k: float) -> float:
    """
    [gamma V / (2 b^2)]^{1/(2 gamma+1)} k^{2 gamma/(2 gamma+1)}.

    :param ctx: (AsymptoticContext) parameters, b_alpha(gamma) != 0
    :param k: (float) upper fraction
    :return: (float) optimal k0 balancing variance against the k-driven bias
    """
    bias = b_alpha(ctx.alpha, ctx.gamma)
    if bias == 0:
        raise NullBiasError(
            'k0_opt1 is singular at alpha={} (null bias for gamma={}); choose k0 by another rule'.format(
                ctx.alpha, ctx.gamma
            )
        )
    exponent = 1.0 / (2.0 * ctx.gamma + 1.0)
    return (ctx.gamma * v_alpha(ctx.alpha) / (2.0 * bias * bias)) ** exponent * k ** (2.0 * ctx.gamma * exponent)


def k0_opt2(ctx: AsymptoticContext, n: float) -> float:
    """
    [(gamma+rho)^2 V / (-2 c^2 rho b_alpha(-rho)^2)]^{1/(1-2 rho)} n^{-2 rho/(1-2 rho)}.

    :param ctx: (AsymptoticContext) parameters with finite rho, c != 0, gamma + rho != 0
    :param n: (float) sample size
    :return: (float) optimal k0 balancing variance against the A-driven bias
    """
    if not ctx.has_finite_rho or ctx.c is None or ctx.c == 0:
        raise ParameterError('k0_opt2 needs a finite rho and a non-zero c')
    if ctx.gamma + ctx.rho == 0:
        raise ParameterError('k0_opt2 is undefined at gamma + rho = 0')
    remainder_bias = b_alpha(ctx.alpha, -ctx.rho)
    if remainder_bias == 0:
        raise ParameterError('k0_opt2 needs b_alpha(-rho) != 0')

    rho = ctx.rho
    exponent = 1.0 / (1.0 - 2.0 * rho)
    constant = (ctx.gamma + rho) ** 2 * v_alpha(ctx.alpha) / (-2.0 * ctx.c ** 2 * rho * remainder_bias ** 2)
    return constant ** exponent * n ** (-2.0 * rho * exponent)


def k0_opt3(ctx: AsymptoticContext, k: float, n: float) -> float:
    """
    The k0 at which the two bias terms cancel, for gamma > -rho and c b_alpha(-rho) b_alpha(gamma) > 0.

    :param ctx: (AsymptoticContext) parameters
    :param k: (float) upper fraction
    :param n: (float) sample size
    :return: (float) [c gamma b(-rho) / ((gamma+rho) b(gamma))]^{1/(gamma+rho)} k^{gamma/(gamma+rho)} n^{rho/(gamma+rho)}
    """
    if not ctx.has_finite_rho or ctx.c is None:
        raise ParameterError('k0_opt3 needs a finite rho and c')
    if not ctx.gamma > -ctx.rho:
        raise ParameterError('k0_opt3 applies only for gamma > -rho')

    k_bias = b_alpha(ctx.alpha, ctx.gamma)
    remainder_bias = b_alpha(ctx.alpha, -ctx.rho)
    if not ctx.c * remainder_bias * k_bias > 0:
        raise SignError('k0_opt3 needs c b_alpha(-rho) b_alpha(gamma) > 0')

    total = ctx.gamma + ctx.rho
    bracket = ctx.c * ctx.gamma * remainder_bias / (total * k_bias)
    return bracket ** (1.0 / total) * k ** (ctx.gamma / total) * n ** (ctx.rho / total)


def solve_d1(ctx: AsymptoticContext, D: float) -> float:
    """
    Smallest positive root D1 of a1 D1^{2g+1} + a2 D1^{g-r+1} + a3 D1^{1-2r} = g^2 V.

    The root is bracketed by a geometric scan upwards from a tiny D1 and refined by bisection.

    :param ctx: (AsymptoticContext) parameters with gamma > -rho, finite rho and c
    :param D: (float) k / n^{threshold exponent}
    :return: (float) D1
    """
    if not ctx.has_finite_rho or ctx.c is None:
        raise ParameterError('solve_d1 needs a finite rho and c')
    if not ctx.gamma > -ctx.rho:
        raise ParameterError('solve_d1 applies only for gamma > -rho')
    if not D > 0:
        raise DomainError('D must be positive, got {}'.format(D))

    gamma, rho = ctx.gamma, ctx.rho
    k_bias = b_alpha(ctx.alpha, gamma)
    remainder = _remainder_scale(ctx)
    target = gamma * gamma * v_alpha(ctx.alpha)
    a1 = 2.0 * gamma * k_bias ** 2 * D ** (-2.0 * gamma)
    a2 = 2.0 * (rho - gamma) * k_bias * remainder * D ** (-gamma)
    a3 = -2.0 * rho * remainder ** 2

    if a1 == 0 and a3 == 0:
        raise NoRootError('The D1 equation has no positive root when both bias terms vanish')

    def excess(d1: float) -> float:
        return a1 * d1 ** (2.0 * gamma + 1.0) + a2 * d1 ** (gamma - rho + 1.0) + a3 * d1 ** (1.0 - 2.0 * rho) - target

    lower = None
    for exponent in D1_SCAN_EXPONENTS:
        upper = 2.0 ** exponent
        try:
            crossed = excess(upper) > 0
        except OverflowError:
            crossed = True
        if crossed:
            break
        lower = upper
    else:
        raise NoRootError('No sign change for the D1 equation up to {:g}'.format(2.0 ** D1_SCAN_EXPONENTS[-1]))

    if lower is None:
        raise NoRootError('The D1 equation is already positive at the smallest scanned value')

    root = bisect(excess, lower, upper, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)
    residual = abs(excess(root))
    if residual > D1_RESIDUAL_TOLERANCE * target:
        raise NoRootError('D1 bisection residual {:g} exceeds tolerance'.format(residual))
    logger.debug('D1 = {:.10g} for D = {:.6g} in [{:g}, {:g}]'.format(root, D, lower, upper))
    return root


def k0_opt_select(ctx: AsymptoticContext, k: float, n: float,
                  ratio_low: float = 0.1, ratio_high: float = 10.0) -> FractionChoice:
    """
    Optimal k0 with the case logic on gamma, rho and the size of k.

    For gamma > -rho the regime of k is decided by r = k / n^{threshold exponent}: r < ratio_low
    uses k0_opt1, r > ratio_high uses k0_opt2 or k0_opt3 by the sign of c b(-rho) b(gamma), and
    anything in between uses D1(r) n^{-2 rho/(1-2 rho)}.

    :param ctx: (AsymptoticContext) parameters
    :param k: (float) upper fraction
    :param n: (float) sample size, above k
    :param ratio_low: (float) ratio below which k is much smaller than the threshold sequence
    :param ratio_high: (float) ratio above which k is much larger than the threshold sequence
    :return: (FractionChoice) the value, active branch and the ratio r when computed
    """
    if not 0 < k < n:
        raise DomainError('Need 0 < k < n, got k={}, n={}'.format(k, n))

    if ctx.bias_dominated_by_k:
        return FractionChoice(k0_opt1(ctx, k), Branch.OPT1)

    ratio = k / n ** threshold_exponent(ctx)
    if ratio < ratio_low:
        choice = FractionChoice(k0_opt1(ctx, k), Branch.OPT1, ratio)
    elif ratio > ratio_high:
        sign = ctx.c * b_alpha(ctx.alpha, -ctx.rho) * b_alpha(ctx.alpha, ctx.gamma)
        if sign > 0:
            choice = FractionChoice(k0_opt3(ctx, k, n), Branch.OPT3, ratio)
        else:
            choice = FractionChoice(k0_opt2(ctx, n), Branch.OPT2, ratio)
    else:
        d1 = solve_d1(ctx, ratio)
        choice = FractionChoice(d1 * n ** (-2.0 * ctx.rho / (1.0 - 2.0 * ctx.rho)), Branch.BALANCED, ratio)

    logger.debug('k0 branch {} with ratio {:.4g}'.format(choice.branch.value, ratio))
    return choice


def round_fraction(value: float, k: int) -> int:
    """
    Round a real k0 half-up and clamp it to [2, k - 1].

    :param value: (float) real k0
    :param k: (int) upper fraction, at least 3
    :return: (int) usable k0
    """
    if k < 3:
        raise FractionBoundsError('Cannot place k0 in [2, k-1] for k={}'.format(k))
    if not math.isfinite(value):
        raise DomainError('k0 must be finite, got {}'.format(value))
    return int(min(max(math.floor(value + 0.5), 2), k - 1))
