import math
from dataclasses import dataclass
from enum import Enum

from scipy.stats import norm

from src.asymptotics.constants import v_alpha
from src.error import DomainError


class IntervalMethod(Enum):
    FRAGA_ALVES_CI = 'fraga_alves_ci'
    NEW_FAMILY_CI = 'new_family_ci'


@dataclass(frozen=True)
class ConfidenceInterval:
    """
    Asymptotic interval estimate / (1 -+ half_width).

    Attributes:
        lower: (float) lower limit
        upper: (float) upper limit, inf when unbounded
        level: (float) confidence level in (0, 1)
        method: (IntervalMethod) interval construction
    """
    lower: float
    upper: float
    level: float
    method: IntervalMethod

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        """ Unbounded intervals cover every value above the lower limit """
        return self.lower <= value <= self.upper


def z_quantile(theta_half: float) -> float:
    """
    Standard normal critical value z with 1 - Phi(z) = theta_half.

    :param theta_half: (float) upper tail probability in (0, 0.5)
    :return: (float) positive critical value
    """
    if not 0 < theta_half < 0.5:
        raise DomainError('theta_half must lie in (0, 0.5), got {}'.format(theta_half))
    return float(norm.isf(theta_half))


def _interval(estimate: float, k0: int, variance: float, level: float, method: IntervalMethod) -> ConfidenceInterval:
    if not estimate > 0:
        raise DomainError('Interval needs a positive estimate, got {}'.format(estimate))
    if not k0 >= 1:
        raise DomainError('Interval needs k0 >= 1, got {}'.format(k0))
    if not 0 < level < 1:
        raise DomainError('Level must lie in (0, 1), got {}'.format(level))

    half_width = math.sqrt(variance / k0) * z_quantile((1.0 - level) / 2.0)
    lower = estimate / (1.0 + half_width)
    upper_denominator = 1.0 - half_width
    upper = estimate / upper_denominator if upper_denominator > 0 else math.inf
    return ConfidenceInterval(lower=lower, upper=upper, level=level, method=method)


def ci_fraga_alves(gamma_tilde: float, k0: int, level: float) -> ConfidenceInterval:
    """
    {gamma_tilde / (1 + z / sqrt(k0)), gamma_tilde / (1 - z / sqrt(k0))}.

    :param gamma_tilde: (float) Fraga Alves estimate
    :param k0: (int) lower fraction used by the estimate
    :param level: (float) confidence level
    :return: (ConfidenceInterval) interval, unbounded above when z / sqrt(k0) >= 1
    """
    return _interval(gamma_tilde, k0, 1.0, level, IntervalMethod.FRAGA_ALVES_CI)


def ci_new(gamma_hat: float, k0: int, alpha: float, level: float) -> ConfidenceInterval:
    """
    {gamma_hat / (1 + z sqrt(V_alpha / k0)), gamma_hat / (1 - z sqrt(V_alpha / k0))}.

    :param gamma_hat: (float) new-family estimate
    :param k0: (int) lower fraction used by the estimate
    :param alpha: (float) tuning parameter of the estimate
    :param level: (float) confidence level
    :return: (ConfidenceInterval) interval, unbounded above when the half width reaches 1
    """
    return _interval(gamma_hat, k0, v_alpha(alpha), level, IntervalMethod.NEW_FAMILY_CI)
