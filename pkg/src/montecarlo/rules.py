"""
Rules turning a sample size n into the fractions k and k0 used by an experiment.
"""
import math
from logging import getLogger
from typing import Dict, List, Union

from src.asymptotics.context import AsymptoticContext
from src.asymptotics.fractions import k0_opt_select, round_fraction
from src.error import ConfigError, FractionBoundsError, NullBiasError
from src.global_config import GlobalConfig
from src.sampling.second_order import SecondOrderTriple

logger = getLogger(__name__)


class KRule:
    """ Maps n to the upper fraction k """

    def resolve(self, n: int) -> int:
        k = self._resolve(n)
        if not 2 <= k < n:
            raise FractionBoundsError('{} gives k={} outside [2, n) for n={}'.format(self.describe(), k, n))
        return k

    def _resolve(self, n: int) -> int:
        raise NotImplementedError('Subclass and implement')

    def describe(self) -> Union[str, Dict]:
        raise NotImplementedError('Subclass and implement')


class FixedFraction(KRule):
    """ k = floor(f n) """

    def __init__(self, fraction: float = 0.5):
        if not 0 < fraction < 1:
            raise ConfigError('k fraction must lie in (0, 1), got {}'.format(fraction))
        self.fraction = float(fraction)

    def _resolve(self, n):
        return int(math.floor(self.fraction * n))

    def describe(self):
        return {'fraction': self.fraction}


class PowerK(KRule):
    """ k = floor(n^e) """

    def __init__(self, exponent: float):
        if not 0 < exponent < 1:
            raise ConfigError('k exponent must lie in (0, 1), got {}'.format(exponent))
        self.exponent = float(exponent)

    def _resolve(self, n):
        return int(math.floor(n ** self.exponent))

    def describe(self):
        return {'power': self.exponent}


class ExplicitK(KRule):

    def __init__(self, k: int):
        self.k = int(k)

    def _resolve(self, n):
        return self.k

    def describe(self):
        return {'explicit': self.k}


class K0Rule:
    """ Maps (k, n, true parameters, alpha) to one or more lower fractions k0 """

    is_sweep = False

    def resolve(self, k: int, n: int, params: SecondOrderTriple, alpha: float = 1.0) -> List[int]:
        values = self._resolve(k, n, params, alpha)
        for k0 in values:
            if not 1 <= k0 < k:
                raise FractionBoundsError('{} gives k0={} outside [1, k) for k={}'.format(self.describe(), k0, k))
        return values

    def _resolve(self, k, n, params, alpha) -> List[int]:
        raise NotImplementedError('Subclass and implement')

    def describe(self) -> Union[str, Dict]:
        raise NotImplementedError('Subclass and implement')


class TailBalance(K0Rule):
    """ k0 = floor(k^{2 gamma/(2 gamma + 1)}) with the true gamma """

    def _resolve(self, k, n, params, alpha):
        gamma = params.gamma
        return [int(math.floor(k ** (2.0 * gamma / (2.0 * gamma + 1.0))))]

    def describe(self):
        return 'tail_balance'


class TheoremOpt(K0Rule):
    """
    Asymptotically optimal k0 from k0_opt_select with the true parameters.

    At a null-bias alpha the optimum is singular and the rule falls back to TailBalance.
    """

    def _resolve(self, k, n, params, alpha):
        config = GlobalConfig()
        context = AsymptoticContext.from_params(params, alpha)
        try:
            choice = k0_opt_select(context, k, n, config.theorem_ratio_low, config.theorem_ratio_high)
        except NullBiasError:
            logger.warning('Optimal k0 is singular at alpha={:.4g}; using tail balance instead'.format(alpha))
            return TailBalance()._resolve(k, n, params, alpha)
        return [round_fraction(choice.value, k)]

    def describe(self):
        return 'theorem'


class PowerK0(K0Rule):
    """ k0 = floor(k^e) """

    def __init__(self, exponent: float):
        if not 0 < exponent < 1:
            raise ConfigError('k0 exponent must lie in (0, 1), got {}'.format(exponent))
        self.exponent = float(exponent)

    def _resolve(self, k, n, params, alpha):
        return [int(math.floor(k ** self.exponent))]

    def describe(self):
        return {'power': self.exponent}


class ExplicitK0(K0Rule):

    def __init__(self, k0: int):
        self.k0 = int(k0)

    def _resolve(self, k, n, params, alpha):
        return [self.k0]

    def describe(self):
        return {'explicit': self.k0}


class SweepK0(K0Rule):
    """ k0 = lo, lo + step, ..., up to and including hi """

    is_sweep = True

    def __init__(self, lo: int, hi: int, step: int = 1):
        self.lo, self.hi, self.step = int(lo), int(hi), int(step)
        if self.step < 1 or self.lo < 1 or self.hi < self.lo:
            raise ConfigError('Sweep needs 1 <= lo <= hi and step >= 1, got {}'.format(self.describe()))

    @property
    def values(self) -> List[int]:
        return list(range(self.lo, self.hi + 1, self.step))

    def _resolve(self, k, n, params, alpha):
        return self.values

    def describe(self):
        return {'sweep': [self.lo, self.hi, self.step]}


def parse_k_rule(value) -> KRule:
    if value is None:
        return FixedFraction(0.5)
    if isinstance(value, dict) and len(value) == 1:
        (key, argument), = value.items()
        if key == 'fraction':
            return FixedFraction(float(argument))
        if key == 'power':
            return PowerK(float(argument))
        if key == 'explicit':
            return ExplicitK(int(argument))
    raise ConfigError('Unable to parse k_rule: {}'.format(value))


def parse_k0_rule(value) -> K0Rule:
    if value is None or value == 'tail_balance':
        return TailBalance()
    if value == 'theorem':
        return TheoremOpt()
    if isinstance(value, dict) and len(value) == 1:
        (key, argument), = value.items()
        if key == 'power':
            return PowerK0(float(argument))
        if key == 'explicit':
            return ExplicitK0(int(argument))
        if key == 'sweep' and isinstance(argument, list) and len(argument) in (2, 3):
            return SweepK0(*(int(part) for part in argument))
    raise ConfigError('Unable to parse k0_rule: {}'.format(value))
