"""
Estimators as the replication engine sees them: a label, an optional alpha and a function of
(sample, fraction pair, level) returning an Estimate.
"""
from typing import Callable, NamedTuple, Optional, Tuple

from src.asymptotics.constants import alpha0
from src.error import DegenerateSampleError
from src.estimators.estimate import Estimate, Method
from src.estimators.hill import hill, moment
from src.estimators.location_invariant import fraga_alves, gamma_hat
from src.estimators.sample import FractionPair, Sample
from src.inference.intervals import ConfidenceInterval, ci_fraga_alves, ci_new

FRAGA_ALVES = 'fraga_alves'
NEW_FAMILY = 'new_family'
NEW_FAMILY_PILOT = 'new_family_pilot'
HILL = 'hill'
MOMENT = 'moment'


def estimate_fraga_alves(sample: Sample, fp: FractionPair, alpha: Optional[float], level: Optional[float]) -> Estimate:
    value = fraga_alves(sample, fp)
    estimate = Estimate(value=value, method=Method.FRAGA_ALVES, k=fp.k, k0=fp.k0)
    if level is not None:
        estimate = estimate.with_interval(ci_fraga_alves(value, fp.k0, level))
    return estimate


def estimate_new_family(sample: Sample, fp: FractionPair, alpha: Optional[float], level: Optional[float]) -> Estimate:
    estimate = gamma_hat(sample, fp, alpha)
    if level is not None:
        estimate = estimate.with_interval(ci_new(estimate.value, fp.k0, alpha, level))
    return estimate


def estimate_new_family_pilot(sample: Sample, fp: FractionPair, alpha: Optional[float],
                              level: Optional[float]) -> Estimate:
    """ New family at alpha0 of the Fraga Alves pilot estimate on the same (k0, k) """
    pilot = fraga_alves(sample, fp)
    if not pilot > 0:
        raise DegenerateSampleError('Fraga Alves pilot vanishes; alpha0 is undefined')
    return estimate_new_family(sample, fp, alpha0(pilot), level)


def estimate_hill(sample: Sample, fp: FractionPair, alpha: Optional[float], level: Optional[float]) -> Estimate:
    return Estimate(value=hill(sample, fp.k), method=Method.HILL, k=fp.k)


def estimate_moment(sample: Sample, fp: FractionPair, alpha: Optional[float], level: Optional[float]) -> Estimate:
    return Estimate(value=moment(sample, fp.k), method=Method.MOMENT, k=fp.k)


ESTIMATORS = {
    FRAGA_ALVES: estimate_fraga_alves,
    NEW_FAMILY: estimate_new_family,
    NEW_FAMILY_PILOT: estimate_new_family_pilot,
    HILL: estimate_hill,
    MOMENT: estimate_moment,
}


class MethodSpec(NamedTuple):
    """
    Estimator evaluated in each replication.

    `estimator`, when given, replaces the built-in estimator of `label`; it must be a picklable
    callable (sample, fp) -> float to run with several workers.
    """
    label: str
    alpha: Optional[float] = None
    estimator: Optional[Callable[[Sample, FractionPair], float]] = None

    @classmethod
    def fraga_alves(cls) -> 'MethodSpec':
        return cls(FRAGA_ALVES)

    @classmethod
    def new_family(cls, alpha: float) -> 'MethodSpec':
        return cls(NEW_FAMILY, float(alpha))

    @classmethod
    def new_family_pilot(cls) -> 'MethodSpec':
        return cls(NEW_FAMILY_PILOT)

    def estimate(self, sample: Sample, fp: FractionPair, level: Optional[float] = None) -> Estimate:
        return ESTIMATORS[self.label](sample, fp, self.alpha, level)

    def evaluate(self, sample: Sample, fp: FractionPair,
                 level: Optional[float] = None) -> Tuple[float, Optional[ConfidenceInterval]]:
        """
        Value and interval of one evaluation.

        :param sample: (Sample) replication sample
        :param fp: (FractionPair) (k0, k)
        :param level: (float or None) interval level; None skips the interval
        :return: (tuple) estimate value and interval (None when not requested or not available)
        """
        if self.estimator is not None:
            return float(self.estimator(sample, fp)), None
        estimate = self.estimate(sample, fp, level)
        return estimate.value, estimate.ci
