from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from src.error import DomainError


class Method(Enum):
    """ Tail-index estimators """
    HILL = 'hill'
    MOMENT = 'moment'
    FRAGA_ALVES = 'fraga_alves'
    NEW_FAMILY = 'new_family'


@dataclass(frozen=True)
class Estimate:
    """
    Point estimate with its provenance.

    Attributes:
        value: (float) estimated tail index
        method: (Method) estimator used
        k: (int) upper intermediate sequence value
        alpha: (float or None) tuning parameter, present for the new family
        k0: (int or None) lower intermediate sequence value of the location-invariant estimators
        ci: (ConfidenceInterval or None) attached interval
    """
    value: float
    method: Method
    k: int
    alpha: Optional[float] = None
    k0: Optional[int] = None
    ci: Optional['ConfidenceInterval'] = None

    def __post_init__(self):
        if self.method is Method.NEW_FAMILY and (self.alpha is None or self.alpha < 1):
            raise DomainError('New-family estimates need alpha >= 1')
        if self.method in (Method.FRAGA_ALVES, Method.NEW_FAMILY) and self.k0 is None:
            raise DomainError('{} estimates need k0'.format(self.method.value))

    def with_interval(self, ci: 'ConfidenceInterval') -> 'Estimate':
        return replace(self, ci=ci)
