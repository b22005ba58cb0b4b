from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from src.error import DomainError, FractionBoundsError

MIN_SAMPLE_SIZE = 3


class Sample:
    """
    Finite batch of observations, sorted ascending once on construction.

    Attributes:
        values: (np.ndarray) read-only ascending order statistics X_{1,n} <= ... <= X_{n,n}
    """

    def __init__(self, values: Union[Iterable[float], np.ndarray]):
        array = np.array(values, dtype=np.float64).reshape(-1)
        if array.size < MIN_SAMPLE_SIZE:
            raise DomainError('A sample needs at least {} values, got {}'.format(MIN_SAMPLE_SIZE, array.size))
        if not np.all(np.isfinite(array)):
            raise DomainError('Sample values must be finite')

        array.sort(kind='mergesort')
        array.setflags(write=False)
        self.values = array

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def order_statistic_from_top(self, i: int) -> float:
        """ X_{n-i,n}, so i = 0 is the maximum """
        return float(self.values[self.n - 1 - i])

    def shifted(self, shift: float) -> 'Sample':
        return Sample(self.values + shift)

    def scaled(self, scale: float) -> 'Sample':
        if not scale > 0:
            raise DomainError('Scale must be positive, got {}'.format(scale))
        return Sample(self.values * scale)


@dataclass(frozen=True)
class FractionPair:
    """
    The two intermediate sequence values, 1 <= k0 < k.

    k < n is checked against the sample when the pair is used.
    """
    k0: int
    k: int

    def __post_init__(self):
        for name, value in (('k0', self.k0), ('k', self.k)):
            if isinstance(value, bool) or int(value) != value:
                raise FractionBoundsError('{} must be an integer, got {}'.format(name, value))
        object.__setattr__(self, 'k0', int(self.k0))
        object.__setattr__(self, 'k', int(self.k))
        if not 1 <= self.k0 < self.k:
            raise FractionBoundsError('Need 1 <= k0 < k, got k0={}, k={}'.format(self.k0, self.k))

    def check(self, n: int):
        if not self.k < n:
            raise FractionBoundsError('Need k < n, got k={}, n={}'.format(self.k, n))
