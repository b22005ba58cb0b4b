import math
from dataclasses import dataclass
from typing import Optional

from src.error import DomainError
from src.sampling.models import NEG_INF
from src.sampling.second_order import SecondOrderTriple


@dataclass(frozen=True)
class AsymptoticContext:
    """
    Parameters feeding the asymptotic MSE and the optimal k0 formulas.

    Attributes:
        gamma: (float) tail index, positive
        rho: (float) second-order parameter, negative or NEG_INF
        c: (float or None) constant of A(t) ~ c t^rho
        alpha: (float) tuning parameter, at least 1
    """
    gamma: float
    rho: float
    c: Optional[float]
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError('gamma must be positive, got {}'.format(self.gamma))
        if not (math.isfinite(self.alpha) and self.alpha >= 1):
            raise DomainError('alpha must be at least 1, got {}'.format(self.alpha))
        if self.rho != NEG_INF and not (math.isfinite(self.rho) and self.rho < 0):
            raise DomainError('rho must be negative or NEG_INF, got {}'.format(self.rho))

    @classmethod
    def from_params(cls, params: SecondOrderTriple, alpha: float) -> 'AsymptoticContext':
        if params.has_finite_rho and params.rho == 0:
            raise DomainError('rho = 0 has no asymptotic context')
        return cls(gamma=params.gamma, rho=params.rho, c=params.c, alpha=alpha)

    @property
    def has_finite_rho(self) -> bool:
        return self.rho != NEG_INF

    @property
    def bias_dominated_by_k(self) -> bool:
        """ True in the gamma <= -rho regime (or rho = NEG_INF), where R_n is negligible """
        return not self.has_finite_rho or self.gamma <= -self.rho
