import math
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from typing import NamedTuple, Optional

import numpy as np

from src.error import DegenerateProbeError, DomainError
from src.global_config import GlobalConfig
from src.sampling.models import NEG_INF, TailModel

logger = getLogger(__name__)

# Relative size below which the probe system counts as singular.
SINGULAR_TOLERANCE = 1e-12

# Basis used to fit A(t) for models whose A vanishes identically.
PROBE_RHO_FOR_EXACT_TAILS = -1.0


@dataclass(frozen=True)
class SecondOrderTriple:
    """
    Tail index and second-order parameters, A(t) ~ c t^rho.

    Attributes:
        gamma: (float) tail index, positive
        rho: (float) second-order parameter, non-positive or NEG_INF
        c: (float or None) constant of A; None when rho is NEG_INF
        c_is_approximate: (bool) c was estimated numerically rather than known in closed form
    """
    gamma: float
    rho: float
    c: Optional[float] = None
    c_is_approximate: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError('gamma must be positive, got {}'.format(self.gamma))
        if self.rho != NEG_INF and not (math.isfinite(self.rho) and self.rho <= 0):
            raise DomainError('rho must be non-positive or NEG_INF, got {}'.format(self.rho))
        if self.rho == NEG_INF and self.c is not None:
            raise DomainError('c must be absent when rho is NEG_INF')

    @property
    def has_finite_rho(self) -> bool:
        return self.rho != NEG_INF


class SecondOrderFit(NamedTuple):
    a_t: float
    A_t: float


def d_gamma(x: float, gamma: float) -> float:
    return math.expm1(gamma * math.log(x)) / gamma


def psi_gamma_rho(x: float, gamma: float, rho: float) -> float:
    exponent = gamma + rho
    if exponent == 0:
        return math.log(x)
    return math.expm1(exponent * math.log(x)) / exponent


def a_numeric(model: TailModel, t: float, x1: float, x2: float) -> SecondOrderFit:
    """
    Fit a(t) and A(t) of the second-order condition at one point t.

    Solves U(t x_i) - U(t) = a(t) D_gamma(x_i) + a(t) A(t) Psi_{gamma,rho}(x_i) for i = 1, 2, with
    U the exact tail quantile of the model. Models without finite rho are probed with rho = -1,
    which yields A(t) = 0 up to rounding.

    :param model: (TailModel) distribution to probe
    :param t: (float) reference point, above 10
    :param x1: (float) first multiplier, above 1
    :param x2: (float) second multiplier, above 1 and different from x1
    :return: (SecondOrderFit) fitted a(t) and A(t)
    """
    if not t > 10 or not x1 > 1 or not x2 > 1:
        raise DomainError('a_numeric needs t > 10 and x1, x2 > 1')
    if x1 == x2:
        raise DegenerateProbeError('Probe points must differ, got x1 = x2 = {}'.format(x1))

    gamma = model.gamma
    rho = model.rho if model.rho != NEG_INF else PROBE_RHO_FOR_EXACT_TAILS

    u_t = model.tail_quantile(t)
    matrix = np.array([
        [d_gamma(x1, gamma), psi_gamma_rho(x1, gamma, rho)],
        [d_gamma(x2, gamma), psi_gamma_rho(x2, gamma, rho)],
    ])
    increments = np.array([model.tail_quantile(t * x1) - u_t, model.tail_quantile(t * x2) - u_t])

    determinant = matrix[0, 0] * matrix[1, 1] - matrix[1, 0] * matrix[0, 1]
    scale = abs(matrix[0, 0] * matrix[1, 1]) + abs(matrix[1, 0] * matrix[0, 1])
    if abs(determinant) <= SINGULAR_TOLERANCE * scale:
        raise DegenerateProbeError('Probe system is singular for x1={}, x2={}'.format(x1, x2))

    a_t, a_times_A = np.linalg.solve(matrix, increments)
    return SecondOrderFit(a_t=float(a_t), A_t=float(a_times_A / a_t))


@lru_cache(maxsize=None)
def _estimated_c(model: TailModel, t: float, x1: float, x2: float) -> float:
    fit = a_numeric(model, t, x1, x2)
    c = fit.A_t * t ** (-model.rho)
    logger.warning('Second-order constant c = {:.6g} for {} is a numerical estimate at t = {:g}'.format(
        c, model.model_id, t
    ))
    return c


def true_params(model: TailModel) -> SecondOrderTriple:
    """
    Second-order parameters of a model.

    gamma and rho are analytic; c comes from a_numeric at the reference point configured in
    config.yml and is cached per model.

    :param model: (TailModel) distribution
    :return: (SecondOrderTriple) the parameters
    """
    if model.rho == NEG_INF:
        return SecondOrderTriple(gamma=model.gamma, rho=NEG_INF)

    config = GlobalConfig()
    c = _estimated_c(model, config.probe_t, config.probe_x1, config.probe_x2)
    return SecondOrderTriple(gamma=model.gamma, rho=model.rho, c=c, c_is_approximate=True)
