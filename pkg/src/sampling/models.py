import math
import re
from abc import ABC, abstractmethod
from logging import getLogger
from typing import Dict, Union

import numpy as np

from src.error import ConfigError, DomainError
from src.estimators.sample import Sample
from src.sampling.random_stream import RandomStream

logger = getLogger(__name__)

NEG_INF = float('-inf')

ArrayLike = Union[float, np.ndarray]


def _check_probability(p: ArrayLike):
    values = np.asarray(p, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError('Probabilities must lie in the open interval (0, 1)')


def _as_output(values: np.ndarray, template: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(template) == 0 else values


class TailModel(ABC):
    """
    Heavy-tailed distribution with a closed-form quantile function.

    Subclasses give the tail index, the analytic second-order parameter and the exact tail
    quantile U(s) = Q(1 - 1/s), evaluated without forming 1 - 1/s.
    """

    name = None

    def quantile(self, p: ArrayLike) -> ArrayLike:
        """
        Inverse distribution function Q(p) = F^{-1}(p).

        :param p: (float or np.ndarray) probabilities in (0, 1)
        :return: (float or np.ndarray) quantiles, same shape as p
        """
        _check_probability(p)
        return _as_output(self._quantile(np.asarray(p, dtype=float)), p)

    def tail_quantile(self, s: ArrayLike) -> ArrayLike:
        """
        Tail quantile U(s) = Q(1 - 1/s) for s > 1.

        :param s: (float or np.ndarray) return periods above 1
        :return: (float or np.ndarray) tail quantiles
        """
        values = np.asarray(s, dtype=float)
        if not np.all(values > 1.0):
            raise DomainError('Tail quantile needs s > 1')
        return _as_output(self._tail_quantile(values), s)

    def cdf(self, x: ArrayLike) -> ArrayLike:
        return _as_output(self._cdf(np.asarray(x, dtype=float)), x)

    @property
    @abstractmethod
    def gamma(self) -> float:
        raise NotImplementedError('Subclass and implement')

    @property
    @abstractmethod
    def rho(self) -> float:
        raise NotImplementedError('Subclass and implement')

    @property
    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        raise NotImplementedError('Subclass and implement')

    @abstractmethod
    def _quantile(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError('Subclass and implement')

    @abstractmethod
    def _tail_quantile(self, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError('Subclass and implement')

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError('Subclass and implement')

    @property
    def model_id(self) -> str:
        arguments = ','.join('{}={:g}'.format(key, value) for key, value in self.parameters.items())
        return '{}:{}'.format(self.name, arguments)

    def __eq__(self, other):
        return isinstance(other, TailModel) and self.model_id == other.model_id

    def __hash__(self):
        return hash(self.model_id)

    def __repr__(self):
        return 'TailModel({})'.format(self.model_id)

    @staticmethod
    def _check_positive(**parameters):
        for key, value in parameters.items():
            if not (math.isfinite(value) and value > 0):
                raise DomainError('Model parameter {} must be positive, got {}'.format(key, value))


class Frechet(TailModel):
    """ F(x) = exp(-x^{-1/gamma}), x > 0 """

    name = 'frechet'

    def __init__(self, gamma: float):
        self._check_positive(g=gamma)
        self._gamma = float(gamma)

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def rho(self) -> float:
        return -1.0

    @property
    def parameters(self) -> Dict[str, float]:
        return {'g': self._gamma}

    def _quantile(self, p):
        return (-np.log(p)) ** (-self._gamma)

    def _tail_quantile(self, s):
        return (-np.log1p(-1.0 / s)) ** (-self._gamma)

    def _cdf(self, x):
        positive = np.where(x > 0, x, 1.0)
        return np.where(x > 0, np.exp(-positive ** (-1.0 / self._gamma)), 0.0)


class Burr(TailModel):
    """ F(x) = 1 - (1 + x^a)^{-b}, x > 0; tail index 1/(ab), second-order parameter -1/b """

    name = 'burr'

    def __init__(self, a: float, b: float):
        self._check_positive(a=a, b=b)
        self.a = float(a)
        self.b = float(b)

    @property
    def gamma(self) -> float:
        return 1.0 / (self.a * self.b)

    @property
    def rho(self) -> float:
        return -1.0 / self.b

    @property
    def parameters(self) -> Dict[str, float]:
        return {'a': self.a, 'b': self.b}

    def _quantile(self, p):
        return np.expm1(-np.log1p(-p) / self.b) ** (1.0 / self.a)

    def _tail_quantile(self, s):
        return np.expm1(np.log(s) / self.b) ** (1.0 / self.a)

    def _cdf(self, x):
        positive = np.where(x > 0, x, 0.0)
        return -np.expm1(-self.b * np.log1p(positive ** self.a))


class Pareto(TailModel):
    """ F(x) = 1 - x^{-1/gamma}, x > 1; exact first-order tail, so A vanishes """

    name = 'pareto'

    def __init__(self, gamma: float):
        self._check_positive(g=gamma)
        self._gamma = float(gamma)

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def rho(self) -> float:
        return NEG_INF

    @property
    def parameters(self) -> Dict[str, float]:
        return {'g': self._gamma}

    def _quantile(self, p):
        return np.exp(-self._gamma * np.log1p(-p))

    def _tail_quantile(self, s):
        return s ** self._gamma

    def _cdf(self, x):
        above = np.where(x > 1, x, 1.0)
        return np.where(x > 1, -np.expm1(-np.log(above) / self._gamma), 0.0)


MODEL_CLASSES = {
    Frechet.name: (Frechet, ('g',)),
    Burr.name: (Burr, ('a', 'b')),
    Pareto.name: (Pareto, ('g',)),
}

_SPEC_PATTERN = re.compile(r'^\s*([a-z]+)\s*:(.*)$')


def parse_model_spec(spec: str) -> TailModel:
    """
    Build a model from a spec string such as "frechet:g=1", "burr:a=2,b=1" or "pareto:g=2".

    :param spec: (str) model spec, keys case-insensitive
    :return: (TailModel) the model
    """
    match = _SPEC_PATTERN.match(spec.lower()) if isinstance(spec, str) else None
    if match is None or match.group(1) not in MODEL_CLASSES:
        raise ConfigError('Unknown model spec "{}"; expected one of {}'.format(spec, sorted(MODEL_CLASSES)))

    model_class, keys = MODEL_CLASSES[match.group(1)]
    arguments = {}
    for item in filter(None, (part.strip() for part in match.group(2).split(','))):
        key, _, value = item.partition('=')
        try:
            arguments[key.strip()] = float(value)
        except ValueError:
            raise ConfigError('Model parameter "{}" in "{}" is not a number'.format(item, spec))

    if sorted(arguments) != sorted(keys):
        raise ConfigError('Model "{}" needs parameters {}, got {}'.format(match.group(1), keys, sorted(arguments)))

    try:
        return model_class(*(arguments[key] for key in keys))
    except DomainError as error:
        raise ConfigError(str(error))


def sample(model: TailModel, n: int, stream: RandomStream) -> Sample:
    """
    Draw n observations by inverse transform from a one-lane stream.

    :param model: (TailModel) distribution to sample
    :param n: (int) sample size, at least 3
    :param stream: (RandomStream) scalar-seeded stream, advanced by n draws
    :return: (Sample) sorted sample
    """
    if n < 3:
        raise DomainError('Sample size must be at least 3, got {}'.format(n))
    uniforms = stream.uniform(n)
    return Sample(model.quantile(np.asarray(uniforms).reshape(-1)))
