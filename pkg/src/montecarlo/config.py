import copy
import os
from enum import Enum
from logging import getLogger
from typing import Dict, List, Optional, Union

import yaml

from src.asymptotics.constants import alpha0
from src.error import ConfigError
from src.sampling.models import TailModel, parse_model_spec
from src.sampling.random_stream import MAX_UINT64
from src.montecarlo.rules import K0Rule, KRule, parse_k0_rule, parse_k_rule
from src.utils.grid import expand_grid_axis

logger = getLogger(__name__)

SCHEMA_VERSION = 1
MIN_SAMPLE_SIZE = 50
SEED_ENVIRONMENT_VARIABLE = 'TAILFRAC_SEED'
ALPHA0_TOKEN = 'alpha0'

AlphaChoice = Union[float, str]


class Alpha0Mode(Enum):
    """ How alpha0 is chosen for the new family """
    ORACLE = 'oracle'
    PILOT = 'pilot'


class ExperimentConfig:
    """
    Monte Carlo experiment description.

    Attributes:
        model: (TailModel) simulated distribution
        n_values: (list of int) sample sizes
        replications: (int) replications per sample size
        base_seed: (int) seed in [0, 2^64)
        k_rule: (KRule) rule for k
        k0_rule: (K0Rule) rule for k0
        alphas: (list of float or 'alpha0') tuning parameters of the new family
        level: (float) confidence level
        alpha0_mode: (Alpha0Mode) oracle alpha0 (true gamma) or pilot plug-in
    """

    def __init__(self, model: TailModel, n_values: List[int], replications: int = 1000, base_seed: int = 0,
                 k_rule: Optional[KRule] = None, k0_rule: Optional[K0Rule] = None,
                 alphas: Optional[List[AlphaChoice]] = None, level: float = 0.95,
                 alpha0_mode: Alpha0Mode = Alpha0Mode.ORACLE):
        self.model = model
        self.n_values = [int(n) for n in n_values]
        self.replications = int(replications)
        self.base_seed = int(base_seed)
        self.k_rule = k_rule or parse_k_rule(None)
        self.k0_rule = k0_rule or parse_k0_rule(None)
        self.alphas = [ExperimentConfig.parse_alpha(alpha) for alpha in (alphas if alphas is not None else [1.0, ALPHA0_TOKEN])]
        self.level = float(level)
        self.alpha0_mode = alpha0_mode
        self.validate()

    def validate(self):
        if not self.n_values:
            raise ConfigError('n_values must not be empty')
        if any(n < MIN_SAMPLE_SIZE for n in self.n_values):
            raise ConfigError('All sample sizes must be at least {}, got {}'.format(MIN_SAMPLE_SIZE, self.n_values))
        if self.replications < 1:
            raise ConfigError('replications must be positive, got {}'.format(self.replications))
        if not 0 <= self.base_seed <= MAX_UINT64:
            raise ConfigError('base_seed must lie in [0, 2^64), got {}'.format(self.base_seed))
        if not 0 < self.level < 1:
            raise ConfigError('level must lie in (0, 1), got {}'.format(self.level))

    @staticmethod
    def parse_alpha(value: AlphaChoice) -> AlphaChoice:
        if isinstance(value, str) and value.strip().lower() == ALPHA0_TOKEN:
            return ALPHA0_TOKEN
        try:
            alpha = float(value)
        except (TypeError, ValueError):
            raise ConfigError('alphas entries must be reals >= 1 or "{}", got {}'.format(ALPHA0_TOKEN, value))
        if not alpha >= 1:
            raise ConfigError('alphas entries must be at least 1, got {}'.format(alpha))
        return alpha

    def oracle_alpha(self, alpha: AlphaChoice) -> float:
        """ Numeric alpha, with the token resolved at the true gamma """
        return alpha0(self.model.gamma) if alpha == ALPHA0_TOKEN else float(alpha)

    @classmethod
    def from_dict(cls, config_dict: Dict) -> 'ExperimentConfig':
        config_dict = copy.deepcopy(config_dict)
        schema_version = config_dict.pop('schema_version', None)
        if schema_version != SCHEMA_VERSION:
            raise ConfigError('Unsupported schema_version {}; expected {}'.format(schema_version, SCHEMA_VERSION))

        try:
            if 'model' not in config_dict or 'n_values' not in config_dict:
                raise ConfigError('Experiment config needs "model" and "n_values"')
            model = parse_model_spec(config_dict.pop('model'))
            n_values = expand_grid_axis(config_dict.pop('n_values'))
            replications = int(config_dict.pop('replications', 1000))
            base_seed = int(config_dict.pop('base_seed', 0))
            k_rule = parse_k_rule(config_dict.pop('k_rule', None))
            k0_rule = parse_k0_rule(config_dict.pop('k0_rule', None))
            alphas = config_dict.pop('alphas', None)
            level = float(config_dict.pop('level', 0.95))
            alpha0_mode = Alpha0Mode(config_dict.pop('alpha0_mode', Alpha0Mode.ORACLE.value))
        except (TypeError, ValueError) as error:
            raise ConfigError('Invalid experiment config: {}'.format(error))

        if alphas is not None and not isinstance(alphas, list):
            alphas = [alphas]
        cls.check_unused_keys(config_dict)
        return cls(model, n_values, replications, base_seed, k_rule, k0_rule, alphas, level, alpha0_mode)

    @classmethod
    def load(cls, path: str) -> 'ExperimentConfig':
        """
        Read a YAML or JSON experiment config.

        :param path: (str) config file
        :return: (ExperimentConfig) validated config
        """
        try:
            with open(path, 'r') as stream:
                config_dict = yaml.safe_load(stream)
        except (OSError, yaml.YAMLError) as error:
            raise ConfigError('Unable to read experiment config {}: {}'.format(path, error))
        if not isinstance(config_dict, dict):
            raise ConfigError('Experiment config {} must hold a mapping'.format(path))
        logger.info('Loaded experiment config {}'.format(path))
        return cls.from_dict(config_dict)

    @staticmethod
    def check_unused_keys(config_dict):
        if len(config_dict) > 0:
            raise ConfigError(
                'Experiment config contains unhandled keys: {}'.format(sorted(config_dict.keys()))
            )

    def to_dict(self) -> Dict:
        return {
            'schema_version': SCHEMA_VERSION,
            'model': self.model.model_id,
            'n_values': list(self.n_values),
            'replications': self.replications,
            'base_seed': self.base_seed,
            'k_rule': self.k_rule.describe(),
            'k0_rule': self.k0_rule.describe(),
            'alphas': list(self.alphas),
            'level': self.level,
            'alpha0_mode': self.alpha0_mode.value,
        }

    def with_overrides(self, **overrides) -> 'ExperimentConfig':
        """
        Copy with some fields replaced; None values are ignored.

        Accepts model (spec string), n_values, replications, base_seed, k, k0, alphas, level.
        """
        config_dict = self.to_dict()
        for key, value in overrides.items():
            if value is None:
                continue
            if key == 'k':
                config_dict['k_rule'] = {'explicit': int(value)}
            elif key == 'k0':
                config_dict['k0_rule'] = {'explicit': int(value)}
            elif key in config_dict:
                config_dict[key] = value
            else:
                raise ConfigError('Unknown override {}'.format(key))
        return ExperimentConfig.from_dict(config_dict)


def seed_from_environment(default: int) -> int:
    """ TAILFRAC_SEED when set, else the default """
    value = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
    if value is None or value.strip() == '':
        return default
    try:
        seed = int(value, 0)
    except ValueError:
        raise ConfigError('{} must be an integer, got {!r}'.format(SEED_ENVIRONMENT_VARIABLE, value))
    if not 0 <= seed <= MAX_UINT64:
        raise ConfigError('{} must lie in [0, 2^64)'.format(SEED_ENVIRONMENT_VARIABLE))
    return seed
