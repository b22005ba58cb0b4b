import os
from logging import getLogger
from typing import Dict, Optional

import yaml

from src.error import ConfigError
from src.utils.singleton import Singleton

logger = getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'config.yml')


class GlobalConfig(metaclass=Singleton):
    """
    Run-wide settings read once from config.yml.

    Attributes:
        experiment_name: (str) mlflow experiment used by MLFlowCallback
        theorem_ratio_low: (float) below this ratio k is "much smaller" than the threshold sequence
        theorem_ratio_high: (float) above this ratio k is "much larger" than the threshold sequence
        max_failure_fraction: (float) fraction of failed replications that aborts a run
        replications_per_chunk: (int) replications per engine work item
        default_level: (float) confidence level when none is configured
        probe_t: (float) reference t for estimating the second-order constant c
        probe_x1: (float) first probe multiplier
        probe_x2: (float) second probe multiplier
    """

    def __init__(self, filename: Optional[str] = None):
        self.filename = filename or DEFAULT_CONFIG_PATH
        config_dict = self.load_config(self.filename)

        self.experiment_name = str(config_dict.pop('experiment_name'))
        self.theorem_ratio_low = float(config_dict.pop('theorem_ratio_low', 0.1))
        self.theorem_ratio_high = float(config_dict.pop('theorem_ratio_high', 10.0))
        self.max_failure_fraction = float(config_dict.pop('max_failure_fraction', 0.01))
        self.replications_per_chunk = int(config_dict.pop('replications_per_chunk', 100))
        self.default_level = float(config_dict.pop('default_level', 0.95))
        self.probe_t, self.probe_x1, self.probe_x2 = GlobalConfig.parse_probe(config_dict)

        self.check_unused_keys(config_dict)
        self.validate()
        logger.debug('Loaded global config from {}'.format(self.filename))

    @staticmethod
    def load_config(config_file: str) -> Dict:
        try:
            with open(config_file, 'r') as stream:
                config_dict = yaml.safe_load(stream)
        except (OSError, yaml.YAMLError) as error:
            raise ConfigError('Unable to read config file {}: {}'.format(config_file, error))

        if not isinstance(config_dict, dict):
            raise ConfigError('Config file {} must hold a mapping'.format(config_file))
        return config_dict

    @staticmethod
    def parse_probe(config_dict: Dict):
        probe = dict(config_dict.pop('second_order_probe', {}) or {})
        values = (
            float(probe.pop('t', 1e5)),
            float(probe.pop('x1', 2.0)),
            float(probe.pop('x2', 5.0)),
        )
        GlobalConfig.check_unused_keys(probe)
        return values

    def validate(self):
        if not 0 < self.theorem_ratio_low < 1 < self.theorem_ratio_high:
            raise ConfigError('Theorem ratio thresholds must satisfy 0 < low < 1 < high')
        if not 0 <= self.max_failure_fraction < 1:
            raise ConfigError('max_failure_fraction must lie in [0, 1)')
        if self.replications_per_chunk < 1:
            raise ConfigError('replications_per_chunk must be positive')
        if not 0 < self.default_level < 1:
            raise ConfigError('default_level must lie in (0, 1)')
        if self.probe_t <= 10 or self.probe_x1 <= 1 or self.probe_x2 <= 1 or self.probe_x1 == self.probe_x2:
            raise ConfigError('second_order_probe needs t > 10 and distinct x1, x2 > 1')

    @staticmethod
    def check_unused_keys(config_dict):
        if len(config_dict) > 0:
            raise ConfigError(
                'Config file contains unhandled keys: {}'.format(list(config_dict.keys()))
            )
