import os
import tempfile
import unittest

from parameterized import parameterized

from src.error import ConfigError
from src.global_config import GlobalConfig

VALID = 'experiment_name: tests\nmax_failure_fraction: 0.05\nsecond_order_probe: {t: 1000.0, x1: 3.0, x2: 4.0}\n'


class TestGlobalConfig(unittest.TestCase):

    def setUp(self):
        GlobalConfig.clear()
        self._directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        GlobalConfig.clear()
        self._directory.cleanup()

    def write(self, text):
        path = os.path.join(self._directory.name, 'config.yml')
        with open(path, 'w') as stream:
            stream.write(text)
        return path

    def test_default_file(self):
        config = GlobalConfig()
        self.assertEqual(config.experiment_name, 'tailfrac')
        self.assertEqual(config.theorem_ratio_low, 0.1)
        self.assertEqual(config.theorem_ratio_high, 10.0)
        self.assertEqual(config.replications_per_chunk, 100)
        self.assertEqual((config.probe_t, config.probe_x1, config.probe_x2), (1e5, 2.0, 5.0))

    def test_single_instance(self):
        self.assertIs(GlobalConfig(), GlobalConfig())

    def test_custom_file_and_defaults(self):
        config = GlobalConfig(self.write(VALID))
        self.assertEqual(config.experiment_name, 'tests')
        self.assertEqual(config.max_failure_fraction, 0.05)
        self.assertEqual(config.default_level, 0.95)
        self.assertEqual((config.probe_t, config.probe_x1, config.probe_x2), (1000.0, 3.0, 4.0))

    @parameterized.expand([
        ('experiment_name: x\nextra: 1\n',),
        ('experiment_name: x\ntheorem_ratio_low: 2.0\n',),
        ('experiment_name: x\nmax_failure_fraction: 1.0\n',),
        ('experiment_name: x\nreplications_per_chunk: 0\n',),
        ('experiment_name: x\nsecond_order_probe: {x1: 2.0, x2: 2.0}\n',),
        ('experiment_name: x\nsecond_order_probe: {y: 1.0}\n',),
        ('- not a mapping\n',),
    ])
    def test_invalid(self, text):
        with self.assertRaises(ConfigError):
            GlobalConfig(self.write(text))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            GlobalConfig(os.path.join(self._directory.name, 'missing.yml'))
