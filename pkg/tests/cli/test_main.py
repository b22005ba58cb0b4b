import contextlib
import io
import os
import tempfile
import unittest
from unittest import mock

import numpy as np
from pandas import read_csv
from parameterized import parameterized

from src.cli.main import (EXIT_FAILURES, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, build_parser, exit_code_for,
                          main)
from src.cli.manifest import MANIFEST_SUFFIX, RunManifest
from src.error import (ConfigError, DomainError, EmptyResultError, ExcessFailuresError, FractionBoundsError,
                       InputError, NullBiasError, SignError)
from src.global_config import GlobalConfig
from src.montecarlo.config import SEED_ENVIRONMENT_VARIABLE
from src.sampling.models import Pareto, sample
from src.sampling.random_stream import RandomStream


def run(argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()
        self.directory = self._directory.name

    def tearDown(self):
        self._directory.cleanup()
        GlobalConfig.clear()

    def path(self, name):
        return os.path.join(self.directory, name)


class TestEstimate(CliTestCase):

    @classmethod
    def setUpClass(cls):
        cls._data_directory = tempfile.TemporaryDirectory()
        cls.data = os.path.join(cls._data_directory.name, 'pareto.txt')
        values = sample(Pareto(2.0), 100000, RandomStream(2024)).values
        with open(cls.data, 'w') as stream:
            stream.write('# Pareto(2) sample\n')
            stream.writelines('{!r}\n'.format(float(value)) for value in values)

    @classmethod
    def tearDownClass(cls):
        cls._data_directory.cleanup()

    def test_estimates(self):
        out = self.path('estimates.csv')
        code, stdout, _ = run(['estimate', self.data, '--level', '0.95', '--out', out])
        self.assertEqual(code, EXIT_OK)
        self.assertIn('new_family', stdout)

        frame = read_csv(out)
        self.assertEqual(list(frame['method']), ['fraga_alves', 'new_family', 'new_family', 'hill', 'moment'])
        self.assertEqual(frame.loc[0, 'k'], 50000)
        null_bias_row = frame.iloc[2]
        self.assertLess(abs(null_bias_row['estimate'] - 2.0), 0.2)
        self.assertLess(null_bias_row['lower'], null_bias_row['estimate'])
        self.assertLess(abs(frame.loc[3, 'estimate'] - 2.0), 0.2)

        manifest = RunManifest.load(out + MANIFEST_SUFFIX)
        self.assertEqual(manifest.command, 'estimate')
        self.assertEqual(manifest.config['n'], 100000)
        self.assertEqual(manifest.config['level'], 0.95)

    def test_shift_leaves_location_invariant_estimates(self):
        plain, shifted = self.path('plain.csv'), self.path('shifted.csv')
        arguments = ['estimate', self.data, '--k', '5000', '--k0', '500', '--alpha', '1', '1.9']
        self.assertEqual(run(arguments + ['--out', plain])[0], EXIT_OK)
        self.assertEqual(run(arguments + ['--shift', '1000', '--out', shifted])[0], EXIT_OK)
        first, second = read_csv(plain).iloc[:3], read_csv(shifted).iloc[:3]
        np.testing.assert_allclose(second['estimate'], first['estimate'], rtol=1e-8)
        self.assertNotIn('lower', first.columns)

    def test_infeasible_fractions(self):
        code, _, stderr = run(['estimate', self.data, '--k', '100', '--k0', '200'])
        self.assertEqual(code, EXIT_INFEASIBLE)
        self.assertIn('error:', stderr)

    def test_missing_file(self):
        self.assertEqual(run(['estimate', self.path('missing.txt')])[0], EXIT_INPUT)

    def test_unusable_alpha_gives_missing_row(self):
        out = self.path('partial.csv')
        code, _, _ = run(['estimate', self.data, '--k', '1000', '--k0', '100', '--alpha', '0.5', '2', '--out', out])
        self.assertEqual(code, EXIT_OK)
        frame = read_csv(out)
        self.assertTrue(np.isnan(frame.loc[1, 'estimate']))
        self.assertTrue(np.isfinite(frame.loc[2, 'estimate']))

    def test_interval_beyond_double_range_keeps_estimate(self):
        out = self.path('large_alpha.csv')
        arguments = ['estimate', self.data, '--k', '5000', '--k0', '500', '--alpha', '60', '--level', '0.95',
                     '--out', out]
        self.assertEqual(run(arguments)[0], EXIT_OK)
        row = read_csv(out).iloc[1]
        self.assertTrue(np.isfinite(row['estimate']))
        self.assertTrue(np.isnan(row['lower']))

    def test_light_tailed_data_keeps_k0_above_one(self):
        data = self.path('uniform.txt')
        with open(data, 'w') as stream:
            stream.writelines('{!r}\n'.format(index / 2001.0) for index in range(1, 2001))
        out = self.path('uniform.csv')
        self.assertEqual(run(['estimate', data, '--level', '0.95', '--out', out])[0], EXIT_OK)
        self.assertEqual(RunManifest.load(out + MANIFEST_SUFFIX).config['k0'], 2)


class TestTableAlpha0(CliTestCase):

    def test_default_table(self):
        code, stdout, _ = run(['table-alpha0'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn('4.65', stdout)
        self.assertIn('1.90', stdout)

    def test_custom_gammas(self):
        out = self.path('alpha0.csv')
        self.assertEqual(run(['table-alpha0', '--gammas', '2', '1', '--out', out])[0], EXIT_OK)
        frame = read_csv(out)
        self.assertEqual(frame['gamma'].tolist(), [1.0, 2.0])
        self.assertTrue(os.path.exists(out + MANIFEST_SUFFIX))

    def test_bad_global_config(self):
        config = self.path('config.yml')
        with open(config, 'w') as stream:
            stream.write('experiment_name: tests\nunknown_setting: 1\n')
        code, _, stderr = run(['table-alpha0', '--config', config])
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn('unknown_setting', stderr)


class TestSimulate(CliTestCase):

    def test_areff_sweep(self):
        out = self.path('areff.csv')
        self.assertEqual(run(['simulate', 'areff', '--gamma', '1', '--out', out])[0], EXIT_OK)
        frame = read_csv(out)
        self.assertEqual(len(frame), 90)
        self.assertEqual(RunManifest.load(out + MANIFEST_SUFFIX).command, 'simulate areff')

    def test_areff_to_stdout(self):
        code, stdout, _ = run(['simulate', 'areff', '--gamma', '2', '--step', '0.1'])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(stdout.startswith('gamma,alpha,areff\n'))

    def test_coverage(self):
        out = self.path('coverage.csv')
        code, _, _ = run(['simulate', 'coverage', '--model', 'pareto:g=2', '--n', '500', '--reps', '20',
                          '--seed', '3', '--alpha', 'alpha0', '--out', out])
        self.assertEqual(code, EXIT_OK)
        frame = read_csv(out)
        self.assertEqual(sorted(frame['method']), ['fraga_alves', 'new_family'])
        manifest = RunManifest.load(out + MANIFEST_SUFFIX)
        self.assertEqual(manifest.seed, 3)
        self.assertEqual(manifest.config['replications'], 20)

    def test_seed_from_environment(self):
        out = self.path('coverage.csv')
        with mock.patch.dict(os.environ, {SEED_ENVIRONMENT_VARIABLE: '99'}):
            code, _, _ = run(['simulate', 'coverage', '--model', 'pareto:g=2', '--n', '200', '--reps', '5',
                              '--out', out])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(RunManifest.load(out + MANIFEST_SUFFIX).seed, 99)

    def test_paths_writes_series(self):
        out = self.path('runs/paths.csv')
        code, _, _ = run(['simulate', 'paths', '--model', 'frechet:g=1', '--n', '600', '--reps', '10',
                          '--k0-sweep', '20 60 20', '--alpha', '1', '1.9', '--out', out])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(read_csv(out)), 6)
        series = read_csv(self.path('runs/paths_mean_series.csv'))
        self.assertEqual(list(series.columns), ['k0', 'new_family_1', 'new_family_1.9'])
        self.assertTrue(os.path.exists(self.path('runs/paths_mse_series.csv') + MANIFEST_SUFFIX))

    def test_grid_from_config_file(self):
        config = self.path('grid.yml')
        with open(config, 'w') as stream:
            stream.write('schema_version: 1\nmodel: "pareto:g=1"\nn_values: [300]\nreplications: 5\n'
                         'k0_rule: {sweep: [10, 30, 10]}\nalphas: [1]\n')
        code, stdout, _ = run(['simulate', 'grid', config])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(stdout.strip().splitlines()), 1 + 6)

    def test_needs_experiment(self):
        self.assertEqual(run(['simulate', 'coverage'])[0], EXIT_INPUT)

    def test_infeasible_experiment(self):
        code, _, _ = run(['simulate', 'coverage', '--model', 'pareto:g=1', '--n', '100', '--reps', '5',
                          '--k0', '80', '--k', '50'])
        self.assertEqual(code, EXIT_INFEASIBLE)

    def test_coverage_rejects_sweep(self):
        code, _, stderr = run(['simulate', 'coverage', '--model', 'pareto:g=2', '--n', '200', '--reps', '5',
                               '--k0-sweep', '20 60 20'])
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn('k0-sweep', stderr)

    def test_invalid_sweep_argument(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['simulate', 'paths', '--k0-sweep', '60 20'])


class TestExitCodes(unittest.TestCase):

    @parameterized.expand([
        (FractionBoundsError('k'), EXIT_INFEASIBLE),
        (NullBiasError('b'), EXIT_INFEASIBLE),
        (SignError('s'), EXIT_INFEASIBLE),
        (ExcessFailuresError('f', {'cell': 3}), EXIT_FAILURES),
        (EmptyResultError('e'), EXIT_FAILURES),
        (InputError('i'), EXIT_INPUT),
        (ConfigError('c'), EXIT_INPUT),
        (DomainError('d'), EXIT_INPUT),
    ])
    def test_mapping(self, error, expected):
        self.assertEqual(exit_code_for(error), expected)
