"""
Command-line front end.

Exit codes: 0 success, 2 input or config error, 3 infeasible parameters, 4 excess replication failures.
"""
import math
import sys
from argparse import ArgumentParser, Namespace
from logging import getLogger
from typing import Dict, List, Optional

from pandas import DataFrame
from tabulate import tabulate

from src.asymptotics.constants import alpha0
from src.asymptotics.fractions import round_fraction
from src.error import (BracketError, ConfigError, EmptyResultError, EstimatorError, ExcessFailuresError,
                       FractionBoundsError, InputError, NullBiasError, ParameterError, SignError, TailIndexError)
from src.estimators.hill import hill, moment
from src.estimators.location_invariant import fraga_alves
from src.estimators.sample import FractionPair, Sample
from src.global_config import GlobalConfig
from src.cli.data_io import frame_to_csv, output_directory, read_values, sibling_path, write_frame
from src.cli.manifest import RunManifest
from src.montecarlo.callbacks.group import CallbacksGroup
from src.montecarlo.callbacks.logging import LoggingCallback
from src.montecarlo.callbacks.mlflow import MLFlowCallback
from src.montecarlo.callbacks.progress import ProgressCallback
from src.montecarlo.config import SCHEMA_VERSION, ExperimentConfig, seed_from_environment
from src.montecarlo.experiments import (alpha0_table, areff_sweep, empirical_efficiency, run_coverage, run_grid,
                                        run_paths)
from src.montecarlo.methods import HILL, MOMENT, MethodSpec
from src.utils.argparser.sweeper import sweeper
from src.utils.logging import use_logging_mode

logger = getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_FAILURES = 4

EXIT_CODES = [
    (FractionBoundsError, EXIT_INFEASIBLE),
    (NullBiasError, EXIT_INFEASIBLE),
    (ParameterError, EXIT_INFEASIBLE),
    (SignError, EXIT_INFEASIBLE),
    (BracketError, EXIT_INFEASIBLE),
    (ExcessFailuresError, EXIT_FAILURES),
    (EmptyResultError, EXIT_FAILURES),
    (InputError, EXIT_INPUT),
    (ConfigError, EXIT_INPUT),
    (EstimatorError, EXIT_INPUT),
]

SIMULATIONS = ('paths', 'grid', 'coverage', 'areff')


def exit_code_for(error: TailIndexError) -> int:
    for error_class, code in EXIT_CODES:
        if isinstance(error, error_class):
            return code
    return EXIT_INPUT


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='Log debug details on stderr')
    common.add_argument('--config', metavar='PATH', default=None, help='Alternative config.yml')

    parser = ArgumentParser(
        prog='python -m src.cli',
        description='Location-invariant tail-index estimation and its simulation studies. '
                    'Exit codes: 0 success, 2 input/config error, 3 infeasible parameters, '
                    '4 excess replication failures.',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    estimate = subparsers.add_parser('estimate', parents=[common], help='Estimate the tail index of a data file')
    estimate.add_argument('data', metavar='DATA', help='Text file with one value per line, # comments allowed')
    estimate.add_argument('--k', type=int, default=None, help='Upper fraction k (default n/2)')
    estimate.add_argument('--k0', type=int, default=None, help='Lower fraction k0 (default from a pilot estimate)')
    estimate.add_argument('--alpha', type=float, nargs='+', default=None,
                          help='Tuning parameters (default 1 and the plug-in alpha0)')
    estimate.add_argument('--level', type=float, default=None, help='Confidence level of the intervals')
    estimate.add_argument('--shift', type=float, default=0.0, help='Add a constant to every observation')
    estimate.add_argument('--out', default=None, help='Write the estimates to this CSV file')

    table = subparsers.add_parser('table-alpha0', parents=[common], help='Tabulate the null-bias alpha0(gamma)')
    table.add_argument('--gammas', type=float, nargs='+', default=None, help='Custom gamma grid')
    table.add_argument('--out', default=None, help='Write the table to this CSV file')

    simulate = subparsers.add_parser('simulate', parents=[common], help='Run a Monte Carlo study')
    simulate.add_argument('study', choices=SIMULATIONS)
    simulate.add_argument('experiment', metavar='CONFIG', nargs='?', default=None,
                          help='Experiment config (YAML or JSON)')
    simulate.add_argument('--model', default=None, help='Model spec, e.g. "burr:a=2,b=1"')
    simulate.add_argument('--n', type=int, nargs='+', default=None, help='Sample sizes')
    simulate.add_argument('--reps', type=int, default=None, help='Replications per sample size')
    simulate.add_argument('--seed', type=int, default=None, help='Base seed (overrides TAILFRAC_SEED)')
    simulate.add_argument('--k', type=int, default=None, help='Explicit k')
    simulate.add_argument('--k0', type=int, default=None, help='Explicit k0')
    simulate.add_argument('--k0-sweep', dest='k0_sweep', help='k0 sweep', **sweeper())
    simulate.add_argument('--alpha', type=str, nargs='+', default=None, help='Tuning parameters, reals or alpha0')
    simulate.add_argument('--level', type=float, default=None, help='Confidence level')
    simulate.add_argument('--workers', type=int, default=1, help='Worker processes')
    simulate.add_argument('--out', default=None, help='Report CSV (default stdout)')
    simulate.add_argument('--gamma', type=float, nargs='+', default=None, help='Tail indices of the areff sweep')
    simulate.add_argument('--step', type=float, default=0.01, help='alpha spacing of the areff sweep')
    simulate.add_argument('--empirical', action='store_true',
                          help='areff from simulated MSE-optimal k0 (needs CONFIG or --model and --n)')
    simulate.add_argument('--progress', action='store_true', help='Show a progress bar')
    simulate.add_argument('--mlflow', action='store_true', help='Track the run with mlflow')
    return parser


def _emit(frame: DataFrame, out: Optional[str], command: str, config: Dict, seed: Optional[int] = None):
    """ Write a frame with its manifest, or print it as CSV """
    if out is None:
        sys.stdout.write(frame_to_csv(frame))
        return
    output_directory(out)
    write_frame(frame, out)
    RunManifest(command=command, config=config, output_path=out, seed=seed).write()


def _safe(function, *args) -> float:
    try:
        return function(*args)
    except EstimatorError as error:
        logger.warning('{} unavailable: {}'.format(function.__name__, error))
        return math.nan


def cmd_estimate(args: Namespace) -> int:
    """
    Estimate the tail index of the data file with every estimator.

    Defaults: k = n/2, a Fraga Alves pilot at k0 = sqrt(k), then k0 = k^{2g/(2g+1)} and
    alpha in {1, alpha0(g)} with g the pilot estimate.
    """
    values = read_values(args.data)
    sample = Sample(values + args.shift) if args.shift else Sample(values)
    n = sample.n

    k = args.k if args.k is not None else n // 2
    if args.k0 is not None and args.k0 >= k:
        raise FractionBoundsError('Infeasible fractions: need k0 < k, got k0={}, k={}'.format(args.k0, k))
    FractionPair(k0=1, k=k).check(n)

    pilot_k0 = max(1, int(math.isqrt(k)))
    pilot = _safe(fraga_alves, sample, FractionPair(k0=pilot_k0, k=k))
    pilot_ok = math.isfinite(pilot) and pilot > 0
    if args.k0 is not None:
        k0 = args.k0
    elif pilot_ok:
        k0 = round_fraction(k ** (2.0 * pilot / (2.0 * pilot + 1.0)), k)
    else:
        logger.warning('Pilot estimate {} is not positive; using k0 = sqrt(k)'.format(pilot))
        k0 = pilot_k0
    fp = FractionPair(k0=k0, k=k)
    fp.check(n)

    if args.alpha is not None:
        alphas = list(args.alpha)
    else:
        alphas = [1.0] + ([alpha0(pilot)] if pilot_ok else [])
    level = args.level

    specs = [MethodSpec.fraga_alves()] + [MethodSpec.new_family(alpha) for alpha in alphas]
    rows = []
    for spec in specs:
        value, ci = math.nan, None
        try:
            value = spec.estimate(sample, fp).value
            if level is not None:
                ci = spec.estimate(sample, fp, level).ci
        except EstimatorError as error:
            logger.warning('{} unavailable: {}'.format(spec.label, error))
        rows.append({
            'method': spec.label, 'alpha': spec.alpha if spec.alpha is not None else math.nan, 'k0': k0, 'k': k,
            'estimate': value,
            'lower': ci.lower if ci is not None else math.nan,
            'upper': ci.upper if ci is not None else math.nan,
        })
    for label, function in ((HILL, hill), (MOMENT, moment)):
        rows.append({'method': label, 'alpha': math.nan, 'k0': math.nan, 'k': k, 'estimate': _safe(function, sample, k),
                     'lower': math.nan, 'upper': math.nan})

    frame = DataFrame(rows, columns=['method', 'alpha', 'k0', 'k', 'estimate', 'lower', 'upper'])
    if level is None:
        frame = frame.drop(columns=['lower', 'upper'])
    print(tabulate(frame, headers='keys', showindex=False, floatfmt='.6g', missingval='nan'))

    if args.out is not None:
        output_directory(args.out)
        write_frame(frame, args.out)
        parameters = {
            'data': args.data, 'n': int(n), 'k': int(k), 'k0': int(k0), 'alphas': [float(a) for a in alphas],
            'level': level, 'shift': float(args.shift), 'pilot_estimate': float(pilot),
        }
        RunManifest(command='estimate', config=parameters, output_path=args.out).write()
    return EXIT_OK


def cmd_table_alpha0(args: Namespace) -> int:
    """ alpha0(gamma) on the benchmark grid or --gammas """
    table = alpha0_table(args.gammas)
    print(tabulate(table, headers='keys', showindex=False, floatfmt=('g', '.2f')))
    if args.out is not None:
        output_directory(args.out)
        write_frame(table, args.out)
        RunManifest(command='table-alpha0', config={'gammas': [float(g) for g in table['gamma']]},
                    output_path=args.out).write()
    return EXIT_OK


def load_experiment(args: Namespace) -> ExperimentConfig:
    """
    Experiment config from CONFIG and the command-line overrides.

    The seed comes from --seed, else TAILFRAC_SEED, else the config.
    """
    if args.experiment is not None:
        config = ExperimentConfig.load(args.experiment)
    else:
        if args.model is None or args.n is None:
            raise ConfigError('simulate needs CONFIG or both --model and --n')
        config = ExperimentConfig.from_dict({'schema_version': SCHEMA_VERSION, 'model': args.model,
                                             'n_values': list(args.n)})

    overrides = {
        'model': args.model, 'n_values': list(args.n) if args.n is not None else None, 'replications': args.reps,
        'k': args.k, 'k0': args.k0, 'alphas': args.alpha, 'level': args.level,
    }
    if args.k0_sweep is not None and args.study == 'grid':
        overrides['k0_rule'] = args.k0_sweep.describe()
    config = config.with_overrides(**overrides)
    seed = args.seed if args.seed is not None else seed_from_environment(config.base_seed)
    return config.with_overrides(base_seed=seed)


def build_callback(args: Namespace) -> CallbacksGroup:
    callbacks = [LoggingCallback()]
    if args.progress:
        callbacks.append(ProgressCallback())
    if args.mlflow:
        callbacks.append(MLFlowCallback())
    return CallbacksGroup(callbacks)


def cmd_simulate(args: Namespace) -> int:
    """ Dispatch a simulation study and write its CSV outputs """
    if args.study == 'areff' and not args.empirical:
        gammas = args.gamma if args.gamma is not None else (0.5, 1.0, 2.0)
        frame = areff_sweep(gammas, args.step)
        _emit(frame, args.out, 'simulate areff', {'gammas': [float(g) for g in sorted(set(gammas))],
                                                  'step': float(args.step)})
        return EXIT_OK

    if args.study == 'coverage' and args.k0_sweep is not None:
        raise ConfigError('--k0-sweep applies to paths, grid and areff --empirical, not coverage')

    config = load_experiment(args)
    callback = build_callback(args)
    command = 'simulate {}'.format(args.study)

    if args.study == 'areff':
        alpha = args.alpha[0] if args.alpha else 1.0
        frame = empirical_efficiency(config, alpha, args.k0_sweep, workers=args.workers, callback=callback)
        _emit(frame, args.out, command + ' --empirical', config.to_dict(), config.base_seed)
        return EXIT_OK

    if args.study == 'paths':
        report = run_paths(config, args.k0_sweep, workers=args.workers, callback=callback)
    elif args.study == 'grid':
        report = run_grid(config, workers=args.workers, callback=callback)
    else:
        report = run_coverage(config, workers=args.workers, callback=callback)

    if args.out is None:
        sys.stdout.write(report.to_csv_string())
        return EXIT_OK

    output_directory(args.out)
    report.to_csv(args.out)
    RunManifest(command=command, config=config.to_dict(), output_path=args.out, seed=config.base_seed).write()
    if args.study in ('paths', 'grid'):
        for value in ('mean', 'mse'):
            path = sibling_path(args.out, '{}_series'.format(value))
            write_frame(report.series(value), path)
            RunManifest(command=command, config=config.to_dict(), output_path=path, seed=config.base_seed).write()
    return EXIT_OK


COMMANDS = {
    'estimate': cmd_estimate,
    'table-alpha0': cmd_table_alpha0,
    'simulate': cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    use_logging_mode(args.verbose)
    try:
        if args.config is not None:
            GlobalConfig.clear()
            GlobalConfig(args.config)
        return COMMANDS[args.command](args)
    except TailIndexError as error:
        code = exit_code_for(error)
        message = str(error)
        if isinstance(error, ExcessFailuresError) and error.tally:
            message += '; tally: ' + ', '.join('{}: {}'.format(label, count) for label, count in error.tally.items())
        print('error: {}'.format(message), file=sys.stderr)
        return code
