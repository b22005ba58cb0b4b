"""
Monte Carlo campaigns on top of the replication engine, plus the analytic tables that accompany them.
"""
import math
from collections import Counter
from logging import getLogger
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from pandas import DataFrame

from src.asymptotics.constants import alpha0, areff
from src.error import ConfigError, EmptyResultError, ExcessFailuresError, NullBiasError
from src.estimators.sample import FractionPair
from src.global_config import GlobalConfig
from src.montecarlo.callbacks.base import Callback
from src.montecarlo.callbacks.group import CallbacksGroup
from src.montecarlo.config import ALPHA0_TOKEN, Alpha0Mode, AlphaChoice, ExperimentConfig
from src.montecarlo.engine import Cell, CellOutcome, ReplicationEngine, SampleHook
from src.montecarlo.methods import FRAGA_ALVES, NEW_FAMILY, MethodSpec
from src.montecarlo.report import ExperimentReport
from src.montecarlo.rules import SweepK0
from src.sampling.second_order import true_params

logger = getLogger(__name__)

TABLE_GAMMAS = (0.1, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0)
AREFF_GAMMAS = (0.5, 1.0, 2.0)

K0Sweep = Union[SweepK0, Sequence[int]]


def new_family_specs(config: ExperimentConfig) -> List[MethodSpec]:
    """
    New-family methods for the configured alphas; the alpha0 token becomes the oracle value or
    the pilot plug-in method depending on alpha0_mode.
    """
    specs = []
    for alpha in config.alphas:
        if alpha == ALPHA0_TOKEN and config.alpha0_mode is Alpha0Mode.PILOT:
            specs.append(MethodSpec.new_family_pilot())
        else:
            specs.append(MethodSpec.new_family(config.oracle_alpha(alpha)))
    return specs


def _sweep_values(k0_sweep: K0Sweep) -> List[int]:
    values = k0_sweep.values if isinstance(k0_sweep, SweepK0) else [int(k0) for k0 in k0_sweep]
    if not values:
        raise ConfigError('k0 sweep is empty')
    return values


def _single_n(config: ExperimentConfig, name: str) -> int:
    if len(config.n_values) != 1:
        raise ConfigError('{} needs a single sample size, got {}'.format(name, config.n_values))
    return config.n_values[0]


def _rule_alpha(spec: MethodSpec) -> float:
    return spec.alpha if spec.alpha is not None else 1.0


def _cells(config: ExperimentConfig, specs: Sequence[MethodSpec], k0_values: Optional[List[int]] = None,
           shared_alpha: Optional[float] = None) -> List[Cell]:
    """
    Cells for every sample size of the config.

    :param config: (ExperimentConfig) experiment
    :param specs: (list of MethodSpec) methods to evaluate
    :param k0_values: (list of int or None) explicit k0 values, else the config's k0 rule
    :param shared_alpha: (float or None) resolve k0 once at this alpha for all methods
    :return: (list of Cell) cells ordered by n, method, k0
    """
    params = true_params(config.model) if k0_values is None else None
    cells = []
    for n in config.n_values:
        k = config.k_rule.resolve(n)
        shared = None
        if k0_values is None and shared_alpha is not None:
            shared = config.k0_rule.resolve(k, n, params, shared_alpha)
        for spec in specs:
            if k0_values is not None:
                values = k0_values
            elif shared is not None:
                values = shared
            else:
                values = config.k0_rule.resolve(k, n, params, _rule_alpha(spec))
            for k0 in values:
                FractionPair(k0=k0, k=k).check(n)
                cells.append(Cell(n=n, k=k, k0=k0, spec=spec))
    return cells


def _fsum_mean(values: np.ndarray) -> float:
    return math.fsum(values) / values.size


def summarize(cell: Cell, outcome: CellOutcome, gamma: float, model_id: str) -> Dict:
    """
    Report row of one cell.

    Failed replications are excluded from every statistic and counted in `failures`. Coverage is
    over replications with an interval, unbounded ones included; avg_length only averages bounded
    intervals and is NaN when there are none.

    :param cell: (Cell) evaluated cell
    :param outcome: (CellOutcome) its per-replication results
    :param gamma: (float) true tail index
    :param model_id: (str) model identifier for the report
    :return: (dict) report row
    """
    values = outcome.values[outcome.succeeded]
    row = {
        'n': cell.n, 'model': model_id, 'method': cell.spec.label,
        'alpha': cell.spec.alpha if cell.spec.alpha is not None else np.nan,
        'k0': cell.k0, 'k': cell.k,
        'mean': np.nan, 'bias': np.nan, 'mse': np.nan, 'coverage': np.nan, 'avg_length': np.nan,
        'failures': outcome.failed,
    }
    if values.size == 0:
        return row

    mean = _fsum_mean(values)
    row['mean'] = mean
    row['bias'] = mean - gamma
    row['mse'] = _fsum_mean((values - gamma) ** 2)

    with_interval = outcome.has_intervals
    if with_interval.any():
        lower, upper = outcome.lower[with_interval], outcome.upper[with_interval]
        row['coverage'] = _fsum_mean(((lower <= gamma) & (gamma <= upper)).astype(np.float64))
        bounded = np.isfinite(upper)
        if bounded.any():
            row['avg_length'] = _fsum_mean(upper[bounded] - lower[bounded])
    return row


def check_failures(cells: Sequence[Cell], outcomes: Sequence[CellOutcome], replications: int):
    """
    Abort when any cell lost more than the configured fraction of its replications.

    :raises ExcessFailuresError: with the failure tally of the offending cells
    """
    allowed = GlobalConfig().max_failure_fraction * replications
    tally = {cell.label: outcome.failed for cell, outcome in zip(cells, outcomes) if outcome.failed > allowed}
    if tally:
        kinds = Counter()
        for outcome in outcomes:
            kinds.update(outcome.failures)
        raise ExcessFailuresError(
            '{} cell(s) exceed the failure budget of {:.0f} replications; failures by kind: {}'.format(
                len(tally), allowed, dict(kinds)
            ),
            tally
        )


def _run(config: ExperimentConfig, cells: List[Cell], label: str, level: Optional[float], workers: int,
         callback: Optional[Callback], sample_hook: Optional[SampleHook], check: bool = True) -> ExperimentReport:
    callback = callback if callback is not None else CallbacksGroup()
    engine = ReplicationEngine(config.model, config.replications, config.base_seed, level=level, workers=workers,
                               sample_hook=sample_hook, label=label)
    try:
        outcomes = engine.run(cells, callback)
        if check:
            check_failures(cells, outcomes, config.replications)
        gamma, model_id = config.model.gamma, config.model.model_id
        report = ExperimentReport.from_records(
            (summarize(cell, outcome, gamma, model_id) for cell, outcome in zip(cells, outcomes)), config.base_seed
        )
        callback.on_report_ready(engine, report)
    finally:
        callback.on_experiment_finished(engine)
    return report


def run_paths(config: ExperimentConfig, k0_sweep: Optional[K0Sweep] = None, workers: int = 1,
              callback: Optional[Callback] = None, sample_hook: Optional[SampleHook] = None) -> ExperimentReport:
    """
    Mean, bias and MSE of the new family for every configured alpha along a k0 sweep.

    :param config: (ExperimentConfig) single-n experiment
    :param k0_sweep: (SweepK0, list of int or None) k0 values, default the config's k0 rule
    :param workers: (int) worker processes
    :param callback: (Callback or None) run hooks
    :param sample_hook: (callable or None) debugging hook on the simulated data
    :return: (ExperimentReport) one row per (alpha, k0)
    """
    _single_n(config, 'run_paths')
    specs = new_family_specs(config)
    if not specs:
        raise ConfigError('run_paths needs at least one alpha')
    k0_values = _sweep_values(k0_sweep) if k0_sweep is not None else None
    return _run(config, _cells(config, specs, k0_values), 'paths', None, workers, callback, sample_hook)


def run_grid(config: ExperimentConfig, workers: int = 1, callback: Optional[Callback] = None,
             sample_hook: Optional[SampleHook] = None) -> ExperimentReport:
    """ Mean and MSE versus k0 of Fraga Alves' estimator and the new family at the configured alphas """
    _single_n(config, 'run_grid')
    if not config.k0_rule.is_sweep:
        raise ConfigError('run_grid needs a sweep k0_rule, got {}'.format(config.k0_rule.describe()))
    specs = [MethodSpec.fraga_alves()] + new_family_specs(config)
    return _run(config, _cells(config, specs, config.k0_rule.values), 'grid', None, workers, callback, sample_hook)


def run_coverage(config: ExperimentConfig, workers: int = 1, callback: Optional[Callback] = None,
                 sample_hook: Optional[SampleHook] = None) -> ExperimentReport:
    """
    Coverage and average length of the Fraga Alves interval and the new-family interval.

    Both methods use the same (k0, k), resolved from the k0 rule at alpha = 1.

    :param config: (ExperimentConfig) experiment, any number of sample sizes
    :param workers: (int) worker processes
    :param callback: (Callback or None) run hooks
    :param sample_hook: (callable or None) debugging hook on the simulated data
    :return: (ExperimentReport) one row per (n, method)
    """
    specs = [MethodSpec.fraga_alves()] + new_family_specs(config)
    cells = _cells(config, specs, shared_alpha=1.0)
    return _run(config, cells, 'coverage', config.level, workers, callback, sample_hook)


def _sweep_report(config: ExperimentConfig, specs: Sequence[MethodSpec], k0_sweep: K0Sweep, label: str,
                  workers: int, callback: Optional[Callback]) -> ExperimentReport:
    _single_n(config, label)
    return _run(config, _cells(config, specs, _sweep_values(k0_sweep)), label, None, workers, callback, None,
                check=False)


def _argmin_k0(rows: DataFrame, name: str) -> int:
    rows = rows[np.isfinite(rows['mse'].to_numpy())]
    if rows.empty:
        raise EmptyResultError('Every sweep point failed for {}'.format(name))
    # rows are sorted by k0, and idxmin keeps the first minimum
    return int(rows.loc[rows['mse'].idxmin(), 'k0'])


def empirical_k0_opt(config: ExperimentConfig, method: MethodSpec, k0_sweep: K0Sweep, workers: int = 1,
                     callback: Optional[Callback] = None) -> int:
    """
    The k0 of the sweep with the smallest empirical MSE, the smaller k0 on ties.

    :param config: (ExperimentConfig) single-n experiment
    :param method: (MethodSpec) estimator to tune
    :param k0_sweep: (SweepK0 or list of int) candidate k0 values
    :param workers: (int) worker processes
    :param callback: (Callback or None) run hooks
    :return: (int) empirical optimal k0
    """
    report = _sweep_report(config, [method], k0_sweep, 'k0_opt', workers, callback)
    return _argmin_k0(report.rows, method.label)


def empirical_efficiency(config: ExperimentConfig, alpha: AlphaChoice = 1.0, k0_sweep: Optional[K0Sweep] = None,
                         workers: int = 1, callback: Optional[Callback] = None) -> DataFrame:
    """
    Simulated counterpart of areff: sqrt(MSE_FA / MSE_new), each at its empirical optimal k0.

    :param config: (ExperimentConfig) single-n experiment
    :param alpha: (float or 'alpha0') tuning parameter of the new family
    :param k0_sweep: (SweepK0, list of int or None) candidate k0 values, default the config's sweep rule
    :param workers: (int) worker processes
    :param callback: (Callback or None) run hooks
    :return: (DataFrame) one row with both optima, the empirical and the analytic efficiency
    """
    if k0_sweep is None:
        if not config.k0_rule.is_sweep:
            raise ConfigError('empirical_efficiency needs a k0 sweep')
        k0_sweep = config.k0_rule
    alpha_value = config.oracle_alpha(ExperimentConfig.parse_alpha(alpha))
    fraga_alves_spec, new_spec = MethodSpec.fraga_alves(), MethodSpec.new_family(alpha_value)
    report = _sweep_report(config, [fraga_alves_spec, new_spec], k0_sweep, 'efficiency', workers, callback)

    k0_fa = _argmin_k0(report.select(FRAGA_ALVES), FRAGA_ALVES)
    k0_new = _argmin_k0(report.select(NEW_FAMILY, alpha_value), NEW_FAMILY)
    mse_fa = float(report.rows.loc[(report.rows['method'] == FRAGA_ALVES) & (report.rows['k0'] == k0_fa), 'mse'].iloc[0])
    new_rows = report.select(NEW_FAMILY, alpha_value)
    mse_new = float(new_rows.loc[new_rows['k0'] == k0_new, 'mse'].iloc[0])

    gamma = config.model.gamma
    try:
        analytic = areff(alpha_value, gamma)
    except NullBiasError:
        analytic = math.nan
    return DataFrame([{
        'n': config.n_values[0], 'model': config.model.model_id, 'gamma': gamma, 'alpha': alpha_value,
        'k0_fraga_alves': k0_fa, 'k0_new': k0_new, 'mse_fraga_alves': mse_fa, 'mse_new': mse_new,
        'empirical_areff': math.sqrt(mse_fa / mse_new), 'areff': analytic,
    }])


def areff_sweep(gammas: Iterable[float] = AREFF_GAMMAS, step: float = 0.01) -> DataFrame:
    """
    areff(alpha, gamma) for alpha = 1, 1 + step, ... below alpha0(gamma).

    :param gammas: (iterable of float) tail indices
    :param step: (float) alpha spacing
    :return: (DataFrame) columns gamma, alpha, areff
    """
    if not step > 0:
        raise ConfigError('areff step must be positive, got {}'.format(step))
    rows = []
    for gamma in sorted(set(float(g) for g in gammas)):
        upper = alpha0(gamma)
        index = 0
        while True:
            alpha = round(1.0 + index * step, 12)
            if alpha >= upper:
                break
            try:
                rows.append({'gamma': gamma, 'alpha': alpha, 'areff': areff(alpha, gamma)})
            except NullBiasError:
                logger.debug('Skipping alpha={} at gamma={}: null bias'.format(alpha, gamma))
            index += 1
    return DataFrame(rows, columns=['gamma', 'alpha', 'areff'])


def alpha0_table(gammas: Optional[Iterable[float]] = None) -> DataFrame:
    """
    alpha0(gamma) on a gamma grid, sorted ascending without duplicates.

    :param gammas: (iterable of float or None) grid, default the benchmark grid
    :return: (DataFrame) columns gamma, alpha0
    """
    grid = sorted(set(float(g) for g in (gammas if gammas is not None else TABLE_GAMMAS)))
    return DataFrame({'gamma': grid, 'alpha0': [alpha0(gamma) for gamma in grid]})
