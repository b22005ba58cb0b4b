"""
Replication engine: evaluates estimator cells on seeded replications, optionally in worker processes.

Replication r of sample size n always draws from the stream seeded by
replication_seeds(base_seed, [r], tag=n), so results do not depend on the chunking or on the
number of workers.
"""
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from logging import getLogger
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.error import EstimatorError
from src.estimators.sample import FractionPair, Sample
from src.global_config import GlobalConfig
from src.montecarlo.callbacks.base import Callback
from src.montecarlo.callbacks.group import CallbacksGroup
from src.montecarlo.methods import MethodSpec
from src.sampling.models import TailModel
from src.sampling.random_stream import RandomStream, replication_seeds

logger = getLogger(__name__)

SampleHook = Callable[[np.ndarray], np.ndarray]


class Cell(NamedTuple):
    """ One estimator evaluated at one (n, k0, k) """
    n: int
    k: int
    k0: int
    spec: MethodSpec

    @property
    def label(self) -> str:
        method = self.spec.label if self.spec.alpha is None else '{}(alpha={:.4g})'.format(self.spec.label, self.spec.alpha)
        return '{} n={} k0={} k={}'.format(method, self.n, self.k0, self.k)


class CellOutcome:
    """
    Per-replication results of one cell, in replication order.

    Attributes:
        values: (np.ndarray) estimates, NaN where the evaluation failed
        lower: (np.ndarray) interval lower limits, NaN when no interval was produced
        upper: (np.ndarray) interval upper limits, inf when unbounded
        failures: (Counter) failed evaluations by exception name
    """

    def __init__(self, values: np.ndarray, lower: np.ndarray, upper: np.ndarray, failures: Counter):
        self.values = values
        self.lower = lower
        self.upper = upper
        self.failures = failures

    @property
    def failed(self) -> int:
        return int(sum(self.failures.values()))

    @property
    def succeeded(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @property
    def has_intervals(self) -> np.ndarray:
        return ~np.isnan(self.lower)


class ChunkTask(NamedTuple):
    model: TailModel
    n: int
    base_seed: int
    start: int
    stop: int
    cells: List[Cell]
    level: Optional[float]
    sample_hook: Optional[SampleHook]


def draw_chunk(model: TailModel, n: int, base_seed: int, start: int, stop: int,
               sample_hook: Optional[SampleHook] = None) -> np.ndarray:
    """
    Simulated samples of replications start, ..., stop - 1.

    :param model: (TailModel) distribution to sample
    :param n: (int) sample size, also the stream tag
    :param base_seed: (int) experiment seed
    :param start: (int) first replication index
    :param stop: (int) one past the last replication index
    :param sample_hook: (callable or None) applied to the sorted (reps, n) array before estimation
    :return: (np.ndarray) ascending samples, one row per replication
    """
    seeds = replication_seeds(base_seed, range(start, stop), tag=n)
    draws = model.quantile(RandomStream(seeds).uniform(n))
    draws = np.sort(draws, axis=1, kind='mergesort')
    if sample_hook is not None:
        draws = np.asarray(sample_hook(draws), dtype=np.float64)
    return draws


def simulate_chunk(task: ChunkTask) -> List[CellOutcome]:
    """ Evaluate every cell of one sample size on a block of replications """
    draws = draw_chunk(task.model, task.n, task.base_seed, task.start, task.stop, task.sample_hook)
    reps = task.stop - task.start
    outcomes = [
        CellOutcome(np.full(reps, np.nan), np.full(reps, np.nan), np.full(reps, np.nan), Counter())
        for _ in task.cells
    ]

    for row in range(reps):
        try:
            sample = Sample(draws[row])
        except EstimatorError as error:
            for outcome in outcomes:
                outcome.failures[type(error).__name__] += 1
            continue

        for cell, outcome in zip(task.cells, outcomes):
            try:
                value, ci = cell.spec.evaluate(sample, FractionPair(k0=cell.k0, k=cell.k), task.level)
            except EstimatorError as error:
                outcome.failures[type(error).__name__] += 1
                continue
            if not np.isfinite(value):
                outcome.failures['NonFiniteEstimate'] += 1
                continue
            outcome.values[row] = value
            if ci is not None:
                outcome.lower[row] = ci.lower
                outcome.upper[row] = ci.upper
    return outcomes


def _concatenate(parts: Sequence[CellOutcome]) -> CellOutcome:
    failures = Counter()
    for part in parts:
        failures.update(part.failures)
    return CellOutcome(
        np.concatenate([part.values for part in parts]),
        np.concatenate([part.lower for part in parts]),
        np.concatenate([part.upper for part in parts]),
        failures,
    )


class ReplicationEngine:
    """
    Runs replications of one model and collects per-cell outcomes.

    Attributes:
        model: (TailModel) simulated distribution
        replications: (int) replications per sample size
        base_seed: (int) experiment seed
        level: (float or None) confidence level of the intervals, None to skip them
        workers: (int) worker processes, 1 runs in-process
        chunk_size: (int) replications per work item
        sample_hook: (callable or None) debugging hook applied to each simulated chunk
        label: (str) name of the experiment for callbacks
        n_values: (list of int) sample sizes of the current run
    """

    def __init__(self, model: TailModel, replications: int, base_seed: int, level: Optional[float] = None,
                 workers: int = 1, chunk_size: Optional[int] = None, sample_hook: Optional[SampleHook] = None,
                 label: str = 'experiment'):
        self.model = model
        self.replications = int(replications)
        self.base_seed = int(base_seed)
        self.level = level
        self.workers = max(1, int(workers))
        self.chunk_size = int(chunk_size or GlobalConfig().replications_per_chunk)
        self.sample_hook = sample_hook
        self.label = label
        self.n_values = []

    def _tasks(self, cells: Sequence[Cell]) -> List[Tuple[List[int], ChunkTask]]:
        tasks = []
        for n in self.n_values:
            indices = [index for index, cell in enumerate(cells) if cell.n == n]
            for start in range(0, self.replications, self.chunk_size):
                stop = min(start + self.chunk_size, self.replications)
                task = ChunkTask(self.model, n, self.base_seed, start, stop, [cells[index] for index in indices],
                                 self.level, self.sample_hook)
                tasks.append((indices, task))
        return tasks

    def run(self, cells: Sequence[Cell], callback: Optional[Callback] = None) -> List[CellOutcome]:
        """
        Evaluate all cells on all replications.

        Triggers on_experiment_started and on_chunk_finished; the caller owns the report and
        triggers the remaining events.

        :param cells: (list of Cell) estimator evaluations per replication
        :param callback: (Callback or None) progress and tracking hooks
        :return: (list of CellOutcome) outcomes aligned with cells
        """
        callback = callback if callback is not None else CallbacksGroup()
        cells = list(cells)
        self.n_values = sorted({cell.n for cell in cells})
        tasks = self._tasks(cells)
        logger.debug('{} cells in {} work items with {} worker(s)'.format(len(cells), len(tasks), self.workers))

        callback.on_experiment_started(self)
        parts = [[] for _ in cells]
        completed = Counter()
        with ExitStack() as stack:
            if self.workers == 1:
                chunk_results = map(simulate_chunk, (task for _, task in tasks))
            else:
                executor = stack.enter_context(ProcessPoolExecutor(max_workers=self.workers))
                chunk_results = executor.map(simulate_chunk, [task for _, task in tasks])

            for (indices, task), outcomes in zip(tasks, chunk_results):
                for index, outcome in zip(indices, outcomes):
                    parts[index].append(outcome)
                completed[task.n] += task.stop - task.start
                callback.on_chunk_finished(self, task.n, completed[task.n])

        return [_concatenate(part) for part in parts]
