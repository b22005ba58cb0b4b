import math
import unittest

import numpy as np

from src.error import DegenerateSampleError
from src.montecarlo.callbacks.base import Callback
from src.montecarlo.engine import Cell, ReplicationEngine, draw_chunk
from src.montecarlo.methods import MethodSpec
from src.sampling.models import Pareto

MODEL = Pareto(1.0)


def shift_far(draws):
    return draws + 1000.0


def poison_first_row(draws):
    draws = draws.copy()
    draws[0, 0] = np.nan
    return draws


def always_degenerate(sample, fp):
    raise DegenerateSampleError('no spread')


def not_a_number(sample, fp):
    return math.nan


def cells(n=200):
    return [
        Cell(n=n, k=100, k0=20, spec=MethodSpec.fraga_alves()),
        Cell(n=n, k=100, k0=20, spec=MethodSpec.new_family(1.9)),
        Cell(n=n, k=100, k0=40, spec=MethodSpec.new_family(1.0)),
    ]


class RecordingCallback(Callback):

    def __init__(self):
        self.events = []

    def on_experiment_started(self, engine):
        self.events.append(('started', tuple(engine.n_values)))

    def on_chunk_finished(self, engine, n, completed):
        self.events.append(('chunk', n, completed))


class TestDrawChunk(unittest.TestCase):

    def test_rows_sorted(self):
        draws = draw_chunk(MODEL, 100, 5, 0, 10)
        self.assertEqual(draws.shape, (10, 100))
        self.assertTrue(np.all(np.diff(draws, axis=1) >= 0))
        self.assertTrue(np.all(draws >= 1.0))

    def test_rows_depend_on_index_only(self):
        block = draw_chunk(MODEL, 100, 5, 0, 10)
        np.testing.assert_array_equal(draw_chunk(MODEL, 100, 5, 3, 4)[0], block[3])
        self.assertFalse(np.array_equal(draw_chunk(MODEL, 101, 5, 3, 4)[0][:100], block[3]))

    def test_hook(self):
        np.testing.assert_array_equal(draw_chunk(MODEL, 100, 5, 0, 4, shift_far), draw_chunk(MODEL, 100, 5, 0, 4) + 1000.0)


class TestReplicationEngine(unittest.TestCase):

    def run_engine(self, **kwargs):
        options = dict(replications=30, base_seed=11, level=0.95, chunk_size=7)
        options.update(kwargs)
        return ReplicationEngine(MODEL, **options).run(cells())

    def test_outcome_shapes(self):
        outcomes = self.run_engine()
        self.assertEqual(len(outcomes), 3)
        for outcome in outcomes:
            self.assertEqual(outcome.values.shape, (30,))
            self.assertTrue(outcome.succeeded.all())
            self.assertTrue(outcome.has_intervals.all())
            self.assertEqual(outcome.failed, 0)
            self.assertTrue(np.all(outcome.lower < outcome.values))

    def test_no_intervals_without_level(self):
        for outcome in self.run_engine(level=None):
            self.assertFalse(outcome.has_intervals.any())

    def test_chunking_does_not_change_results(self):
        reference = self.run_engine(chunk_size=30)
        for outcome, expected in zip(self.run_engine(chunk_size=4), reference):
            np.testing.assert_array_equal(outcome.values, expected.values)
            np.testing.assert_array_equal(outcome.upper, expected.upper)

    def test_workers_do_not_change_results(self):
        reference = self.run_engine()
        for outcome, expected in zip(self.run_engine(workers=2), reference):
            np.testing.assert_array_equal(outcome.values, expected.values)
            np.testing.assert_array_equal(outcome.lower, expected.lower)

    def test_seed_changes_results(self):
        first, second = self.run_engine()[0], self.run_engine(base_seed=12)[0]
        self.assertFalse(np.array_equal(first.values, second.values))

    def test_location_shift_hook(self):
        reference = self.run_engine(level=None)
        shifted = self.run_engine(level=None, sample_hook=shift_far)
        for outcome, expected in zip(shifted, reference):
            np.testing.assert_allclose(outcome.values, expected.values, rtol=1e-9)

    def test_failed_samples_fail_every_cell(self):
        outcomes = self.run_engine(chunk_size=10, sample_hook=poison_first_row)
        for outcome in outcomes:
            self.assertEqual(outcome.failed, 3)
            self.assertEqual(outcome.failures['DomainError'], 3)
            self.assertTrue(np.isnan(outcome.values[[0, 10, 20]]).all())
            self.assertEqual(int(outcome.succeeded.sum()), 27)

    def test_failures_counted_by_kind(self):
        failing = [
            Cell(n=200, k=100, k0=20, spec=MethodSpec('degenerate', estimator=always_degenerate)),
            Cell(n=200, k=100, k0=20, spec=MethodSpec('nan', estimator=not_a_number)),
        ]
        outcomes = ReplicationEngine(MODEL, 12, 3, chunk_size=5).run(failing)
        self.assertEqual(dict(outcomes[0].failures), {'DegenerateSampleError': 12})
        self.assertEqual(dict(outcomes[1].failures), {'NonFiniteEstimate': 12})

    def test_duplicate_cells_and_sample_sizes(self):
        mixed = cells(200) + cells(300)[:1] + cells(200)[:1]
        outcomes = ReplicationEngine(MODEL, 10, 3, chunk_size=4).run(mixed)
        np.testing.assert_array_equal(outcomes[-1].values, outcomes[0].values)
        self.assertFalse(np.array_equal(outcomes[3].values, outcomes[0].values))

    def test_callback_progress(self):
        callback = RecordingCallback()
        engine = ReplicationEngine(MODEL, 10, 3, chunk_size=4)
        engine.run(cells(200) + cells(300)[:1], callback)
        self.assertEqual(callback.events[0], ('started', (200, 300)))
        self.assertEqual(callback.events[1:], [
            ('chunk', 200, 4), ('chunk', 200, 8), ('chunk', 200, 10),
            ('chunk', 300, 4), ('chunk', 300, 8), ('chunk', 300, 10),
        ])
