import time
from logging import getLogger

from src.montecarlo.callbacks.base import Callback

logger = getLogger(__name__)


class LoggingCallback(Callback):
    """ Logs experiment milestones and timing """

    def __init__(self):
        self._start_time = None

    def on_experiment_started(self, engine):
        self._start_time = time.time()
        logger.info('Starting {} for {}: n={}, {} replications, seed {}, {} worker(s)'.format(
            engine.label, engine.model.model_id, engine.n_values, engine.replications, engine.base_seed,
            engine.workers
        ))

    def on_chunk_finished(self, engine, n, completed):
        logger.debug('[n = {}] {} of {} replications done'.format(n, completed, engine.replications))

    def on_report_ready(self, engine, report):
        failures = int(report.rows['failures'].sum())
        if failures:
            logger.warning('{} failed estimator evaluations excluded from {}'.format(failures, engine.label))

    def on_experiment_finished(self, engine):
        elapsed = time.time() - self._start_time if self._start_time is not None else float('nan')
        logger.info('{} finished in {:.2f} seconds'.format(engine.label, elapsed))
