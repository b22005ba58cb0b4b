import os
import tempfile
from logging import getLogger

import mlflow
import numpy as np
from mlflow import end_run, log_metric, log_param, start_run

from src.global_config import GlobalConfig
from src.montecarlo.callbacks.base import Callback

logger = getLogger(__name__)


class MLFlowCallback(Callback):
    """
    Callback to handle storing results in mlflow.

    Attributes:
        experiment_name: (str) mlflow experiment receiving the runs
        log_rows: (bool) also log every report row as metrics
    """

    def __init__(self, experiment_name: str = None, log_rows: bool = True):
        self.experiment_name = experiment_name or GlobalConfig().experiment_name
        self.log_rows = log_rows

    def on_experiment_started(self, engine):
        mlflow.set_experiment(self.experiment_name)
        start_run(run_name=engine.label)
        log_param('command', engine.label)
        log_param('model', engine.model.model_id)
        log_param('n_values', engine.n_values)
        log_param('replications', engine.replications)
        log_param('base_seed', engine.base_seed)
        log_param('workers', engine.workers)

    def on_report_ready(self, engine, report):
        if self.log_rows:
            for row in report.rows.itertuples(index=False):
                prefix = row.method if np.isnan(row.alpha) else '{}_{:.4g}'.format(row.method, row.alpha)
                prefix = '{}_n{}'.format(prefix, row.n)
                for column in ('mean', 'mse', 'coverage', 'avg_length'):
                    value = getattr(row, column)
                    if np.isfinite(value):
                        log_metric('{}_{}'.format(prefix, column), float(value), step=int(row.k0))

        with tempfile.TemporaryDirectory() as tmpdirname:
            report.to_csv(os.path.join(tmpdirname, 'report.csv'))
            mlflow.log_artifacts(tmpdirname)

    def on_experiment_finished(self, engine):
        end_run()
