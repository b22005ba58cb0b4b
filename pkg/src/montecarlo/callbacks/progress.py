from tqdm import tqdm

from src.montecarlo.callbacks.base import Callback


class ProgressCallback(Callback):
    """
    Progress bar over all replications of an experiment.

    Attributes:
        _bar: (tqdm or None) active bar
        _done: (dict) replications completed per sample size
    """

    def __init__(self):
        self._bar = None
        self._done = {}

    def on_experiment_started(self, engine):
        self._done = {}
        self._bar = tqdm(total=engine.replications * len(engine.n_values), unit='rep')
        self._bar.set_description('{} ({})'.format(engine.label, engine.model.model_id))

    def on_chunk_finished(self, engine, n, completed):
        if self._bar is not None:
            self._bar.update(completed - self._done.get(n, 0))
        self._done[n] = completed

    def on_experiment_finished(self, engine):
        if self._bar is not None:
            self._bar.close()
            self._bar = None
