from typing import List, Optional, Union

from src.montecarlo.callbacks.base import Callback


class CallbacksGroup(Callback):
    """
    Class to store a list of Callbacks.

    Attributes:
        _callbacks: (list of Callback) callbacks to trigger on each event
    """

    def __init__(self, callbacks: Optional[Union[Callback, List[Callback]]] = None):
        """
        Constructor for CallbacksGroup.

        :param callbacks: (Callback, list of Callbacks or None) callbacks to use
        """
        if isinstance(callbacks, list):
            self._callbacks = callbacks
        elif isinstance(callbacks, Callback):
            self._callbacks = [callbacks]
        else:
            self._callbacks = []

    def on_experiment_started(self, engine):
        for callback in self._callbacks:
            callback.on_experiment_started(engine)

    def on_chunk_finished(self, engine, n, completed):
        for callback in self._callbacks:
            callback.on_chunk_finished(engine, n, completed)

    def on_report_ready(self, engine, report):
        for callback in self._callbacks:
            callback.on_report_ready(engine, report)

    def on_experiment_finished(self, engine):
        for callback in self._callbacks:
            callback.on_experiment_finished(engine)
