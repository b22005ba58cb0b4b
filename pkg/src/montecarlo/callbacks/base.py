class Callback:
    """
    Callback class triggered by the replication engine.
    """

    def on_experiment_started(self, engine: 'ReplicationEngine'):
        """
        The engine is about to run its first chunk.

        :param engine: (ReplicationEngine) engine to get run details from
        :return: None
        """
        pass

    def on_chunk_finished(self, engine: 'ReplicationEngine', n: int, completed: int):
        """
        A chunk of replications has finished.

        :param engine: (ReplicationEngine) engine to get run details from
        :param n: (int) sample size of the chunk
        :param completed: (int) replications completed so far for this sample size
        :return: None
        """
        pass

    def on_report_ready(self, engine: 'ReplicationEngine', report: 'ExperimentReport'):
        """
        The aggregated report is available.

        :param engine: (ReplicationEngine) engine to get run details from
        :param report: (ExperimentReport) aggregated results
        :return: None
        """
        pass

    def on_experiment_finished(self, engine: 'ReplicationEngine'):
        """
        The experiment has finished.

        :param engine: (ReplicationEngine) engine to get run details from
        :return: None
        """
        pass
