from typing import Dict, Optional


class TailIndexError(Exception):
    pass


class EstimatorError(TailIndexError):
    """ Failure of a single estimator evaluation; the replication engine tallies these. """
    pass


class DomainError(EstimatorError, ValueError):
    pass


class FractionBoundsError(EstimatorError):
    pass


class TieError(EstimatorError):
    pass


class DegenerateSampleError(EstimatorError):
    pass


class DegenerateProbeError(TailIndexError):
    pass


class NullBiasError(TailIndexError):
    pass


class ParameterError(TailIndexError):
    pass


class SignError(TailIndexError):
    pass


class BracketError(TailIndexError):
    pass


class NoRootError(BracketError):
    pass


class EmptyResultError(TailIndexError):
    pass


class ConfigError(TailIndexError):
    pass


class InputError(TailIndexError):
    pass


class ExcessFailuresError(TailIndexError):
    """
    Too many replications failed.

    Attributes:
        tally: (dict) failure count keyed by report row label
    """

    def __init__(self, message: str, tally: Optional[Dict[str, int]] = None):
        super().__init__(message)
        self.tally = tally or {}
