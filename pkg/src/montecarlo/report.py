import io
from logging import getLogger
from typing import Dict, Iterable, Optional

import numpy as np
from pandas import DataFrame, read_csv

from src.error import ConfigError

logger = getLogger(__name__)

REPORT_COLUMNS = ['n', 'model', 'method', 'alpha', 'k0', 'k', 'mean', 'bias', 'mse', 'coverage', 'avg_length', 'failures']
INTEGER_COLUMNS = ['n', 'k0', 'k', 'failures']
FLOAT_COLUMNS = ['alpha', 'mean', 'bias', 'mse', 'coverage', 'avg_length']
SORT_COLUMNS = ['n', 'method', 'alpha', 'k0']

FLOAT_FORMAT = '%.10g'


def round_significant(value: float) -> float:
    """ The double closest to value printed with 10 significant digits """
    return float(FLOAT_FORMAT % value) if np.isfinite(value) else value


class ExperimentReport:
    """
    Aggregated Monte Carlo results, one row per (n, method, alpha, k0).

    Attributes:
        rows: (DataFrame) report rows in canonical order
        seed: (int) base seed of the experiment
        schema_version: (int) version of the CSV layout
    """

    SCHEMA_VERSION = 1

    def __init__(self, rows: DataFrame, seed: int, schema_version: int = SCHEMA_VERSION):
        missing = [column for column in REPORT_COLUMNS if column not in rows]
        if missing:
            raise ConfigError('Report rows miss columns {}'.format(missing))

        rows = rows[REPORT_COLUMNS].copy()
        for column in INTEGER_COLUMNS:
            rows[column] = rows[column].astype(np.int64)
        for column in FLOAT_COLUMNS:
            rows[column] = rows[column].astype(np.float64)
        rows['model'] = rows['model'].astype(str)
        rows['method'] = rows['method'].astype(str)

        self.rows = rows.sort_values(SORT_COLUMNS, kind='mergesort', na_position='first').reset_index(drop=True)
        self.seed = int(seed)
        self.schema_version = int(schema_version)

    @classmethod
    def from_records(cls, records: Iterable[Dict], seed: int) -> 'ExperimentReport':
        return cls(DataFrame(list(records), columns=REPORT_COLUMNS), seed)

    def __len__(self):
        return len(self.rows)

    def to_csv_string(self) -> str:
        return self.rows.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep='', lineterminator='\n')

    def to_csv(self, path: str):
        with open(path, 'w', newline='') as stream:
            stream.write(self.to_csv_string())
        logger.info('Wrote report with {} rows to {}'.format(len(self.rows), path))

    @classmethod
    def from_csv(cls, path_or_buffer, seed: int) -> 'ExperimentReport':
        if isinstance(path_or_buffer, str) and '\n' in path_or_buffer:
            path_or_buffer = io.StringIO(path_or_buffer)
        return cls(read_csv(path_or_buffer, keep_default_na=False, na_values=['']), seed)

    def rounded(self) -> DataFrame:
        """ Rows as they read back from CSV """
        rows = self.rows.copy()
        for column in FLOAT_COLUMNS:
            rows[column] = rows[column].map(round_significant)
        return rows

    def select(self, method: str, alpha: Optional[float] = None, n: Optional[int] = None) -> DataFrame:
        mask = self.rows['method'] == method
        if alpha is not None:
            mask &= np.isclose(self.rows['alpha'], alpha)
        if n is not None:
            mask &= self.rows['n'] == n
        return self.rows[mask]

    def series(self, value: str = 'mean') -> DataFrame:
        """
        Plot-ready frame: a k0 column and one column per method label.

        :param value: (str) report column to spread, e.g. 'mean' or 'mse'
        :return: (DataFrame) wide frame indexed by k0
        """
        frame = self.rows.copy()
        frame['series'] = [
            method if np.isnan(alpha) else '{}_{:.4g}'.format(method, alpha)
            for method, alpha in zip(frame['method'], frame['alpha'])
        ]
        wide = frame.pivot_table(index='k0', columns='series', values=value, aggfunc='first')
        wide.columns.name = None
        return wide.reset_index()
