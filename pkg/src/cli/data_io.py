"""
Plain-text data files (one value per line, '#' comments) and CSV output.
"""
import math
import os
from logging import getLogger
from typing import List, Optional

import numpy as np
from pandas import DataFrame

from src.error import InputError
from src.montecarlo.config import MIN_SAMPLE_SIZE
from src.montecarlo.report import FLOAT_FORMAT

logger = getLogger(__name__)


def parse_values(lines: List[str], source: str = '<input>') -> np.ndarray:
    """
    Parse one real number per line.

    Text after '#' is ignored, blank lines are skipped. Accepts '.' decimals and scientific
    notation independently of the locale.

    :param lines: (list of str) file content
    :param source: (str) name used in diagnostics
    :return: (np.ndarray) values in file order
    """
    values = []
    for line_number, line in enumerate(lines, start=1):
        text = line.split('#', 1)[0].strip()
        if not text:
            continue
        try:
            value = float(text)
        except ValueError:
            raise InputError('{}:{}: cannot parse "{}" as a number'.format(source, line_number, text))
        if not math.isfinite(value):
            raise InputError('{}:{}: value "{}" is not finite'.format(source, line_number, text))
        values.append(value)

    if len(values) < MIN_SAMPLE_SIZE:
        raise InputError('{}: need at least {} values, found {}'.format(source, MIN_SAMPLE_SIZE, len(values)))
    return np.array(values, dtype=np.float64)


def read_values(path: str) -> np.ndarray:
    try:
        with open(path, 'r') as stream:
            lines = stream.readlines()
    except (OSError, UnicodeDecodeError) as error:
        raise InputError('Unable to read {}: {}'.format(path, error))
    values = parse_values(lines, source=path)
    logger.info('Read {} values from {}'.format(values.size, path))
    return values


def frame_to_csv(frame: DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep='', lineterminator='\n')


def write_frame(frame: DataFrame, path: str):
    with open(path, 'w', newline='') as stream:
        stream.write(frame_to_csv(frame))
    logger.info('Wrote {} rows to {}'.format(len(frame), path))


def sibling_path(path: str, suffix: str) -> str:
    """ 'out/report.csv' with suffix 'mean_series' gives 'out/report_mean_series.csv' """
    stem, extension = os.path.splitext(path)
    return '{}_{}{}'.format(stem, suffix, extension or '.csv')


def output_directory(path: Optional[str]):
    directory = os.path.dirname(path) if path else ''
    if directory:
        os.makedirs(directory, exist_ok=True)
