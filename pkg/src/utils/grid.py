from typing import List, Union

import numpy as np

from src.error import ConfigError


def expand_grid_axis(values: Union[str, List, int, float]) -> List:
    """
    Convert a config value to the list of values for one grid axis.

    Accepts a list, a single number, or an 'arange(min, max, step)' string. The arange form
    yields integers when all three parts are integral.

    :param values: (str, list or number) config value
    :return: (list) expanded axis values
    """
    if isinstance(values, list):
        return values

    if isinstance(values, (int, float)) and not isinstance(values, bool):
        return [values]

    if isinstance(values, str) and values.replace(' ', '').startswith('arange('):
        parts_str = values.strip()[len('arange'):].strip()[1:-1]
        try:
            parts = [float(part) for part in parts_str.split(',')]
            start, stop, step = parts
        except ValueError:
            raise ConfigError('Unable to parse grid axis values: {}'.format(values))

        if step <= 0 or stop <= start:
            raise ConfigError('Empty grid axis: {}'.format(values))

        if all(part == int(part) for part in parts):
            return [int(value) for value in np.arange(int(start), int(stop), int(step))]
        return [float(np.round(value, decimals=10)) for value in np.arange(start, stop, step)]

    raise ConfigError(
        'Unable to parse grid axis values: {}'.format(values)
    )
