from argparse import ArgumentTypeError
from typing import Optional

from src.error import ConfigError
from src.montecarlo.rules import SweepK0


def sweeper(default: Optional[SweepK0] = None):
    """
    ArgParser arguments for a k0 sweep.
    Allows converting a "LO HI [STEP]" argument to a SweepK0.

    :param default: (SweepK0 or None) value when the flag is absent
    :return: (dict) to be passed to parser using parser.add_argument(**sweeper())
    """
    def sweep_converter(value_str: str) -> SweepK0:
        parts = value_str.replace(',', ' ').split()
        if len(parts) not in (2, 3):
            raise ArgumentTypeError('expected "LO HI [STEP]", got "{}"'.format(value_str))
        try:
            return SweepK0(*(int(part) for part in parts))
        except (ValueError, ConfigError) as error:
            raise ArgumentTypeError(str(error))
    return {
        'type': sweep_converter,
        'default': default,
        'metavar': '"LO HI STEP"',
    }
