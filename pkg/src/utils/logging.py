import logging
import sys

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def use_logging_mode(verbose: bool = False):
    """
    Configure the root logger on stderr, keeping stdout free for tables and CSV.

    :param verbose: (bool) log at DEBUG instead of WARNING
    :return: None
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        force=True,
    )
