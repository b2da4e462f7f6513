"""
The module contains some common functions that used in this project.

"""


import logging
import os
from datetime import datetime
from functools import wraps
from json import load
from os.path import join
from tempfile import NamedTemporaryFile

from numpy import bool_, floating, integer, ndarray

from common.constants import JSON_DIR, SIGNIFICANT_DIGITS


LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

logger = logging.getLogger(__name__)


def configure_logging(verbose=False):
    """Configures the root logger once for the command line."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
    )


def get_default(value, default):
    """Returns default if value is None, else it returns value."""
    return default if (value is None) else value


def round_significant(value, digits=SIGNIFICANT_DIGITS):
    """Rounds float to the number of significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (integer, int)):
        return int(value)
    return float(f'{float(value):.{digits}g}')


def to_serializable(obj, digits=SIGNIFICANT_DIGITS):
    """Converts nested containers of numpy values to JSON-ready objects
    with floats rounded to significant digits."""
    if isinstance(obj, dict):
        return {
            str(key): to_serializable(value, digits)
            for key, value in obj.items()
        }
    if isinstance(obj, ndarray):
        return to_serializable(obj.tolist(), digits)
    if isinstance(obj, (list, tuple)):
        if hasattr(obj, '_asdict'):
            return to_serializable(obj._asdict(), digits)
        return [to_serializable(value, digits) for value in obj]
    if isinstance(obj, bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [round_significant(obj.real), round_significant(obj.imag)]
    if isinstance(obj, (float, floating, int, integer)):
        return round_significant(obj, digits)
    return obj


def get_time_of_execution(function):
    """Logs time of function's execution."""
    @wraps(function)
    def wrapper(*args, **kwargs):
        start_time = datetime.now()
        result = function(*args, **kwargs)
        logger.info(
            'Time of %s: %s', function.__name__, datetime.now() - start_time,
        )
        return result
    return wrapper


def get_repr(obj, *args):
    """Method returns string representation of the object."""
    result = f'{obj.__class__.__name__}('
    for arg in args:
        result += f'{arg}={obj.__getattribute__(arg)!r}, '
    return f'{result.rstrip(", ")})'


class OpenedFile:
    """Context manager for file opening.
    Files opened for writing are replaced atomically on exit."""
    def __init__(self, name: str, mode='r'):
        """Initialization of class"""
        self.name = name
        self.file = None
        self.mode = mode

    def __enter__(self):
        """Method for entrance to context manager"""
        if self.mode == 'r':
            self.file = open(self.name, mode=self.mode, encoding='utf-8')
        else:
            logger.info('Saving file "%s"...', self.name)
            self.file = NamedTemporaryFile(
                mode=self.mode,
                encoding='utf-8',
                dir=os.path.dirname(os.path.abspath(self.name)),
                prefix='.tmp_',
                delete=False,
            )
        return self.file

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Method for exit from context manager"""
        if self.file:
            self.file.close()
            if self.mode != 'r':
                if exc_type is None:
                    os.replace(self.file.name, self.name)
                    logger.info('File "%s" is saved.', self.name)
                else:
                    os.remove(self.file.name)


def get_json_object(file_name: str, directory=JSON_DIR):
    """Returns object from JSON file"""
    with OpenedFile(join(directory, file_name)) as file:
        obj = load(file)
    return obj
