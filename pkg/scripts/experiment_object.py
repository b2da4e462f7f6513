"""The module contains ExperimentReport class."""


import logging
from datetime import datetime, timezone
from json import dump

import numpy
import pandas
import scipy
from pretty_repr import RepresentableObject

from common.constants import VERSION, Check
from common.path_utils import get_paths
from common.utils import OpenedFile, to_serializable


logger = logging.getLogger(__name__)

COMPARISONS = {
    'close': lambda value, expected, tolerance: (
        abs(value - expected) <= tolerance
    ),
    'max': lambda value, expected, tolerance: value <= expected + tolerance,
    'min': lambda value, expected, tolerance: value >= expected - tolerance,
}


class ExperimentReport(RepresentableObject):
    """
    Class with results of one command-line experiment.

    Parameters
    ----------
    name : str
        Base name of the report files.
    seed : int
        Seed of the random generators, if any was used.
    tolerances : dict
        Tolerances the experiment was run with.

    """

    def __init__(self, name: str, seed: int = None, tolerances: dict = None):
        """Initialize self. See help(type(self)) for accurate signature."""
        self.name = name
        self.scalars = {}
        self.checks = {}
        self.curves = {}
        self.metadata = {
            'seed': seed,
            'tolerances': tolerances or {},
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'versions': {
                'hamoracle': VERSION,
                'numpy': numpy.__version__,
                'scipy': scipy.__version__,
                'pandas': pandas.__version__,
            },
        }

    def add_scalar(self, name: str, value):
        """Adds value reported without a check."""
        self.scalars[name] = value

    def add_check(
            self,
            name: str,
            value,
            expected,
            tolerance: float = 0.0,
            comparison: str = 'close',
    ) -> Check:
        """Adds value compared with the expected one."""
        passed = bool(
            value is not None
            and COMPARISONS[comparison](value, expected, tolerance)
        )
        check = Check(
            value=value, expected=expected, tolerance=tolerance, passed=passed,
        )
        self.checks[name] = check
        if not passed:
            logger.warning(
                'Check %s failed: %s against %s', name, value, expected,
            )
        return check

    def add_curve(self, name: str, frame: pandas.DataFrame):
        """Adds table of samples."""
        self.curves[name] = frame

    def merge(self, other: 'ExperimentReport', prefix: str = None):
        """Adds scalars, checks and curves of another report."""
        prefix = f'{prefix or other.name}.'
        for source, target in (
                (other.scalars, self.scalars),
                (other.checks, self.checks),
                (other.curves, self.curves),
        ):
            for key, value in source.items():
                target[prefix + key] = value

    def failed(self):
        """Returns names of failed checks."""
        return [name for name, check in self.checks.items() if not check.passed]

    def to_dict(self) -> dict:
        """Returns JSON-ready content of the report."""
        return to_serializable({
            'name': self.name,
            'scalars': self.scalars,
            'checks': self.checks,
            'curves': {
                key: frame.to_dict(orient='list')
                for key, frame in self.curves.items()
            },
            'metadata': self.metadata,
        })

    def save(self, out_dir: str = None, csv: bool = False):
        """Writes <name>.json and, optionally, one CSV per curve."""
        paths = [get_paths(self.name, '.json', out_dir)]
        with OpenedFile(paths[0], mode='w') as file:
            dump(self.to_dict(), file, indent=4, sort_keys=True)
        if csv:
            single = len(self.curves) == 1
            for key, frame in self.curves.items():
                path = get_paths(
                    self.name, '.csv', out_dir, suffix=None if single else key,
                )
                with OpenedFile(path, mode='w') as file:
                    frame.to_csv(file, index=False, float_format='%.12g')
                paths.append(path)
        return paths
