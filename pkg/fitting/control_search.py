"""
This module contains pattern search over piecewise constant controls
of the reduced interrogation dynamics and the bisection on time built
on top of it.

"""


import logging

from numpy import array, eye
from numpy.random import default_rng
from pretty_repr import RepresentableObject
from scipy.linalg import expm

from common.constants import (
    InterrogationControls,
    Segment,
    SearchConfig,
    UpperBound,
)
from common.exceptions import InvariantError
from common.utils import get_time_of_execution
from scripts.interrogation_object import (
    generator,
    initial_state,
    min_time_lower_bound,
    project,
    pwin_interrogation,
    pwin_xor,
    random_schedule,
    rotation_schedule,
    schedule_records,
)


logger = logging.getLogger(__name__)

OBJECTIVES = {
    'interrogation': pwin_interrogation,
    'xor': pwin_xor,
}
INITIAL_STEP = 0.5
EXACT_TARGET_SLACK = 1e-4
TIME_RESOLUTION = 1e-3


class SearchResult(RepresentableObject):
    """
    Class with the best schedule found by the pattern search.

    Parameters
    ----------
    best_controls : list of Segment
        Admissible piecewise constant controls.
    best_pwin : float
        Success probability reached by the controls.
    history : list of float
        Best success after every sweep of every restart.
    restart_pwins : list of float
        Final success of every restart.

    """

    def __init__(
            self,
            best_controls,
            best_pwin: float,
            history,
            restart_pwins,
    ):
        """Initialize self. See help(type(self)) for accurate signature."""
        self.best_controls = best_controls
        self.best_pwin = best_pwin
        self.history = history
        self.restart_pwins = restart_pwins

    def schedule_records(self):
        """Returns controls as JSON-ready segment records."""
        return schedule_records(self.best_controls)


def check_config(config: SearchConfig) -> SearchConfig:
    """Returns the config if it describes a valid search."""
    if config.segments < 1 or config.restarts < 1:
        raise InvariantError('segments and restarts must be positive')
    if config.horizon <= 0:
        raise InvariantError('horizon must be positive')
    if config.objective not in OBJECTIVES:
        raise InvariantError(f'unknown objective {config.objective!r}')
    return config


class ControlSearch:
    """Coordinate pattern search with projection onto the control discs."""

    def __init__(self, config: SearchConfig):
        """Initializes the search."""
        self.config = check_config(config)
        self.size = config.n_bits + 1
        self.step = config.horizon / config.segments
        self.objective = OBJECTIVES[config.objective]
        self.start = initial_state(config.n_bits).a
        self.variables = (
            [(0, index) for index in range(config.n_bits)]
            + [(1, index) for index in range(1, self.size)]
        )

    def propagator(self, b_row, c_row):
        """exp(M h) of one segment"""
        return expm(
            generator(InterrogationControls(b=b_row, c=c_row)) * self.step
        )

    def evaluate(self, controls) -> float:
        """Returns success probability of the final state."""
        amplitudes = self.start
        for b_row, c_row in zip(*controls):
            amplitudes = self.propagator(b_row, c_row) @ amplitudes
        return self.objective(amplitudes)

    def seed(self, number: int, random):
        """Returns initial controls of the restart."""
        arguments = (
            self.config.n_bits, self.config.horizon, self.config.segments,
        )
        schedule = (
            rotation_schedule(*arguments) if number == 0
            else random_schedule(*arguments, random)
        )
        return (
            array([item.b for item in schedule]),
            array([item.c for item in schedule]),
        )

    def _moved(self, b_row, c_row, variable, shift):
        rows = [b_row.copy(), c_row.copy()]
        kind, index = variable
        rows[kind][index] += shift
        return project(*rows)

    def _local_sweep(self, controls, best, step):
        """Tries moves of one variable in one segment, accepting the
        first improvement."""
        b, c = controls
        propagators = [self.propagator(*rows) for rows in zip(b, c)]
        suffixes = [eye(self.size)] * len(propagators)
        for number in range(len(propagators) - 2, -1, -1):
            suffixes[number] = suffixes[number + 1] @ propagators[number + 1]
        prefix = self.start
        improved = False
        for number, suffix in enumerate(suffixes):
            for variable in self.variables:
                for shift in (step, -step):
                    b_row, c_row = self._moved(
                        b[number], c[number], variable, shift,
                    )
                    propagator = self.propagator(b_row, c_row)
                    value = self.objective(suffix @ (propagator @ prefix))
                    if value > best:
                        b[number], c[number] = b_row, c_row
                        propagators[number] = propagator
                        best, improved = value, True
                        break
            prefix = propagators[number] @ prefix
        return best, improved

    def _global_sweep(self, controls, best, step):
        """Tries shifts of one variable in all segments at once."""
        b, c = controls
        improved = False
        for variable in self.variables:
            for shift in (step, -step):
                moved = [
                    self._moved(b_row, c_row, variable, shift)
                    for b_row, c_row in zip(b, c)
                ]
                trial = (array([row[0] for row in moved]),
                         array([row[1] for row in moved]))
                value = self.evaluate(trial)
                if value > best:
                    b[:], c[:] = trial
                    best, improved = value, True
                    break
        return best, improved

    def _reached(self, value) -> bool:
        target = self.config.target_pwin
        return target is not None and value >= target

    def restart(self, controls, history, record: float):
        """Runs one restart in place and returns its success."""
        best = self.evaluate(controls)
        step, sweeps = INITIAL_STEP, 0
        while (
                step >= self.config.tolerance
                and sweeps < self.config.max_sweeps
                and not self._reached(best)
        ):
            best, improved = self._local_sweep(controls, best, step)
            best, moved = self._global_sweep(controls, best, step)
            if not improved and not moved:
                step /= 2
            sweeps += 1
            history.append(max(record, best))
        return best

    @get_time_of_execution
    def run(self) -> SearchResult:
        """Returns the best result over all restarts."""
        random = default_rng(self.config.seed)
        history, pwins = [], []
        best_pwin, best_controls = -1.0, None
        for number in range(self.config.restarts):
            controls = self.seed(number, random)
            value = self.restart(controls, history, max(best_pwin, 0.0))
            pwins.append(value)
            logger.info('Restart %d: pwin=%.8f', number, value)
            if value > best_pwin:
                best_pwin, best_controls = value, controls
            if self._reached(best_pwin):
                break
        schedule = [
            Segment(duration=self.step, b=b_row, c=c_row)
            for b_row, c_row in zip(*best_controls)
        ]
        return SearchResult(
            best_controls=schedule,
            best_pwin=best_pwin,
            history=history or [best_pwin],
            restart_pwins=pwins,
        )


def optimize_controls(config: SearchConfig) -> SearchResult:
    """Returns the best admissible schedule found for the config."""
    return ControlSearch(config).run()


def search_threshold(target_pwin: float) -> float:
    """Returns success threshold, slackened for exact targets."""
    if target_pwin >= 1 - 1e-6:
        return 1 - EXACT_TARGET_SLACK
    return target_pwin


def min_time_upper_bound(
        n_bits: int,
        target_pwin: float,
        template: SearchConfig,
        resolution: float = TIME_RESOLUTION,
) -> UpperBound:
    """
    Returns least time on the bisection grid at which the search reaches
    the target, an upper bound on the optimum, together with the lower
    bound. The interval starts from the lower bound and T = n.

    """
    if not 0.5 < target_pwin <= 1:
        raise InvariantError('target success must be in (1/2, 1]')
    threshold = search_threshold(target_pwin)
    lower = (
        min_time_lower_bound(n_bits, threshold).time if n_bits > 1 else 0.0
    )

    def search(horizon):
        return optimize_controls(template._replace(
            n_bits=n_bits, horizon=horizon, target_pwin=threshold,
        ))

    high, result = float(n_bits), search(float(n_bits))
    if result.best_pwin < threshold:
        logger.warning('Target %.6f not reached at T=%d', threshold, n_bits)
        return UpperBound(
            time=high, lower_bound=lower, pwin=result.best_pwin,
            result=result, found=False,
        )
    low = lower
    while high - low > resolution:
        middle = (low + high) / 2
        trial = search(middle)
        if trial.best_pwin >= threshold:
            high, result = middle, trial
        else:
            low = middle
    return UpperBound(
        time=high, lower_bound=lower, pwin=result.best_pwin,
        result=result, found=True,
    )
