"""
The module contains functions of the reduced one-item search dynamics
and Grover class building the corresponding full oracle problem.

"""


import logging

from numpy import (
    angle,
    arccos,
    arcsin,
    asarray,
    ceil,
    cos,
    einsum,
    exp,
    eye,
    ones,
    pi,
    sin,
    sqrt,
    zeros,
)
from numpy import abs as np_abs
from scipy.linalg import expm

from common.constants import (
    NORM_TOLERANCE,
    FgComparison,
    GroverQueryParams,
    GroverState,
)
from common.exceptions import InvariantError
from common.linear_algebra import completing_unitary, dagger, ket, projector
from common.utils import get_default, get_repr
from scripts.oracle_object import (
    FullControlSchedule,
    OracleProblem,
    RepurifiedSchedule,
)


logger = logging.getLogger(__name__)

MODES = ('continuous', 'discrete')


def plus_vector(n_items: int):
    """Returns uniform superposition |+> over the items."""
    return ones(n_items) / sqrt(n_items)


def minus_vector(n_items: int, item: int):
    """Returns unit vector |-_j> along |j> orthogonal to |+>."""
    vector = ket(item, n_items) - plus_vector(n_items) / sqrt(n_items)
    return vector / sqrt((n_items - 1) / n_items)


def grover_projectors(n_items: int):
    """Returns projectors onto |+> and onto its complement."""
    plus = projector(plus_vector(n_items))
    return [plus, eye(n_items) - plus]


def _check_items(n_items: int):
    if n_items < 2:
        raise InvariantError('number of items must exceed 1')


def pwin_from_x(x: float, n_items: int) -> float:
    """Returns success probability of the pretty good measurement
    for Alice's operator with coefficient x at |+><+|."""
    _check_items(n_items)
    if not -NORM_TOLERANCE <= x <= 1 + NORM_TOLERANCE:
        raise InvariantError(f'x={x} is outside [0, 1]')
    x = min(max(x, 0.0), 1.0)
    value = (sqrt(x) + sqrt((n_items - 1) * (1 - x))) ** 2 / n_items
    if 1 < value <= 1 + NORM_TOLERANCE:
        value = 1.0
    return float(value)


def continuous_exact_time(n_items: int) -> float:
    """Returns minimal time of the zero-error continuous search."""
    _check_items(n_items)
    return float(
        n_items / (pi * sqrt(n_items - 1)) * arccos(1 / sqrt(n_items))
    )


def continuous_bounded_time(n_items: int) -> float:
    """Returns time at which x = 1/2."""
    _check_items(n_items)
    return n_items / (4 * sqrt(n_items - 1))


def continuous_x(t: float, n_items: int) -> float:
    """Returns x(t) of the optimal continuous protocol."""
    return float(cos(pi * sqrt(n_items - 1) * t / n_items) ** 2)


def continuous_state(t: float, n_items: int) -> GroverState:
    """Returns reduced state flagged when t is past the zero-error time."""
    return GroverState(
        x=continuous_x(t, n_items),
        n_items=n_items,
        t=t,
        past_optimum=t > continuous_exact_time(n_items),
    )


def query_params(n_items: int, delta: float = 1.0) -> GroverQueryParams:
    """Returns alpha = <+|O|+> and beta = <+|O|-_j> of the fractional query."""
    _check_items(n_items)
    kick = 1 - exp(-1j * pi * delta)
    alpha = 1 - kick / n_items
    beta = -kick * sqrt(n_items - 1) / n_items
    if abs(np_abs(alpha) ** 2 + np_abs(beta) ** 2 - 1) > NORM_TOLERANCE:
        raise InvariantError('|alpha|^2 + |beta|^2 differs from 1')
    return GroverQueryParams(alpha=alpha, beta=beta, delta=delta)


def _moduli(n_items: int, delta: float):
    beta = 2 * sin(pi * delta / 2) * sqrt(n_items - 1) / n_items
    return sqrt(1 - beta ** 2), beta


def discrete_step_optimal(x: float, n_items: int, delta: float) -> float:
    """Returns x after one non-terminal optimal query."""
    alpha, beta = _moduli(n_items, delta)
    return float((alpha * sqrt(x) - beta * sqrt(1 - x)) ** 2)


def discrete_query_count(n_items: int, delta: float = 1.0) -> int:
    """Returns number of queries of the zero-error discrete search."""
    _check_items(n_items)
    if not 0 < delta <= 1:
        raise InvariantError('delta must be in (0, 1]')
    _, beta = _moduli(n_items, delta)
    ratio = arccos(1 / sqrt(n_items)) / arcsin(min(beta, 1.0))
    if abs(ratio - round(ratio)) < 1e-9:
        return max(int(round(ratio)), 1)
    return int(ceil(ratio))


def discrete_exact_time(n_items: int, delta: float = 1.0) -> float:
    """Returns time of the zero-error discrete search."""
    return delta * discrete_query_count(n_items, delta)


def terminal_coherence(x: float, n_items: int, delta: float) -> float:
    """
    Returns signed sqrt of the reduced coherence weight c' spent
    by the last query, which lands exactly on x = 1/N.

    """
    alpha, beta = _moduli(n_items, delta)
    root = (alpha * sqrt(x) - 1 / sqrt(n_items)) / beta
    if root ** 2 > 1 - x + NORM_TOLERANCE:
        raise InvariantError('terminal query cannot reach x = 1/N')
    return float(root)


def discrete_trajectory(n_items: int, delta: float = 1.0):
    """Returns x after each query of the zero-error discrete search."""
    count = discrete_query_count(n_items, delta)
    values = [1.0]
    for _ in range(count - 1):
        values.append(discrete_step_optimal(values[-1], n_items, delta))
    terminal_coherence(values[-1], n_items, delta)
    values.append(1 / n_items)
    return values


def fg_success_probability(t: float, n_items: int) -> float:
    """Returns probability of the marked item under pi|j><j| + pi|+><+|."""
    phase = pi * t / sqrt(n_items)
    return float(sin(phase) ** 2 + cos(phase) ** 2 / n_items)


def fg_comparison(n_items: int) -> FgComparison:
    """Returns optimal and Farhi-Gutmann zero-error times."""
    t_optimal = continuous_exact_time(n_items)
    t_fg = sqrt(n_items) / 2
    return FgComparison(
        t_optimal=t_optimal,
        t_fg=float(t_fg),
        gap=float(t_fg - t_optimal),
    )


def realized_hamiltonian(n_items: int, item: int):
    """Returns pi|j><j| + pi (N - 2)/N |+><+| on the item space."""
    return pi * (
        projector(ket(item, n_items))
        + (n_items - 2) / n_items * projector(plus_vector(n_items))
    )


def realized_states(n_items: int, t: float):
    """Returns matrix whose column j is exp(-i H_j t)|+>."""
    frequency = pi * sqrt(n_items - 1) / n_items
    common = exp(-1j * pi * t * (n_items - 1) / n_items)
    plus = plus_vector(n_items)
    states = zeros((n_items, n_items), dtype=complex)
    for item in range(n_items):
        states[:, item] = common * (
            cos(frequency * t) * plus
            - 1j * sin(frequency * t) * minus_vector(n_items, item)
        )
    return states


def verify_unitary_realization(n_items: int, dt: float) -> float:
    """
    Integrates exp(-i H_j dt) for every item up to the zero-error time and
    returns the max deviation from the closed-form states, from x(t),
    and from mutual orthogonality at the final time.

    """
    horizon = continuous_exact_time(n_items)
    n_steps = int(ceil(horizon / dt))
    step = horizon / n_steps
    propagators = [
        expm(-1j * realized_hamiltonian(n_items, item) * step)
        for item in range(n_items)
    ]
    propagators = asarray(propagators)
    states = realized_states(n_items, 0.0)
    deviation = 0.0
    for number in range(1, n_steps + 1):
        states = einsum('jab,bj->aj', propagators, states)
        t = number * step
        x = float((np_abs(states.mean(axis=1)) ** 2).sum())
        deviation = max(
            deviation,
            np_abs(states - realized_states(n_items, t)).max(),
            abs(x - continuous_x(t, n_items)),
        )
    gram = dagger(states) @ states
    deviation = max(deviation, np_abs(gram - eye(n_items)).max())
    logger.debug('Realization deviation for N=%d: %.3g', n_items, deviation)
    return float(deviation)


class Grover(OracleProblem):
    """
    Class defining one-item search as the full oracle problem.

    Parameters
    ----------
    n_items: int
        Number of items N; A is the item space.
    mode: str
        'continuous' for the Hamiltonian oracle pi|j><j| on the query
        register, 'discrete' for its fractional power of time step delta.
    delta: float
        Time step of the discrete oracle, ignored otherwise.

    The query register M has the null query 0 and items 1..N,
    the answer register M' coincides with M.

    """

    def __init__(
            self,
            n_items: int,
            mode: str = 'continuous',
            delta: float = None,
    ):
        """Initializes the problem."""
        _check_items(n_items)
        if mode not in MODES:
            raise InvariantError(f'unknown mode {mode!r}')
        self.n_items = n_items
        self.mode = mode
        dim_m = n_items + 1
        if mode == 'discrete':
            delta = get_default(delta, 1.0)
            table = ones((n_items, dim_m), dtype=complex)
            for item in range(n_items):
                table[item, item + 1] = exp(-1j * pi * delta)
            dim_b = dim_m
        else:
            delta = None
            table = zeros((n_items, dim_m))
            for item in range(n_items):
                table[item, item + 1] = pi
            dim_b = 1
        verifiers = [
            n_items * projector(ket(item * dim_m + item + 1, n_items * dim_m))
            for item in range(n_items)
        ]
        super().__init__(
            psi0=plus_vector(n_items),
            phase_table=table,
            verifiers=verifiers,
            delta=delta,
            dim_m_prime=dim_m,
            dim_b=dim_b,
        )

    def __repr__(self):
        """Method returns string representation of the problem."""
        return get_repr(self, 'n_items', 'mode', 'delta')

    def reduced_x(self, rho) -> float:
        """Returns x = <+|rho|+>."""
        plus = plus_vector(self.n_items)
        return float((plus @ rho @ plus).real)

    def effective_step(self, dt: float, horizon: float = None) -> float:
        """Returns step that divides the horizon into whole steps."""
        horizon = get_default(horizon, continuous_exact_time(self.n_items))
        return horizon / int(ceil(horizon / dt))

    def optimal_controls(self, dt: float = None, horizon: float = None):
        """Returns Bob's schedule of the optimal protocol."""
        if self.mode == 'discrete':
            return RepurifiedSchedule(
                n_steps=discrete_query_count(self.n_items, self.delta),
                dim=self.dim_global,
                target=self._discrete_target,
            )
        return self._continuous_controls(dt, horizon)

    def _continuous_controls(self, dt: float, horizon: float = None):
        """
        Bob prepares |+> on the item part of M and then applies
        exp(-i H' dt) with H' = pi (N - 2)/N |+><+|; the first step
        is a half step.

        """
        horizon = get_default(horizon, continuous_exact_time(self.n_items))
        step = self.effective_step(dt, horizon)
        n_steps = int(round(horizon / step))
        plus = zeros(self.dim_m, dtype=complex)
        plus[1:] = plus_vector(self.n_items)
        hamiltonian = pi * (self.n_items - 2) / self.n_items * projector(plus)
        preparation = completing_unitary(plus)
        first = expm(-0.5j * hamiltonian * step) @ preparation
        rest = expm(-1j * hamiltonian * step)
        return FullControlSchedule(
            steps=[first] + [rest] * (n_steps - 1),
        )

    def _discrete_target(self, step: int, psi):
        """Returns purification whose rows query |+> and |-_j>
        with the phases aligned to alpha and beta."""
        size = self.n_items
        x = min(max(self.reduced_x(psi @ dagger(psi)), 0.0), 1.0)
        params = query_params(size, self.delta)
        upper = sqrt(x) * exp(-1j * angle(params.alpha))
        lower = -sqrt(1 - x) * exp(-1j * angle(params.beta))
        parked = 0.0
        if step == discrete_query_count(size, self.delta) - 1:
            root = terminal_coherence(x, size, self.delta)
            lower = -root * exp(-1j * angle(params.beta))
            parked = sqrt(max(1 - x - root ** 2, 0.0))
        target = zeros((size, self.dim_m, self.dim_b), dtype=complex)
        for item in range(size):
            minus = minus_vector(size, item)
            target[item, 1:, 0] = (
                upper * plus_vector(size) + lower * minus
            )
            target[item, 0, 1:] = parked * minus
        return target.reshape(size, self.dim_global) / sqrt(size)
