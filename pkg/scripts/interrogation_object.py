"""
The module contains functions of the symmetry-reduced dynamics of
oracle interrogation and XOR, the query-time lower bounds, and
Interrogation class building the corresponding full oracle problem.

"""


import logging

from numpy import (
    abs as np_abs,
    arange,
    array,
    asarray,
    ceil,
    cos,
    cumsum,
    diag,
    dot,
    e,
    exp,
    log,
    ndarray,
    ones,
    pi,
    searchsorted,
    sin,
    sqrt,
    zeros,
)
from scipy.linalg import expm
from scipy.special import comb, factorial, gammaln
from scipy.stats import binom

from common.constants import (
    CONSTRAINT_TOLERANCE,
    HALF_PI,
    EnvelopeBound,
    InterrogationControls,
    LowerBound,
    ReducedTrajectory,
    Segment,
    SphereState,
)
from common.exceptions import ConstraintError, DimensionError, InvariantError
from common.linear_algebra import hadamard_matrix, ket, projector
from common.utils import get_default, get_repr
from scripts.oracle_object import (
    OracleProblem,
    RepurifiedSchedule,
    symmetrize_reduced,
)


logger = logging.getLogger(__name__)

OBJECTIVES = ('interrogation', 'xor')
MODES = ('continuous', 'discrete')


def _amplitudes(state):
    return asarray(getattr(state, 'a', state), dtype=float)


def _check_objective(objective: str):
    if objective not in OBJECTIVES:
        raise InvariantError(f'unknown objective {objective!r}')


def hamming_weights(n_bits: int):
    """Returns Hamming weight of every integer below 2^n."""
    weights = zeros(2 ** n_bits, dtype=int)
    for bit in range(n_bits):
        weights += (arange(2 ** n_bits) >> bit) & 1
    return weights


def interrogation_projectors(n_bits: int):
    """Returns projectors onto Hadamard basis vectors of fixed weight."""
    hadamard = hadamard_matrix(n_bits)
    weights = hamming_weights(n_bits)
    return [
        hadamard @ diag((weights == weight).astype(float)) @ hadamard
        for weight in range(n_bits + 1)
    ]


def target_vector(n_bits: int) -> SphereState:
    """Returns zero-error final state with binomial square roots."""
    weights = comb(n_bits, arange(n_bits + 1)) / 2 ** n_bits
    return SphereState(a=sqrt(weights), n_bits=n_bits, t=None)


def n1_optimal_state(t: float) -> SphereState:
    """Returns state of the time-optimal one-bit protocol."""
    return SphereState(
        a=array([cos(HALF_PI * t), sin(HALF_PI * t)]), n_bits=1, t=t,
    )


def pwin_interrogation(state) -> float:
    """Returns (|a| . a_f)^2, the pretty good measurement success."""
    amplitudes = _amplitudes(state)
    target = target_vector(len(amplitudes) - 1).a
    return float(dot(np_abs(amplitudes), target) ** 2)


def pwin_xor(state) -> float:
    """Returns Helstrom success 1/2 + 1/2 sum |a_j a_{n-j}|."""
    amplitudes = _amplitudes(state)
    return float(0.5 + 0.5 * np_abs(amplitudes * amplitudes[::-1]).sum())


def pwin_upper_envelope(state) -> EnvelopeBound:
    """Returns bound 1/2 + sqrt(sum_{j >= n//2} a_j^2) valid for both
    objectives; values above one are reported as one and flagged."""
    amplitudes = _amplitudes(state)
    n_bits = len(amplitudes) - 1
    value = float(0.5 + sqrt((amplitudes[n_bits // 2:] ** 2).sum()))
    return EnvelopeBound(
        value=value,
        reported=min(value, 1.0),
        vacuous=value > 1,
    )


def tail_norms(state):
    """Returns A_j = sqrt(sum_{k >= j} a_k^2)."""
    amplitudes = _amplitudes(state)
    return sqrt(cumsum((amplitudes ** 2)[::-1])[::-1])


def check_controls(controls, n_bits: int = None):
    """Returns controls whose b and c lie in the unit disc."""
    b, c = asarray(controls.b, dtype=float), asarray(controls.c, dtype=float)
    if b.shape != c.shape or (n_bits is not None and len(b) != n_bits + 1):
        raise DimensionError('controls b and c must have n + 1 entries')
    excess = (b ** 2 + c ** 2 - 1).max()
    if excess > CONSTRAINT_TOLERANCE:
        raise ConstraintError(
            f'b_j^2 + c_j^2 exceeds 1 by {excess:.3g}'
        )
    return InterrogationControls(b=b, c=c)


def project(b_row, c_row):
    """Returns controls scaled into the unit disc per index,
    with b_n = c_0 = 0."""
    b_row, c_row = array(b_row, dtype=float), array(c_row, dtype=float)
    b_row[-1], c_row[0] = 0.0, 0.0
    scale = sqrt(b_row ** 2 + c_row ** 2).clip(min=1.0)
    return b_row / scale, c_row / scale


def generator(controls) -> ndarray:
    """Returns tridiagonal antisymmetric M with
    M[j, j+1] = -(pi/2) b_j c_{j+1}."""
    controls = check_controls(controls)
    superdiagonal = -HALF_PI * controls.b[:-1] * controls.c[1:]
    return diag(superdiagonal, 1) - diag(superdiagonal, -1)


def evolve_reduced(state, schedule, dt: float) -> ReducedTrajectory:
    """
    Integrates da/dt = M a over consecutive segments. Each segment
    is split into equal steps not longer than dt, and every step is
    the exact matrix exponential of the constant generator.

    """
    if dt <= 0:
        raise InvariantError('dt must be positive')
    amplitudes = _amplitudes(state)
    time = get_default(getattr(state, 't', None), 0.0)
    times, values = [time], [amplitudes]
    for segment in schedule:
        check_controls(segment, len(amplitudes) - 1)
        if segment.duration <= 0:
            continue
        n_steps = int(ceil(segment.duration / dt))
        step = segment.duration / n_steps
        propagator = expm(generator(segment) * step)
        for _ in range(n_steps):
            amplitudes = propagator @ amplitudes
            time += step
            times.append(time)
            values.append(amplitudes)
    return ReducedTrajectory(times=array(times), amplitudes=array(values))


def final_state(state, schedule, dt: float) -> SphereState:
    """Returns the last state of evolve_reduced."""
    trajectory = evolve_reduced(state, schedule, dt)
    return SphereState(
        a=trajectory.amplitudes[-1],
        n_bits=trajectory.amplitudes.shape[1] - 1,
        t=float(trajectory.times[-1]),
    )


def initial_state(n_bits: int) -> SphereState:
    """Returns a = (1, 0, ..., 0) at t = 0."""
    return SphereState(a=ket(0, n_bits + 1).real, n_bits=n_bits, t=0.0)


def rotation_schedule(n_bits: int, horizon: float, segments: int = 1):
    """
    Returns schedule querying every bit independently as in the one-bit
    optimum: b_k = sqrt((n - k)/n), c_k = sqrt(k/n). The zero-error state
    is reached at T = n/2.

    """
    weights = arange(n_bits + 1) / n_bits
    controls = InterrogationControls(b=sqrt(1 - weights), c=sqrt(weights))
    return [
        Segment(duration=horizon / segments, b=controls.b, c=controls.c)
        for _ in range(segments)
    ]


def random_schedule(n_bits: int, horizon: float, segments: int, random):
    """Returns schedule with controls uniform in the unit discs."""
    schedule = []
    for _ in range(segments):
        radius = sqrt(random.uniform(size=n_bits + 1))
        angle = random.uniform(0, 2 * pi, size=n_bits + 1)
        b, c = project(radius * cos(angle), radius * sin(angle))
        schedule.append(Segment(duration=horizon / segments, b=b, c=c))
    return schedule


def schedule_records(schedule):
    """Returns schedule as JSON-ready segment records."""
    return [
        {'duration': item.duration, 'b': list(item.b), 'c': list(item.c)}
        for item in schedule
    ]


def load_schedule(records):
    """Returns schedule from segment records."""
    return [
        Segment(
            duration=float(item['duration']),
            b=asarray(item['b'], dtype=float),
            c=asarray(item['c'], dtype=float),
        )
        for item in records
    ]


def grid_schedule(schedule, dt: float):
    """Returns schedule resampled on a uniform grid of steps not longer
    than dt, each step taking the controls at its midpoint."""
    total = sum(segment.duration for segment in schedule)
    n_steps = int(ceil(total / dt))
    step = total / n_steps
    ends = cumsum([segment.duration for segment in schedule])
    result = []
    for number in range(n_steps):
        index = min(
            int(searchsorted(ends, (number + 0.5) * step)), len(schedule) - 1,
        )
        result.append(
            Segment(duration=step, b=schedule[index].b, c=schedule[index].c)
        )
    return result


def discrete_achievable_pwin(
        n_bits: int,
        n_queries: int,
        objective: str = 'interrogation',
) -> float:
    """Returns best success after T queries, when a_j = 0 for j > T."""
    _check_objective(objective)
    if objective == 'xor':
        return 1.0 if n_queries >= int(ceil(n_bits / 2)) else 0.5
    return float(min(binom.cdf(n_queries, n_bits, 0.5), 1.0))


def van_dam_query_count(n_bits: int, target_pwin: float) -> int:
    """Returns the least number of queries reaching the success."""
    if not 0.5 < target_pwin < 1:
        raise InvariantError('target success must be in (1/2, 1)')
    cdf = binom.cdf(arange(n_bits + 1), n_bits, 0.5)
    return int(searchsorted(cdf, target_pwin))


def lower_bound_envelope(n_bits: int, t: float, index: int) -> float:
    """Returns bound (pi t/2)^j / j! on A_j(t)."""
    if not 0 <= index <= n_bits:
        raise InvariantError('index must be in [0, n]')
    return float((HALF_PI * t) ** index / factorial(index))


def asymptotic_lower_bound(n_bits: int) -> float:
    """n/(pi e)"""
    return n_bits / (pi * e)


def min_time_lower_bound(n_bits: int, pwin: float) -> LowerBound:
    """Returns time below which success pwin is unreachable for
    either objective, along with the large-n form."""
    if n_bits < 2 or not 0.5 <= pwin <= 1:
        raise InvariantError('need n >= 2 and 1/2 <= pwin <= 1')
    half = n_bits // 2
    if pwin == 0.5:
        time = 0.0
    else:
        time = float(
            2 / pi * exp((gammaln(half + 1) + log(pwin - 0.5)) / half)
        )
    return LowerBound(time=time, asymptotic=asymptotic_lower_bound(n_bits))


class Interrogation(OracleProblem):
    """
    Class defining oracle interrogation and XOR as full oracle problems.

    Parameters
    ----------
    n_bits: int
        Length n of the hidden string; A holds the 2^n strings.
    mode: str
        'continuous' for H = (pi/2) O, 'discrete' for the unit query.
    delta: float
        Time step of the discrete oracle.
    objective: str
        'interrogation' to recover the string, 'xor' for its parity.

    Query index m = 2 i + k: i = 0 is the null query, i = 1..n asks
    for bit i, and k is the arrow-of-time bit flipping the sign.

    """

    def __init__(
            self,
            n_bits: int,
            mode: str = 'continuous',
            delta: float = None,
            objective: str = 'interrogation',
    ):
        """Initializes the problem."""
        if n_bits < 1:
            raise InvariantError('number of bits must be positive')
        if mode not in MODES:
            raise InvariantError(f'unknown mode {mode!r}')
        _check_objective(objective)
        self.n_bits = n_bits
        self.mode = mode
        self.objective = objective
        self.hadamard = hadamard_matrix(n_bits)
        self.weights = hamming_weights(n_bits)
        self.projectors = interrogation_projectors(n_bits)
        size = 2 ** n_bits
        signs = zeros((size, 2 * (n_bits + 1)))
        for index in range(n_bits + 1):
            bits = (arange(size) >> (index - 1)) & 1 if index else 0
            for arrow in (0, 1):
                signs[:, 2 * index + arrow] = (-1) ** (bits + arrow)
        if mode == 'discrete':
            delta = get_default(delta, 1.0)
            table = exp(-1j * HALF_PI * (1 - signs) * delta)
        else:
            delta = None
            table = HALF_PI * signs
        answers = (
            arange(size) if objective == 'interrogation'
            else hamming_weights(n_bits) % 2
        )
        dim_m_prime = size if objective == 'interrogation' else 2
        verifiers = [
            size * projector(ket(x * dim_m_prime + answer, size * dim_m_prime))
            for x, answer in enumerate(answers)
        ]
        super().__init__(
            psi0=ones(size) / sqrt(size),
            phase_table=table,
            verifiers=verifiers,
            delta=delta,
            dim_m_prime=dim_m_prime,
            dim_b=size,
        )

    def __repr__(self):
        """Method returns string representation of the problem."""
        return get_repr(self, 'n_bits', 'mode', 'objective', 'delta')

    def reduced_state(self, rho):
        """Returns a with a_w^2 = Tr[P_w rho]."""
        return symmetrize_reduced(rho, self.projectors)

    def full_controls(self, schedule, dt: float):
        """
        Returns Bob's schedule realizing the reduced schedule on the grid
        of grid_schedule. Before every step Bob re-purifies Alice's
        operator so that bit i is queried on the pair of Hadamard vectors
        |y~>, |y~ + e_i> with weights b_w and c_{w+1}, and the null
        query holds the rest.

        """
        steps = grid_schedule(schedule, dt)
        for segment in steps:
            check_controls(segment, self.n_bits)
        return RepurifiedSchedule(
            n_steps=len(steps),
            dim=self.dim_global,
            target=lambda step, psi: self._target(steps[step], psi),
        )

    def _target(self, controls, psi):
        n_bits, size = self.n_bits, 2 ** self.n_bits
        hadamard, weights = self.hadamard, self.weights
        squares = self.reduced_state(psi @ psi.conj().T) ** 2
        ratios = squares / comb(n_bits, arange(n_bits + 1))
        b, c = asarray(controls.b), asarray(controls.c)
        target = zeros((size, self.dim_m, self.dim_b), dtype=complex)
        for y in range(size):
            weight = weights[y]
            rest = ratios[weight] * (1 - b[weight] ** 2 - c[weight] ** 2)
            target[:, 0, y] = sqrt(max(rest, 0.0)) * hadamard[:, y]
            if weight == n_bits:
                continue
            lower = b[weight] * sqrt(ratios[weight] / (n_bits - weight))
            upper = c[weight + 1] * sqrt(
                ratios[weight + 1] / (weight + 1)
            )
            for bit in range(1, n_bits + 1):
                if (y >> (bit - 1)) & 1:
                    continue
                flipped = hadamard[:, y ^ (1 << (bit - 1))]
                for arrow, sign in ((0, -1), (1, 1)):
                    target[:, 2 * bit + arrow, y] = (
                        lower * hadamard[:, y] + sign * 1j * upper * flipped
                    ) / sqrt(2)
        return target.reshape(size, self.dim_global)


def verify_reduced_against_full(n_bits: int, schedule, dt: float) -> float:
    """Returns max deviation of the symmetrized full simulation from
    evolve_reduced along the same grid."""
    if n_bits > 3:
        raise InvariantError('full simulation is limited to n <= 3')
    problem = Interrogation(n_bits).validate()
    steps = grid_schedule(schedule, dt)
    reduced = evolve_reduced(initial_state(n_bits), steps, steps[0].duration)
    trajectory = problem.evolve_continuous(
        problem.full_controls(schedule, dt), steps[0].duration,
    )
    deviation = max(
        np_abs(problem.reduced_state(item.rho) - np_abs(amplitudes)).max()
        for item, amplitudes in zip(trajectory, reduced.amplitudes)
    )
    logger.debug('Reduced against full deviation for n=%d: %.3g',
                 n_bits, deviation)
    return float(deviation)
