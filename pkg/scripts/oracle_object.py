"""The module contains OracleProblem class and the full-space simulator."""


import logging
from itertools import combinations

from numpy import (
    abs as np_abs,
    arange,
    asarray,
    diag,
    exp,
    eye,
    floor,
    kron,
    pi,
    ptp,
    real,
    repeat,
    sort,
    sqrt,
    trace,
    unique,
    zeros,
)
from numpy.linalg import norm

from common.constants import (
    HULL_SLACK,
    NORM_TOLERANCE,
    PSD_TOLERANCE,
    TRACE_TOLERANCE,
    UNITARY_TOLERANCE,
    DistinguishResult,
    ProtocolState,
)
from common.exceptions import (
    DimensionError,
    InvariantError,
    UnsupportedMeasurementError,
)
from common.linear_algebra import (
    is_psd,
    is_unitary,
    positive_part_projector,
    projector,
    psd_sqrt,
    purifying_unitary,
    reduced_density,
    trace_norm,
)
from common.utils import get_default, get_repr


logger = logging.getLogger(__name__)


class FullControlSchedule:
    """
    Bob's unitaries applied between oracle calls.
    Each unitary acts on the message space M tensored with Bob's
    ancilla B, the column index of the global state being m * dim_b + b.

    """

    def __init__(self, steps=(), dim: int = None):
        """Initializes the schedule and checks unitarity of every step."""
        self.steps = [asarray(step, dtype=complex) for step in steps]
        for number, step in enumerate(self.steps):
            if not is_unitary(step, UNITARY_TOLERANCE):
                raise InvariantError(f'control step {number} not unitary')
        sizes = {step.shape[0] for step in self.steps}
        if len(sizes) > 1:
            raise DimensionError('control steps have different dimensions')
        self.dim = get_default(dim, sizes.pop() if sizes else None)
        self._n_steps = len(self.steps)

    def __repr__(self):
        """Method returns string representation of the schedule."""
        return get_repr(self, 'n_steps', 'dim')

    @property
    def n_steps(self) -> int:
        """Number of steps"""
        return self._n_steps

    def unitary(self, step: int, psi):
        """Returns Bob's unitary for the step given the current global state."""
        del psi
        return self.steps[step]


class RepurifiedSchedule(FullControlSchedule):
    """
    Schedule whose unitaries map the current global state onto
    a prescribed purification of the same operator on A.

    """

    def __init__(self, n_steps: int, dim: int, target):
        """
        The target is a callable (step, psi) -> psi' with
        psi psi^dagger = psi' psi'^dagger.

        """
        super().__init__(dim=dim)
        self._n_steps = n_steps
        self.target = target

    def unitary(self, step: int, psi):
        """Returns unitary U with psi U^T equal to the target."""
        return purifying_unitary(psi, self.target(step, psi)).T


class OracleProblem:
    """
    Class defining oracle problem: initial state on A, diagonal oracle
    phase table C[j][k] on A (x) M and verification operators on A (x) M'.
    Discrete problems have time step delta and unimodular phases,
    continuous problems have real phases (Hamiltonian eigenvalues).

    """

    norm_tolerance = NORM_TOLERANCE
    psd_tolerance = PSD_TOLERANCE
    trace_tolerance = TRACE_TOLERANCE

    def __init__(
            self,
            psi0,
            phase_table,
            verifiers,
            delta: float = None,
            dim_m_prime: int = None,
            dim_b: int = None,
    ):
        """Initializes the problem."""
        self.psi0 = asarray(psi0, dtype=complex)
        self.phase_table = asarray(phase_table)
        self.verifiers = [asarray(verifier) for verifier in verifiers]
        self.delta = delta
        self.dim_a = self.psi0.shape[0]
        self.dim_m = self.phase_table.shape[-1]
        self.dim_m_prime = get_default(
            dim_m_prime,
            self.verifiers[0].shape[0] // self.dim_a if self.verifiers else 1,
        )
        self.dim_b = get_default(dim_b, self.dim_a)

    def __repr__(self):
        """Method returns string representation of the problem."""
        return get_repr(self, 'dim_a', 'dim_m', 'dim_m_prime', 'delta')

    @property
    def is_discrete(self) -> bool:
        """Whether the problem is a discrete one"""
        return self.delta is not None

    @property
    def dim_global(self) -> int:
        """Dimension of Bob's side M (x) B"""
        return self.dim_m * self.dim_b

    def validate(self):
        """Returns the problem if all its invariants hold."""
        if abs(norm(self.psi0) - 1) > self.norm_tolerance:
            raise InvariantError('psi0 not unit norm')
        if self.phase_table.shape != (self.dim_a, self.dim_m):
            raise DimensionError(
                f'phase table has shape {self.phase_table.shape}, '
                f'expected {(self.dim_a, self.dim_m)}'
            )
        size = self.dim_a * self.dim_m_prime
        for number, verifier in enumerate(self.verifiers):
            if verifier.shape != (size, size):
                raise DimensionError(f'verifier {number} has wrong shape')
            if not is_psd(verifier, self.psd_tolerance):
                raise InvariantError('verifier not PSD')
        if self.is_discrete:
            if abs(np_abs(self.phase_table) - 1).max() > self.norm_tolerance:
                raise InvariantError('discrete phase not unimodular')
        elif abs(self.phase_table.imag).max(initial=0) > self.norm_tolerance:
            raise InvariantError('continuous phase not real')
        return self

    def initial_state(self):
        """Returns global state |psi0>_A (x) |0>_{M,B} as a matrix
        with rows indexed by A."""
        psi = zeros((self.dim_a, self.dim_global), dtype=complex)
        psi[:, 0] = self.psi0
        return psi

    def oracle_phases(self, dt: float = None):
        """Returns the diagonal of the oracle step in matrix form."""
        if self.is_discrete:
            phases = self.phase_table.astype(complex)
        else:
            phases = exp(-1j * real(self.phase_table) * dt)
        return repeat(phases, self.dim_b, axis=1)

    @staticmethod
    def apply_control(psi, unitary):
        """Applies Bob's unitary to the global state."""
        return psi @ unitary.T

    def _check_controls(self, controls: FullControlSchedule):
        if controls.dim is not None and controls.dim != self.dim_global:
            raise DimensionError(
                f'controls act on dimension {controls.dim}, '
                f'expected {self.dim_global}'
            )

    def _record(self, psi, time: float) -> ProtocolState:
        rho = reduced_density(psi)
        if abs(trace(rho).real - 1) > self.trace_tolerance:
            raise InvariantError(f'trace of rho is not conserved at t={time}')
        return ProtocolState(rho=rho, t=time)

    def evolve_discrete(self, controls: FullControlSchedule):
        """Simulates the purified protocol: Bob's unitary then the oracle,
        returns Alice's operator after every query."""
        if not self.is_discrete:
            raise InvariantError('evolve_discrete needs a discrete problem')
        self._check_controls(controls)
        phases = self.oracle_phases()
        psi = self.initial_state()
        trajectory = [self._record(psi, 0.0)]
        for step in range(controls.n_steps):
            psi = self.apply_control(psi, controls.unitary(step, psi))
            psi = psi * phases
            trajectory.append(self._record(psi, (step + 1) * self.delta))
        logger.debug('Discrete evolution with %d queries', controls.n_steps)
        return trajectory

    def evolve_continuous(self, controls: FullControlSchedule, dt: float):
        """
        First order splitting: Bob's unitary, then exp(-i H dt).
        Schedules may fold half steps of their own Hamiltonian
        into neighbouring unitaries, which turns it into Strang splitting
        since Bob's unitaries leave Alice's operator unchanged.

        """
        if self.is_discrete:
            raise InvariantError('evolve_continuous needs a continuous problem')
        if dt <= 0:
            raise InvariantError('dt must be positive')
        self._check_controls(controls)
        phases = self.oracle_phases(dt)
        psi = self.initial_state()
        trajectory = [self._record(psi, 0.0)]
        for step in range(controls.n_steps):
            psi = self.apply_control(psi, controls.unitary(step, psi))
            psi = psi * phases
            trajectory.append(self._record(psi, (step + 1) * dt))
        logger.debug(
            'Continuous evolution with %d steps of %g', controls.n_steps, dt,
        )
        return trajectory

    def pwin_worst_case(self, rho_prime) -> float:
        """Returns min over x of Tr[Pi_x rho']."""
        rho_prime = asarray(rho_prime)
        size = self.dim_a * self.dim_m_prime
        if rho_prime.shape != (size, size):
            raise DimensionError(
                f'rho prime has shape {rho_prime.shape}, '
                f'expected {(size, size)}'
            )
        return min(
            float(real(trace(verifier @ rho_prime)))
            for verifier in self.verifiers
        )

    def answers(self):
        """Returns pairs (row of A, answer in M') read from verifiers
        of the form w |x><x| (x) |f(x)><f(x)|."""
        result = []
        for verifier in self.verifiers:
            diagonal = real(diag(verifier))
            support = (np_abs(diagonal) > self.psd_tolerance).nonzero()[0]
            off_diagonal = verifier - diag(diag(verifier))
            if len(support) != 1 or np_abs(off_diagonal).max() > 0:
                raise UnsupportedMeasurementError(
                    'verifier is not a weighted product of basis projectors'
                )
            result.append(divmod(int(support[0]), self.dim_m_prime))
        return result

    def optimal_final_measurement(self, rho_t):
        """
        Returns maximal P_win and achieving rho' for two cases:
        distinct answers with constant diagonal of sqrt(rho)
        (pretty good measurement), and binary answers (Helstrom).

        """
        rho = asarray(getattr(rho_t, 'rho', rho_t))
        if rho.shape != (self.dim_a, self.dim_a):
            raise DimensionError('rho has wrong shape')
        answers = self.answers()
        labels = sorted({label for _, label in answers})
        root = psd_sqrt(rho)
        blocks = eye(self.dim_m_prime)
        rho_prime = zeros(
            (self.dim_a * self.dim_m_prime,) * 2, dtype=complex,
        )
        if len(labels) == len(answers):
            if ptp(real(diag(root))) > TRACE_TOLERANCE:
                raise UnsupportedMeasurementError(
                    'diagonal of sqrt(rho) is not constant'
                )
            pwin = float(real(trace(root)) ** 2 / self.dim_a)
            for row, label in answers:
                rho_prime += kron(
                    projector(root[:, row]),
                    projector(blocks[label]),
                )
            return pwin, rho_prime
        if len(labels) == 2:
            signs = zeros(self.dim_a)
            for row, label in answers:
                signs[row] = 1 if label == labels[0] else -1
            difference = root @ diag(signs) @ root
            pwin = float(0.5 + 0.5 * trace_norm(difference))
            positive = positive_part_projector(difference)
            for label, part in zip(
                    labels, (positive, eye(self.dim_a) - positive),
            ):
                rho_prime += kron(
                    root @ part @ root,
                    projector(blocks[label]),
                )
            return pwin, rho_prime
        raise UnsupportedMeasurementError(
            f'{len(labels)} answers for {len(answers)} strings'
        )


def hull_contains_origin(angles, slack=HULL_SLACK) -> bool:
    """Checks whether the origin lies in the convex hull
    of the unit circle points exp(i angles)."""
    ordered = sort(asarray(angles) % (2 * pi))
    gaps = list(ordered[1:] - ordered[:-1]) + [
        2 * pi - ordered[-1] + ordered[0]
    ]
    return bool(max(gaps) <= pi + slack)


def antipodal_times(gaps, t_max: float):
    """Returns sorted times t <= t_max at which some pair of phases
    -gaps t sits on opposite points of the unit circle."""
    times = []
    for low, high in combinations(unique(gaps), 2):
        period = pi / (high - low)
        times.extend(period * arange(1, t_max / period + 1, 2))
    return sorted(float(time) for time in times if time <= t_max)


def min_distinguish_time(
        delta0,
        delta1,
        t_max: float = 10.0,
        scan_step: float = 1e-3,
        tolerance: float = 1e-9,
) -> DistinguishResult:
    """
    Returns minimal t at which the two diagonal Hamiltonians are perfectly
    distinguishable on the best input state.

    The origin enters the hull only when two phases become antipodal, so
    the first such time with the origin in the hull is exact. The dense
    scan with bisection runs below it and may only find an earlier time.

    """
    delta0, delta1 = asarray(delta0, dtype=float), asarray(delta1, dtype=float)
    if delta0.size == 0 or delta0.shape != delta1.shape:
        raise DimensionError('phase vectors must be non-empty and equal')
    gaps = delta1 - delta0

    def contains(time):
        return hull_contains_origin(-gaps * time)

    if contains(0.0):
        return DistinguishResult(time=0.0, reachable=True)
    candidate = next(
        (time for time in antipodal_times(gaps, t_max) if contains(time)),
        None,
    )
    horizon = get_default(candidate, t_max)
    grid = arange(1, int(floor(horizon / scan_step)) + 1) * scan_step
    previous = 0.0
    for time in grid:
        if contains(time):
            low, high = previous, float(time)
            while high - low > tolerance:
                middle = (low + high) / 2
                if contains(middle):
                    high = middle
                else:
                    low = middle
            if candidate is not None:
                high = min(high, candidate)
            logger.debug('Distinguishing time %.12g', high)
            return DistinguishResult(time=high, reachable=True)
        previous = float(time)
    if candidate is not None:
        logger.debug('Distinguishing time %.12g', candidate)
        return DistinguishResult(time=candidate, reachable=True)
    return DistinguishResult(time=None, reachable=False)


def symmetrize_reduced(rho, projectors):
    """Returns a with a_alpha^2 = Tr[P_alpha rho] for the projector family."""
    rho = asarray(rho)
    total = sum(projectors)
    if abs(total - eye(rho.shape[0])).max() > PSD_TOLERANCE:
        raise InvariantError('projectors not a resolution of identity')
    weights = asarray([real(trace(item @ rho)) for item in projectors])
    return sqrt(weights.clip(min=0))


def validate_problem(problem: OracleProblem) -> OracleProblem:
    """Returns the problem if all its invariants hold."""
    return problem.validate()
