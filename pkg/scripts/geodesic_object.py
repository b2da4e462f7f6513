"""
The module contains the shortest path problem for two hidden bits:
geodesics of the metric (4/pi^2)(d theta^2 + tan^2 theta d phi^2)
on the sphere of reduced states, their closed forms and the minimal
zero-error time.

"""


import logging

from numpy import (
    arange,
    arccos,
    arcsin,
    arctan2,
    array,
    cos,
    isfinite,
    isnan,
    nan,
    pi,
    sin,
    sqrt,
    tan,
)
from pandas import DataFrame
from scipy.optimize import brentq

from common.constants import (
    EQUATOR_OFFSET,
    HALF_PI,
    ROOT_TOLERANCE,
    Christoffel,
    GeodesicArc,
    GeodesicTrace,
    PolarPoint,
    Segment,
)
from common.exceptions import BoundaryError, BracketError, InvariantError


logger = logging.getLogger(__name__)

BRANCHES = ('ascending', 'descending')
TARGET = PolarPoint(theta=pi / 4, phi=pi / 4)
SCAN = (0.60, 0.95, 1e-3)
SPEED_TOLERANCE = 1e-10
DRIFT_TOLERANCE = 1e-6


def metric_tensor(theta: float):
    """Returns diagonal (g_theta_theta, g_phi_phi)."""
    scale = 4 / pi ** 2
    return scale, scale * tan(theta) ** 2


def metric_speed(point: PolarPoint, v_theta: float, v_phi: float) -> float:
    """Returns sqrt(g_theta_theta v_theta^2 + g_phi_phi v_phi^2)."""
    if point.theta >= HALF_PI and v_phi != 0:
        raise BoundaryError('metric diverges on the equator')
    g_theta, g_phi = metric_tensor(point.theta)
    if v_phi == 0:
        g_phi = 0.0
    return float(sqrt(g_theta * v_theta ** 2 + g_phi * v_phi ** 2))


def christoffel(theta: float) -> Christoffel:
    """Returns the nonzero symbols; Gamma^phi_theta_phi is symmetric."""
    if not 0 < theta < HALF_PI:
        raise BoundaryError(f'theta={theta} is outside (0, pi/2)')
    return Christoffel(
        theta_phi_phi=float(-sin(theta) / cos(theta) ** 3),
        phi_theta_phi=float(1 / (sin(theta) * cos(theta))),
    )


def geodesic_rhs(state):
    """Returns derivative of (theta, phi, theta_dot, phi_dot)."""
    theta, _, theta_dot, phi_dot = state
    symbols = christoffel(theta)
    return array([
        theta_dot,
        phi_dot,
        -symbols.theta_phi_phi * phi_dot ** 2,
        -2 * symbols.phi_theta_phi * theta_dot * phi_dot,
    ])


def geodesic_integrate(
        point: PolarPoint,
        velocity,
        duration: float,
        dt: float,
        epsilon: float = EQUATOR_OFFSET,
) -> GeodesicTrace:
    """
    Integrates the geodesic equation with fixed step 4th order
    Runge-Kutta. Integration stops with the boundary flag once theta
    leaves (epsilon, pi/2 - epsilon).

    """
    if not epsilon < point.theta < HALF_PI - epsilon:
        raise BoundaryError('initial point is outside the chart')
    initial_speed = metric_speed(point, *velocity)
    if abs(initial_speed - 1) > SPEED_TOLERANCE:
        raise InvariantError(f'initial speed {initial_speed} is not unit')
    state = array([point.theta, point.phi, *velocity], dtype=float)
    n_steps = int(round(duration / dt))
    samples, times = [state], [0.0]
    boundary_reached = False
    for number in range(1, n_steps + 1):
        first = geodesic_rhs(state)
        second = geodesic_rhs(state + dt / 2 * first)
        third = geodesic_rhs(state + dt / 2 * second)
        fourth = geodesic_rhs(state + dt * third)
        state = state + dt / 6 * (first + 2 * second + 2 * third + fourth)
        if not epsilon < state[0] < HALF_PI - epsilon:
            boundary_reached = True
            break
        speed = metric_speed(PolarPoint(*state[:2]), *state[2:])
        if abs(speed - 1) > DRIFT_TOLERANCE:
            raise InvariantError(
                f'speed drifted to {speed} at step {number}, reduce dt'
            )
        samples.append(state)
        times.append(number * dt)
    samples = array(samples)
    if boundary_reached:
        logger.debug('Geodesic reached the boundary at t=%g', times[-1])
    return GeodesicTrace(
        times=array(times),
        theta=samples[:, 0],
        phi=samples[:, 1],
        theta_dot=samples[:, 2],
        phi_dot=samples[:, 3],
        boundary_reached=boundary_reached,
    )


def _phase(t, theta0):
    span = 2 * cos(theta0)
    if not -1e-12 <= t <= span + 1e-12:
        raise InvariantError(f't={t} is outside the arc [0, {span}]')
    return pi * t / span


def theta_of_t(t: float, theta0: float) -> float:
    """Returns theta along the arc starting from the equator,
    cos theta = cos theta0 sin(pi t/(2 cos theta0))."""
    return float(arccos(cos(theta0) * sin(_phase(t, theta0))))


def theta_dot_of_t(t: float, theta0: float) -> float:
    """d theta/dt"""
    phase = _phase(t, theta0)
    return float(-HALF_PI * cos(phase) / sin(theta_of_t(t, theta0)))


def phi_of_t(t: float, theta0: float) -> float:
    """Returns phi along the arc, regular through the apex."""
    phase = _phase(t, theta0)
    return float(
        -HALF_PI * t * tan(theta0)
        + arctan2(sin(theta0) * sin(phase), cos(phase))
    )


def phi_dot_of_t(t: float, theta0: float) -> float:
    """Returns (pi/2) tan theta0 / tan^2 theta."""
    return float(HALF_PI * tan(theta0) / tan(theta_of_t(t, theta0)) ** 2)


def closed_form_state(t: float, theta0: float):
    """Returns (theta, phi, theta_dot, phi_dot) at time t."""
    return array([
        theta_of_t(t, theta0),
        phi_of_t(t, theta0),
        theta_dot_of_t(t, theta0),
        phi_dot_of_t(t, theta0),
    ])


def apex_phi(theta0: float) -> float:
    """Returns increase of phi from the equator to the apex."""
    return float(HALF_PI * (1 - sin(theta0)))


def phi_of_theta(theta: float, theta0: float, branch='ascending') -> float:
    """Returns phi at height theta before or after the apex."""
    if branch not in BRANCHES:
        raise InvariantError(f'unknown branch {branch!r}')
    ratio = cos(theta) / cos(theta0)
    if ratio > 1 + 1e-12:
        raise InvariantError('theta is above the apex')
    ratio = min(ratio, 1.0)
    ascending = float(
        -sin(theta0) * arcsin(ratio)
        + arctan2(sin(theta0) * ratio, sqrt(1 - ratio ** 2))
    )
    if branch == 'ascending':
        return ascending
    return 2 * apex_phi(theta0) - ascending


def ascent_bound_check(theta: float, theta0: float) -> bool:
    """Checks phi <= (1 - sin theta0) arcsin(cos theta/cos theta0)
    on the ascending branch."""
    ratio = min(cos(theta) / cos(theta0), 1.0)
    bound = (1 - sin(theta0)) * arcsin(ratio)
    return phi_of_theta(theta, theta0) <= bound + 1e-12


def _residual(cos_theta0, target: PolarPoint):
    if cos(target.theta) > cos_theta0:
        return nan
    return phi_of_theta(
        target.theta, arccos(cos_theta0), 'descending',
    ) - target.phi


def solve_theta0(target: PolarPoint = TARGET, scan=SCAN) -> float:
    """
    Returns cos theta0 of the geodesic from the equator that passes the
    apex once and arrives at the target: scan of cos theta0, then
    Brent's method inside the first bracket.

    """
    start, stop, step = scan
    grid = arange(start, stop + step / 2, step)
    trace = [(float(value), _residual(value, target)) for value in grid]
    for (left, f_left), (right, f_right) in zip(trace, trace[1:]):
        if isnan(f_left) or isnan(f_right):
            continue
        if f_left == 0:
            return left
        if f_left * f_right < 0:
            root = brentq(_residual, left, right, args=(target,), xtol=1e-15)
            if abs(_residual(root, target)) > ROOT_TOLERANCE:
                raise BracketError(
                    f'residual at cos theta0={root} exceeds {ROOT_TOLERANCE}',
                    trace=[(float(root), _residual(root, target))],
                )
            logger.debug('cos theta0 = %.12f', root)
            return float(root)
    raise BracketError(
        f'no sign change of the residual on [{start}, {stop}]',
        trace=[item for item in trace if isfinite(item[1])],
    )


def arrival_time(cos_theta0: float, theta: float = TARGET.theta) -> float:
    """Returns time of arrival at height theta after the apex."""
    return float(
        2 * cos_theta0 * (1 - arcsin(cos(theta) / cos_theta0) / pi)
    )


def min_time_n2(cos_theta0: float = None) -> float:
    """Returns minimal zero-error interrogation time for two bits."""
    if cos_theta0 is None:
        cos_theta0 = solve_theta0()
    return arrival_time(cos_theta0)


def apex_return_time(theta0: float) -> float:
    """Returns time to climb from the equator to the apex and back."""
    return float(2 * cos(theta0))


def optimal_arc(cos_theta0: float = None) -> GeodesicArc:
    """Returns the time-optimal arc to the zero-error state."""
    if cos_theta0 is None:
        cos_theta0 = solve_theta0()
    return GeodesicArc(
        theta0=float(arccos(cos_theta0)),
        sign_theta=-1,
        sign_phi=1,
        t_span=(0.0, arrival_time(cos_theta0)),
    )


def polar_to_sphere(point: PolarPoint):
    """Returns a = (sin theta cos phi, cos theta, sin theta sin phi)."""
    return array([
        sin(point.theta) * cos(point.phi),
        cos(point.theta),
        sin(point.theta) * sin(point.phi),
    ])


def sphere_to_polar(amplitudes) -> PolarPoint:
    """Inverse of polar_to_sphere."""
    return PolarPoint(
        theta=float(arccos(amplitudes[1])),
        phi=float(arctan2(amplitudes[2], amplitudes[0])),
    )


def velocity_weights(t: float, theta0: float):
    """Returns (w1, w2) = (b0 c1, b1 c2) moving a along the arc
    with unit speed."""
    phase = _phase(t, theta0)
    theta, phi = theta_of_t(t, theta0), phi_of_t(t, theta0)
    w_theta = -cos(phase) / sin(theta)
    w_phi = tan(theta0) * cos(theta) / sin(theta)
    return (
        float(-w_theta * cos(phi) + w_phi * sin(phi)),
        float(w_theta * sin(phi) + w_phi * cos(phi)),
    )


def optimal_schedule_n2(segments: int, cos_theta0: float = None):
    """Returns piecewise constant controls along the optimal arc
    sampled at segment midpoints."""
    if segments < 10:
        raise InvariantError('at least 10 segments are needed')
    arc = optimal_arc(cos_theta0)
    duration = arc.t_span[1] / segments
    schedule = []
    for number in range(segments):
        first, second = velocity_weights((number + 0.5) * duration, arc.theta0)
        scale = max(sqrt(first ** 2 + second ** 2), 1.0)
        schedule.append(Segment(
            duration=duration,
            b=array([1.0, second / scale, 0.0]),
            c=array([0.0, first / scale, 1.0]),
        ))
    return schedule


def geodesic_trace(samples: int, cos_theta0: float = None) -> DataFrame:
    """Returns table (t, theta, phi, a0, a1, a2) along the optimal arc."""
    arc = optimal_arc(cos_theta0)
    rows = []
    for t in arc.t_span[1] * arange(samples) / (samples - 1):
        point = PolarPoint(
            theta=theta_of_t(t, arc.theta0), phi=phi_of_t(t, arc.theta0),
        )
        rows.append([t, *point, *polar_to_sphere(point)])
    return DataFrame(rows, columns=['t', 'theta', 'phi', 'a0', 'a1', 'a2'])


def verify_integrator(theta0: float, t_start: float, t_end: float, dt: float):
    """
    Integrates the geodesic from the closed-form state at t_start and
    returns max deviations of (theta, phi) from the closed form, of the
    speed from one and of tan^2 theta * phi_dot from its initial value.

    """
    state = closed_form_state(t_start, theta0)
    trace = geodesic_integrate(
        PolarPoint(theta=state[0], phi=state[1]),
        state[2:],
        t_end - t_start,
        dt,
    )
    deviation = max(
        float(max(
            abs(theta - theta_of_t(t_start + t, theta0)),
            abs(phi - phi_of_t(t_start + t, theta0)),
        ))
        for t, theta, phi in zip(trace.times, trace.theta, trace.phi)
    )
    speed = [
        metric_speed(PolarPoint(theta, phi), theta_dot, phi_dot)
        for theta, phi, theta_dot, phi_dot in zip(
            trace.theta, trace.phi, trace.theta_dot, trace.phi_dot,
        )
    ]
    clairaut = tan(trace.theta) ** 2 * trace.phi_dot
    return (
        deviation,
        float(max(abs(value - 1) for value in speed)),
        float(abs(clairaut - HALF_PI * tan(theta0)).max()),
    )
