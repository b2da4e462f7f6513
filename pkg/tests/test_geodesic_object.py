"""Tests of the two-bit geodesic."""


import numpy as np
import pytest
from numpy.testing import assert_allclose

from common.constants import PolarPoint
from common.exceptions import BoundaryError, BracketError, InvariantError
from scripts import geodesic_object as geodesic
from scripts import interrogation_object as interrogation


@pytest.fixture(scope='module')
def cos_theta0():
    return geodesic.solve_theta0()


def test_apex_parameter_and_minimal_time(cos_theta0):
    assert cos_theta0 == pytest.approx(0.7477, abs=5e-4)
    assert geodesic.min_time_n2(cos_theta0) == pytest.approx(0.9052, abs=5e-4)
    assert geodesic.min_time_n2() == pytest.approx(
        geodesic.min_time_n2(cos_theta0),
    )


def test_arc_arrives_at_target(cos_theta0):
    theta0 = np.arccos(cos_theta0)
    phi = geodesic.phi_of_theta(np.pi / 4, theta0, 'descending')
    assert phi == pytest.approx(np.pi / 4, abs=1e-9)
    arc = geodesic.optimal_arc(cos_theta0)
    end = arc.t_span[1]
    assert geodesic.theta_of_t(end, theta0) == pytest.approx(np.pi / 4)
    assert geodesic.phi_of_t(end, theta0) == pytest.approx(np.pi / 4)
    assert_allclose(
        geodesic.polar_to_sphere(PolarPoint(np.pi / 4, np.pi / 4)),
        interrogation.target_vector(2).a,
    )


def test_farther_target_needs_larger_apex_parameter(cos_theta0):
    farther = geodesic.solve_theta0(
        PolarPoint(theta=np.pi / 4, phi=3 * np.pi / 4),
        scan=(0.6, 0.999, 1e-3),
    )
    assert farther > cos_theta0
    assert geodesic.arrival_time(farther) > geodesic.arrival_time(cos_theta0)


def test_returning_to_equator_takes_longer_than_one():
    assert geodesic.apex_return_time(np.pi / 4) == pytest.approx(np.sqrt(2))
    assert geodesic.apex_return_time(np.pi / 4) >= 1


def test_missing_bracket_reports_scan():
    with pytest.raises(BracketError) as error:
        geodesic.solve_theta0(scan=(0.75, 0.8, 1e-2))
    assert len(error.value.trace) == 6
    assert all(residual > 0 for _, residual in error.value.trace)


def test_closed_form_starts_on_equator_with_unit_speed(cos_theta0):
    theta0 = np.arccos(cos_theta0)
    assert geodesic.theta_of_t(0.0, theta0) == pytest.approx(np.pi / 2)
    assert geodesic.phi_of_t(0.0, theta0) == 0.0
    for t in (0.1, 0.5, 0.9):
        theta, phi, theta_dot, phi_dot = geodesic.closed_form_state(t, theta0)
        speed = geodesic.metric_speed(
            PolarPoint(theta, phi), theta_dot, phi_dot,
        )
        assert speed == pytest.approx(1.0, abs=1e-12)


def test_apex_is_reached_at_half_return_time():
    theta0 = 0.7
    half = geodesic.apex_return_time(theta0) / 2
    assert geodesic.theta_of_t(half, theta0) == pytest.approx(theta0)
    assert geodesic.phi_of_t(half, theta0) == pytest.approx(
        geodesic.apex_phi(theta0),
    )


def test_phi_stays_below_ascent_bound():
    theta0 = 0.7
    for theta in np.linspace(theta0, np.pi / 2 - 1e-3, 20):
        assert geodesic.ascent_bound_check(theta, theta0)


def test_singular_set_is_rejected():
    with pytest.raises(BoundaryError):
        geodesic.christoffel(0.0)
    with pytest.raises(BoundaryError):
        geodesic.metric_speed(PolarPoint(np.pi / 2, 0.0), 0.0, 1.0)
    with pytest.raises(InvariantError):
        geodesic.phi_of_theta(0.1, 0.7)


def test_integrator_follows_closed_form_inside_the_chart(cos_theta0):
    theta0 = np.arccos(cos_theta0)
    start = geodesic.closed_form_state(0.3, theta0)
    trace = geodesic.geodesic_integrate(
        PolarPoint(*start[:2]), start[2:], 0.3, 1e-3,
    )
    assert not trace.boundary_reached
    assert trace.theta[-1] == pytest.approx(
        geodesic.theta_of_t(0.6, theta0), abs=1e-9,
    )
    assert trace.phi[-1] == pytest.approx(
        geodesic.phi_of_t(0.6, theta0), abs=1e-9,
    )


def test_integrator_requires_unit_speed():
    with pytest.raises(InvariantError):
        geodesic.geodesic_integrate(PolarPoint(1.0, 0.0), (0.0, 0.0), 1, 0.1)


@pytest.mark.slow
def test_integrator_fidelity_on_optimal_arc(cos_theta0):
    arc = geodesic.optimal_arc(cos_theta0)
    deviation, speed, clairaut = geodesic.verify_integrator(
        arc.theta0, 0.02, arc.t_span[1], 1e-5,
    )
    assert deviation < 1e-8
    assert speed < 1e-8
    assert clairaut < 1e-8


def test_polar_coordinates_invert():
    point = PolarPoint(theta=0.9, phi=0.4)
    back = geodesic.sphere_to_polar(geodesic.polar_to_sphere(point))
    assert back.theta == pytest.approx(point.theta)
    assert back.phi == pytest.approx(point.phi)


def test_optimal_controls_are_admissible_and_reach_target(cos_theta0):
    schedule = geodesic.optimal_schedule_n2(1000, cos_theta0)
    assert sum(item.duration for item in schedule) == pytest.approx(
        geodesic.min_time_n2(cos_theta0),
    )
    for item in schedule:
        interrogation.check_controls(item, 2)
    final = interrogation.final_state(
        interrogation.initial_state(2), schedule, schedule[0].duration,
    )
    assert interrogation.pwin_interrogation(final) >= 1 - 1e-3
    with pytest.raises(InvariantError):
        geodesic.optimal_schedule_n2(5)


def test_velocity_weights_lie_on_the_unit_circle(cos_theta0):
    theta0 = np.arccos(cos_theta0)
    for t in (0.05, 0.4, 0.85):
        first, second = geodesic.velocity_weights(t, theta0)
        assert first ** 2 + second ** 2 == pytest.approx(1.0)


def test_trace_table(cos_theta0):
    frame = geodesic.geodesic_trace(11, cos_theta0)
    assert list(frame.columns) == ['t', 'theta', 'phi', 'a0', 'a1', 'a2']
    assert len(frame) == 11
    assert_allclose(frame[['a0', 'a1', 'a2']].pow(2).sum(axis=1), 1.0)
    assert frame.a2.iloc[-1] == pytest.approx(0.5)


@pytest.mark.parametrize('phi', [np.pi / 4, 3 * np.pi / 4])
def test_root_lands_on_target_within_tolerance(phi):
    target = PolarPoint(theta=np.pi / 4, phi=phi)
    root = geodesic.solve_theta0(target, scan=(0.6, 0.999, 1e-3))
    arrived = geodesic.phi_of_theta(np.pi / 4, np.arccos(root), 'descending')
    assert abs(arrived - phi) <= 1e-12


def test_christoffel_at_quarter_pi():
    symbols = geodesic.christoffel(np.pi / 4)
    assert symbols.theta_phi_phi == pytest.approx(-2.0)
    assert symbols.phi_theta_phi == pytest.approx(2.0)


@pytest.mark.parametrize('theta', [0.3, 0.7, 1.2])
def test_christoffel_matches_metric_derivatives(theta):
    step = 1e-6
    g_theta, g_phi = geodesic.metric_tensor(theta)
    derivative = (
        geodesic.metric_tensor(theta + step)[1]
        - geodesic.metric_tensor(theta - step)[1]
    ) / (2 * step)
    symbols = geodesic.christoffel(theta)
    assert symbols.theta_phi_phi == pytest.approx(
        -derivative / (2 * g_theta), rel=1e-6,
    )
    assert symbols.phi_theta_phi == pytest.approx(
        derivative / (2 * g_phi), rel=1e-6,
    )
