"""Tests of one-item search."""


import numpy as np
import pytest
from scipy.stats import unitary_group

from common.exceptions import InvariantError
from scripts import grover_object as grover
from scripts.oracle_object import FullControlSchedule, symmetrize_reduced


@pytest.mark.parametrize('n_items', [2, 4, 16, 1024])
def test_exact_time_matches_arccos_form(n_items):
    expected = (
        n_items / np.sqrt(n_items - 1) * np.arccos(1 / np.sqrt(n_items)) / np.pi
    )
    assert grover.continuous_exact_time(n_items) == pytest.approx(expected)


def test_exact_times_of_small_searches():
    assert grover.continuous_exact_time(2) == pytest.approx(0.5)
    assert grover.continuous_exact_time(4) == pytest.approx(
        4 / (3 * np.sqrt(3)),
    )


def test_x_reaches_one_over_n_at_exact_time():
    for n_items in (2, 4, 100):
        time = grover.continuous_exact_time(n_items)
        assert grover.continuous_x(0.0, n_items) == pytest.approx(1.0)
        assert grover.continuous_x(time, n_items) == pytest.approx(1 / n_items)
        assert grover.pwin_from_x(1 / n_items, n_items) == pytest.approx(1.0)
        assert not grover.continuous_state(time, n_items).past_optimum
        assert grover.continuous_state(time + 0.1, n_items).past_optimum


def test_pwin_from_x_rejects_invalid_input():
    assert grover.pwin_from_x(1.0, 8) == pytest.approx(1 / 8)
    with pytest.raises(InvariantError):
        grover.pwin_from_x(1.5, 8)
    with pytest.raises(InvariantError):
        grover.continuous_exact_time(1)


@pytest.mark.parametrize('n_items', [2, 5, 64, 1024])
def test_bounded_error_time_halves_x(n_items):
    time = grover.continuous_bounded_time(n_items)
    assert abs(grover.continuous_x(time, n_items) - 0.5) <= 1e-12
    assert time <= grover.continuous_exact_time(n_items)
    assert grover.pwin_from_x(0.5, n_items) == pytest.approx(
        0.5 + np.sqrt(n_items - 1) / n_items,
    )


def test_half_x_of_five_items():
    assert grover.pwin_from_x(0.5, 5) == pytest.approx(0.9)


def test_farhi_gutmann_comparison():
    comparison = grover.fg_comparison(2)
    assert comparison.t_fg / comparison.t_optimal == pytest.approx(
        np.sqrt(2), abs=1e-9,
    )
    assert grover.fg_comparison(4).t_fg == pytest.approx(1.0)
    for n_items, relative in ((100, 0.1), (10 ** 4, 0.01), (10 ** 6, 0.001)):
        gap = grover.fg_comparison(n_items).gap
        assert gap == pytest.approx(1 / np.pi, rel=relative)


def test_fg_success_probability_endpoints():
    assert grover.fg_success_probability(0.0, 9) == pytest.approx(1 / 9)
    assert grover.fg_success_probability(1.5, 9) == pytest.approx(1.0)


def test_discrete_query_counts():
    assert grover.discrete_query_count(4, 1.0) == 1
    assert grover.discrete_exact_time(4, 1.0) == 1.0
    assert grover.discrete_query_count(2, 1.0) == 1
    with pytest.raises(InvariantError):
        grover.discrete_query_count(4, 0.0)


def test_fractional_queries_speed_up_search():
    size, delta = 10 ** 6, 0.25
    ratio = (
        grover.discrete_exact_time(size, delta)
        / grover.discrete_exact_time(size, 1.0)
    )
    expected = delta / np.sin(np.pi * delta / 2)
    assert ratio == pytest.approx(expected, rel=0.01)


def test_discrete_trajectory_ends_at_one_over_n():
    values = grover.discrete_trajectory(16, 1.0)
    assert len(values) == grover.discrete_query_count(16, 1.0) + 1
    assert values[0] == 1.0
    assert values[-1] == pytest.approx(1 / 16)
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_query_moduli_are_unit():
    params = grover.query_params(16, 0.5)
    assert abs(params.alpha) ** 2 + abs(params.beta) ** 2 == pytest.approx(1)


def test_realization_matches_closed_form():
    assert grover.verify_unitary_realization(4, 1e-2) < 1e-9


def test_full_continuous_simulation_follows_closed_form():
    problem = grover.Grover(4).validate()
    assert problem.dim_global == 5
    step = problem.effective_step(1e-4)
    trajectory = problem.evolve_continuous(problem.optimal_controls(1e-4), step)
    assert trajectory[-1].t == pytest.approx(grover.continuous_exact_time(4))
    worst = max(
        abs(problem.reduced_x(item.rho) - grover.continuous_x(item.t, 4))
        for item in trajectory
    )
    assert worst < 1e-5
    pwin, rho_prime = problem.optimal_final_measurement(trajectory[-1])
    assert pwin == pytest.approx(1.0, abs=1e-5)
    assert problem.pwin_worst_case(rho_prime) == pytest.approx(pwin, abs=1e-5)


@pytest.mark.parametrize(('n_items', 'delta'), [(4, 1.0), (9, 1.0), (8, 0.5)])
def test_full_discrete_simulation_is_zero_error(n_items, delta):
    problem = grover.Grover(n_items, 'discrete', delta).validate()
    trajectory = problem.evolve_discrete(problem.optimal_controls())
    simulated = [problem.reduced_x(item.rho) for item in trajectory]
    np.testing.assert_allclose(
        simulated, grover.discrete_trajectory(n_items, delta), atol=1e-10,
    )
    pwin, _ = problem.optimal_final_measurement(trajectory[-1])
    assert pwin == pytest.approx(1.0, abs=1e-10)


def test_unknown_mode_is_rejected():
    with pytest.raises(InvariantError):
        grover.Grover(4, 'adiabatic')


def test_projectors_give_plus_weight_of_alice_state():
    rho = np.outer(grover.plus_vector(4), grover.plus_vector(4)) * 0.25
    rho += np.eye(4) * 0.75 / 4
    weights = symmetrize_reduced(rho, grover.grover_projectors(4))
    np.testing.assert_allclose(weights ** 2, [0.4375, 0.5625])


def test_single_query_finds_one_of_four():
    assert grover.discrete_step_optimal(1.0, 4, 1.0) == pytest.approx(0.25)


@pytest.mark.parametrize('n_items', [4, 16])
@pytest.mark.parametrize('delta', [1e-2, 1e-3])
def test_discrete_time_converges_to_continuous(n_items, delta):
    gap = abs(
        grover.discrete_exact_time(n_items, delta)
        - grover.continuous_exact_time(n_items)
    )
    assert gap <= 2 * delta


def test_random_controls_respect_query_velocity():
    n_items, dt = 4, 1e-4
    problem = grover.Grover(n_items).validate()
    steps = unitary_group.rvs(problem.dim_global, size=200, random_state=2)
    trajectory = problem.evolve_continuous(FullControlSchedule(steps), dt)
    values = [problem.reduced_x(item.rho) for item in trajectory]
    for earlier, later in zip(values, values[1:]):
        middle = (earlier + later) / 2
        bound = 2 * np.pi * np.sqrt(n_items - 1) / n_items * np.sqrt(
            middle * (1 - middle),
        )
        assert abs(later - earlier) / dt <= bound + 1e-3
