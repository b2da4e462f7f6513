"""Tests of oracle interrogation and XOR."""


import numpy as np
import pytest
from numpy.testing import assert_allclose

from common.constants import InterrogationControls, Segment, SphereState
from common.exceptions import ConstraintError, DimensionError, InvariantError
from scripts import geodesic_object as geodesic
from scripts import interrogation_object as interrogation
from scripts.oracle_object import FullControlSchedule


def test_hamming_weights_and_projectors():
    assert list(interrogation.hamming_weights(2)) == [0, 1, 1, 2]
    projectors = interrogation.interrogation_projectors(3)
    assert len(projectors) == 4
    assert_allclose(sum(projectors), np.eye(8), atol=1e-12)
    assert [round(np.trace(item).real) for item in projectors] == [1, 3, 3, 1]


def test_target_vector_has_binomial_weights():
    target = interrogation.target_vector(2)
    assert_allclose(target.a, [0.5, np.sqrt(0.5), 0.5])
    assert interrogation.pwin_interrogation(target) == pytest.approx(1.0)
    assert interrogation.pwin_xor(target) == pytest.approx(1.0)


def test_success_of_initial_state():
    start = interrogation.initial_state(2)
    assert start.t == 0.0
    assert interrogation.pwin_interrogation(start) == pytest.approx(0.25)
    assert interrogation.pwin_xor(start) == pytest.approx(0.5)


def test_upper_envelope_flags_vacuous_values():
    start = interrogation.pwin_upper_envelope(
        interrogation.initial_state(2),
    )
    assert start.value == pytest.approx(0.5)
    assert not start.vacuous
    target = interrogation.pwin_upper_envelope(interrogation.target_vector(2))
    assert target.value > 1
    assert target.reported == 1.0
    assert target.vacuous


def test_tail_norms():
    assert_allclose(interrogation.tail_norms([0.6, 0.8, 0.0]), [1, 0.8, 0])


def test_controls_outside_the_disc_are_rejected():
    with pytest.raises(ConstraintError):
        interrogation.check_controls(
            InterrogationControls(b=[1.0, 1.0], c=[0.0, 1.0]),
        )
    with pytest.raises(DimensionError):
        interrogation.check_controls(
            InterrogationControls(b=[1.0, 0.0], c=[0.0, 1.0]), n_bits=2,
        )


def test_project_enforces_boundary_entries_and_disc():
    b, c = interrogation.project([3.0, 4.0, 1.0], [1.0, 0.0, 0.5])
    assert b[-1] == 0.0 and c[0] == 0.0
    assert_allclose(b ** 2 + c ** 2, [1.0, 1.0, 0.25])


def test_generator_is_antisymmetric_tridiagonal():
    matrix = interrogation.generator(InterrogationControls(
        b=np.array([1.0, 0.6, 0.0]), c=np.array([0.0, 0.8, 1.0]),
    ))
    assert_allclose(matrix, -matrix.T)
    assert matrix[0, 1] == pytest.approx(-np.pi / 2 * 0.8)
    assert matrix[1, 2] == pytest.approx(-np.pi / 2 * 0.6)
    assert matrix[0, 2] == 0


def test_one_bit_reaches_target_at_half_time():
    schedule = [Segment(duration=0.5, b=np.array([1.0, 0.0]),
                        c=np.array([0.0, 1.0]))]
    final = interrogation.final_state(
        interrogation.initial_state(1), schedule, 0.01,
    )
    assert final.t == pytest.approx(0.5)
    assert interrogation.pwin_interrogation(final) >= 1 - 1e-10
    assert_allclose(final.a, interrogation.n1_optimal_state(0.5).a)


@pytest.mark.parametrize('n_bits', [2, 3, 5])
def test_independent_bits_reach_target_at_half_n(n_bits):
    schedule = interrogation.rotation_schedule(n_bits, n_bits / 2, 3)
    final = interrogation.final_state(
        interrogation.initial_state(n_bits), schedule, 0.05,
    )
    assert_allclose(final.a, interrogation.target_vector(n_bits).a, atol=1e-10)


def test_evolution_keeps_norm_and_envelope():
    random = np.random.default_rng(7)
    n_bits = 3
    schedule = interrogation.random_schedule(n_bits, 2.0, 10, random)
    trajectory = interrogation.evolve_reduced(
        interrogation.initial_state(n_bits), schedule, 0.02,
    )
    assert trajectory.times[-1] == pytest.approx(2.0)
    assert_allclose(np.linalg.norm(trajectory.amplitudes, axis=1), 1.0)
    for time, row in zip(trajectory.times, trajectory.amplitudes):
        tails = interrogation.tail_norms(row)
        for index in range(n_bits + 1):
            assert tails[index] <= interrogation.lower_bound_envelope(
                n_bits, time, index,
            ) + 1e-9


def test_evolution_rejects_bad_step():
    with pytest.raises(InvariantError):
        interrogation.evolve_reduced(interrogation.initial_state(1), [], 0.0)


def test_schedule_records_load_back():
    schedule = interrogation.rotation_schedule(2, 1.0, 2)
    loaded = interrogation.load_schedule(
        interrogation.schedule_records(schedule),
    )
    assert [item.duration for item in loaded] == [0.5, 0.5]
    assert_allclose(loaded[1].c, schedule[1].c)


def test_grid_schedule_samples_midpoints():
    schedule = [
        Segment(0.75, b=np.array([1.0, 0.0]), c=np.array([0.0, 1.0])),
        Segment(0.25, b=np.array([0.0, 0.0]), c=np.array([0.0, 0.0])),
    ]
    grid = interrogation.grid_schedule(schedule, 0.25)
    assert len(grid) == 4
    assert [item.b[0] for item in grid] == [1.0, 1.0, 1.0, 0.0]


def test_discrete_achievable_success():
    for n_bits in range(1, 11):
        assert interrogation.discrete_achievable_pwin(n_bits, n_bits) == 1.0
        assert interrogation.discrete_achievable_pwin(
            n_bits, int(np.ceil(n_bits / 2)), 'xor',
        ) == 1.0
    assert interrogation.discrete_achievable_pwin(2, 1) == pytest.approx(0.75)
    assert interrogation.discrete_achievable_pwin(3, 1, 'xor') == 0.5
    with pytest.raises(InvariantError):
        interrogation.discrete_achievable_pwin(2, 1, 'parity')


def test_van_dam_query_count():
    queries = interrogation.van_dam_query_count(256, 0.95)
    assert 128 <= queries <= 176
    with pytest.raises(InvariantError):
        interrogation.van_dam_query_count(10, 1.0)


def test_lower_bounds():
    assert interrogation.lower_bound_envelope(2, 0.0, 0) == 1.0
    assert interrogation.lower_bound_envelope(2, 2 / np.pi, 1) == (
        pytest.approx(1.0)
    )
    assert interrogation.min_time_lower_bound(2, 1.0).time == pytest.approx(
        1 / np.pi,
    )
    ratio = interrogation.min_time_lower_bound(100, 2 / 3).time / 100
    assert 0.105 <= ratio <= 0.125
    assert interrogation.asymptotic_lower_bound(100) == pytest.approx(
        100 / (np.pi * np.e),
    )
    with pytest.raises(InvariantError):
        interrogation.min_time_lower_bound(1, 0.9)


def test_full_problem_dimensions():
    problem = interrogation.Interrogation(2).validate()
    assert problem.dim_a == 4
    assert problem.dim_m == 6
    assert problem.dim_global == 24
    xor = interrogation.Interrogation(2, 'discrete', objective='xor')
    assert xor.validate().dim_m_prime == 2
    assert xor.delta == 1.0


def test_discrete_queries_raise_weight_by_at_most_one():
    problem = interrogation.Interrogation(2, 'discrete').validate()
    random = np.random.default_rng(11)
    steps = []
    for _ in range(2):
        matrix = random.normal(size=(24, 24)) + 1j * random.normal(
            size=(24, 24),
        )
        steps.append(np.linalg.qr(matrix)[0])
    trajectory = problem.evolve_discrete(FullControlSchedule(steps))
    first = problem.reduced_state(trajectory[1].rho)
    assert first[2] ** 2 < 1e-12
    assert np.linalg.norm(problem.reduced_state(trajectory[2].rho)) == (
        pytest.approx(1.0)
    )


def test_full_measurement_on_reduced_target():
    problem = interrogation.Interrogation(1).validate()
    target = interrogation.target_vector(1).a
    rho = sum(
        weight ** 2 * projector_
        for weight, projector_ in zip(target, problem.projectors)
    )
    assert_allclose(problem.reduced_state(rho), target)
    pwin, _ = problem.optimal_final_measurement(rho)
    assert pwin == pytest.approx(1.0)


def test_reduced_and_full_agree_for_one_bit():
    schedule = interrogation.rotation_schedule(1, 0.5)
    deviation = interrogation.verify_reduced_against_full(1, schedule, 1e-3)
    assert deviation < 5e-4


@pytest.mark.slow
def test_reduced_and_full_agree_for_two_bits():
    schedule = geodesic.optimal_schedule_n2(10000)
    deviation = interrogation.verify_reduced_against_full(2, schedule, 1e-4)
    assert deviation < 5e-4


def test_full_comparison_is_limited_to_small_n():
    with pytest.raises(InvariantError):
        interrogation.verify_reduced_against_full(
            4, interrogation.rotation_schedule(4, 2.0), 0.1,
        )


def test_sphere_state_of_n1_optimum():
    state = interrogation.n1_optimal_state(0.25)
    assert isinstance(state, SphereState)
    assert_allclose(state.a, [np.cos(np.pi / 8), np.sin(np.pi / 8)])


def test_xor_success_is_symmetric_under_reversal():
    random = np.random.default_rng(5)
    for n_bits in (2, 3, 6):
        amplitudes = random.normal(size=n_bits + 1)
        amplitudes /= np.linalg.norm(amplitudes)
        assert interrogation.pwin_xor(amplitudes) == pytest.approx(
            interrogation.pwin_xor(amplitudes[::-1]),
        )


def test_xor_of_three_bits_from_middle_weights():
    middle = np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2)
    assert interrogation.pwin_xor(middle) == pytest.approx(1.0)


def test_single_index_controls_move_only_neighbours():
    random = np.random.default_rng(9)
    start = random.normal(size=4)
    start /= np.linalg.norm(start)
    step = 1e-3
    schedule = [Segment(duration=step, b=np.array([0.0, 1.0, 0.0, 0.0]),
                        c=np.array([0.0, 0.0, 1.0, 0.0]))]
    trajectory = interrogation.evolve_reduced(start, schedule, step)
    rates = (trajectory.amplitudes[-1] - trajectory.amplitudes[0]) / step
    assert_allclose(rates[[0, 3]], 0.0, atol=1e-12)
    assert np.abs(rates[[1, 2]]).min() > 0
