"""
The module contains procedures of the command-line experiments.
Every procedure returns ExperimentReport with scalars, checks and curves.

"""


import logging

from numpy import arange, arccos, arctan, array, ceil, pi, sin, sqrt, zeros
from numpy.random import default_rng
from pandas import DataFrame
from scipy.stats import unitary_group

from common.constants import PolarPoint, SearchConfig
from common.utils import get_default, get_time_of_execution
from fitting.control_search import min_time_upper_bound, optimize_controls
from scripts import geodesic_object as geodesic
from scripts import grover_object as grover
from scripts import interrogation_object as interrogation
from scripts.experiment_object import ExperimentReport
from scripts.oracle_object import FullControlSchedule, min_distinguish_time


logger = logging.getLogger(__name__)


def _report(name: str, properties: dict, seed: int = None):
    return ExperimentReport(
        name=name, seed=seed, tolerances=properties['tolerances'],
    )


def simulate_grover_continuous(n_items: int, dt: float):
    """Returns table of x simulated in the full space and in closed form."""
    problem = grover.Grover(n_items).validate()
    step = problem.effective_step(dt)
    trajectory = problem.evolve_continuous(problem.optimal_controls(dt), step)
    pwin, _ = problem.optimal_final_measurement(trajectory[-1])
    frame = DataFrame({
        't': [item.t for item in trajectory],
        'x_simulated': [problem.reduced_x(item.rho) for item in trajectory],
        'x_closed_form': [
            grover.continuous_x(item.t, n_items) for item in trajectory
        ],
        'fg_pwin': [
            grover.fg_success_probability(item.t, n_items)
            for item in trajectory
        ],
    })
    return frame, pwin


def simulate_grover_discrete(n_items: int, delta: float):
    """Returns table of x after every query, simulated and reduced."""
    problem = grover.Grover(n_items, 'discrete', delta).validate()
    trajectory = problem.evolve_discrete(problem.optimal_controls())
    pwin, _ = problem.optimal_final_measurement(trajectory[-1])
    frame = DataFrame({
        'query': arange(len(trajectory)),
        'x_simulated': [problem.reduced_x(item.rho) for item in trajectory],
        'x_reduced': grover.discrete_trajectory(n_items, delta),
    })
    return frame, pwin


@get_time_of_execution
def grover_report(args, properties: dict) -> ExperimentReport:
    """One-item search: optimal times, comparison and simulation."""
    config = properties['grover']
    tolerances = properties['tolerances']
    n_items = get_default(args.n, config['n'])
    mode = get_default(args.mode, config['mode'])
    dt = get_default(args.dt, config['dt'])
    report = _report('grover', properties)
    report.add_scalar('n_items', n_items)
    report.add_scalar('mode', mode)
    simulated = n_items <= config['max_simulated_items']
    if mode == 'continuous':
        comparison = grover.fg_comparison(n_items)
        report.add_scalar('T', comparison.t_optimal)
        report.add_scalar('T_fg', comparison.t_fg)
        report.add_scalar('gap', comparison.gap)
        report.add_scalar(
            'T_bounded', grover.continuous_bounded_time(n_items),
        )
        report.add_scalar('pwin_bounded', grover.pwin_from_x(0.5, n_items))
        if simulated:
            frame, pwin = simulate_grover_continuous(n_items, dt)
            report.add_curve('x', frame)
            report.add_check(
                'x_deviation',
                float((frame.x_simulated - frame.x_closed_form).abs().max()),
                0.0, tolerances['grover_x'], 'max',
            )
            report.add_check(
                'x_final', float(frame.x_simulated.iloc[-1]), 1 / n_items,
                tolerances['grover_x'],
            )
            report.add_check('pwin', pwin, 1.0, tolerances['grover_x'])
        return report
    delta = get_default(args.delta, config['delta'])
    report.add_scalar('delta', delta)
    report.add_scalar(
        'queries', grover.discrete_query_count(n_items, delta),
    )
    report.add_scalar('T', grover.discrete_exact_time(n_items, delta))
    if simulated:
        frame, pwin = simulate_grover_discrete(n_items, delta)
        report.add_curve('x', frame)
        report.add_check(
            'x_deviation',
            float((frame.x_simulated - frame.x_reduced).abs().max()),
            0.0, tolerances['discrete_x'], 'max',
        )
        report.add_check('pwin', pwin, 1.0, tolerances['discrete_x'])
    return report


def reference_schedule(n_bits: int, segments: int):
    """Returns the known zero-error schedule: geodesic for two bits,
    independent bits otherwise."""
    if n_bits == 2:
        return geodesic.optimal_schedule_n2(segments)
    horizon = 0.5 if n_bits == 1 else n_bits / 2
    return interrogation.rotation_schedule(n_bits, horizon)


def reduced_curve(trajectory) -> DataFrame:
    """Returns table of a_j and A_j along the trajectory."""
    tails = array([
        interrogation.tail_norms(row) for row in trajectory.amplitudes
    ])
    frame = DataFrame({'t': trajectory.times})
    for index in range(trajectory.amplitudes.shape[1]):
        frame[f'a{index}'] = trajectory.amplitudes[:, index]
        frame[f'A{index}'] = tails[:, index]
    return frame


def envelope_violation(trajectory, n_bits: int) -> float:
    """Returns max of A_j(t) - (pi t/2)^j/j! along the trajectory."""
    worst = -1.0
    for time, row in zip(trajectory.times, trajectory.amplitudes):
        bounds = [
            interrogation.lower_bound_envelope(n_bits, time, index)
            for index in range(n_bits + 1)
        ]
        worst = max(
            worst, (interrogation.tail_norms(row) - array(bounds)).max(),
        )
    return float(worst)


def support_growth(n_bits: int, seed: int) -> float:
    """Returns max a_j^2 with j > t after t discrete queries
    interleaved with random unitaries."""
    problem = interrogation.Interrogation(n_bits, 'discrete').validate()
    steps = [
        unitary_group.rvs(problem.dim_global, random_state=seed + number)
        for number in range(n_bits)
    ]
    trajectory = problem.evolve_discrete(FullControlSchedule(steps))
    worst = 0.0
    for queries, item in enumerate(trajectory):
        amplitudes = problem.reduced_state(item.rho)
        if queries < n_bits:
            worst = max(worst, float((amplitudes[queries + 1:] ** 2).max()))
    return worst


@get_time_of_execution
def interrogation_report(args, properties: dict) -> ExperimentReport:
    """Oracle interrogation and XOR: reduced dynamics and bounds."""
    config = properties['interrogation']
    tolerances = properties['tolerances']
    n_bits = get_default(args.n, config['n'])
    mode = get_default(args.mode, config['mode'])
    seed = get_default(args.seed, 0)
    report = _report('interrogation', properties, seed)
    report.add_scalar('n_bits', n_bits)
    report.add_scalar('mode', mode)
    if n_bits > 1:
        bound = interrogation.min_time_lower_bound(n_bits, 1.0)
        report.add_scalar('lower_bound', bound.time)
        report.add_scalar('asymptotic_lower_bound', bound.asymptotic)
    if mode == 'discrete':
        rows = [
            (
                queries,
                interrogation.discrete_achievable_pwin(n_bits, queries),
                interrogation.discrete_achievable_pwin(
                    n_bits, queries, 'xor',
                ),
            )
            for queries in range(n_bits + 1)
        ]
        report.add_curve('achievable', DataFrame(
            rows, columns=['queries', 'pwin_interrogation', 'pwin_xor'],
        ))
        report.add_scalar(
            'van_dam_queries',
            interrogation.van_dam_query_count(n_bits, config['target_pwin']),
        )
        report.add_check('pwin_interrogation_exact', rows[-1][1], 1.0)
        report.add_check(
            'pwin_xor_exact', rows[int(ceil(n_bits / 2))][2], 1.0,
        )
        if n_bits <= 3:
            report.add_check(
                'support_growth', support_growth(n_bits, seed), 0.0,
                tolerances['discrete_x'], 'max',
            )
        return report
    segments = get_default(args.segments, config['segments'])
    dt = get_default(args.dt, config['dt'])
    schedule = reference_schedule(n_bits, segments)
    trajectory = interrogation.evolve_reduced(
        interrogation.initial_state(n_bits), schedule,
        min(dt, schedule[0].duration),
    )
    final = trajectory.amplitudes[-1]
    envelope = interrogation.pwin_upper_envelope(final)
    report.add_scalar('T', float(trajectory.times[-1]))
    report.add_scalar('a_final', final)
    report.add_scalar('pwin_xor', interrogation.pwin_xor(final))
    report.add_scalar('pwin_envelope', envelope.reported)
    report.add_scalar('pwin_envelope_vacuous', envelope.vacuous)
    report.add_check(
        'pwin_interrogation', interrogation.pwin_interrogation(final), 1.0,
        tolerances['pipeline_pwin'], 'min',
    )
    report.add_check(
        'envelope_violation', envelope_violation(trajectory, n_bits), 0.0,
        1e-9, 'max',
    )
    report.add_curve('a', reduced_curve(trajectory))
    if args.dt is not None and n_bits <= 3:
        report.add_check(
            'reduced_full_deviation',
            interrogation.verify_reduced_against_full(n_bits, schedule, dt),
            0.0, tolerances['reduced_full'], 'max',
        )
    return report


def geodesic_checks(report, properties: dict, segments: int):
    """Adds checks of the two-bit optimum and its certificate."""
    config = properties['geodesic']
    tolerances = properties['tolerances']
    cos_theta0 = report.scalars['cos_theta0']
    report.add_check(
        'cos_theta0', cos_theta0, 0.7477, tolerances['cos_theta0'],
    )
    report.add_check(
        'T', report.scalars['T'], 0.9052, tolerances['min_time_n2'],
    )
    farther = geodesic.solve_theta0(
        PolarPoint(theta=pi / 4, phi=3 * pi / 4),
        scan=tuple(config['certificate_scan']),
    )
    report.add_scalar('cos_theta0_three_quarters', farther)
    report.add_check(
        'certificate_root_order', farther - cos_theta0, 0.0, 0.0, 'min',
    )
    report.add_check(
        'apex_return_time', geodesic.apex_return_time(pi / 4), 1.0, 0.0,
        'min',
    )
    schedule = geodesic.optimal_schedule_n2(segments, cos_theta0)
    final = interrogation.final_state(
        interrogation.initial_state(2), schedule, schedule[0].duration,
    )
    report.add_check(
        'pipeline_pwin', interrogation.pwin_interrogation(final), 1.0,
        tolerances['pipeline_pwin'], 'min',
    )


def integrator_checks(report, properties: dict, dt: float):
    """Adds closed form against integrator checks on the optimal arc."""
    tolerance = properties['tolerances']['integrator']
    arc = geodesic.optimal_arc(report.scalars['cos_theta0'])
    deviation, speed, clairaut = geodesic.verify_integrator(
        arc.theta0, properties['geodesic']['t_start'], arc.t_span[1], dt,
    )
    report.add_check('integrator_deviation', deviation, 0.0, tolerance, 'max')
    report.add_check('speed_drift', speed, 0.0, tolerance, 'max')
    report.add_check('clairaut_drift', clairaut, 0.0, tolerance, 'max')


@get_time_of_execution
def geodesic_report(args, properties: dict) -> ExperimentReport:
    """Two-bit optimum: apex parameter, time and the geodesic."""
    config = properties['geodesic']
    report = _report('geodesic', properties)
    cos_theta0 = geodesic.solve_theta0(scan=tuple(config['scan']))
    report.add_scalar('cos_theta0', cos_theta0)
    report.add_scalar('theta0', float(arccos(cos_theta0)))
    report.add_scalar('T', geodesic.min_time_n2(cos_theta0))
    report.add_scalar(
        'apex_return_time', geodesic.apex_return_time(arccos(cos_theta0)),
    )
    report.add_curve(
        'trace', geodesic.geodesic_trace(config['samples'], cos_theta0),
    )
    if args.solve:
        geodesic_checks(
            report, properties,
            get_default(args.segments, properties['interrogation']['segments']),
        )
    if args.dt is not None:
        integrator_checks(report, properties, args.dt)
    return report


def search_config(args, properties: dict, **kwargs) -> SearchConfig:
    """Returns search settings from flags over JSON defaults."""
    config = properties['search']
    values = {
        'n_bits': get_default(args.n, config['n']),
        'segments': get_default(args.segments, config['segments']),
        'horizon': get_default(args.horizon, config['horizon']),
        'objective': get_default(args.objective, config['objective']),
        'restarts': get_default(args.restarts, config['restarts']),
        'seed': get_default(args.seed, config['seed']),
        'tolerance': config['tolerance'],
        'max_sweeps': config['max_sweeps'],
        'target_pwin': None,
    }
    values.update(kwargs)
    return SearchConfig(**values)


@get_time_of_execution
def search_report(args, properties: dict) -> ExperimentReport:
    """Pattern search for controls, or bisection on time with --target."""
    config = search_config(args, properties)
    report = _report('search', properties, config.seed)
    report.add_scalar('config', config)
    if args.target is not None:
        bound = min_time_upper_bound(config.n_bits, args.target, config)
        report.add_scalar('upper_bound', bound.time)
        report.add_scalar('lower_bound', bound.lower_bound)
        report.add_scalar('pwin', bound.pwin)
        report.add_scalar('controls', bound.result.schedule_records())
        report.add_check('found', bound.found, True)
        report.add_check(
            'sandwich', bound.lower_bound, bound.time, 1e-9, 'max',
        )
        return report
    result = optimize_controls(config)
    report.add_scalar('best_pwin', result.best_pwin)
    report.add_scalar('restart_pwins', result.restart_pwins)
    report.add_scalar('controls', result.schedule_records())
    report.add_curve('history', DataFrame({
        'sweep': arange(len(result.history)),
        'best_pwin': result.history,
    }))
    return report


@get_time_of_execution
def distinguish_report(args, properties: dict) -> ExperimentReport:
    """Minimal time to distinguish two diagonal Hamiltonians."""
    config = properties['distinguish']
    report = _report('distinguish', properties)
    pairs = (
        {'gaps': args.gaps} if args.gaps is not None else config['pairs']
    )
    for name, gaps in pairs.items():
        result = min_distinguish_time(zeros(len(gaps)), gaps, config['t_max'])
        report.add_scalar(f'{name}.time', result.time)
        report.add_scalar(f'{name}.reachable', result.reachable)
    if args.gaps is None:
        tolerance = properties['tolerances']['distinguish']
        report.add_check('unit', report.scalars['unit.time'], 1.0, tolerance)
        report.add_check('half', report.scalars['half.time'], 0.5, tolerance)
    return report


def _grover_criteria(report, properties: dict, dt: float):
    config = properties['grover']
    tolerances = properties['tolerances']
    for n_items in (2, 4, 16, 1024):
        independent = n_items * arctan(sqrt(n_items - 1)) / (
            pi * sqrt(n_items - 1)
        )
        report.add_check(
            f'c2.T_{n_items}', grover.continuous_exact_time(n_items),
            float(independent), 1e-12,
        )
    frame, _ = simulate_grover_continuous(4, dt)
    report.add_check(
        'c2.x_final', float(frame.x_simulated.iloc[-1]), 0.25,
        tolerances['grover_x'],
    )
    comparison = grover.fg_comparison(2)
    report.add_check(
        'c3.ratio_2', comparison.t_fg / comparison.t_optimal, sqrt(2), 1e-9,
    )
    for n_items, relative in zip(config['fg_sizes'], (0.1, 0.01, 0.001)):
        report.add_check(
            f'c3.gap_{n_items}', grover.fg_comparison(n_items).gap, 1 / pi,
            relative / pi,
        )
    report.add_check('c4.queries_4', grover.discrete_query_count(4, 1.0), 1)
    size, delta = config['speedup_size'], config['speedup_delta']
    expected = delta / sin(pi * delta / 2)
    report.add_check(
        'c4.speedup',
        grover.discrete_exact_time(size, delta)
        / grover.discrete_exact_time(size, 1.0),
        float(expected), tolerances['speedup'] * expected,
    )


def _interrogation_criteria(report, properties: dict, dt: float, seed: int):
    config = properties['interrogation']
    tolerances = properties['tolerances']
    one_bit = interrogation.final_state(
        interrogation.initial_state(1),
        interrogation.rotation_schedule(1, 0.5), 0.5,
    )
    report.add_check(
        'c5.pwin', interrogation.pwin_interrogation(one_bit), 1.0, 1e-10,
        'min',
    )
    for n_bits in range(1, 11):
        report.add_check(
            f'c6.interrogation_{n_bits}',
            interrogation.discrete_achievable_pwin(n_bits, n_bits), 1.0,
        )
        report.add_check(
            f'c6.xor_{n_bits}',
            interrogation.discrete_achievable_pwin(
                n_bits, int(ceil(n_bits / 2)), 'xor',
            ),
            1.0,
        )
    queries = interrogation.van_dam_query_count(config['van_dam_size'], 0.95)
    report.add_check('c6.van_dam_low', queries, 128, 0, 'min')
    report.add_check('c6.van_dam_high', queries, 176, 0, 'max')
    random = default_rng(seed)
    worst = -1.0
    for n_bits in config['envelope_sizes']:
        for _ in range(config['random_schedules']):
            horizon = random.uniform(0.1, n_bits)
            schedule = interrogation.random_schedule(
                n_bits, horizon, config['envelope_segments'], random,
            )
            trajectory = interrogation.evolve_reduced(
                interrogation.initial_state(n_bits), schedule,
                horizon / (5 * config['envelope_segments']),
            )
            worst = max(worst, envelope_violation(trajectory, n_bits))
    report.add_check('c7.envelope_violation', worst, 0.0, 1e-9, 'max')
    report.add_check(
        'c7.lower_bound_ratio',
        interrogation.min_time_lower_bound(100, 2 / 3).time / 100,
        0.115, 0.01,
    )
    for n_bits in (1, 2):
        report.add_check(
            f'c8.deviation_{n_bits}',
            interrogation.verify_reduced_against_full(
                n_bits, reference_schedule(n_bits, config['segments']), dt,
            ),
            0.0, tolerances['reduced_full'], 'max',
        )


def _search_criteria(report, args, properties: dict):
    config = properties['search']
    rediscovery = search_config(
        args, properties, n_bits=2, horizon=0.9052, **config['rediscovery'],
    )
    result = optimize_controls(rediscovery)
    report.add_check(
        'c10.rediscovery', result.best_pwin,
        config['rediscovery']['target_pwin'], 0.0, 'min',
    )
    bound = min_time_upper_bound(
        2, config['upper_bound_target'], search_config(args, properties),
    )
    report.add_check('c10.upper_bound', bound.time, 0.92, 0.0, 'max')
    report.add_check('c10.above_lower_bound', bound.time, 2 / pi, 0.0, 'min')
    report.add_check(
        'c10.sandwich', bound.lower_bound, bound.time, 1e-9, 'max',
    )


@get_time_of_execution
def verify_all_report(args, properties: dict) -> ExperimentReport:
    """Runs every acceptance check and collects them in one report."""
    dt = get_default(args.dt, 1e-4)
    seed = get_default(args.seed, properties['search']['seed'])
    report = _report('verify_all', properties, seed)
    geodesic_part = _report('geodesic', properties)
    cos_theta0 = geodesic.solve_theta0(
        scan=tuple(properties['geodesic']['scan']),
    )
    geodesic_part.add_scalar('cos_theta0', cos_theta0)
    geodesic_part.add_scalar('T', geodesic.min_time_n2(cos_theta0))
    geodesic_checks(
        geodesic_part, properties, properties['interrogation']['segments'],
    )
    integrator_checks(geodesic_part, properties, 1e-5)
    report.merge(geodesic_part, 'c1')
    _grover_criteria(report, properties, dt)
    _interrogation_criteria(report, properties, dt, seed)
    report.merge(distinguish_report(args, properties), 'c9')
    _search_criteria(report, args, properties)
    return report


REPORTS = {
    'grover': grover_report,
    'interrogation': interrogation_report,
    'geodesic': geodesic_report,
    'search': search_report,
    'distinguish': distinguish_report,
    'verify-all': verify_all_report,
}
