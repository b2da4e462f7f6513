"""
The module contains some common constants and named_tuples that used
in this project.

"""


import os
from os.path import join, dirname, realpath
from collections import namedtuple

from numpy import pi


VERSION = '1.0.0'

BASE_DIR = dirname(dirname(realpath(__file__)))

DATA_DIR = join(BASE_DIR, 'data')
JSON_DIR = join(DATA_DIR, 'json')
OUT_DIR = os.environ.get('HAMORACLE_OUT_DIR', join(BASE_DIR, 'output'))
OUT_DIR_VARIABLE = 'HAMORACLE_OUT_DIR'

SUBCOMMANDS = (
    'grover',
    'interrogation',
    'geodesic',
    'search',
    'distinguish',
    'verify-all',
)

NORM_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
UNITARY_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-9
CONSTRAINT_TOLERANCE = 1e-12
HULL_SLACK = 1e-12
SIGNIFICANT_DIGITS = 12

HALF_PI = pi / 2
EQUATOR_OFFSET = 1e-6
ROOT_TOLERANCE = 1e-12

ProtocolState = namedtuple(
    typename='ProtocolState',
    field_names=[
        'rho',
        't',
    ]
)
GroverState = namedtuple(
    typename='GroverState',
    field_names=[
        'x',
        'n_items',
        't',
        'past_optimum',
    ]
)
GroverQueryParams = namedtuple(
    typename='GroverQueryParams',
    field_names=[
        'alpha',
        'beta',
        'delta',
    ]
)
FgComparison = namedtuple(
    typename='FgComparison',
    field_names=[
        't_optimal',
        't_fg',
        'gap',
    ]
)
SphereState = namedtuple(
    typename='SphereState',
    field_names=[
        'a',
        'n_bits',
        't',
    ]
)
InterrogationControls = namedtuple(
    typename='InterrogationControls',
    field_names=[
        'b',
        'c',
    ]
)
Segment = namedtuple(
    typename='Segment',
    field_names=[
        'duration',
        'b',
        'c',
    ]
)
ReducedTrajectory = namedtuple(
    typename='ReducedTrajectory',
    field_names=[
        'times',
        'amplitudes',
    ]
)
EnvelopeBound = namedtuple(
    typename='EnvelopeBound',
    field_names=[
        'value',
        'reported',
        'vacuous',
    ]
)
LowerBound = namedtuple(
    typename='LowerBound',
    field_names=[
        'time',
        'asymptotic',
    ]
)
DistinguishResult = namedtuple(
    typename='DistinguishResult',
    field_names=[
        'time',
        'reachable',
    ]
)
PolarPoint = namedtuple(
    typename='PolarPoint',
    field_names=[
        'theta',
        'phi',
    ]
)
GeodesicArc = namedtuple(
    typename='GeodesicArc',
    field_names=[
        'theta0',
        'sign_theta',
        'sign_phi',
        't_span',
    ]
)
Christoffel = namedtuple(
    typename='Christoffel',
    field_names=[
        'theta_phi_phi',
        'phi_theta_phi',
    ]
)
GeodesicTrace = namedtuple(
    typename='GeodesicTrace',
    field_names=[
        'times',
        'theta',
        'phi',
        'theta_dot',
        'phi_dot',
        'boundary_reached',
    ]
)
SearchConfig = namedtuple(
    typename='SearchConfig',
    field_names=[
        'n_bits',
        'segments',
        'horizon',
        'objective',
        'restarts',
        'seed',
        'tolerance',
        'max_sweeps',
        'target_pwin',
    ],
    defaults=[1e-4, 200, None],
)
UpperBound = namedtuple(
    typename='UpperBound',
    field_names=[
        'time',
        'lower_bound',
        'pwin',
        'result',
        'found',
    ]
)
Check = namedtuple(
    typename='Check',
    field_names=[
        'value',
        'expected',
        'tolerance',
        'passed',
    ]
)
