"""
The module contains the command-line runner of the oracle experiments.
Every subcommand writes <name>.json (and CSV tables with --csv) and
exits with 0 if all its checks pass, 1 otherwise.

"""


import argparse
import logging
import sys

from common.constants import SUBCOMMANDS
from common.exceptions import HamOracleError
from common.utils import configure_logging, get_json_object
from scripts.experiments import REPORTS


logger = logging.getLogger(__name__)


def get_parser() -> argparse.ArgumentParser:
    """Returns parser with one subparser per experiment."""
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--n', type=int, help='N items or n bits')
    shared.add_argument('--delta', type=float, help='discrete time step')
    shared.add_argument('--dt', type=float, help='integration step')
    shared.add_argument('--mode', choices=('discrete', 'continuous'))
    shared.add_argument('--segments', type=int)
    shared.add_argument('--restarts', type=int)
    shared.add_argument('--seed', type=int)
    shared.add_argument('--out', help='output directory')
    shared.add_argument('--csv', action='store_true', help='write curves')
    shared.add_argument('--verbose', action='store_true')

    parser = argparse.ArgumentParser(
        prog='hamoracle',
        description='Time-optimal Hamiltonian oracle experiments.',
    )
    parser.set_defaults(
        solve=False, horizon=None, target=None, objective=None, gaps=None,
    )
    subparsers = parser.add_subparsers(dest='subcommand', required=True)
    commands = {
        name: subparsers.add_parser(name, parents=[shared])
        for name in SUBCOMMANDS
    }
    commands['geodesic'].add_argument(
        '--solve', action='store_true',
        help='check the apex parameter, the time and the certificate',
    )
    commands['search'].add_argument('--horizon', type=float)
    commands['search'].add_argument(
        '--target', type=float,
        help='bisect on time for this success instead of optimizing',
    )
    commands['search'].add_argument(
        '--objective', choices=('interrogation', 'xor'),
    )
    commands['distinguish'].add_argument(
        '--gaps', type=float, nargs='+',
        help='phases of the second Hamiltonian, the first one is zero',
    )
    return parser


def main(argv=None) -> int:
    """Runs the subcommand and returns the exit code."""
    args = get_parser().parse_args(argv)
    configure_logging(args.verbose)
    properties = get_json_object('properties.json')
    try:
        report = REPORTS[args.subcommand](args, properties)
    except HamOracleError as error:
        logger.error('%s: %s', type(error).__name__, error)
        print(f'error: {error}', file=sys.stderr)
        return 1
    report.save(args.out, args.csv)
    failed = report.failed()
    if failed:
        print(f'failed checks: {", ".join(failed)}', file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
