# -*- coding: utf-8 -*-

"""
Command line interface.

    python -m sproxlib bench config.json
    python -m sproxlib diag [--full] [--suite NAME ...] [--seed SEED]
    python -m sproxlib prox --kind mcp --kappa 1 --nu 1 --lam 0.1 3.0 -1.0
    python -m sproxlib prox --project simplex --total 1 0.3 0.9 -0.2

Licensed under the MIT License, see LICENSE.
"""

import argparse
import logging

import numpy as np

from .bench import run_benchmark
from .config import load_config
from .console import Color, Console
from .diagnostics import SUITES, run_diagnostics
from .errors import InvalidArgumentError, SproxError
from .projections import build_constraint
from .regularizers import DEFAULT_SCAD_NU, build_regularizer, prox

log = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

CONSTRAINT_KINDS = ('free', 'simplex', 'halfspace_pair', 'nonneg_ball')


def _format_vector(w):
    return ' '.join(f'{x:.17g}' for x in np.asarray(w, dtype=np.float64))


def build_parser():
    """
    The argument parser of the sproxlib command.

    :rtype: argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(prog='sproxlib',
                                     description='Stochastic proximal algorithms for '
                                                 'non-convex non-smooth constrained problems.')
    parser.add_argument('--log-level', default='WARNING', choices=LOG_LEVELS, dest='log_level',
                        help='root logger level (default WARNING)')
    parser.add_argument('--no-color', action='store_true', dest='no_color',
                        help='plain console output')

    commands = parser.add_subparsers(dest='command', required=True)

    bench = commands.add_parser('bench', help='run a benchmark config file')
    bench.add_argument('config', help='path of a JSON benchmark config')
    bench.add_argument('--debug', action='store_true', help='asyncio debug mode')

    diag = commands.add_parser('diag', help='run the numerical diagnostic suites')
    diag.add_argument('--full', action='store_true', help='acceptance sizes, slower')
    diag.add_argument('--suite', action='append', choices=list(SUITES), dest='suites',
                      help='run only this suite, may be repeated')
    diag.add_argument('--seed', type=int, default=0)

    px = commands.add_parser('prox', help='evaluate one prox or projection')
    px.add_argument('values', nargs='+', type=float, help='the input vector')
    px.add_argument('--kind', default='mcp', choices=('mcp', 'scad', 'zero'))
    px.add_argument('--kappa', type=float, default=1.0)
    px.add_argument('--nu', type=float, default=None,
                    help=f'defaults to 1 for mcp and {DEFAULT_SCAD_NU} for scad')
    px.add_argument('--lam', type=float, default=1.0)
    px.add_argument('--project', choices=CONSTRAINT_KINDS, default=None,
                    help='project onto a constraint set instead')
    px.add_argument('--total', type=float, default=1.0)
    px.add_argument('--augmented', action='store_true')
    px.add_argument('--radius', type=float, default=1.0)
    px.add_argument('--c', type=float, default=None)
    px.add_argument('--x-hat', nargs='+', type=float, default=None, dest='x_hat')

    return parser


def _bench(args, console):
    config = load_config(args.config)
    return run_benchmark(config, console=console, debug=args.debug)


def _diag(args, console):
    return run_diagnostics(args.suites, args.full, args.seed, console)


def _prox(args, console):
    w = np.asarray(args.values, dtype=np.float64)

    if args.project is not None:
        params = {'total': args.total, 'augmented': args.augmented, 'radius': args.radius}
        if args.project == 'halfspace_pair':
            if args.x_hat is None or args.c is None:
                raise InvalidArgumentError('halfspace_pair needs --x-hat and --c.')
            params.update(x_hat=args.x_hat, c=args.c)

        constraint = build_constraint(args.project, w.shape[0], **params)
        console.write(_format_vector(constraint.project(w)), ts=False)
        return 0

    nu = args.nu
    if nu is None:
        nu = DEFAULT_SCAD_NU if args.kind == 'scad' else 1.0

    reg = build_regularizer(args.kind, w.shape[0], kappa=args.kappa, nu=nu)
    zeta, envelope = prox(reg, args.lam, w)

    console.write(_format_vector(zeta), ts=False)
    console.write(f'{envelope:.17g}', ts=False)
    return 0


COMMANDS = {
    'bench': _bench,
    'diag': _diag,
    'prox': _prox
}


def main(argv=None, console=None):
    """
    Run the command line.

    :param argv: The arguments, sys.argv[1:] by default.
    :type argv: list | None
    :param console: Console for output.
    :type console: Console | None
    :return: The exit status.
    :rtype: int
    """
    args = build_parser().parse_args(argv)

    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    if console is None:
        console = Console(colors=False) if args.no_color else Console()

    try:
        return COMMANDS[args.command](args, console)
    except SproxError as e:
        log.debug(f'{args.command} failed', exc_info=True)
        console.write(f'error: {e}', Color.B_RED)
        return 2
