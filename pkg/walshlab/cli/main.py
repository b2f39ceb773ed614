import argparse
import sys
from pathlib import Path
from typing import Sequence

from walshlab.cli import commands
from walshlab.cli.runner import EXIT_CHECK_FAILED, EXIT_USAGE, ExperimentLoggingRunner
from walshlab.config import settings
from walshlab.config.utils.utils import parse_int_list
from walshlab.lab.services.weak_type import WeakOperator


def common_defaults() -> dict:
    return {'resolution': settings.DEFAULT_RESOLUTION, 'seed': 0, 'output': 'both',
            'outdir': settings.OUTDIR}


def _common_parser() -> argparse.ArgumentParser:
    """Global flags, accepted at every level; the innermost occurrence wins."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--resolution', type=int, help="grid resolution N (2**N cells per axis)")
    common.add_argument('--seed', type=int)
    common.add_argument('--output', choices=('csv', 'json', 'both'))
    common.add_argument('--outdir', type=Path)
    return common


def _add_function(parser: argparse.ArgumentParser):
    parser.add_argument('--function', metavar='SPEC',
                        help="const:c | walsh:i,j | rect:a0,a1,b0,b1 | step:L:seed | singular:beta")


def _add_corpus(parser: argparse.ArgumentParser):
    parser.add_argument('--function', dest='functions', action='append', metavar='SPEC',
                        help="corpus member, repeatable; the default corpus when omitted")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='walshlab', parents=[common],
        description="Two-dimensional Walsh-Fourier experiments on the dyadic group.",
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    identities = subparsers.add_parser('identities', parents=[common],
                                       help="exact Dirichlet kernel identities")
    identities.add_argument('--n-max', type=int, default=6)
    identities.set_defaults(handler=commands.identities)

    transform = subparsers.add_parser('transform', parents=[common],
                                      help="2D Walsh-Fourier spectrum with Parseval check")
    _add_function(transform)
    transform.set_defaults(handler=commands.transform)

    maximal = subparsers.add_parser('maximal', parents=[common], help="maximal operators")
    maximal.add_argument('--op', choices=('M', 'M1', 'M2', 'A'), default='M')
    maximal.add_argument('--absolute', action='store_true', help="average |f| in M")
    _add_function(maximal)
    maximal.set_defaults(handler=commands.maximal)

    vop = subparsers.add_parser('vop', parents=[common], help="Schipp's V operator in one variable")
    vop.add_argument('--axis', type=int, choices=(1, 2), default=1)
    vop.add_argument('--n', type=int, default=None, help="level; the supremum over levels when omitted")
    _add_function(vop)
    vop.set_defaults(handler=commands.vop)

    strong = subparsers.add_parser('strong-means', parents=[common],
                                   help="decay of the centered strong means")
    strong.add_argument('--p', type=float, default=2.0)
    strong.add_argument('--n', type=parse_int_list, default=None, metavar='N1,N2,...')
    strong.add_argument('--fit-from', type=int, default=1)
    strong.add_argument('--phi', default=None, metavar='pow:p|exp:A')
    _add_function(strong)
    strong.set_defaults(handler=commands.strong_means)

    lab = subparsers.add_parser('lab', parents=[common],
                                help="numerical replay of the convergence proof")
    actions = lab.add_subparsers(dest='action', required=True)

    decompose = actions.add_parser('decompose', parents=[common], help="nine-term identity")
    decompose.add_argument('--n', type=int, default=None)
    decompose.add_argument('--samples', type=int, default=10)
    decompose.add_argument('--exact', action='store_true', help="rational arithmetic")
    _add_function(decompose)
    decompose.set_defaults(handler=commands.lab_decompose)

    mainest = actions.add_parser('mainest', parents=[common], help="core estimate ratios")
    _add_function(mainest)
    mainest.set_defaults(handler=commands.lab_mainest)

    weak_type = actions.add_parser('weak-type', parents=[common], help="weak-type constants")
    weak_type.add_argument('--operator', choices=[operator.value for operator in WeakOperator],
                           default=WeakOperator.HSTAR.value)
    weak_type.add_argument('--p', type=float, default=2.0)
    _add_corpus(weak_type)
    weak_type.set_defaults(handler=commands.lab_weak_type)

    duality = actions.add_parser('duality', parents=[common], help="Cauchy-Schwarz duality step")
    duality.add_argument('--n', type=int, default=None)
    duality.add_argument('--x', type=int, default=None)
    duality.add_argument('--y', type=int, default=None)
    _add_function(duality)
    duality.set_defaults(handler=commands.lab_duality)

    bounds = actions.add_parser('maximal-bounds', parents=[common],
                                help="L1 norms of maximal operators against L log L")
    _add_corpus(bounds)
    bounds.set_defaults(handler=commands.lab_maximal_bounds)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Exit codes: 0 success, 1 failed check or numeric overflow, 2 usage or precondition error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    for key, value in common_defaults().items():
        if not hasattr(args, key):
            setattr(args, key, value)

    command = args.command if args.command != 'lab' else f"lab {args.action}"
    try:
        result = ExperimentLoggingRunner(args.handler)(command, args)
    except ValueError as e:
        print(f"walshlab {command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as e:
        print(f"walshlab {command}: check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return result.exit_code
