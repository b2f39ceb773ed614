from argparse import Namespace
from typing import Sequence

import numpy as np

from walshlab.cli.corpus import default_corpus, generate
from walshlab.cli.exceptions import UsageError
from walshlab.cli.runner import EXIT_CHECK_FAILED, EXIT_OK, CommandResult
from walshlab.cli.specs import parse_spec
from walshlab.config import settings
from walshlab.dyadic.models import DyadicPoint, Grid2
from walshlab.dyadic.services.io import dump_grid, dump_spectrum
from walshlab.dyadic.services.norms import llogl_functional, norm_p, norm_sup
from walshlab.dyadic.services.transforms import fwht_forward_2d, fwht_inverse_2d
from walshlab.kernels.services import verify_dyadic_dirichlet, verify_schipp_identity
from walshlab.lab.services.decomposition import decomposition_report
from walshlab.lab.services.duality import duality_check, duality_report
from walshlab.lab.services.mainest import mainest_ratio, maximal_bound_report
from walshlab.lab.services.weak_type import (
    WeakOperator,
    default_lambda_grid,
    distribution_table,
    weak_type_constant,
)
from walshlab.maximal.services import MaximalOperators
from walshlab.reports.renderers import write_report
from walshlab.reports.schemes import ExperimentReport, Provenance
from walshlab.schipp.services import v_hybrid, v_hybrid_sup
from walshlab.strong.models import PhiSpec
from walshlab.strong.services.convergence import convergence_report
from walshlab.strong.services.means import phi_strong_mean


def default_function(args: Namespace) -> str:
    return f"step:{min(4, args.resolution)}:{args.seed}"


def load_function(args: Namespace) -> Grid2:
    return generate(parse_spec(args.function or default_function(args)), args.resolution)


def load_corpus(args: Namespace) -> dict[str, Grid2]:
    if not args.functions:
        return default_corpus(args.resolution, args.seed)
    corpus = {}
    for text in args.functions:
        spec = parse_spec(text)
        corpus[str(spec)] = generate(spec, args.resolution)
    return corpus


def emit(args: Namespace, report: ExperimentReport, ok: bool = True,
         extra_files: Sequence = ()) -> CommandResult:
    files = write_report(report.with_provenance(args.seed), args.outdir, args.output)
    return CommandResult(
        exit_code=EXIT_OK if ok else EXIT_CHECK_FAILED,
        files=[*extra_files, *files],
        summary=report.summary,
    )


def identities(args: Namespace) -> CommandResult:
    checks = [verify_schipp_identity(args.n_max), verify_dyadic_dirichlet(args.n_max)]
    first_failure = next((check.first_failure for check in checks if check.first_failure), None)
    ok = all(check.ok for check in checks)
    report = ExperimentReport(
        experiment='identities',
        config={'n_max': args.n_max},
        rows=[
            {'name': check.name, 'n_max': check.n_max, 'checked': check.checked,
             'passed': check.passed, 'ok': check.ok}
            for check in checks
        ],
        summary={
            'checked': sum(check.checked for check in checks),
            'passed': sum(check.passed for check in checks),
            'first_failure': first_failure.model_dump() if first_failure else None,
            'ok': ok,
        },
        provenance=Provenance(resolution=args.n_max),
        rows_key='checks',
    )
    return emit(args, report, ok)


def transform(args: Namespace) -> CommandResult:
    f = load_function(args)
    spectrum = fwht_forward_2d(f)
    restored = fwht_inverse_2d(spectrum)
    energy = float(np.mean(f.values ** 2))
    errors = {
        'parseval': abs(energy - spectrum.energy()) / max(1.0, energy),
        'round_trip': float(np.abs(restored.values - f.values).max()) / max(1.0, norm_sup(f)),
    }
    rows = [
        {'check': name, 'error': error, 'passed': error <= settings.PARSEVAL_TOLERANCE}
        for name, error in errors.items()
    ]
    ok = all(row['passed'] for row in rows)
    spectrum_path = dump_spectrum(spectrum, args.outdir / 'transform_spectrum.csv')
    report = ExperimentReport(
        experiment='transform',
        config={'function': args.function or default_function(args)},
        rows=rows,
        summary={'energy': energy, 'ok': ok},
        provenance=Provenance(resolution=f.resolution),
    )
    return emit(args, report, ok, [spectrum_path])


def maximal(args: Namespace) -> CommandResult:
    f = load_function(args)
    operators = MaximalOperators(f)
    match args.op:
        case 'M':
            result = operators.dyadic(absolute_inside=args.absolute)
        case 'M1':
            result = operators.hybrid(1)
        case 'M2':
            result = operators.hybrid(2)
        case _:
            result = operators.diagonal_maximal()
    grid_path = dump_grid(result, args.outdir / f"maximal_{args.op.lower()}.csv")
    report = ExperimentReport(
        experiment='maximal',
        config={'op': args.op, 'function': args.function or default_function(args),
                'absolute': args.absolute},
        rows=[{
            'op': args.op,
            'l1_norm': norm_p(result, 1),
            'sup_norm': norm_sup(result),
            'llogl_bound': 1 + llogl_functional(f),
        }],
        provenance=Provenance(resolution=f.resolution),
    )
    return emit(args, report, extra_files=[grid_path])


def vop(args: Namespace) -> CommandResult:
    f = load_function(args)
    result = v_hybrid_sup(f, args.axis) if args.n is None else v_hybrid(f, args.n, args.axis)
    grid_path = dump_grid(result, args.outdir / 'vop_grid.csv')
    lambda_grid = default_lambda_grid(result.values)
    rows = []
    if lambda_grid is not None:
        measures = distribution_table(result.values, lambda_grid)
        rows = [
            {'lambda': float(value), 'measure': float(measure)}
            for value, measure in zip(lambda_grid, measures)
        ]
    report = ExperimentReport(
        experiment='vop',
        config={'axis': args.axis, 'n': args.n, 'function': args.function or default_function(args)},
        rows=rows,
        summary={'l1_norm': norm_p(result, 1), 'sup_norm': norm_sup(result),
                 'f_l1_norm': norm_p(f, 1)},
        provenance=Provenance(resolution=f.resolution),
    )
    return emit(args, report, extra_files=[grid_path])


def strong_means(args: Namespace) -> CommandResult:
    f = load_function(args)
    n_list = args.n or settings.STRONG_MEANS_DEFAULT_N
    report = convergence_report(f, args.p, n_list, fit_from=args.fit_from)
    phi_report = None
    if args.phi:
        phi = PhiSpec.parse(args.phi)
        rows = []
        for n_terms in n_list:
            mean = phi_strong_mean(f, n_terms, phi)
            rows.append({'n': n_terms, 'sup': norm_sup(mean), 'l1': norm_p(mean, 1)})
        phi_report = ExperimentReport(
            experiment='phi_means',
            config={'phi': str(phi), 'n': list(n_list)},
            rows=rows,
            provenance=Provenance(resolution=f.resolution),
        )
    result = emit(args, report)
    if phi_report is not None:
        result.files.extend(emit(args, phi_report).files)
    return result


def _block_exponent(args: Namespace) -> int:
    return min(2, args.resolution) if args.n is None else args.n


def lab_decompose(args: Namespace) -> CommandResult:
    report = decomposition_report(
        load_function(args), _block_exponent(args), samples=args.samples, seed=args.seed,
        exact=args.exact,
    )
    return emit(args, report, report.summary['ok'])


def lab_mainest(args: Namespace) -> CommandResult:
    return emit(args, mainest_ratio(load_function(args)))


def lab_weak_type(args: Namespace) -> CommandResult:
    operator = WeakOperator(args.operator)
    return emit(args, weak_type_constant(operator, load_corpus(args), p=args.p))


def lab_duality(args: Namespace) -> CommandResult:
    if (args.x is None) != (args.y is None):
        raise UsageError("--x and --y must be given together.")
    f = load_function(args)
    n = _block_exponent(args)
    if args.x is None or args.y is None:
        report = duality_report(f, n)
        return emit(args, report, report.summary['ok'])

    check = duality_check(f, n, DyadicPoint(args.x, f.resolution), DyadicPoint(args.y, f.resolution))
    report = ExperimentReport(
        experiment='duality',
        config={'n': n, 'x': args.x, 'y': args.y},
        rows=[check.model_dump()],
        summary={'checked': 1, 'passed': int(check.passed),
                 'max_relative_error': check.relative_error, 'ok': check.passed},
        provenance=Provenance(resolution=f.resolution),
    )
    return emit(args, report, check.passed)


def lab_maximal_bounds(args: Namespace) -> CommandResult:
    return emit(args, maximal_bound_report(load_corpus(args)))
