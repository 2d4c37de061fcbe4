"""Command-line interface.

Subcommands: solve-steady, solve-transient, convergence, consistency,
check-mmatrix, dump-stencils.  Flags are long-form only; a JSON config
file may supply any of them (--config), with explicit flags taking
precedence.  Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cases import CaseError, lookup_case
from .coefficients import CoefficientError, cn_context, steady_context, tables_from_context
from .grid import GridError, make_grid, sample_scalar
from .harness import (
    HarnessError,
    ConvergenceReport,
    consistency_probe,
    convergence_study,
    emit_report,
    error_norms,
    format_report,
)
from .linsys import SolveError
from .solvers import DEFAULT_R, SolveConfig, SolverError, run_algorithm
from .stencils import StencilError, build_stencils, mmatrix_report, stencil_dump

_VARIANT_NAMES = {
    "general": "general4",
    "special": "special4",
    "reduced": None,  # resolved against the algorithm below
    "general4": "general4",
    "special4": "special4",
    "reduced_elliptic": "reduced_elliptic",
    "reduced_helmholtz": "reduced_helmholtz",
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _resolve_variant(name: str, algorithm: str) -> str:
    if name not in _VARIANT_NAMES:
        raise UsageError(f"unknown variant {name!r}")
    resolved = _VARIANT_NAMES[name]
    if resolved is None:
        resolved = "reduced_elliptic" if algorithm == "steady" \
            else "reduced_helmholtz"
    if algorithm != "steady" and resolved != "reduced_helmholtz":
        raise UsageError(
            f"transient algorithms use the reduced variant, not {name!r}")
    if algorithm == "steady" and resolved == "reduced_helmholtz":
        raise UsageError("reduced_helmholtz needs a transient algorithm")
    return resolved


def _build_parser() -> _Parser:
    parser = _Parser(prog="compactcd", description=__doc__)
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, transient=False):
        p.add_argument("--config", help="JSON file with default flag values")
        p.add_argument("--case", required=False, help="registered case name")
        p.add_argument("--variant", default="general",
                       help="general | special | reduced")
        p.add_argument("--r", type=float, default=None,
                       help="time-step ratio tau/h")
        p.add_argument("--steady-iters", type=int, default=40)
        p.add_argument("--step-iters", type=int, default=20)
        p.add_argument("--early-stop-tol", type=float, default=None)
        p.add_argument("--grid-data-derivs", action="store_true",
                       help="difference kappa/f on the grid instead of the "
                            "high-order sampling path")
        p.add_argument("--mmatrix-check", action="store_true")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None, help="report file path")
        p.add_argument("--format", default="csv", choices=("csv", "json"))

    p = sub.add_parser("solve-steady", help="Picard-linearized steady solve")
    common(p)
    p.add_argument("--n", type=int, required=False, help="cells per side")
    p.add_argument("--dump-stencils", default=None,
                   help="write a JSON stencil dump of the final iteration")

    p = sub.add_parser("solve-transient", help="CN/BDF3/BDF4 march to t=1")
    common(p, transient=True)
    p.add_argument("--n", type=int, required=False)
    p.add_argument("--algo", default="cn", help="cn | bdf3 | bdf4")

    p = sub.add_parser("convergence", help="refinement study over levels")
    common(p)
    p.add_argument("--algo", default="steady",
                   help="steady | cn | bdf3 | bdf4")
    p.add_argument("--levels", default="8,16,32",
                   help="comma-separated cells-per-side, each double the last")

    p = sub.add_parser("consistency", help="stencil truncation-order probe")
    common(p)
    p.add_argument("--levels", default="16,32,64")

    p = sub.add_parser("check-mmatrix",
                       help="sign/row-sum conditions of assembled stencils")
    common(p)
    p.add_argument("--n", type=int, required=False)

    p = sub.add_parser("dump-stencils",
                       help="derive stencils at the exact solution and dump")
    common(p)
    p.add_argument("--n", type=int, required=False)
    p.add_argument("--samples", type=int, default=20)
    return parser


def _apply_config(args: argparse.Namespace, argv) -> argparse.Namespace:
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config!r}: {exc}")
    explicit = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    for key, value in data.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"config key {key!r} is not a known flag")
        if f"--{key}" not in explicit and f"--{attr.replace('_', '-')}" not in explicit:
            setattr(args, attr, value)
    return args


def _solve_config(args, algorithm) -> SolveConfig:
    variant = _resolve_variant(args.variant, algorithm)
    r = args.r if args.r is not None else DEFAULT_R.get(algorithm, 0.5)
    return SolveConfig(variant=variant,
                       steady_iterations=args.steady_iters,
                       step_iterations=args.step_iters,
                       r=r,
                       early_stop_tol=args.early_stop_tol,
                       check_mmatrix=args.mmatrix_check,
                       exact_data_derivs=not args.grid_data_derivs)


def _require(args, field):
    if getattr(args, field, None) is None:
        raise UsageError(f"--{field.replace('_', '-')} is required")
    return getattr(args, field)


def _print_solution(case, grid, report, config, algorithm):
    t_final = 0.0 if case.is_steady else 1.0
    exact = sample_scalar(case.exact_u, grid, t_final)
    l2, linf = error_norms(report.field, exact)
    print(f"case={case.name} algo={algorithm} variant={config.variant} "
          f"n={grid.n_cells} h={grid.h:.6f}")
    print(f"l2={l2:.5e} linf={linf:.5e} steps={report.steps} "
          f"elapsed={report.elapsed:.2f}s")
    if config.check_mmatrix:
        flags = []
        for d in report.diagnostics:
            recs = d if isinstance(d, list) else [d]
            flags.extend(r.mmatrix_ok for r in recs)
        print(f"mmatrix: {'pass' if all(flags) else 'FAIL'} "
              f"({len(flags)} sweeps checked)")
    return l2, linf


def _exact_iterate_tables(case, n, variant, r):
    """Coefficient tables with the exact solution as the iterate."""
    grid = make_grid(n)
    if variant == "reduced_helmholtz":
        t_eval = 0.0 if case.is_steady else 0.5
        prev = sample_scalar(case.exact_u, grid, t_eval)
        ctx = cn_context(case, prev, t_eval, r)
    else:
        ctx = steady_context(case, grid)
        prev = sample_scalar(case.exact_u, grid, 0.0)
    return grid, tables_from_context(ctx, prev)


def _cmd_solve_steady(args):
    case = lookup_case(_require(args, "case"))
    config = _solve_config(args, "steady")
    grid = make_grid(_require(args, "n"))
    report = run_algorithm("steady", case, grid, config)
    _print_solution(case, grid, report, config, "steady")
    if args.dump_stencils:
        from .coefficients import steady_context as _sc
        ctx = _sc(case, grid, exact_data=config.exact_data_derivs)
        tables = tables_from_context(ctx, report.field)
        stencils = build_stencils(tables, "reduced_elliptic", keep_cklp=True)
        with open(args.dump_stencils, "w") as fh:
            json.dump(stencil_dump(tables, stencils), fh, indent=1)
        print(f"stencil dump written to {args.dump_stencils}")
    if args.out:
        rep = ConvergenceReport(case=case.name, algorithm="steady",
                                variant=config.variant, r=None)
        from .harness import ConvergenceRow
        t_final = 0.0
        exact = sample_scalar(case.exact_u, grid, t_final)
        l2, linf = error_norms(report.field, exact)
        rep.rows.append(ConvergenceRow(h=grid.h, tau=None, l2=l2, linf=linf))
        emit_report(rep, args.out, args.format)
        print(f"report written to {args.out}")
    return 0


def _cmd_solve_transient(args):
    case = lookup_case(_require(args, "case"))
    algo = args.algo
    if algo not in ("cn", "bdf3", "bdf4"):
        raise UsageError(f"unknown transient algorithm {algo!r}")
    if args.variant == "general":
        args.variant = "reduced"  # transient solves have one variant
    config = _solve_config(args, algo)
    grid = make_grid(_require(args, "n"))
    report = run_algorithm(algo, case, grid, config)
    _print_solution(case, grid, report, config, algo)
    return 0


def _cmd_convergence(args):
    case = lookup_case(_require(args, "case"))
    algo = args.algo
    if algo not in ("steady", "cn", "bdf3", "bdf4"):
        raise UsageError(f"unknown algorithm {algo!r}")
    if algo != "steady" and args.variant == "general":
        args.variant = "reduced"
    config = _solve_config(args, algo)
    levels = [int(tok) for tok in str(args.levels).split(",") if tok]
    report = convergence_study(case, algo, config.variant, levels,
                               r=config.r, config=config,
                               threads=args.threads)
    print(format_report(report))
    if args.out:
        emit_report(report, args.out, args.format)
        print(f"report written to {args.out}")
    return 0


def _cmd_consistency(args):
    case = lookup_case(_require(args, "case"))
    variant = _VARIANT_NAMES.get(args.variant)
    if variant is None:
        variant = "reduced_elliptic" if case.is_steady else "reduced_helmholtz"
    levels = [int(tok) for tok in str(args.levels).split(",") if tok]
    r = args.r if args.r is not None else 0.5
    result = consistency_probe(case, variant, levels, r=r)
    print(f"variant={result.variant} levels={levels}")
    for h, res in zip(result.h_list, result.residuals):
        print(f"  h={h:.6f}  max residual={res:.5e}")
    print(f"observed order: {result.observed_order:.2f}")
    if result.center_ratio is not None:
        print(f"leading-term ratio at (0.5, 0.5): {result.center_ratio:.4f}")
    return 0


def _cmd_check_mmatrix(args):
    case = lookup_case(_require(args, "case"))
    variant = _resolve_variant(args.variant, "steady") \
        if args.variant != "reduced_helmholtz" else "reduced_helmholtz"
    r = args.r if args.r is not None else 0.5
    grid, tables = _exact_iterate_tables(case, _require(args, "n"), variant, r)
    stencils = build_stencils(tables, variant)
    rep = mmatrix_report(stencils)
    print(f"case={case.name} variant={variant} n={grid.n_cells}: "
          f"{'pass' if rep.passed else 'FAIL'} "
          f"({rep.n_checked} nodes, {len(rep.violations)} violations)")
    for i, j, reason in rep.violations[:20]:
        print(f"  node ({i}, {j}): {reason}")
    return 0 if rep.passed else 2


def _cmd_dump_stencils(args):
    case = lookup_case(_require(args, "case"))
    variant = args.variant
    if variant in ("general", "special", "reduced"):
        variant = "reduced_elliptic" if case.is_steady else "reduced_helmholtz"
    if variant not in ("reduced_elliptic", "reduced_helmholtz"):
        raise UsageError("stencil dumps cover the derived variants only")
    r = args.r if args.r is not None else 0.5
    grid, tables = _exact_iterate_tables(case, _require(args, "n"), variant, r)
    stencils = build_stencils(tables, variant, keep_cklp=True)
    dump = stencil_dump(tables, stencils, n_samples=args.samples)
    out = _require(args, "out")
    with open(out, "w") as fh:
        json.dump(dump, fh, indent=1)
    print(f"stencil dump ({len(dump['records'])} nodes) written to {out}")
    return 0


_COMMANDS = {
    "solve-steady": _cmd_solve_steady,
    "solve-transient": _cmd_solve_transient,
    "convergence": _cmd_convergence,
    "consistency": _cmd_consistency,
    "check-mmatrix": _cmd_check_mmatrix,
    "dump-stencils": _cmd_dump_stencils,
}


def run_cli(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, argv)
        return _COMMANDS[args.command](args)
    except (UsageError, CaseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, StencilError, SolveError, CoefficientError,
            GridError, HarnessError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
