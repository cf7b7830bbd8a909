"""Command-line frontend emitting JSON and CSV artifacts.

Exit codes: 0 success, 2 validation/usage error, 3 accuracy or
configuration error.  Identical invocations produce byte-identical output:
pipelines are deterministic and floats are serialised with their shortest
round-trip representation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import harness, oracle, partition
from .density import allocation_weights, gaussian_density
from .errors import AccuracyError, ConfigurationError, SaturationError
from .harness import StudySpec
from .quad_compact import Interval, apply_rule, safeguarded_rule, worstcase_bound
from .quad_line import LineProblem, evaluation_count, integrate_line, line_error_bound

_DYADIC = [0] + [2**j for j in range(13)]


def _config_echo(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(payload: dict, args) -> None:
    payload = {"config": _config_echo(args), **payload}
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)


def _density(args):
    if args.density != "gaussian":
        raise ValueError(f"unknown density {args.density!r}")
    return gaussian_density(args.sigma)


def _line_function(args):
    name = args.function
    if name == "constant":
        return oracle.testfn("constant")
    if name == "runge":
        return oracle.testfn("runge")
    if name == "gauss_sine":
        return oracle.testfn("gauss_sine", freq=args.freq)
    if name == "osc_bump":
        return oracle.testfn("osc_bump", k=args.k)
    raise ValueError(f"unknown line test function {name!r}")


def _compact_function(args, omega: Interval):
    name = args.function
    if name == "poly_bump_h":
        return oracle.testfn("poly_bump_H", s=args.s, omega=omega)
    if name == "poly_bump_c":
        return oracle.testfn("poly_bump_C", s=args.s, omega=omega)
    if name == "scaled_bump":
        return oracle.testfn("scaled_bump", omega=omega)
    if name == "osc_bump":
        return oracle.testfn("osc_bump", k=args.k)
    raise ValueError(f"unknown compact test function {name!r}")


def _cmd_integrate(args) -> int:
    density = _density(args)
    f = _line_function(args)
    problem = LineProblem(density, args.k, args.s, args.space.upper())
    value = integrate_line(problem, f, args.n, args.tail_tol)
    reference = oracle.reference_integral_line(f, density, args.k)
    norm = oracle.line_norm(f, problem.space, args.s, density=density)
    bound = line_error_bound(problem, args.n, args.tail_tol)
    _emit_json(
        {
            "value_re": value.real,
            "value_im": value.imag,
            "oracle_re": reference.real,
            "oracle_im": reference.imag,
            "abs_error": abs(value - reference),
            "bound_per_unit_norm": bound,
            "function_norm": norm,
            "bound": bound * norm,
            "evaluations": evaluation_count(problem, args.n, args.tail_tol),
        },
        args,
    )
    return 0


def _cmd_compact(args) -> int:
    omega = Interval(args.a, args.b)
    f = _compact_function(args, omega)
    rule = safeguarded_rule(omega, args.n, args.k)
    value = apply_rule(rule, f)
    reference = oracle.reference_integral(f, args.k, omega)
    space = args.space.upper()
    if space == "HS":
        norm = oracle.norm_hs_oracle(f, omega, args.s)
    else:
        norm = oracle.norm_cs_oracle(f, omega, args.s)
    bound = worstcase_bound(omega, args.n, args.s, args.k, space)
    _emit_json(
        {
            "value_re": value.real,
            "value_im": value.imag,
            "oracle_re": reference.real,
            "oracle_im": reference.imag,
            "abs_error": abs(value - reference),
            "bound_per_unit_norm": bound,
            "function_norm": norm,
            "bound": bound * norm,
            "evaluations": int(rule.nodes.size),
            "zero_rule": rule.is_zero_rule,
        },
        args,
    )
    return 0


def _parse_grid(raw: str) -> list[int]:
    if raw == "dyadic":
        return list(_DYADIC)
    return [int(tok) for tok in raw.split(",") if tok.strip() != ""]


def _cmd_convergence(args) -> int:
    grid = _parse_grid(args.n_grid)
    if args.mode == "compact":
        omega = Interval(args.a, args.b)
        spec = StudySpec(
            kind="compact",
            function=_compact_function(args, omega),
            s=args.s,
            k=args.k,
            space=args.space.upper(),
            omega=omega,
        )
    else:
        spec = StudySpec(
            kind="line",
            function=_line_function(args),
            s=args.s,
            k=args.k,
            space=args.space.upper(),
            density=_density(args),
            tail_tol=args.tail_tol,
        )
    report = harness.convergence_study(spec, grid)
    _emit(harness.reports_to_csv([report]), args.out)
    return 0


def _cmd_cells(args) -> int:
    plan = allocation_weights(_density(args), args.s, args.space.upper(), args.n, args.tail_tol)
    stream = io.StringIO()
    writer = csv.writer(stream)
    writer.writerow(["m", "cell_norm", "p_m", "n_m"])
    for cell in plan.cells:
        writer.writerow([cell.m, repr(cell.cell_norm), repr(cell.p), cell.n_m])
    _emit(stream.getvalue(), args.out)
    return 0


def _cmd_bump(args) -> int:
    xs = np.linspace(args.start, args.stop, args.samples)
    derivs = partition.bump_derivatives(xs, args.order)
    stream = io.StringIO()
    writer = csv.writer(stream)
    writer.writerow(["x", "g"] + [f"d{ell}" for ell in range(1, args.order + 1)])
    for x, row in zip(xs, derivs):
        writer.writerow([repr(float(x))] + [repr(float(v)) for v in row])
    _emit(stream.getvalue(), args.out)
    return 0


def _cmd_poisson(args) -> int:
    sigma = args.sigma

    def f(x):
        return np.exp(-x * x / (2.0 * sigma * sigma)) / math.sqrt(2.0 * math.pi * sigma * sigma)

    def fourier_f(z):
        return np.exp(-2.0 * math.pi**2 * sigma * sigma * np.asarray(z) ** 2)

    residual = oracle.poisson_residual(f, fourier_f, args.c, args.k, args.trunc)
    _emit_json({"residual": residual}, args)
    return 0


def _cmd_complexity(args) -> int:
    spec = StudySpec(
        kind="line",
        function=_line_function(args),
        s=args.s,
        k=args.k,
        space=args.space.upper(),
        density=_density(args),
        tail_tol=args.tail_tol,
    )
    result = harness.empirical_complexity(spec, args.eps, args.criterion)
    _emit_json(
        {"n": result.n, "non_monotone": result.non_monotone},
        args,
    )
    return 0


def _add_common_line(p):
    p.add_argument("--density", default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--tail-tol", dest="tail_tol", type=float, default=1e-10)
    p.add_argument("--function", default="constant")
    p.add_argument("--freq", type=float, default=3.0, help="frequency for gauss_sine")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscint",
        description="Equispaced quadrature for oscillatory integrals, with oracle audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="one composite line integration with oracle comparison")
    _add_common_line(p)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--space", choices=["hs", "cs"], default="hs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser("compact", help="one safeguarded rule on an interval")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--space", choices=["hs", "cs"], default="hs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--function", default="poly_bump_h")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compact)

    p = sub.add_parser("convergence", help="error/bound CSV over a budget grid")
    p.add_argument("--mode", choices=["compact", "line"], default="line")
    _add_common_line(p)
    p.add_argument("--a", type=float, default=-1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--space", choices=["hs", "cs"], default="hs")
    p.add_argument("--n-grid", dest="n_grid", default="dyadic")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("cells", help="cell plan CSV: m, cell_norm, p_m, n_m")
    p.add_argument("--density", default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--space", choices=["hs", "cs"], default="hs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tail-tol", dest="tail_tol", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cells)

    p = sub.add_parser("bump", help="CSV samples of the partition bump and derivatives")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bump)

    p = sub.add_parser("poisson", help="lattice-sum vs transform-sum residual")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--trunc", type=int, default=60)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("complexity", help="empirical minimal budget for an error target")
    _add_common_line(p)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--space", choices=["hs", "cs"], default="hs")
    p.add_argument("--criterion", choices=["abs", "nor"], required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_complexity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AccuracyError, ConfigurationError, SaturationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
