"""Experiment harness: convergence studies, rate fits, bound audits,
and empirical information complexity.

A study runs one problem cell (test function, smoothness, frequency, space,
domain) over a budget grid, recording the measured error against the oracle
value, the explicit worst-case bound scaled by the oracle norm, and the
evaluation count.  Budget grids are embarrassingly parallel across cells;
``OSCINT_THREADS`` caps the worker pool and reports are assembled in a
deterministic order regardless of completion order.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import backend, oracle
from .density import DensityModel, HS
from .errors import SaturationError
from .quad_compact import Interval, apply_rule, kbar, safeguarded_rule, worstcase_bound
from .quad_line import LineProblem, evaluation_count, integrate_line, line_error_bound

_SEARCH_CAP = 1 << 20


@dataclass(frozen=True)
class StudySpec:
    """One problem cell: a test function against a compact or line target."""

    kind: str  # "compact" or "line"
    function: oracle.TestFunction
    s: int
    k: float
    space: str
    omega: Interval | None = None
    density: DensityModel | None = None
    tail_tol: float = 1e-10
    oracle_tol: float = 1e-12

    def __post_init__(self):
        if self.kind == "compact":
            if self.omega is None:
                raise ValueError("compact studies need an interval")
        elif self.kind == "line":
            if self.density is None:
                raise ValueError("line studies need a density")
        else:
            raise ValueError(f"unknown study kind {self.kind!r}")

    def describe(self) -> dict:
        out = {
            "kind": self.kind,
            "function": self.function.label,
            "s": self.s,
            "k": self.k,
            "space": self.space,
        }
        if self.kind == "compact":
            out["omega"] = f"[{self.omega.a:g},{self.omega.b:g}]"
        else:
            out["density"] = self.density.label
            out.update({k: v for k, v in self.density.params.items()})
        return out

    def sort_key(self):
        d = self.describe()
        return tuple(str(d.get(k, "")) for k in ("kind", "density", "omega", "function", "space", "s", "k"))


@dataclass
class ReportRow:
    n: int
    error: float
    bound: float  # worst-case bound times the oracle norm of f
    evals: int


@dataclass
class ConvergenceReport:
    spec: StudySpec
    oracle_value: complex
    norm: float
    rows: list[ReportRow] = field(default_factory=list)
    fitted_rate: float | None = None
    bound_violations: int = 0

    def errors(self) -> np.ndarray:
        return np.array([r.error for r in self.rows])


def default_fit_floor(spec: StudySpec) -> int:
    """Smallest budget admitted to the rate fit for this problem cell.

    Compact rules plateau below kbar |W| / pi, line rules until the central
    cells clear the safeguard, so fits start at twice those scales.
    """
    kb = kbar(spec.k)
    if spec.kind == "compact":
        return max(8, 2 * math.ceil(kb * spec.omega.length / math.pi))
    return max(8, 2 * math.ceil(kb))


def _algorithm_error(spec: StudySpec, reference: complex) -> Callable[[int], tuple[float, int]]:
    if spec.kind == "compact":

        def run(n: int) -> tuple[float, int]:
            rule = safeguarded_rule(spec.omega, n, spec.k)
            value = apply_rule(rule, spec.function)
            return abs(reference - value), int(rule.nodes.size)

        return run

    problem = LineProblem(spec.density, spec.k, spec.s, spec.space)

    def run_line(n: int) -> tuple[float, int]:
        value = integrate_line(problem, spec.function, n, spec.tail_tol)
        return abs(reference - value), evaluation_count(problem, n, spec.tail_tol)

    return run_line


def _reference(spec: StudySpec) -> complex:
    if spec.kind == "compact":
        return oracle.reference_integral(spec.function, spec.k, spec.omega, spec.oracle_tol)
    return oracle.reference_integral_line(
        spec.function, spec.density, spec.k, max(spec.oracle_tol, 1e-11)
    )


def function_norm(spec: StudySpec) -> float:
    if spec.kind == "compact":
        if spec.space == HS:
            return oracle.norm_hs_oracle(spec.function, spec.omega, spec.s)
        return oracle.norm_cs_oracle(spec.function, spec.omega, spec.s)
    return oracle.line_norm(spec.function, spec.space, spec.s, density=spec.density)


def _bound(spec: StudySpec, n: int) -> float:
    if spec.kind == "compact":
        return worstcase_bound(spec.omega, n, spec.s, spec.k, spec.space)
    problem = LineProblem(spec.density, spec.k, spec.s, spec.space)
    return line_error_bound(problem, n, spec.tail_tol)


def convergence_study(spec: StudySpec, n_grid) -> ConvergenceReport:
    """Measured error, bound, and evaluation count over a budget grid."""
    grid = [int(n) for n in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be nonempty and strictly increasing")
    reference = _reference(spec)
    norm = function_norm(spec)
    run = _algorithm_error(spec, reference)
    report = ConvergenceReport(spec=spec, oracle_value=reference, norm=norm)
    for n in grid:
        error, evals = run(n)
        report.rows.append(ReportRow(n=n, error=error, bound=_bound(spec, n) * norm, evals=evals))
    report.bound_violations = audit_bounds(report)
    try:
        report.fitted_rate = fit_rate(report, default_fit_floor(spec))
    except ValueError:
        report.fitted_rate = None
    return report


def fit_rate(report: ConvergenceReport, n_min: int) -> float:
    """Least-squares slope of log error against log(n + kbar)."""
    kb = kbar(report.spec.k)
    pts = [(r.n, r.error) for r in report.rows if r.n >= n_min and r.error > 0.0]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 rows with n >= {n_min} and positive error")
    x = np.log(np.array([n for n, _ in pts], dtype=np.float64) + kb)
    y = np.log(np.array([e for _, e in pts]))
    return float(np.polyfit(x, y, 1)[0])


def audit_bounds(report: ConvergenceReport) -> int:
    """Number of rows whose measured error exceeds the bound (expected 0)."""
    return sum(1 for r in report.rows if r.error > r.bound)


def run_studies(specs, n_grid) -> list[ConvergenceReport]:
    """Run a batch of studies, in parallel when OSCINT_THREADS allows."""
    ordered = sorted(specs, key=lambda sp: sp.sort_key())
    workers = backend.thread_count()
    if workers <= 1:
        return [convergence_study(sp, n_grid) for sp in ordered]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda sp: convergence_study(sp, n_grid), ordered))


class ComplexityResult(NamedTuple):
    n: int
    non_monotone: bool


def minimal_budget(error_fn: Callable[[int], float], target: float, cap: int = _SEARCH_CAP) -> ComplexityResult:
    """Minimal probed n with error_fn(n) <= target: doubling then bisection."""
    measurements = {0: error_fn(0)}
    if measurements[0] <= target:
        return ComplexityResult(0, False)
    n = 1
    while True:
        measurements[n] = error_fn(n)
        if measurements[n] <= target:
            break
        if n >= cap:
            raise SaturationError(
                f"error target {target:g} not reached within n <= {cap}"
            )
        n *= 2
    lo, hi = n // 2, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        measurements[mid] = error_fn(mid)
        if measurements[mid] <= target:
            hi = mid
        else:
            lo = mid
    reached = [m for m, e in measurements.items() if e <= target]
    seq = [measurements[m] for m in sorted(measurements)]
    non_monotone = any(b > a * (1.0 + 1e-12) for a, b in zip(seq, seq[1:]))
    return ComplexityResult(min(reached), non_monotone)


def empirical_complexity(
    spec: StudySpec, eps: float, criterion: str, normalize: bool = True
) -> ComplexityResult:
    """Minimal budget reaching eps (absolute) or eps * error(0) (normalized).

    With ``normalize=True`` errors are divided by the oracle norm of the
    test function, so the absolute criterion refers to the unit-ball proxy.
    The normalized criterion is scale-invariant either way.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if criterion not in ("abs", "nor"):
        raise ValueError("criterion must be 'abs' or 'nor'")
    reference = _reference(spec)
    run = _algorithm_error(spec, reference)
    scale = function_norm(spec) if normalize else 1.0

    def error_fn(n: int) -> float:
        return run(n)[0] / scale

    target = eps if criterion == "abs" else eps * error_fn(0)
    return minimal_budget(error_fn, target)


_CSV_COLUMNS = ("n", "k", "s", "space", "function", "error", "bound", "evals", "rate_fit")


def reports_to_csv(reports, stream=None) -> str:
    """Flatten reports into the canonical CSV schema."""
    own = stream is None
    if own:
        stream = io.StringIO()
    writer = csv.writer(stream)
    writer.writerow(_CSV_COLUMNS)
    for report in reports:
        d = report.spec.describe()
        rate = "" if report.fitted_rate is None else repr(report.fitted_rate)
        for row in report.rows:
            writer.writerow(
                [
                    row.n,
                    repr(float(d["k"])),
                    d["s"],
                    d["space"],
                    d["function"],
                    repr(row.error),
                    repr(row.bound),
                    row.evals,
                    rate,
                ]
            )
    return stream.getvalue() if own else ""


def summary_json(reports) -> dict:
    """Fitted rates and violation counts keyed by problem cell."""
    cells = []
    for report in sorted(reports, key=lambda r: r.spec.sort_key()):
        d = report.spec.describe()
        d["fitted_rate"] = report.fitted_rate
        d["bound_violations"] = report.bound_violations
        d["norm"] = report.norm
        cells.append(d)
    return {
        "cells": cells,
        "total_violations": sum(r.bound_violations for r in reports),
    }
