import math

import numpy as np
import pytest

from oscint.density import HS, gaussian_density
from oscint.errors import SaturationError
from oscint.harness import (
    ConvergenceReport,
    ReportRow,
    StudySpec,
    audit_bounds,
    convergence_study,
    default_fit_floor,
    empirical_complexity,
    fit_rate,
    minimal_budget,
    reports_to_csv,
    run_studies,
    summary_json,
)
from oscint.oracle import testfn as fnlib
from oscint.quad_compact import Interval


def _synthetic_report(k, errors_by_n):
    spec = StudySpec(
        kind="compact",
        function=fnlib("poly_bump_H", s=1, omega=(0.0, 1.0)),
        s=1,
        k=k,
        space=HS,
        omega=Interval(0.0, 1.0),
    )
    rep = ConvergenceReport(spec=spec, oracle_value=0.0, norm=1.0)
    for n, e in sorted(errors_by_n.items()):
        rep.rows.append(ReportRow(n=n, error=e, bound=1.0, evals=n))
    return rep


def test_fit_rate_synthetic_quadratic():
    kb = 1.0
    rep = _synthetic_report(0.0, {n: (n + kb) ** -2.0 for n in (8, 16, 32, 64, 128, 256)})
    assert fit_rate(rep, 8) == pytest.approx(-2.0, abs=1e-10)


def test_fit_rate_scale_invariant():
    kb = 1.0
    for c in (0.5, 3.7, 1e-6):
        rep = _synthetic_report(0.0, {n: c * (n + kb) ** -3.0 for n in (8, 16, 32, 64)})
        assert fit_rate(rep, 8) == pytest.approx(-3.0, abs=1e-10)


def test_fit_rate_requires_rows():
    rep = _synthetic_report(0.0, {8: 1e-2, 16: 1e-3, 32: 0.0, 64: 0.0})
    with pytest.raises(ValueError):
        fit_rate(rep, 8)


def test_audit_bounds_counts_inflated_rows():
    rep = _synthetic_report(0.0, {1: 0.5, 2: 0.5})
    assert audit_bounds(rep) == 0
    rep.rows[1].error = 2.0
    assert audit_bounds(rep) == 1


def test_minimal_budget_definition():
    errors = {0: 0.5, 1: 0.5, 2: 0.1, 3: 0.01}

    def err(n):
        return errors.get(n, 0.01)

    got = minimal_budget(err, 0.1)
    assert got.n == 2

    assert minimal_budget(err, 0.6).n == 0


def test_minimal_budget_saturates():
    with pytest.raises(SaturationError):
        minimal_budget(lambda n: 1.0, 0.5, cap=64)


def test_minimal_budget_flags_nonmonotone():
    def err(n):
        return {0: 1.0, 1: 0.2, 2: 0.4}.get(n, 0.05)

    got = minimal_budget(err, 0.05)
    assert got.non_monotone


def test_convergence_study_validates_grid():
    spec = StudySpec(
        kind="compact",
        function=fnlib("poly_bump_H", s=1, omega=(0.0, 1.0)),
        s=1,
        k=0.0,
        space=HS,
        omega=Interval(0.0, 1.0),
    )
    with pytest.raises(ValueError):
        convergence_study(spec, [])
    with pytest.raises(ValueError):
        convergence_study(spec, [4, 4])


def test_convergence_study_zero_row_is_initial_error():
    spec = StudySpec(
        kind="compact",
        function=fnlib("poly_bump_H", s=2, omega=(-1.0, 1.0)),
        s=2,
        k=5.0,
        space=HS,
        omega=Interval(-1.0, 1.0),
    )
    rep = convergence_study(spec, [0])
    assert len(rep.rows) == 1
    assert rep.rows[0].error == abs(rep.oracle_value)
    assert rep.rows[0].evals == 0
    assert rep.bound_violations == 0


def test_measured_compact_rate_exceeds_class_rate():
    # fixed smooth representatives converge faster than the worst case:
    # the fitted slope here is about -(s+1), not -s (frozen from runs)
    spec = StudySpec(
        kind="compact",
        function=fnlib("poly_bump_H", s=1, omega=(0.0, 1.0)),
        s=1,
        k=0.0,
        space=HS,
        omega=Interval(0.0, 1.0),
    )
    rep = convergence_study(spec, [0] + [2**j for j in range(13)])
    assert rep.fitted_rate == pytest.approx(-2.03, abs=0.15)
    assert rep.bound_violations == 0


def test_line_plateau_under_safeguard():
    spec = StudySpec(
        kind="line",
        function=fnlib("constant"),
        s=2,
        k=200.0,
        space="CS",
        density=gaussian_density(1.0),
    )
    rep = convergence_study(spec, [0, 16, 64, 256, 512])
    # all budgets below the safeguard: every value is 0, error equals |I|
    assert all(r.error == abs(rep.oracle_value) for r in rep.rows)
    assert all(r.evals == 0 for r in rep.rows)


def test_default_fit_floor():
    spec = StudySpec(
        kind="compact",
        function=fnlib("poly_bump_H", s=1, omega=(-1.0, 1.0)),
        s=1,
        k=500.0,
        space=HS,
        omega=Interval(-1.0, 1.0),
    )
    assert default_fit_floor(spec) == 2 * math.ceil(500.0 * 2.0 / math.pi)


def test_run_studies_deterministic_order(monkeypatch):
    specs = [
        StudySpec(
            kind="compact",
            function=fnlib("poly_bump_H", s=s, omega=(0.0, 1.0)),
            s=s,
            k=k,
            space=HS,
            omega=Interval(0.0, 1.0),
        )
        for s in (1, 2)
        for k in (0.0, 5.0)
    ]
    serial = run_studies(specs, [0, 8, 32])
    monkeypatch.setenv("OSCINT_THREADS", "4")
    threaded = run_studies(list(reversed(specs)), [0, 8, 32])
    assert [r.spec.describe() for r in serial] == [r.spec.describe() for r in threaded]
    for a, b in zip(serial, threaded):
        assert [r.error for r in a.rows] == [r.error for r in b.rows]


def test_reports_csv_and_summary():
    rep = _synthetic_report(2.0, {0: 0.5, 8: 0.125})
    text = reports_to_csv([rep])
    lines = text.strip().splitlines()
    assert lines[0] == "n,k,s,space,function,error,bound,evals,rate_fit"
    assert len(lines) == 3
    assert lines[1].startswith("0,2.0,1,HS,")

    summary = summary_json([rep])
    assert summary["total_violations"] == 0
    assert summary["cells"][0]["s"] == 1


def test_empirical_complexity_normalized_zero_when_eps_large():
    spec = StudySpec(
        kind="line",
        function=fnlib("constant"),
        s=1,
        k=0.0,
        space="CS",
        density=gaussian_density(1.0),
    )
    got = empirical_complexity(spec, 2.0, "nor")
    assert got.n == 0
    with pytest.raises(ValueError):
        empirical_complexity(spec, -1.0, "nor")
    with pytest.raises(ValueError):
        empirical_complexity(spec, 0.5, "relative")
