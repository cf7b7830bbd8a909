"""Composite rule for oscillatory integrals against a density on the line.

The integral of ``f(x) exp(-i k x) rho(x)`` is split along the partition
cells W_m = [m-1, m+1]; each piece ``f * rho_m`` is handled by the
safeguarded lattice rule with budget ``n_m = floor(p_m n)`` from the cell
plan.  Only finitely many cells receive nodes, the total number of function
evaluations never exceeds n, and the explicit worst-case bound decays like
``(n + kbar)^-s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import partition
from .density import CS, HS, DensityModel, allocation_weights
from .errors import ConfigurationError
from .quad_compact import Interval, apply_rule, kbar, safeguarded_rule


@dataclass(frozen=True)
class LineProblem:
    density: DensityModel
    k: float
    s: int
    space: str

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be at least 1")
        if self.space not in (HS, CS):
            raise ValueError(f"space must be {HS!r} or {CS!r}")


def _planned_rules(problem: LineProblem, n: int, tail_tol: float):
    plan = allocation_weights(problem.density, problem.s, problem.space, n, tail_tol)
    if plan.excluded_p_bound * n >= 1.0:
        raise ConfigurationError(
            "cell range too small for this budget: an excluded cell could "
            "receive a node; decrease tail_tol"
        )
    for cell in plan.cells:
        if cell.n_m > 0:
            yield cell, safeguarded_rule(Interval(cell.m - 1.0, cell.m + 1.0), cell.n_m, problem.k)


def integrate_line(problem: LineProblem, f, n: int, tail_tol: float = 1e-10) -> complex:
    """The composite safeguarded rule applied to f against the density."""
    if n < 0:
        raise ValueError("n must be non-negative")
    density = problem.density
    total = 0.0 + 0.0j
    for cell, rule in _planned_rules(problem, n, tail_tol):
        if rule.is_zero_rule:
            continue
        m = cell.m

        def piece(x, _m=m):
            return np.asarray(f(x)) * partition.bump(x - _m) * density(x)

        total += apply_rule(rule, piece)
    return total


def evaluation_count(problem: LineProblem, n: int, tail_tol: float = 1e-10) -> int:
    """Exact number of integrand evaluations integrate_line will perform."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum(rule.nodes.size for _, rule in _planned_rules(problem, n, tail_tol))


def line_error_bound(problem: LineProblem, n: int, tail_tol: float = 1e-10) -> float:
    """Explicit worst-case bound per unit norm of f, decaying as (n+kbar)^-s."""
    if n < 0:
        raise ValueError("n must be non-negative")
    plan = allocation_weights(problem.density, problem.s, problem.space, 0, tail_tol)
    s = problem.s
    denom = (n + kbar(problem.k)) ** s
    if problem.space == HS:
        return 4.0 * (2.0 * math.pi) ** s * plan.norm_sum ** (s + 0.5) / denom
    return 2.0**1.5 * (2.0 * math.pi) ** s * plan.norm_sum ** (s + 1.0) / denom
