"""Density models, per-cell norms, and node-allocation plans for the line.

A density ``rho`` is split along the integer cells ``W_m = [m-1, m+1]`` into
pieces ``rho_m = g(. - m) * rho`` using the partition bump.  Each piece gets
a share ``p_m`` of the node budget proportional to a fractional power of its
cell norm:

* target space HS (Sobolev): ``p_m ~ ||rho_m||_{C^s(W_m)}^{1/(s+1/2)}``,
* target space CS (sup):     ``p_m ~ ||rho_m||_{H^s(W_m)}^{1/(s+1)}``,

normalised by the full sum over m.  The infinite sum is truncated once the
neglected tail, majorised through the Cramer bound for Gaussian densities,
is below ``tail_tol`` relative to the computed part; the weights are not
renormalised afterwards, so ``sum p_m`` lands in ``[1 - tail_tol, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import gridquad, kernels, partition
from .errors import ConfigurationError
from .jet import Jet, jet_exp, jet_mul, jet_scale

HS = "HS"
CS = "CS"

# Cramer's inequality |He_n(x)| <= K sqrt(n!) exp(x^2/4) for the Hermite
# polynomials; used for internal tail majorants valid at every sigma.
_CRAMER_K = 1.086435

_CS_GRID = 2049  # sup-norm sample points per cell
_HS_PANELS = 16  # Gauss-Legendre panels per cell, 32 nodes each


class DensityModel:
    """An evaluable density with jet access and certified cell-norm tails."""

    def __init__(self, label, evaluator, value, derivs, params=None, cs_cell_bound=None):
        self.label = label
        self.evaluator: Callable[[Jet], Jet] = evaluator
        self.params = dict(params or {})
        self._value = value
        self._derivs = derivs
        # (s, m) -> upper bound for ||rho||_{C^s(W_m)}; None means
        # tails cannot be certified and line plans will be refused.
        self.cs_cell_bound = cs_cell_bound
        self._tables: dict = {}

    def __call__(self, x):
        out = self._value(np.atleast_1d(np.asarray(x, dtype=np.float64)))
        return out if np.ndim(x) else float(out[0])

    def derivatives(self, x, order: int) -> np.ndarray:
        """Derivatives of rho at the points x, shape (npts, order+1)."""
        return self._derivs(np.asarray(x, dtype=np.float64), order)


def gaussian_density(sigma: float) -> DensityModel:
    """The normalised Gaussian density with standard deviation sigma."""
    sigma = float(sigma)
    if not (sigma > 0.0):
        raise ValueError("sigma must be positive")
    norm = 1.0 / math.sqrt(2.0 * math.pi * sigma * sigma)
    inv2 = 1.0 / (2.0 * sigma * sigma)

    def value(x):
        return norm * np.exp(-x * x * inv2)

    def derivs(x, order):
        return norm * kernels.gaussian_exp_derivatives(x, sigma, order)

    def evaluator(j: Jet) -> Jet:
        return jet_scale(jet_exp(jet_scale(jet_mul(j, j), -inv2)), norm)

    def cs_cell_bound(s, m):
        # Hermite-Cramer bound on sup over W_m of |rho^(l)|, l <= s; the
        # max(1, sigma^-s) factor keeps it valid for sigma < 1 as well.
        mbar = max(1, abs(m))
        return (
            _CRAMER_K
            * norm
            * math.sqrt(math.factorial(s))
            * max(1.0, sigma ** (-s))
            * math.exp(-((mbar - 1) ** 2) / (4.0 * sigma * sigma))
        )

    return DensityModel(
        label="gaussian",
        evaluator=evaluator,
        value=value,
        derivs=derivs,
        params={"sigma": sigma},
        cs_cell_bound=cs_cell_bound,
    )


def cramer_bound(sigma: float, s: int, m: int) -> float:
    """Cramer-type bound for ||rho||_{C^s([m-1, m+1])} of the Gaussian."""
    if not (sigma > 0.0):
        raise ValueError("sigma must be positive")
    if s < 0:
        raise ValueError("s must be non-negative")
    mbar = max(1, abs(m))
    return (
        (2.0 * math.pi) ** (-0.25)
        / sigma
        * math.sqrt(math.factorial(s))
        * math.exp(-((mbar - 1) ** 2) / (4.0 * sigma * sigma))
    )


def _piece_derivatives(model: DensityModel, x: np.ndarray, m: int, s: int) -> np.ndarray:
    """Derivatives of rho_m = g(. - m) * rho at the points x."""
    dg = kernels.bump_derivatives(x - float(m), s)
    dr = model.derivatives(x, s)
    return kernels.leibniz_products(dg, dr)


def cell_norm_cs(model: DensityModel, m: int, s: int) -> float:
    """Grid estimate of ||rho_m||_{C^s(W_m)} on a 2049-point cell grid."""
    x = np.linspace(m - 1.0, m + 1.0, _CS_GRID)
    return float(np.max(np.abs(_piece_derivatives(model, x, m, s))))


def cell_norm_hs(model: DensityModel, m: int, s: int) -> float:
    """Panel-quadrature estimate of ||rho_m||_{H^s(W_m)}."""
    nodes, weights = gridquad.panel_nodes_weights(m - 1.0, m + 1.0, _HS_PANELS)
    derivs = _piece_derivatives(model, nodes, m, s)
    total = float(np.sum(weights[:, None] * derivs * derivs))
    return math.sqrt(total)


def sup_norm_cs(model: DensityModel, a: float, b: float, s: int, npts: int = _CS_GRID) -> float:
    """Grid estimate of ||rho||_{C^s([a, b])} for the bare density."""
    x = np.linspace(a, b, npts)
    return float(np.max(np.abs(model.derivatives(x, s))))


@dataclass(frozen=True)
class CellBudget:
    m: int
    cell_norm: float
    p: float
    n_m: int


@dataclass(frozen=True)
class CellPlan:
    space: str
    s: int
    cells: tuple[CellBudget, ...]
    norm_sum: float      # certified value of the summability constant
    tail_bound: float    # majorant of the neglected q-power tail
    excluded_p_bound: float = 0.0  # upper bound for p of any excluded cell

    @property
    def budget_used(self) -> int:
        return sum(c.n_m for c in self.cells)


@dataclass(frozen=True)
class _CellTable:
    space: str
    s: int
    ms: tuple[int, ...]
    norms: tuple[float, ...]
    powers: tuple[float, ...]
    norm_sum: float
    tail_bound: float
    excluded_p_bound: float


def _tail_power_sum(term, m_start: int, cap: int = 200000) -> float:
    """Sum of 2*term(m) for m >= m_start, requiring eventual decay."""
    acc = 0.0
    prev = math.inf
    m = m_start
    while m < m_start + cap:
        t = term(m)
        if not (t < prev) and t > 0.0:
            raise ConfigurationError(
                "cell-norm tail is not certifiable: majorant terms do not decay"
            )
        acc += 2.0 * t
        if t == 0.0 or t < acc * 1e-18:
            return acc
        prev = t
        m += 1
    raise ConfigurationError("cell-norm tail did not converge within the cell cap")


def _build_cell_table(model: DensityModel, s: int, space: str, tail_tol: float) -> _CellTable:
    if space not in (HS, CS):
        raise ValueError(f"space must be {HS!r} or {CS!r}")
    if model.cs_cell_bound is None:
        raise ConfigurationError(
            f"density {model.label!r} carries no certified cell-norm tail bound"
        )
    q = 1.0 / (s + 0.5) if space == HS else 1.0 / (s + 1.0)
    norm_fn = cell_norm_cs if space == HS else cell_norm_hs
    # Product-norm bound ||g h|| <= 2^s ||g||_C^s ||h||; the H^s cell norm
    # additionally picks up sqrt((s+1)|W_m|) against the sup norm.
    factor = 2.0**s * partition.bump_sup_norm(s)
    if space == CS:
        factor *= math.sqrt(2.0 * (s + 1.0))

    def tail_term(m):
        return (factor * model.cs_cell_bound(s, m)) ** q

    norms = {0: norm_fn(model, 0, s)}
    M = 1
    while True:
        for m in (M, -M):
            if m not in norms:
                norms[m] = norm_fn(model, m, s)
        partial = sum(v**q for v in norms.values())
        tail = _tail_power_sum(tail_term, M + 1)
        if tail <= tail_tol * partial:
            break
        M += 1
        if M > 2000:
            raise ConfigurationError("cell range exceeded 2000 without tail certification")
    norm_sum = partial + tail
    ms = tuple(sorted(norms))
    powers = tuple(norms[m] ** q for m in ms)
    excluded = tail_term(M + 1) / norm_sum
    table = _CellTable(
        space=space,
        s=s,
        ms=ms,
        norms=tuple(norms[m] for m in ms),
        powers=powers,
        norm_sum=norm_sum,
        tail_bound=tail,
        excluded_p_bound=excluded,
    )
    total_p = sum(powers) / norm_sum
    if not (1.0 - tail_tol <= total_p <= 1.0 + 1e-12):
        raise ConfigurationError(f"allocation weights sum to {total_p}, outside [1-tol, 1]")
    return table


def cell_table(model: DensityModel, s: int, space: str, tail_tol: float) -> _CellTable:
    """Cached per-density table of cell norms and allocation powers."""
    if not (0.0 < tail_tol <= 1e-3):
        raise ValueError("tail_tol must lie in (0, 1e-3]")
    key = (s, space, float(tail_tol))
    if key not in model._tables:
        model._tables[key] = _build_cell_table(model, s, space, tail_tol)
    return model._tables[key]


def allocation_weights(
    model: DensityModel, s: int, space: str, n: int, tail_tol: float = 1e-10
) -> CellPlan:
    """Cell plan with weights p_m and budgets n_m = floor(p_m * n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    table = cell_table(model, s, space, tail_tol)
    cells = []
    for m, norm, power in zip(table.ms, table.norms, table.powers):
        p = power / table.norm_sum
        cells.append(CellBudget(m=m, cell_norm=norm, p=p, n_m=int(math.floor(p * n))))
    return CellPlan(
        space=space,
        s=s,
        cells=tuple(cells),
        norm_sum=table.norm_sum,
        tail_bound=table.tail_bound,
        excluded_p_bound=table.excluded_p_bound,
    )
