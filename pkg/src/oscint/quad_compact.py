"""Equispaced rules for oscillatory integrals of compactly supported functions.

For the integral of ``f(x) exp(-i k x)`` over an interval W = [a, b] and a
node budget n, the rule places nodes on the absolute lattice ``c_n * Z``
with spacing ``c_n = |W| / n`` and weights ``c_n * exp(-i k x_j)``.  Lattice
points that land on an endpoint are dropped: the integrands of interest
vanish there, so at most n function values are ever used.

The safeguarded variant returns the zero functional whenever
``n < kbar |W| / pi`` (kbar = max(1, |k|)); below that budget sampling
cannot improve on returning zero, and the explicit worst-case bound
evaluators here cover the safeguarded rule at every n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import CS, HS

_ENDPOINT_TOL = 1e-12  # relative to |W|


def kbar(k: float) -> float:
    return max(1.0, abs(float(k)))


def nu_s(k: float, s: int) -> float:
    """sqrt(1 + sum_{l=1..s} k^(2l)); always at least kbar(k)^s."""
    if s < 1:
        raise ValueError("s must be at least 1")
    k = float(k)
    return math.sqrt(1.0 + math.fsum(k ** (2 * ell) for ell in range(1, s + 1)))


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (self.b > self.a):
            raise ValueError(f"empty interval [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class QuadratureRule:
    interval: Interval
    k: float
    n_budget: int
    nodes: np.ndarray
    weights: np.ndarray
    is_zero_rule: bool = False


def build_rule(omega: Interval, n: int, k: float) -> QuadratureRule:
    """The lattice rule with spacing |W|/n; endpoint nodes are dropped."""
    if n < 1:
        raise ValueError("node budget n must be at least 1")
    length = omega.length
    c = length / n
    jmin = math.ceil(omega.a / c - 1e-9)
    jmax = math.floor(omega.b / c + 1e-9)
    nodes = c * np.arange(jmin, jmax + 1, dtype=np.float64)
    tol = _ENDPOINT_TOL * length
    keep = (nodes > omega.a + tol) & (nodes < omega.b - tol)
    nodes = nodes[keep]
    if nodes.size > n:
        raise AssertionError("lattice produced more than n interior nodes")
    weights = c * np.exp(-1j * float(k) * nodes)
    return QuadratureRule(interval=omega, k=float(k), n_budget=n, nodes=nodes, weights=weights)


def zero_rule(omega: Interval, n: int, k: float) -> QuadratureRule:
    return QuadratureRule(
        interval=omega,
        k=float(k),
        n_budget=n,
        nodes=np.empty(0),
        weights=np.empty(0, dtype=np.complex128),
        is_zero_rule=True,
    )


def safeguarded_rule(omega: Interval, n: int, k: float) -> QuadratureRule:
    """Zero rule below the budget threshold kbar |W| / pi, lattice rule above."""
    if n < 0:
        raise ValueError("node budget n must be non-negative")
    if n < kbar(k) * omega.length / math.pi:
        return zero_rule(omega, n, k)
    return build_rule(omega, n, k)


def apply_rule(rule: QuadratureRule, f) -> complex:
    """sum_j weight_j * f(node_j); the zero rule returns 0."""
    if rule.is_zero_rule or rule.nodes.size == 0:
        return 0.0 + 0.0j
    values = np.asarray(f(rule.nodes))
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand returned a non-finite value at a quadrature node")
    return complex(np.dot(rule.weights, values))


def initial_error_bound(omega: Interval, s: int, k: float, space: str) -> float:
    """Worst-case error of the zero algorithm on the unit ball."""
    if s < 1:
        raise ValueError("s must be at least 1")
    if space == HS:
        return math.sqrt(omega.length) / nu_s(k, s)
    if space == CS:
        return omega.length / kbar(k) ** s
    raise ValueError(f"space must be {HS!r} or {CS!r}")


def worstcase_bound(
    omega: Interval, n: int, s: int, k: float, space: str, sharp: bool = False
) -> float:
    """Explicit worst-case bound for the safeguarded rule, valid at every n.

    With ``sharp=True`` (HS only) the tighter aliasing-sum bound
    ``2 (2 pi)^-s |W|^(1/2) (n/|W| - |k|/2pi)^-s`` is returned; it requires
    ``n >= (1 + |k|) |W| / (2 pi)``.
    """
    if s < 1:
        raise ValueError("s must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    length = omega.length
    if sharp:
        if space != HS:
            raise ValueError("the sharp aliasing bound applies to the HS space only")
        if n < (1.0 + abs(k)) * length / (2.0 * math.pi):
            raise ValueError("sharp bound requested below its budget threshold")
        gap = n / length - abs(k) / (2.0 * math.pi)
        return 2.0 / (2.0 * math.pi) ** s * math.sqrt(length) / gap**s
    denom = (n / length + kbar(k) / (2.0 * math.pi)) ** s
    if space == HS:
        return 2.0 / 2.0**s * math.sqrt(length) / denom
    if space == CS:
        return 2.0 / 2.0 ** (s / 2.0) * length / denom
    raise ValueError(f"space must be {HS!r} or {CS!r}")


def aliasing_bound(
    omega: Interval, n: int, s: int, k: float, space: str, alpha: float = 1.0 / 3.0
) -> float:
    """Alpha-parameterised aliasing bound, valid for
    ``n >= [(1+alpha)/(1-alpha)] kbar |W| / (2 pi)`` with alpha in [1/3, 1).

    The safeguarded bound of :func:`worstcase_bound` is this bound at
    alpha = 1/3 extended to all n through the zero rule.
    """
    if not (1.0 / 3.0 <= alpha < 1.0):
        raise ValueError("alpha must lie in [1/3, 1)")
    threshold = (1.0 + alpha) / (1.0 - alpha) * kbar(k) * omega.length / (2.0 * math.pi)
    if n < threshold:
        raise ValueError("aliasing bound requested below its budget threshold")
    length = omega.length
    denom = (n / length + kbar(k) / (2.0 * math.pi)) ** s
    if space == HS:
        return 2.0 / (2.0 * math.pi * alpha) ** s * math.sqrt(length) / denom
    if space == CS:
        return 2.0 / (math.sqrt(2.0) * math.pi * alpha) ** s * length / denom
    raise ValueError(f"space must be {HS!r} or {CS!r}")
