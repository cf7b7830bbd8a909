"""Truncated Taylor (jet) arithmetic for exact higher-order derivatives.

A jet of order ``p`` at a point ``x0`` stores the Taylor coefficients
``(c_0, ..., c_p)`` with ``c_l = f^(l)(x0) / l!``.  Propagating coefficients
through the arithmetic below yields derivatives of composed closed-form
expressions to machine precision, which is how bump and density derivatives
are obtained throughout the package.

All operations are pure; jets are immutable and freely shareable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Jet:
    """Taylor coefficients of a smooth function at one expansion point."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a jet needs at least the constant coefficient")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise OverflowError(f"non-finite jet coefficients: {self.coeffs}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self, ell: int) -> float:
        """The ell-th derivative at the expansion point, ``c_ell * ell!``."""
        return self.coeffs[ell] * math.factorial(ell)


def jet_variable(x0: float, order: int) -> Jet:
    """Jet of the identity map at ``x0``: coefficients ``(x0, 1, 0, ...)``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    coeffs = (float(x0),) + ((1.0,) + (0.0,) * (order - 1) if order >= 1 else ())
    return Jet(coeffs)


def jet_constant(c: float, order: int) -> Jet:
    if order < 0:
        raise ValueError("order must be non-negative")
    return Jet((float(c),) + (0.0,) * order)


def _check_orders(a: Jet, b: Jet) -> None:
    if a.order != b.order:
        raise ValueError(f"jet order mismatch: {a.order} vs {b.order}")


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_orders(a, b)
    return Jet(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def jet_sub(a: Jet, b: Jet) -> Jet:
    _check_orders(a, b)
    return Jet(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))


def jet_scale(a: Jet, c: float) -> Jet:
    return Jet(tuple(c * x for x in a.coeffs))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product of coefficient sequences, truncated to the order."""
    _check_orders(a, b)
    p = a.order
    ca, cb = a.coeffs, b.coeffs
    out = [0.0] * (p + 1)
    for k in range(p + 1):
        out[k] = math.fsum(ca[j] * cb[k - j] for j in range(k + 1))
    return Jet(tuple(out))


def jet_exp(a: Jet) -> Jet:
    """Jet of ``exp(a)`` via the first-order recurrence ``e' = e * a'``."""
    p = a.order
    ca = a.coeffs
    out = [0.0] * (p + 1)
    out[0] = math.exp(ca[0])
    for k in range(1, p + 1):
        out[k] = math.fsum(j * ca[j] * out[k - j] for j in range(1, k + 1)) / k
    return Jet(tuple(out))


def jet_recip(a: Jet) -> Jet:
    """Jet of ``1 / a``; the constant coefficient must be nonzero."""
    if a.coeffs[0] == 0.0:
        raise ZeroDivisionError("reciprocal of a jet with zero constant term")
    p = a.order
    ca = a.coeffs
    out = [0.0] * (p + 1)
    out[0] = 1.0 / ca[0]
    for k in range(1, p + 1):
        out[k] = -out[0] * math.fsum(ca[j] * out[k - j] for j in range(1, k + 1))
    return Jet(tuple(out))


def derivatives(f, x: float, order: int) -> tuple[float, ...]:
    """Evaluate ``(f(x), f'(x), ..., f^(order)(x))`` for a jet-evaluable map.

    ``f`` must accept a :class:`Jet` and return a :class:`Jet` of the same
    order; domain errors raised during composition propagate unchanged.
    """
    jet = f(jet_variable(x, order))
    return tuple(jet.derivative(ell) for ell in range(order + 1))
