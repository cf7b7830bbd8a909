"""Smooth partition of unity from a fixed exponential bump.

The bump is built from the classic smooth step: with ``h(t) = exp(-1/t)``
for ``t > 0`` and ``0`` otherwise,

    step(x) = h(x) / (h(x) + h(1-x)),      g(x) = step(x+1) - step(x).

``g`` is nonnegative, infinitely differentiable, supported exactly on
``[-1, 1]``, satisfies ``g(x) + g(x-1) = 1`` on ``[0, 1]``, and its integer
shifts ``g(x - m)`` sum to one everywhere.
"""

from __future__ import annotations

import numpy as np

from . import kernels


def _h(t: np.ndarray) -> np.ndarray:
    safe = t > 0.0
    return np.where(safe, np.exp(-1.0 / np.where(safe, t, 1.0)), 0.0)


def smooth_step(x):
    """The C-infinity step: 0 for x <= 0, 1 for x >= 1, increasing between."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    h1 = _h(arr)
    h2 = _h(1.0 - arr)
    out = h1 / (h1 + h2)  # denominator >= exp(-2) > 0 everywhere
    return out if np.ndim(x) else float(out[0])


def bump(x):
    """The unit bump g; zero outside (-1, 1), g(0) = 1."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = smooth_step(arr + 1.0) - smooth_step(arr)
    out[np.abs(arr) >= 1.0] = 0.0
    return out if np.ndim(x) else float(out[0])


def bump_jet(x: float, order: int) -> np.ndarray:
    """Derivatives ``(g(x), g'(x), ..., g^(order)(x))``; zeros for |x| >= 1."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return kernels.bump_derivatives(np.array([float(x)]), order)[0]


def bump_derivatives(x, order: int) -> np.ndarray:
    """Vectorised derivatives of g, shape (npts, order+1)."""
    return kernels.bump_derivatives(x, order)


def shifted_bump(x, m: int):
    """The partition member g_m(x) = g(x - m)."""
    return bump(np.asarray(x, dtype=np.float64) - float(m))


def partition_residual(points) -> float:
    """max over the points of |sum_m g(x - m) - 1|."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.float64))
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    total = np.zeros_like(pts)
    base = np.floor(pts).astype(np.int64)
    for off in (-1, 0, 1, 2):  # covers every m with |x - m| < 1
        total += bump(pts - (base + off))
    return float(np.max(np.abs(total - 1.0)))


_SUP_GRID = 8193
_sup_norm_cache: dict[int, float] = {}


def bump_sup_norm(s: int) -> float:
    """Dense-grid estimate of max over l <= s of sup |g^(l)|."""
    if s not in _sup_norm_cache:
        grid = np.linspace(-1.0, 1.0, _SUP_GRID)
        derivs = kernels.bump_derivatives(grid, s)
        _sup_norm_cache[s] = float(np.max(np.abs(derivs)))
    return _sup_norm_cache[s]
