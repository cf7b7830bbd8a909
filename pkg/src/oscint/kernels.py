"""Hot derivative kernels, in a numba lane and an equivalent numpy lane.

Norm estimation samples bump and density derivatives on grids of thousands
of points; these kernels propagate truncated Taylor recurrences per point.
The numba lane fuses the per-point loops, the numpy lane vectorises over
points while looping only over the coefficient index (order <= ~10).  Lane
selection lives in :mod:`oscint.backend`; ``benchmarks/bench_kernels.py``
compares the two.

Coefficient convention matches :mod:`oscint.jet`: arrays of Taylor
coefficients are shaped ``(order+1, npts)``; public functions return true
derivatives shaped ``(npts, order+1)``.
"""

from __future__ import annotations

import math

import numpy as np

from . import backend

# Jets of exp(-1/t) flush to exact zero for t <= T_FLUSH.  Below this
# cutoff exp(-1/t) < exp(-1000), which is zero in double precision, while
# coefficient products 0 * t^{-(l+1)} would otherwise turn into 0 * inf.
T_FLUSH = 1.0e-3


def _factorials(order: int) -> np.ndarray:
    out = np.ones(order + 1)
    for ell in range(2, order + 1):
        out[ell] = out[ell - 1] * ell
    return out


# ---------------------------------------------------------------------------
# numpy lane: coefficient recurrences vectorised over sample points
# ---------------------------------------------------------------------------


def _exp_coeffs_np(a: np.ndarray) -> np.ndarray:
    """exp of a coefficient array, ``out' = out * a'`` recurrence."""
    p1 = a.shape[0]
    out = np.empty_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, p1):
        acc = np.zeros(a.shape[1])
        for j in range(1, k + 1):
            acc += j * a[j] * out[k - j]
        out[k] = acc / k
    return out


def _recip_coeffs_np(a: np.ndarray) -> np.ndarray:
    p1 = a.shape[0]
    out = np.empty_like(a)
    out[0] = 1.0 / a[0]
    for k in range(1, p1):
        acc = np.zeros(a.shape[1])
        for j in range(1, k + 1):
            acc += a[j] * out[k - j]
        out[k] = -out[0] * acc
    return out


def _mul_coeffs_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p1 = a.shape[0]
    out = np.zeros_like(a)
    for k in range(p1):
        for j in range(k + 1):
            out[k] += a[j] * b[k - j]
    return out


def _h_coeffs_np(t: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of exp(-1/t) at points t (all > T_FLUSH).

    The inner jet -1/t has the closed form ``(-1)^(l+1) t^-(l+1)``.
    """
    p1 = order + 1
    inner = np.empty((p1, t.shape[0]))
    tp = 1.0 / t
    sign = -1.0
    for ell in range(p1):
        inner[ell] = sign * tp
        tp = tp / t
        sign = -sign
    return _exp_coeffs_np(inner)


def _phi_coeffs_np(x: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of the smooth step h(x) / (h(x) + h(1-x))."""
    p1 = order + 1
    out = np.zeros((p1, x.shape[0]))
    out[0, x >= 1.0 - T_FLUSH] = 1.0
    mid = (x > T_FLUSH) & (x < 1.0 - T_FLUSH)
    if np.any(mid):
        xm = x[mid]
        h1 = _h_coeffs_np(xm, order)
        h2 = _h_coeffs_np(1.0 - xm, order)
        h2 *= ((-1.0) ** np.arange(p1))[:, None]  # chain rule for t -> 1 - x
        out[:, mid] = _mul_coeffs_np(h1, _recip_coeffs_np(h1 + h2))
    return out


def _bump_derivs_np(x: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros((x.shape[0], order + 1))
    inside = np.abs(x) < 1.0
    if np.any(inside):
        xi = x[inside]
        coeffs = _phi_coeffs_np(xi + 1.0, order) - _phi_coeffs_np(xi, order)
        out[inside] = (coeffs * _factorials(order)[:, None]).T
    return out


def _step_derivs_np(x: np.ndarray, order: int) -> np.ndarray:
    return (_phi_coeffs_np(x, order) * _factorials(order)[:, None]).T


def _gaussian_exp_derivs_np(x: np.ndarray, sigma: float, order: int) -> np.ndarray:
    """Derivatives of exp(-x^2 / (2 sigma^2)), without normalisation."""
    p1 = order + 1
    inv2 = 1.0 / (2.0 * sigma * sigma)
    inner = np.zeros((p1, x.shape[0]))
    inner[0] = -x * x * inv2
    if order >= 1:
        inner[1] = -2.0 * x * inv2
    if order >= 2:
        inner[2, :] = -inv2
    coeffs = _exp_coeffs_np(inner)
    return (coeffs * _factorials(order)[:, None]).T


def _recip_derivs_np(a_derivs: np.ndarray) -> np.ndarray:
    """Derivatives of 1/a from derivatives of a, shape (npts, order+1)."""
    order = a_derivs.shape[1] - 1
    fact = _factorials(order)
    coeffs = _recip_coeffs_np(a_derivs.T / fact[:, None])
    return (coeffs * fact[:, None]).T


# ---------------------------------------------------------------------------
# numba lane: identical recurrences, fused per point
# ---------------------------------------------------------------------------

if backend.HAS_NUMBA:
    import numba as nb

    @nb.njit(cache=True)
    def _exp_coeffs_scalar(a, out):
        p1 = a.shape[0]
        out[0] = math.exp(a[0])
        for k in range(1, p1):
            acc = 0.0
            for j in range(1, k + 1):
                acc += j * a[j] * out[k - j]
            out[k] = acc / k

    @nb.njit(cache=True)
    def _recip_coeffs_scalar(a, out):
        p1 = a.shape[0]
        out[0] = 1.0 / a[0]
        for k in range(1, p1):
            acc = 0.0
            for j in range(1, k + 1):
                acc += a[j] * out[k - j]
            out[k] = -out[0] * acc

    @nb.njit(cache=True)
    def _h_coeffs_scalar(t, out, scratch):
        p1 = out.shape[0]
        tp = 1.0 / t
        sign = -1.0
        for ell in range(p1):
            scratch[ell] = sign * tp
            tp = tp / t
            sign = -sign
        _exp_coeffs_scalar(scratch, out)

    @nb.njit(cache=True)
    def _phi_coeffs_scalar(x, out, h1, h2, scratch, denom):
        p1 = out.shape[0]
        for ell in range(p1):
            out[ell] = 0.0
        if x >= 1.0 - T_FLUSH:
            out[0] = 1.0
            return
        if x <= T_FLUSH:
            return
        _h_coeffs_scalar(x, h1, scratch)
        _h_coeffs_scalar(1.0 - x, h2, scratch)
        sign = 1.0
        for ell in range(p1):
            denom[ell] = h1[ell] + sign * h2[ell]  # chain rule for t -> 1 - x
            sign = -sign
        _recip_coeffs_scalar(denom, scratch)
        for k in range(p1):
            acc = 0.0
            for j in range(k + 1):
                acc += h1[j] * scratch[k - j]
            out[k] = acc

    @nb.njit(cache=True)
    def _bump_derivs_nb(x, order):
        n = x.shape[0]
        p1 = order + 1
        out = np.zeros((n, p1))
        c1 = np.empty(p1)
        c2 = np.empty(p1)
        h1 = np.empty(p1)
        h2 = np.empty(p1)
        scratch = np.empty(p1)
        denom = np.empty(p1)
        for i in range(n):
            xi = x[i]
            if xi <= -1.0 or xi >= 1.0:
                continue
            _phi_coeffs_scalar(xi + 1.0, c1, h1, h2, scratch, denom)
            _phi_coeffs_scalar(xi, c2, h1, h2, scratch, denom)
            fact = 1.0
            for ell in range(p1):
                if ell > 0:
                    fact *= ell
                out[i, ell] = (c1[ell] - c2[ell]) * fact
        return out

    @nb.njit(cache=True)
    def _step_derivs_nb(x, order):
        n = x.shape[0]
        p1 = order + 1
        out = np.empty((n, p1))
        c = np.empty(p1)
        h1 = np.empty(p1)
        h2 = np.empty(p1)
        scratch = np.empty(p1)
        denom = np.empty(p1)
        for i in range(n):
            _phi_coeffs_scalar(x[i], c, h1, h2, scratch, denom)
            fact = 1.0
            for ell in range(p1):
                if ell > 0:
                    fact *= ell
                out[i, ell] = c[ell] * fact
        return out

    @nb.njit(cache=True)
    def _gaussian_exp_derivs_nb(x, sigma, order):
        n = x.shape[0]
        p1 = order + 1
        out = np.empty((n, p1))
        inner = np.zeros(p1)
        e = np.empty(p1)
        inv2 = 1.0 / (2.0 * sigma * sigma)
        for i in range(n):
            xi = x[i]
            inner[0] = -xi * xi * inv2
            if order >= 1:
                inner[1] = -2.0 * xi * inv2
            if order >= 2:
                inner[2] = -inv2
            _exp_coeffs_scalar(inner, e)
            fact = 1.0
            for ell in range(p1):
                if ell > 0:
                    fact *= ell
                out[i, ell] = e[ell] * fact
        return out


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------


def _as_points(x) -> np.ndarray:
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))


def bump_derivatives(x, order: int) -> np.ndarray:
    """Derivatives of the unit bump g at the points x, shape (npts, order+1)."""
    pts = _as_points(x)
    if backend.active_backend() == "numba":
        return _bump_derivs_nb(pts, order)
    return _bump_derivs_np(pts, order)


def step_derivatives(x, order: int) -> np.ndarray:
    """Derivatives of the smooth step at the points x."""
    pts = _as_points(x)
    if backend.active_backend() == "numba":
        return _step_derivs_nb(pts, order)
    return _step_derivs_np(pts, order)


def gaussian_exp_derivatives(x, sigma: float, order: int) -> np.ndarray:
    """Derivatives of exp(-x^2/(2 sigma^2)) at the points x (unnormalised)."""
    pts = _as_points(x)
    if backend.active_backend() == "numba":
        return _gaussian_exp_derivs_nb(pts, float(sigma), order)
    return _gaussian_exp_derivs_np(pts, float(sigma), order)


def reciprocal_derivatives(a_derivs: np.ndarray) -> np.ndarray:
    """Derivatives of 1/a from derivative samples of a (numpy lane only)."""
    return _recip_derivs_np(np.asarray(a_derivs, dtype=np.float64))


def leibniz_products(da: np.ndarray, db: np.ndarray) -> np.ndarray:
    """Derivatives of a product from factor derivatives, both (npts, p+1)."""
    if da.shape != db.shape:
        raise ValueError("factor derivative arrays must share a shape")
    p1 = da.shape[1]
    out = np.zeros(da.shape, dtype=np.result_type(da, db))
    binom = [math.comb(ell, j) for ell in range(p1) for j in range(ell + 1)]
    idx = 0
    for ell in range(p1):
        for j in range(ell + 1):
            out[:, ell] += binom[idx] * da[:, j] * db[:, ell - j]
            idx += 1
    return out
