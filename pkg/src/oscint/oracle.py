"""Independent ground truth: reference integrals, oracle norms, test library.

Nothing here shares a code path with the lattice rules under test.  The
reference integrator is a plain composite Gauss-Legendre scheme whose panel
length resolves the oscillation (at most pi/(4 kbar)), certified by panel
halving; norms are computed from closed-form derivative samples of the test
functions.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gridquad, kernels, partition
from .density import DensityModel
from .errors import AccuracyError
from .quad_compact import Interval, kbar

_MAX_PANELS = 1 << 18
_cache_lock = threading.Lock()
_integral_cache: dict = {}
_norm_cache: dict = {}


# ---------------------------------------------------------------------------
# test-function library
# ---------------------------------------------------------------------------


@dataclass
class TestFunction:
    """An evaluable test integrand with closed-form derivatives."""

    __test__ = False  # not a pytest case despite the name

    label: str
    membership: tuple[str, ...]
    support: Interval | None
    smoothness: int | None
    _value: Callable
    _derivs: Callable
    known_norms: dict = field(default_factory=dict)

    def __call__(self, x):
        out = self._value(np.atleast_1d(np.asarray(x, dtype=np.float64)))
        return out if np.ndim(x) else out[0]

    def derivatives(self, x, order: int) -> np.ndarray:
        """Derivatives up to ``order`` at the points x, shape (npts, order+1)."""
        return self._derivs(np.atleast_1d(np.asarray(x, dtype=np.float64)), order)


def _poly_bump(s: int, omega: Interval, extra: int) -> TestFunction:
    """(x-a)^(s+extra) (b-x)^(s+extra), extended by zero.

    Derivatives come from the product rule on the two power factors, so the
    boundary zeros of orders below the factor power are exact.
    """
    power = s + extra

    def _factor_derivs(u, sign, order):
        # derivatives of u^power w.r.t. x where du/dx = sign
        out = np.zeros((u.shape[0], order + 1))
        coef = 1.0
        for j in range(min(order, power) + 1):
            out[:, j] = coef * u ** (power - j) * sign**j
            coef *= power - j
        return out

    def value(x):
        out = ((x - omega.a) * (omega.b - x)) ** power
        out[(x < omega.a) | (x > omega.b)] = 0.0
        return out

    def derivs(x, order):
        du = _factor_derivs(x - omega.a, 1.0, order)
        dv = _factor_derivs(omega.b - x, -1.0, order)
        out = kernels.leibniz_products(du, dv)
        out[(x < omega.a) | (x > omega.b)] = 0.0
        return out

    kind = "H" if extra == 0 else "C"
    membership = ("HS0", "HS") if extra == 0 else ("CS0", "HS0", "HS", "CS")
    return TestFunction(
        label=f"poly_bump_{kind}(s={s})[{omega.a:g},{omega.b:g}]",
        membership=membership,
        support=omega,
        smoothness=s,
        _value=value,
        _derivs=derivs,
    )


def _scaled_bump(omega: Interval) -> TestFunction:
    half = 0.5 * omega.length
    mid = 0.5 * (omega.a + omega.b)
    scale = 1.0 / half

    def value(x):
        return partition.bump((x - mid) * scale)

    def derivs(x, order):
        d = kernels.bump_derivatives((x - mid) * scale, order)
        return d * scale ** np.arange(order + 1)[None, :]

    return TestFunction(
        label=f"scaled_bump[{omega.a:g},{omega.b:g}]",
        membership=("HS0", "CS0", "HS", "CS"),
        support=omega,
        smoothness=None,
        _value=value,
        _derivs=derivs,
    )


def _gauss_sine(freq: float) -> TestFunction:
    freq = float(freq)
    sigma_eff = math.sqrt(2.0)  # exp(-x^2/4) = exp(-x^2/(2 sigma^2))

    def value(x):
        return np.sin(freq * x) * np.exp(-0.25 * x * x)

    def derivs(x, order):
        shifts = 0.5 * math.pi * np.arange(order + 1)
        dsin = (freq ** np.arange(order + 1))[None, :] * np.sin(
            freq * x[:, None] + shifts[None, :]
        )
        dexp = kernels.gaussian_exp_derivatives(x, sigma_eff, order)
        return kernels.leibniz_products(dsin, dexp)

    return TestFunction(
        label=f"gauss_sine({freq:g})",
        membership=("HS", "CS"),
        support=None,
        smoothness=None,
        _value=value,
        _derivs=derivs,
    )


def _constant() -> TestFunction:
    def value(x):
        return np.ones_like(x)

    def derivs(x, order):
        out = np.zeros((x.shape[0], order + 1))
        out[:, 0] = 1.0
        return out

    return TestFunction(
        label="constant",
        membership=("CS",),
        support=None,
        smoothness=None,
        _value=value,
        _derivs=derivs,
    )


def _runge() -> TestFunction:
    def value(x):
        return 1.0 / (1.0 + x * x)

    def derivs(x, order):
        a = np.zeros((x.shape[0], order + 1))
        a[:, 0] = 1.0 + x * x
        if order >= 1:
            a[:, 1] = 2.0 * x
        if order >= 2:
            a[:, 2] = 2.0
        return kernels.reciprocal_derivatives(a)

    return TestFunction(
        label="runge",
        membership=("HS", "CS"),
        support=None,
        smoothness=None,
        _value=value,
        _derivs=derivs,
    )


def _osc_bump(k: float) -> TestFunction:
    """Oscillation-matched probe exp(i k x) g(x); near-extremal for frequency k."""
    k = float(k)

    def value(x):
        return np.exp(1j * k * x) * partition.bump(x)

    def derivs(x, order):
        dg = kernels.bump_derivatives(x, order)
        phase = np.exp(1j * k * x)
        out = np.zeros((x.shape[0], order + 1), dtype=np.complex128)
        for ell in range(order + 1):
            acc = np.zeros(x.shape[0], dtype=np.complex128)
            for j in range(ell + 1):
                acc += math.comb(ell, j) * (1j * k) ** j * dg[:, ell - j]
            out[:, ell] = phase * acc
        return out

    return TestFunction(
        label=f"osc_bump(k={k:g})",
        membership=("HS0", "CS0", "HS", "CS"),
        support=Interval(-1.0, 1.0),
        smoothness=None,
        _value=value,
        _derivs=derivs,
    )


def testfn(label: str, **params) -> TestFunction:
    """Look up a member of the test-function library by label."""
    if label == "poly_bump_H":
        return _poly_bump(params["s"], _as_interval(params["omega"]), extra=0)
    if label == "poly_bump_C":
        return _poly_bump(params["s"], _as_interval(params["omega"]), extra=1)
    if label == "scaled_bump":
        return _scaled_bump(_as_interval(params["omega"]))
    if label == "gauss_sine":
        return _gauss_sine(params["freq"])
    if label == "constant":
        return _constant()
    if label == "runge":
        return _runge()
    if label == "osc_bump":
        return _osc_bump(params["k"])
    raise ValueError(f"unknown test-function label {label!r}")


def _as_interval(omega) -> Interval:
    if isinstance(omega, Interval):
        return omega
    a, b = omega
    return Interval(float(a), float(b))


# ---------------------------------------------------------------------------
# reference integration
# ---------------------------------------------------------------------------


def _panel_value(f, k: float, omega: Interval, n_panels: int) -> tuple[complex, float]:
    nodes, weights = gridquad.panel_nodes_weights(omega.a, omega.b, n_panels)
    total = 0.0 + 0.0j
    l1_mass = 0.0
    for lo in range(0, nodes.size, 1 << 20):
        sl = slice(lo, lo + (1 << 20))
        vals = np.asarray(f(nodes[sl])) * np.exp(-1j * float(k) * nodes[sl])
        total += complex(np.dot(weights[sl], vals))
        l1_mass += float(np.dot(np.abs(weights[sl]), np.abs(vals)))
    return total, l1_mass


def reference_integral(f, k: float, omega: Interval, tol: float = 1e-12) -> complex:
    """High-order panel value of the integral of f(x) exp(-i k x) over omega.

    Panels are no longer than pi/(4 kbar) so each resolves the oscillation;
    the result is accepted once doubling the panel count moves it by at
    most ``tol``.  For integrands whose L1 mass is large the tolerance is
    honoured down to the rounding floor of that mass, below which panel
    comparison cannot certify anything in double precision.
    """
    if tol < 1e-13:
        raise ValueError("tol below the certifiable floor 1e-13")
    omega = _as_interval(omega)
    key = (getattr(f, "label", None), float(k), omega.a, omega.b, float(tol))
    if key[0] is not None:
        with _cache_lock:
            if key in _integral_cache:
                return _integral_cache[key]
    plen = min(omega.length / 8.0, math.pi / (4.0 * kbar(k)))
    n_panels = max(1, math.ceil(omega.length / plen))
    coarse, _ = _panel_value(f, k, omega, n_panels)
    achieved = math.inf
    while n_panels <= _MAX_PANELS:
        n_panels *= 2
        fine, l1_mass = _panel_value(f, k, omega, n_panels)
        achieved = abs(fine - coarse)
        if achieved <= max(tol, 32.0 * np.finfo(float).eps * l1_mass):
            if key[0] is not None:
                with _cache_lock:
                    _integral_cache[key] = fine
            return fine
        coarse = fine
    raise AccuracyError(
        f"reference integral did not reach tol={tol:g} (achieved {achieved:g})",
        achieved=achieved,
    )


def _line_window(density: DensityModel, f, tol: float) -> int:
    """Smallest cell index M with a certified mass tail below tol/2."""
    if density.cs_cell_bound is None:
        raise AccuracyError("density carries no tail bound for line integration")
    m = max(2, int(math.ceil(3.0 * density.params.get("sigma", 1.0))))
    while m < 10000:
        probe = np.linspace(-(m + 1.0), m + 1.0, 4001)
        sup_f = float(np.max(np.abs(np.asarray(f(probe)))))
        tail = 0.0
        j = m + 1
        while True:
            t = 2.0 * density.cs_cell_bound(0, j) * 2.0  # sup * |cell|, both sides
            tail += t
            if t < 1e-18 * max(tail, 1e-300):
                break
            j += 1
        if sup_f * tail < 0.5 * tol:
            return m
        m += 1
    raise AccuracyError("line window for the reference integral did not close")


def reference_integral_line(
    f, density: DensityModel, k: float, tol: float = 1e-11
) -> complex:
    """Cell sum of reference integrals of f * rho_m, plus a certified tail."""
    key = (
        getattr(f, "label", None),
        density.label,
        tuple(sorted(density.params.items())),
        float(k),
        float(tol),
    )
    if key[0] is not None:
        with _cache_lock:
            if key in _integral_cache:
                return _integral_cache[key]
    m_max = _line_window(density, f, tol)
    cell_tol = max(tol / (2.0 * (2 * m_max + 1)), 2e-14)
    total = 0.0 + 0.0j

    for m in range(-m_max, m_max + 1):
        def piece(x, _m=m):
            return np.asarray(f(x)) * partition.bump(x - _m) * density(x)

        total += reference_integral(piece, k, Interval(m - 1.0, m + 1.0), cell_tol)
    if key[0] is not None:
        with _cache_lock:
            _integral_cache[key] = total
    return total


def poisson_residual(f, fourier_f, c: float, k: float, trunc: int) -> float:
    """|lattice sum - transform sum| for the lattice c Z, both truncated.

    Checks ``c sum_j f(c j) e^(-i k c j) = sum_z F[f](z/c + k/(2 pi))`` for
    integrands whose tails beyond ``trunc`` terms are negligible.
    """
    if c == 0.0:
        raise ValueError("lattice spacing c must be nonzero")
    j = np.arange(-trunc, trunc + 1, dtype=np.float64)
    lhs = c * np.sum(np.asarray(f(c * j)) * np.exp(-1j * float(k) * c * j))
    rhs = np.sum(np.asarray(fourier_f(j / c + float(k) / (2.0 * math.pi))))
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------------------
# oracle norms
# ---------------------------------------------------------------------------


def _hs_total(f, omega: Interval, s: int, n_panels: int) -> float:
    nodes, weights = gridquad.panel_nodes_weights(omega.a, omega.b, n_panels)
    derivs = f.derivatives(nodes, s)
    return float(np.sum(weights[:, None] * np.abs(derivs) ** 2))


def norm_hs_oracle(f, omega, s: int) -> float:
    """Sobolev norm (root of summed squared derivative L2 norms) on omega."""
    omega = _as_interval(omega)
    key = (getattr(f, "label", None), "HS", omega.a, omega.b, s)
    if key[0] is not None:
        with _cache_lock:
            if key in _norm_cache:
                return _norm_cache[key]
    n_panels = max(8, math.ceil(4.0 * omega.length))
    coarse = _hs_total(f, omega, s, n_panels)
    fine = _hs_total(f, omega, s, 2 * n_panels)
    if abs(fine - coarse) > 1e-9 * max(abs(fine), 1e-300):
        raise AccuracyError(
            "Sobolev-norm quadrature did not stabilise under panel doubling",
            achieved=abs(fine - coarse),
        )
    out = math.sqrt(fine)
    if key[0] is not None:
        with _cache_lock:
            _norm_cache[key] = out
    return out


def norm_cs_oracle(f, omega, s: int, per_unit: int = 8192) -> float:
    """Dense-grid sup norm over derivative orders 0..s on omega."""
    omega = _as_interval(omega)
    key = (getattr(f, "label", None), "CS", omega.a, omega.b, s)
    if key[0] is not None:
        with _cache_lock:
            if key in _norm_cache:
                return _norm_cache[key]
    npts = int(round(per_unit * max(1.0, omega.length))) + 1
    grid = np.linspace(omega.a, omega.b, npts)
    out = float(np.max(np.abs(f.derivatives(grid, s))))
    if key[0] is not None:
        with _cache_lock:
            _norm_cache[key] = out
    return out


def certified_window(density: DensityModel, f, tol: float = 1e-12) -> Interval:
    """Symmetric window outside which the density mass against f is below tol."""
    m_max = _line_window(density, f, tol)
    return Interval(-(m_max + 1.0), m_max + 1.0)


def line_norm(
    f, space: str, s: int, density: DensityModel | None = None, rel_tol: float = 1e-7
) -> float:
    """Norm of a whole-line function.

    Compactly supported functions are measured on their support.  When a
    density is given, the norm is taken on its certified window (the spec
    quantity entering the bound audits; finite even for functions like the
    constant whose whole-line Sobolev norm diverges).  Otherwise the window
    is doubled until the norm stabilises.
    """
    if f.support is not None:
        omega = f.support
    elif density is not None:
        omega = certified_window(density, f)
    else:
        w, prev = 16.0, None
        while w <= 512.0:
            cur = (
                norm_hs_oracle(f, Interval(-w, w), s)
                if space == "HS"
                else norm_cs_oracle(f, Interval(-w, w), s)
            )
            if prev is not None and abs(cur - prev) <= rel_tol * max(cur, 1e-300):
                return cur
            prev = cur
            w *= 2.0
        raise AccuracyError("line norm did not stabilise below the window cap")
    return norm_hs_oracle(f, omega, s) if space == "HS" else norm_cs_oracle(f, omega, s)


def membership_residual(f: TestFunction, s: int) -> float:
    """Largest boundary derivative that the function's class requires to vanish."""
    if f.support is None:
        return 0.0
    orders = []
    if "HS0" in f.membership:
        orders.append(s - 1)
    if "CS0" in f.membership:
        orders.append(s)
    if not orders:
        return 0.0
    top = max(orders)
    ends = np.array([f.support.a, f.support.b])
    derivs = f.derivatives(ends, top)
    worst = 0.0
    if "HS0" in f.membership and s >= 1:
        worst = max(worst, float(np.max(np.abs(derivs[:, :s]))))
    if "CS0" in f.membership:
        worst = max(worst, float(np.max(np.abs(derivs[:, : s + 1]))))
    return worst
