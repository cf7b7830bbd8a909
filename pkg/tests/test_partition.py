import numpy as np
import pytest

from oscint.partition import (
    bump,
    bump_derivatives,
    bump_jet,
    bump_sup_norm,
    partition_residual,
    shifted_bump,
    smooth_step,
)


def test_step_boundary_values():
    assert smooth_step(0.0) == 0.0
    assert smooth_step(1.0) == 1.0
    assert smooth_step(-5.0) == 0.0
    assert smooth_step(7.0) == 1.0
    assert smooth_step(0.5) == pytest.approx(0.5, abs=1e-15)


def test_step_strictly_increasing_inside():
    x = np.linspace(0.01, 0.99, 200)
    y = smooth_step(x)
    assert np.all(np.diff(y) > 0)
    assert np.all((y > 0) & (y < 1))


def test_bump_values():
    assert bump(0.0) == 1.0
    assert bump(1.0) == 0.0
    assert bump(-1.0) == 0.0
    assert bump(0.3) + bump(-0.7) == pytest.approx(1.0, abs=1e-14)
    assert bump(0.5) == pytest.approx(0.5, abs=1e-15)


def test_bump_nonnegative_and_supported():
    x = np.linspace(-2.0, 2.0, 2001)
    g = bump(x)
    assert np.all(g >= 0.0)
    assert np.all(g[np.abs(x) >= 1.0] == 0.0)
    assert np.all(g <= 1.0 + 1e-15)


def test_bump_jet_outside_support_is_zero():
    assert np.all(bump_jet(2.0, 3) == 0.0)
    assert np.all(bump_jet(-1.0, 5) == 0.0)
    derivs = bump_derivatives(np.array([1.0, 1.5, -3.0]), 4)
    assert np.all(derivs == 0.0)


def test_bump_jet_at_center_and_midpoint():
    jet0 = bump_jet(0.0, 1)
    assert jet0[0] == 1.0
    assert abs(jet0[1]) <= 1e-12
    assert bump_jet(0.5, 0)[0] == pytest.approx(0.5, abs=1e-15)


def test_shift_structure_exact():
    x = np.linspace(2.2, 4.2, 11)
    assert np.all(shifted_bump(x, 3) == bump(x - 3))


def test_partition_residual_examples():
    assert partition_residual([0.5]) <= 1e-12
    assert partition_residual([-3.2, 0.0, 7.9]) <= 1e-12
    rng = np.random.default_rng(11)
    assert partition_residual(rng.uniform(-20.0, 20.0, size=1000)) <= 1e-12


def test_partition_residual_rejects_nonfinite():
    with pytest.raises(ValueError):
        partition_residual([np.inf])


def test_sup_norm_increases_with_order():
    norms = [bump_sup_norm(s) for s in range(4)]
    assert norms[0] == pytest.approx(1.0, abs=1e-12)
    assert all(b >= a for a, b in zip(norms, norms[1:]))
