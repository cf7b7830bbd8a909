"""Composite Gauss-Legendre panel grids shared by norm and oracle code."""

from __future__ import annotations

import numpy as np

_rule_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def leggauss(order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    if order not in _rule_cache:
        _rule_cache[order] = np.polynomial.legendre.leggauss(order)
    return _rule_cache[order]


def panel_nodes_weights(a: float, b: float, n_panels: int, order: int = 32):
    """Nodes and weights of ``n_panels`` equal Gauss-Legendre panels on [a, b]."""
    if not (b > a):
        raise ValueError("need a < b")
    if n_panels < 1:
        raise ValueError("need at least one panel")
    xg, wg = leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights
