"""Internal quadrature building blocks.

Composite Gauss-Legendre panels, gamma-weighted expectations on a log axis,
and the analytic oscillatory tail integral shared by the transform engine.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.special import gammaln, roots_legendre


@lru_cache(maxsize=32)
def gauss_legendre(order: int):
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on [-1, 1]."""
    x, w = roots_legendre(order)
    return x, w


def panel_nodes(edges, order: int):
    """Tensor a Gauss-Legendre rule over consecutive panels.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries, length P + 1.
    order : int
        Points per panel.

    Returns
    -------
    x, w : ndarray
        Flattened nodes and weights for the composite rule on
        [edges[0], edges[-1]].
    """
    edges = np.asarray(edges, dtype=float)
    xg, wg = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def integrate_panels(f, edges, order: int = 24):
    """Integrate a vectorized callable over the panels defined by ``edges``."""
    x, w = panel_nodes(edges, order)
    return float(np.sum(w * f(x)))


def graded_edges(a: float, b: float, panels: int, ratio: float = 1.0):
    """Panel edges on [a, b], geometrically graded toward ``a`` when ratio > 1.

    ratio is the width quotient of the last panel over the first; ratio = 1
    gives uniform panels.
    """
    if panels < 1:
        raise ValueError("panels must be >= 1")
    if ratio == 1.0:
        return np.linspace(a, b, panels + 1)
    r = ratio ** (1.0 / (panels - 1))
    widths = r ** np.arange(panels)
    widths *= (b - a) / widths.sum()
    return a + np.concatenate(([0.0], np.cumsum(widths)))


def gamma_log_expectation(g, shape: float, rate: float, u_lo: float, u_hi: float,
                          panels: int = 40, order: int = 24):
    """E[g(W)] for W ~ Gamma(shape, rate) by log-axis panel quadrature.

    Substituting w = e^u turns the expectation into
    ``(rate^shape / Gamma(shape)) * int e^{shape*u - rate*e^u} g(e^u) du``
    whose integrand decays doubly exponentially on the right and at least
    exponentially on the left, so uniform Gauss-Legendre panels converge
    geometrically.  The caller chooses the window [u_lo, u_hi]; anything the
    kernel contributes outside it is the caller's truncation error.

    ``g`` must accept an ndarray of positive reals.
    """
    # log normalization: rate^shape / Gamma(shape)
    lc = shape * np.log(rate) - gammaln(shape)
    edges = np.linspace(u_lo, u_hi, panels + 1)
    u, wq = panel_nodes(edges, order)
    w = np.exp(u)
    vals = np.asarray(g(w))
    weight = np.exp(shape * u - rate * w + lc)
    return complex(np.sum(wq * weight * vals)) if np.iscomplexobj(vals) \
        else float(np.sum(wq * weight * vals))


def oscillatory_power_tail(p: float, y: float, xi: float) -> complex:
    """``int_xi^inf tau^{-p} e^{i y tau} dtau`` for xi > 0, p > 1 or y != 0.

    Evaluated as (-iy)^{p-1} * Gamma(1-p, -iy*xi) on the principal branch;
    the incomplete gamma handles all regimes (y = 0 reduces to the real
    power-law tail xi^{1-p}/(p-1), which requires p > 1).
    """
    if xi <= 0.0:
        raise ValueError("xi must be positive")
    if y == 0.0:
        if p <= 1.0:
            raise ValueError("tail integral diverges for y = 0, p <= 1")
        return complex(xi ** (1.0 - p) / (p - 1.0))
    z = mp.mpc(0.0, -y) * xi
    val = mp.power(mp.mpc(0.0, -y), p - 1.0) * mp.gammainc(1.0 - p, z)
    return complex(val)
