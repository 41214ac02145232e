"""Covariance functions of the three stationary families.

Three mutually checking evaluation routes are provided:

* ``Quadrature`` -- the gamma-mixture representation: the covariance is a
  Gamma-weighted average of a spatial kernel, ``(sigma2/mu^{2beta}) *
  E[kernel(h, W)]``, evaluated by Gauss-Laguerre nodes or graded log-axis
  panels.  For the fractional family with ``alpha < 1`` the mixture kernel
  is the convolution of two symmetric stable densities.
* ``ClosedForm`` -- Bessel-K closed forms (fractional ``alpha = 1`` and
  second-order), plus the exact zero-lag moment reductions for higher
  orders.
* ``FourierOracle`` -- numeric inversion of the spectral density through
  :func:`fracspec.transforms.inverse_fourier_spectral`.

``Auto`` picks the closed form when one exists, otherwise the quadrature
route; odd orders above three are served only by the Fourier oracle
because their spatial kernels are not absolutely integrable.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from ._quad import gamma_log_expectation, panel_nodes
from .errors import (
    AccuracyError,
    DivergentVarianceError,
    DomainError,
    ModelValidationError,
    NumericalError,
    TailAccuracyWarning,
)
from .kernels import _even_kernel_values
from .models import (
    Curve,
    Family,
    Grid,
    ModelSpec,
    Quantity,
    has_finite_variance,
    spectral_tail_exponent,
)
from .specfun import (airy_ai, _airy_ai_vec, bessel_k, gamma_fn,
                      symmetric_stable_density)
from .transforms import inverse_fourier_spectral

__all__ = [
    "CovarianceMethod",
    "QuadratureRule",
    "gamma_quadrature",
    "covariance",
    "covariance_curve",
    "covariance_closed_weyl_alpha1",
    "covariance_closed_even_n1",
    "covariance_closed_even_n1_printed",
    "covariance_stable_convolution",
    "decay_rate",
]


class CovarianceMethod(enum.Enum):
    Auto = "auto"
    Quadrature = "quadrature"
    ClosedForm = "closed_form"
    FourierOracle = "fourier_oracle"


# --------------------------------------------------------------------------
# gamma quadrature rule


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights averaging against a Gamma(shape, rate) density.

    ``sum(weights) == 1`` within 1e-12 (the rule reproduces E[1] exactly)
    and at least eight nodes are required.
    """

    shape: float
    rate: float
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        violations = []
        if not (isinstance(self.shape, (int, float)) and self.shape > 0):
            violations.append(f"shape > 0 required, got {self.shape!r}")
        if not (isinstance(self.rate, (int, float)) and self.rate > 0):
            violations.append(f"rate > 0 required, got {self.rate!r}")
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or weights.shape != nodes.shape:
            violations.append("nodes and weights must be 1-D and equal length")
        else:
            if nodes.size < 8:
                violations.append(f"node count >= 8 required, got {nodes.size}")
            if not np.all(np.isfinite(nodes)):
                violations.append("all nodes must be finite")
            elif np.any(nodes <= 0):
                violations.append("all nodes must be positive")
            if not np.all(np.isfinite(weights)):
                violations.append("all weights must be finite")
            elif np.any(weights <= 0):
                violations.append("all weights must be positive")
            elif abs(float(weights.sum()) - 1.0) > 1e-12:
                violations.append(
                    f"weights sum to {float(weights.sum())!r}, not 1 within 1e-12")
        if violations:
            raise ModelValidationError(violations)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        """Average ``fn`` (vectorized over positive reals) against the rule."""
        return float(np.dot(self.weights, np.asarray(fn(self.nodes), dtype=float)))


@lru_cache(maxsize=64)
def _laguerre_raw(node_count: int, shape: float):
    """Generalized Gauss-Laguerre nodes and Gamma-normalized weights by
    Golub-Welsch: eigenvalues of the Jacobi matrix for the weight
    x^{shape-1} e^{-x} are the nodes, and the squared first eigenvector
    components are the weights divided by Gamma(shape) (so they sum to 1).
    Stable at any practical degree, unlike the direct weight formula."""
    alpha = shape - 1.0
    k = np.arange(node_count, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = vecs[0, :] ** 2
    return nodes, weights


def gamma_quadrature(shape: float, rate: float, node_count: int) -> QuadratureRule:
    """Generalized Gauss-Laguerre rule for E[g(W)], W ~ Gamma(shape, rate).

    Exact for polynomials in w up to degree ``2*node_count - 1``.  Nodes
    whose weight underflows to zero carry no double-precision mass and are
    dropped.

    Raises
    ------
    DomainError
        If shape or rate is not positive or node_count < 8.
    NumericalError
        If the node computation fails.
    """
    if not (isinstance(shape, (int, float)) and math.isfinite(shape) and shape > 0):
        raise DomainError(f"gamma_quadrature requires shape > 0, got {shape!r}")
    if not (isinstance(rate, (int, float)) and math.isfinite(rate) and rate > 0):
        raise DomainError(f"gamma_quadrature requires rate > 0, got {rate!r}")
    if not (isinstance(node_count, int) and node_count >= 8):
        raise DomainError(
            f"gamma_quadrature requires node_count >= 8, got {node_count!r}")
    try:
        x, w = _laguerre_raw(node_count, float(shape))
    except Exception as exc:  # pragma: no cover - lapack failure surface
        raise NumericalError(
            f"Gauss-Laguerre node computation failed for shape={shape}, "
            f"node_count={node_count}: {exc}") from exc
    keep = w > 0.0
    return QuadratureRule(shape=float(shape), rate=float(rate),
                          nodes=x[keep] / float(rate), weights=w[keep])


DEFAULT_NODE_COUNT = 96


def _laguerre_escalate(shape: float, rate: float,
                       g: Callable[[np.ndarray], np.ndarray],
                       what: str,
                       rel: float = 1e-9, floor: float = 1e-14,
                       start: int = DEFAULT_NODE_COUNT) -> float:
    """Average g against Gamma(shape, rate), doubling the Laguerre rule
    from ``start`` nodes until two consecutive values agree."""
    prev = None
    count = start
    for count in (start, 2 * start, 4 * start, 8 * start):
        rule = gamma_quadrature(shape, rate, count)
        val = rule.expect(g)
        if prev is not None and abs(val - prev) <= max(rel * abs(val), floor):
            return val
        prev = val
    raise AccuracyError(
        f"{what}: gamma quadrature did not converge; last two refinement "
        f"values {prev!r} ({count // 2} nodes) and {val!r} ({count} nodes)",
        estimate=val, error_estimate=abs(val - prev))


# --------------------------------------------------------------------------
# closed forms


def _require_positive(**params) -> None:
    bad = [f"{k} > 0 required, got {v!r}" for k, v in params.items()
           if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0)]
    if bad:
        raise DomainError("; ".join(bad))


def covariance_closed_weyl_alpha1(h: float, mu: float, beta: float,
                                  sigma2: float) -> float:
    """Closed covariance of the fractional family at alpha = 1:

    ``sigma2/(Gamma(beta) sqrt(pi)) * (|h|/(2 mu))^{beta-1/2}
    * K_{beta-1/2}(mu |h|)``,

    with the finite zero-lag limit
    ``sigma2 Gamma(beta-1/2) mu^{1-2 beta} / (2 sqrt(pi) Gamma(beta))``
    for beta > 1/2.

    Raises
    ------
    DivergentVarianceError
        At h = 0 when beta <= 1/2.
    """
    _require_positive(mu=mu, beta=beta, sigma2=sigma2)
    h = float(h)
    if h == 0.0:
        if beta <= 0.5:
            raise DivergentVarianceError(
                f"zero-lag covariance diverges for beta = {beta} <= 1/2")
        return sigma2 * math.exp(gammaln(beta - 0.5) - gammaln(beta)
                                 + (1.0 - 2.0 * beta) * math.log(mu)) \
            / (2.0 * math.sqrt(math.pi))
    ah = abs(h)
    nu = beta - 0.5
    ratio = ah / (2.0 * mu)
    if beta < 170.0 and abs(nu * math.log(ratio)) < 690.0:
        # direct product: tighter than the log-space route when nothing
        # can overflow, and exact on the elementary-K anchors
        pre = sigma2 / (gamma_fn(beta) * math.sqrt(math.pi)) * ratio ** nu
        return pre * bessel_k(nu, mu * ah)
    log_pre = (math.log(sigma2) - gammaln(beta) - 0.5 * math.log(math.pi)
               + nu * math.log(ratio))
    return math.exp(log_pre) * bessel_k(nu, mu * ah)


def covariance_closed_even_n1(h: float, mu: float, beta: float,
                              sigma2: float) -> float:
    """Closed covariance of the second-order family:

    ``sigma2/(Gamma(2 beta) sqrt(pi)) * (|h|/(2 sqrt(mu)))^{2 beta-1/2}
    * K_{2 beta-1/2}(|h| sqrt(mu))``,

    the exact closure of the Gaussian-kernel gamma mixture
    ``(sigma2/Gamma(2 beta)) int w^{2 beta-1} e^{-mu w}
    e^{-h^2/4w}/sqrt(4 pi w) dw``; zero-lag limit
    ``sigma2 Gamma(2 beta-1/2) mu^{1/2-2 beta} / (2 sqrt(pi) Gamma(2 beta))``
    for beta > 1/4.
    """
    _require_positive(mu=mu, beta=beta, sigma2=sigma2)
    h = float(h)
    two_beta = 2.0 * beta
    if h == 0.0:
        if two_beta <= 0.5:
            raise DivergentVarianceError(
                f"zero-lag covariance diverges for beta = {beta} <= 1/4")
        return sigma2 * math.exp(gammaln(two_beta - 0.5) - gammaln(two_beta)
                                 + (0.5 - two_beta) * math.log(mu)) \
            / (2.0 * math.sqrt(math.pi))
    ah = abs(h)
    root_mu = math.sqrt(mu)
    nu = two_beta - 0.5
    ratio = ah / (2.0 * root_mu)
    if two_beta < 170.0 and abs(nu * math.log(ratio)) < 690.0:
        # direct product: tighter than the log-space route when nothing
        # can overflow, and exact on the elementary-K anchors
        pre = sigma2 / (gamma_fn(two_beta) * math.sqrt(math.pi)) * ratio ** nu
        return pre * bessel_k(nu, ah * root_mu)
    log_pre = (math.log(sigma2) - gammaln(two_beta) - 0.5 * math.log(math.pi)
               + nu * math.log(ratio))
    return math.exp(log_pre) * bessel_k(nu, ah * root_mu)


def covariance_closed_even_n1_printed(h: float, mu: float, beta: float,
                                      sigma2: float) -> float:
    """Documented-discrepancy variant of the second-order closed form:

    ``(2 sigma2/Gamma(2 beta)) * (|h|/(2 sqrt(mu)))^{2 beta}
    * K_{2 beta}(|h| sqrt(mu))``.

    This expression is retained only as a discrepancy check: it is NOT
    consistent with the family's spectral density (its zero-lag limit is
    ``sigma2 * mu^{-2 beta}``, e.g. ``sigma2/mu`` at beta = 1/2 where the
    spectral integral gives ``sigma2/(2 sqrt(mu))``).  Production code
    uses :func:`covariance_closed_even_n1`.
    """
    _require_positive(mu=mu, beta=beta, sigma2=sigma2)
    h = float(h)
    two_beta = 2.0 * beta
    if h == 0.0:
        return sigma2 * mu ** (-two_beta)
    ah = abs(h)
    root_mu = math.sqrt(mu)
    log_pre = (math.log(2.0 * sigma2) - gammaln(two_beta)
               + two_beta * math.log(ah / (2.0 * root_mu)))
    return math.exp(log_pre) * bessel_k(two_beta, ah * root_mu)


def _closed_even_zero_lag(model: ModelSpec) -> float:
    # Cov(0) = sigma2 mu^{-2 beta} * (1/pi) Gamma(1 + 1/(2n))
    #          * Gamma(2 beta - 1/(2n)) mu^{1/(2n)} / Gamma(2 beta)
    m = 2 * model.n
    two_beta = 2.0 * model.beta
    inv_m = 1.0 / m
    log_val = (math.log(model.sigma2) - two_beta * math.log(model.mu)
               + gammaln(1.0 + inv_m) + gammaln(two_beta - inv_m)
               + inv_m * math.log(model.mu) - gammaln(two_beta)) - math.log(math.pi)
    return math.exp(log_val)


def _closed_odd_zero_lag(model: ModelSpec) -> float:
    # Cov(0) = sigma2 mu^{-2 beta} * Ai(0) (3)^{-1/3}
    #          * Gamma(2 beta - 1/3) mu^{1/3} / Gamma(2 beta)   (order 3)
    two_beta = 2.0 * model.beta
    moment = math.exp(gammaln(two_beta - 1.0 / 3.0) - gammaln(two_beta)
                      + math.log(model.mu) / 3.0)
    return (model.sigma2 * model.mu ** (-two_beta)
            * airy_ai(0.0) * 3.0 ** (-1.0 / 3.0) * moment)


# --------------------------------------------------------------------------
# stable-convolution representation (fractional family, alpha < 1)


class _StableProfile:
    """Standardized symmetric stable density rho_a with cf e^{-|xi|^a}.

    Spline tables over [0, 100] plus the alternating power-series tail;
    the density with cf e^{-scale |xi|^a w} is rho_a(|x|/lam)/lam with
    lam = (scale*w)^{1/a}.
    """

    def __init__(self, a: float):
        self.a = float(a)
        if self.a in (1.0, 2.0):
            self._inner = None
            self._outer = None
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TailAccuracyWarning)
                y_in = np.concatenate([np.linspace(0.0, 1.0, 501),
                                       np.linspace(1.0, 4.0, 241)[1:]])
                vals_in = np.array([symmetric_stable_density(self.a, 1.0, y, 1.0)
                                    for y in y_in])
                y_out = np.geomspace(4.0, 100.0, 221)
                vals_out = np.array([symmetric_stable_density(self.a, 1.0, y, 1.0)
                                     for y in y_out])
            # even density: clamp the derivative at the origin to zero
            self._inner = CubicSpline(y_in, vals_in,
                                      bc_type=((1, 0.0), "not-a-knot"))
            self._outer = CubicSpline(np.log(y_out), np.log(vals_out))
            k = np.arange(1, 9, dtype=float)
            self._tail_coeff = ((-1.0) ** (k + 1.0) / math.pi
                                * np.exp(gammaln(k * self.a + 1.0) - gammaln(k + 1.0))
                                * np.sin(0.5 * math.pi * k * self.a))
            self._tail_pow = k * self.a + 1.0
            series_at_100 = float(np.sum(self._tail_coeff * 100.0 ** (-self._tail_pow)))
            rel = abs(series_at_100 - vals_out[-1]) / abs(vals_out[-1])
            if rel > 1e-5:
                warnings.warn(
                    f"stable profile a={self.a}: tail series and quadrature "
                    f"table disagree by {rel:.1e} at the junction",
                    TailAccuracyWarning, stacklevel=2)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.abs(np.asarray(y, dtype=float))
        if self.a == 2.0:
            return np.exp(-0.25 * y * y) / math.sqrt(4.0 * math.pi)
        if self.a == 1.0:
            return 1.0 / (math.pi * (1.0 + y * y))
        out = np.empty_like(y)
        near = y <= 4.0
        mid = (y > 4.0) & (y <= 100.0)
        far = y > 100.0
        if np.any(near):
            out[near] = self._inner(y[near])
        if np.any(mid):
            out[mid] = np.exp(self._outer(np.log(y[mid])))
        if np.any(far):
            yf = y[far]
            acc = np.zeros_like(yf)
            for c, p in zip(self._tail_coeff, self._tail_pow):
                acc += c * yf ** (-p)
            out[far] = acc
        return np.maximum(out, 0.0)


_PROFILE_CACHE: dict = {}


def _stable_profile(a: float) -> _StableProfile:
    key = round(float(a), 12)
    if key not in _PROFILE_CACHE:
        _PROFILE_CACHE[key] = _StableProfile(key)
    return _PROFILE_CACHE[key]


def _two_center_edges(centers, widths, outer: float) -> np.ndarray:
    """Panel edges covering [-outer+cmin, outer+cmax], graded toward each
    density peak on its own width scale."""
    edges = set()
    for c, width in zip(centers, widths):
        r = 0.15 * width
        radii = [0.0]
        while r < outer:
            radii.append(r)
            r *= 1.32
        radii.append(outer)
        for rr in radii:
            edges.add(c - rr)
            edges.add(c + rr)
    lo = min(centers) - outer
    hi = max(centers) + outer
    arr = np.array(sorted(e for e in edges if lo <= e <= hi))
    return arr


def _stable_pair_convolution(h: float, w: float, alpha: float,
                             scale2: float) -> float:
    """(g1 * g2)(h) where g1 has cf e^{-|xi|^{2 alpha} w} and g2 has cf
    e^{-scale2 |xi|^{alpha} w}."""
    prof1 = _stable_profile(2.0 * alpha)
    prof2 = _stable_profile(alpha)
    lam1 = w ** (1.0 / (2.0 * alpha))
    lam2 = (scale2 * w) ** (1.0 / alpha)
    outer = 400.0 * (lam1 + lam2 + abs(h))
    edges = _two_center_edges((0.0, h), (lam2, lam1), outer)
    z, wq = panel_nodes(edges, 12)
    g1 = prof1(np.abs(h - z) / lam1) / lam1
    g2 = prof2(np.abs(z) / lam2) / lam2
    return float(np.sum(wq * g1 * g2))


def covariance_stable_convolution(model: ModelSpec, h: float,
                                  node_count: Optional[int] = None) -> float:
    """Covariance of the fractional family with 0 < alpha < 1 from its
    representation as a gamma-mixed convolution of two independent
    symmetric stable densities (orders 2 alpha and alpha, the latter with
    scale 2 mu cos(pi alpha/2)), mixed by Gamma(beta, mu^2).

    Serves as an independent cross-check of the Fourier-inversion route.

    Raises
    ------
    DomainError
        If the model is not fractional with alpha strictly below 1.
    DivergentVarianceError
        At h = 0 when 2 alpha beta <= 1.
    AccuracyError
        If the outer gamma quadrature does not converge.
    """
    if model.family is not Family.WeylFractional:
        raise DomainError(
            "covariance_stable_convolution applies to the fractional family")
    if not model.alpha < 1.0:
        raise DomainError(
            "covariance_stable_convolution requires alpha < 1 strictly "
            f"(got alpha = {model.alpha}); use the closed form at alpha = 1")
    h = float(h)
    if h == 0.0 and not has_finite_variance(model):
        raise DivergentVarianceError(
            f"zero-lag covariance diverges: 2*alpha*beta = "
            f"{2.0 * model.alpha * model.beta} <= 1")
    scale2 = 2.0 * model.mu * math.cos(0.5 * math.pi * model.alpha)
    ah = abs(h)

    def mixture(nodes: np.ndarray) -> np.ndarray:
        return np.array([_stable_pair_convolution(ah, wn, model.alpha, scale2)
                         for wn in nodes])

    val = _mixture_value(model.beta, model.mu ** 2, mixture, None, ah,
                         "stable-convolution mixture", rel=1e-7,
                         node_count=node_count)
    return model.sigma2 * model.mu ** (-2.0 * model.beta) * val


# --------------------------------------------------------------------------
# gamma-mixture quadrature routes


def _saddle_constant(m: int) -> float:
    # envelope exp(-c_m y^{m/(m-1)}) of the even-order kernel
    return ((m - 1) * m ** (-m / (m - 1.0))
            * abs(math.cos(0.5 * math.pi * m / (m - 1.0))))


def _log_axis_window(shape: float, rate: float, order_m: Optional[int],
                     h: float) -> tuple:
    """Integration window [u_lo, u_hi] on the log-w axis for a kernel of
    spatial order ``order_m`` (None: no kernel decay, power prefactor only)."""
    u_star = math.log(shape / rate)
    u_hi = math.log((shape + 45.0) / rate)
    if order_m is None or h == 0.0:
        u_lo = u_star - 60.0
    else:
        c_m = _saddle_constant(order_m)
        u_kernel = (order_m * math.log(abs(h))
                    - (order_m - 1.0) * math.log(37.0 / c_m))
        u_lo = min(u_star, u_kernel) - 8.0
    return u_lo, u_hi


def _log_axis_escalate(g, shape: float, rate: float, u_lo: float, u_hi: float,
                       what: str, panels: int = 48, rel: float = 1e-9) -> float:
    v1 = gamma_log_expectation(g, shape, rate, u_lo, u_hi, panels=panels, order=24)
    v2 = gamma_log_expectation(g, shape, rate, u_lo, u_hi, panels=2 * panels, order=28)
    if abs(v1 - v2) <= max(rel * abs(v2), 1e-14):
        return v2
    raise AccuracyError(
        f"{what}: log-axis gamma quadrature did not converge; last two "
        f"refinement values {v1!r} and {v2!r}",
        estimate=v2, error_estimate=abs(v1 - v2))


def _mixture_value(shape: float, rate: float, g, order_m: Optional[int],
                   h: float, what: str, rel: float = 1e-9,
                   node_count: Optional[int] = None) -> float:
    """E[g(W)] by Laguerre escalation with a graded log-axis fallback."""
    if h != 0.0:
        try:
            return _laguerre_escalate(shape, rate, g, what, rel=rel,
                                      start=node_count or DEFAULT_NODE_COUNT)
        except AccuracyError:
            pass
    u_lo, u_hi = _log_axis_window(shape, rate, order_m, h)
    return _log_axis_escalate(g, shape, rate, u_lo, u_hi, what, rel=rel)


def _quadrature_weyl_alpha1(model: ModelSpec, h: float,
                            node_count: Optional[int] = None) -> float:
    # Gaussian-kernel mixture: Cov = sigma2 mu^{-2 beta} E[e^{-h^2/4W}/sqrt(4 pi W)]
    # with W ~ Gamma(beta, mu^2)
    ah = abs(h)

    def g(w: np.ndarray) -> np.ndarray:
        return np.exp(-ah * ah / (4.0 * w)) / np.sqrt(4.0 * math.pi * w)

    val = _mixture_value(model.beta, model.mu ** 2, g, 2, ah,
                         "fractional alpha=1 Gaussian mixture",
                         node_count=node_count)
    return model.sigma2 * model.mu ** (-2.0 * model.beta) * val


def _quadrature_even(model: ModelSpec, h: float,
                     node_count: Optional[int] = None) -> float:
    # Cov = sigma2 mu^{-2 beta} E[u_{2n}(h, W)], W ~ Gamma(2 beta, mu)
    m = 2 * model.n
    shape, rate = 2.0 * model.beta, model.mu
    ah = abs(h)
    if model.n == 1:
        def g(w: np.ndarray) -> np.ndarray:
            return np.exp(-ah * ah / (4.0 * w)) / np.sqrt(4.0 * math.pi * w)
    elif ah == 0.0:
        peak = math.exp(gammaln(1.0 + 1.0 / m)) / math.pi

        def g(w: np.ndarray) -> np.ndarray:
            return peak * w ** (-1.0 / m)
    else:
        c_m = _saddle_constant(m)

        def g(w: np.ndarray) -> np.ndarray:
            w = np.asarray(w)
            out = np.zeros(w.shape)
            # skip mixing values where the kernel envelope
            # exp(-c_m (|h| w^{-1/m})^{m/(m-1)}) is below ~e^{-45}: past the
            # window's own truncation budget, and where the oscillatory
            # cancellation would exceed double precision anyway
            live = c_m * (ah * w ** (-1.0 / m)) ** (m / (m - 1.0)) < 45.0
            out[live] = [
                float(_even_kernel_values(model.n, np.array([ah]), wn)[0])
                for wn in w[live]]
            return out

    val = _mixture_value(shape, rate, g, m, ah,
                         f"order-{m} kernel mixture", node_count=node_count)
    return model.sigma2 * model.mu ** (-2.0 * model.beta) * val


def _odd_oscillatory_mixture(x: float, shape: float, rate: float) -> float:
    """E[Ai(-|x|/(3W)^{1/3})/(3W)^{1/3}] for W ~ Gamma(shape, rate): the
    Airy argument is negative, so small mixing values oscillate and the
    log-axis panels are graded by the Airy phase (2/3)|a|^{3/2}."""
    ax = abs(x)
    u_star = math.log(shape / rate)
    u_hi = math.log((shape + 45.0) / rate)
    # |a| = 4 at the boundary between the smooth and oscillatory regimes
    u_c = 3.0 * math.log(ax) - math.log(192.0)
    c_ph = (2.0 / 3.0) * math.sqrt(ax ** 3 / 3.0)
    depth = 26.0 / max(shape - 0.25, 0.05)
    u_b = min(u_c, u_star) - depth

    def build_edges(phase_cap: float, smooth_panels: int):
        pieces = []
        if u_c < u_hi:
            pieces.append(np.linspace(u_c, u_hi, smooth_panels + 1))
        top = min(u_c, u_hi)
        desc = [top]
        u = top
        while u > u_b:
            rate_phase = 0.5 * c_ph * math.exp(-0.5 * u)
            u -= min(0.6, phase_cap / max(rate_phase, 1e-300))
            desc.append(max(u, u_b))
        edges = np.array(sorted(set(np.concatenate(
            [np.array(desc)] + pieces).tolist())))
        return edges

    lc = shape * math.log(rate) - gammaln(shape)

    def evaluate(phase_cap: float, smooth_panels: int, order: int) -> float:
        edges = build_edges(phase_cap, smooth_panels)
        u, wq = panel_nodes(edges, order)
        w = np.exp(u)
        cube = (3.0 * w) ** (1.0 / 3.0)
        vals = _airy_ai_vec(-ax / cube) / cube
        weight = np.exp(shape * u - rate * w + lc)
        return float(np.sum(wq * weight * vals))

    v1 = evaluate(2.0, 40, 16)
    v2 = evaluate(1.0, 80, 20)
    if abs(v1 - v2) <= max(1e-8 * abs(v2), 1e-13):
        return v2
    raise AccuracyError(
        "oscillatory Airy mixture did not converge; last two refinement "
        f"values {v1!r} and {v2!r}", estimate=v2, error_estimate=abs(v1 - v2))


def _quadrature_odd(model: ModelSpec, h: float) -> float:
    # Cov = sigma2 mu^{-2 beta} E[Ai(-kappa h/(3W)^{1/3})/(3W)^{1/3}],
    # W ~ Gamma(2 beta, mu); only order 3 reaches this route
    shape, rate = 2.0 * model.beta, model.mu
    arg = -model.kappa * float(h)  # kappa=-1 pairs Ai(h/c), kappa=+1 Ai(-h/c)
    if arg < 0.0:
        val = _odd_oscillatory_mixture(arg, shape, rate)
    else:
        if arg == 0.0:
            u_lo, u_hi = _log_axis_window(shape, rate, None, 0.0)
        else:
            u_star = math.log(shape / rate)
            u_hi = math.log((shape + 45.0) / rate)
            # Ai decays 37 e-folds once (2/3)(x/(3w)^{1/3})^{3/2} ~ 37
            u_lo = min(u_star, 3.0 * math.log(arg) - 9.2) - 10.0

        def g(w: np.ndarray) -> np.ndarray:
            cube = (3.0 * w) ** (1.0 / 3.0)
            return _airy_ai_vec(arg / cube) / cube

        val = _log_axis_escalate(g, shape, rate, u_lo, u_hi,
                                 "Airy kernel mixture")
    return model.sigma2 * model.mu ** (-2.0 * model.beta) * val


# --------------------------------------------------------------------------
# dispatch


def _closed_form_value(model: ModelSpec, h: float) -> float:
    fam = model.family
    if fam is Family.WeylFractional:
        if model.alpha == 1.0:
            return covariance_closed_weyl_alpha1(h, model.mu, model.beta,
                                                 model.sigma2)
        raise DomainError(
            "no closed covariance form for the fractional family with "
            f"alpha = {model.alpha} < 1")
    if fam is Family.EvenOrder:
        if model.n == 1:
            return covariance_closed_even_n1(h, model.mu, model.beta,
                                             model.sigma2)
        if h == 0.0:
            return _closed_even_zero_lag(model)
        raise DomainError(
            f"no closed covariance form for even order {2 * model.n} "
            "away from zero lag")
    if model.n == 1 and h == 0.0:
        return _closed_odd_zero_lag(model)
    raise DomainError(
        f"no closed covariance form for odd order {2 * model.n + 1} "
        f"at h = {h}")


def _has_closed_form(model: ModelSpec, h: float) -> bool:
    fam = model.family
    if fam is Family.WeylFractional:
        return model.alpha == 1.0
    if fam is Family.EvenOrder:
        return model.n == 1 or h == 0.0
    return model.n == 1 and h == 0.0


def _fourier_oracle_value(model: ModelSpec, h: float) -> float:
    grid = Grid(start=float(h), step=max(abs(float(h)), 1.0), count=2)
    curve = inverse_fourier_spectral(model, grid)
    return float(curve.values[0])


def _resolve_method(model: ModelSpec, h: float,
                    method: "CovarianceMethod") -> "CovarianceMethod":
    if method is not CovarianceMethod.Auto:
        return method
    if model.family is Family.OddOrder and model.n >= 2:
        return CovarianceMethod.FourierOracle
    if _has_closed_form(model, h):
        return CovarianceMethod.ClosedForm
    return CovarianceMethod.Quadrature


def covariance(model: ModelSpec, h: float,
               method: Union[CovarianceMethod, str] = CovarianceMethod.Auto,
               node_count: Optional[int] = None) -> float:
    """Covariance Cov_X(h) of the stationary model at lag ``h``.

    ``Auto`` picks the closed form when one exists, else the gamma-mixture
    quadrature; odd orders above three are served only by the Fourier
    oracle (their spatial kernels are not absolutely integrable).  The
    odd-order covariance is generally not even in h; its orientation sign
    kappa = -1 pairs with Ai(h/(3W)^{1/3}) and kappa = +1 with the
    reflected argument, so the kappa = +1 value at h equals the kappa = -1
    value at -h.

    ``node_count`` overrides the starting node count of the gamma-mixture
    Laguerre ladder (default 96, doubled up to three times); it has no
    effect on closed-form, Fourier-oracle, or oscillatory log-axis routes.

    Raises
    ------
    DivergentVarianceError
        At h = 0 when the spectral density is not integrable.
    DomainError
        For method/family combinations with no defined route, or
        non-finite h.
    AccuracyError
        If a quadrature route fails its refinement check.
    """
    if not isinstance(model, ModelSpec):
        raise DomainError(f"model must be a ModelSpec, got {type(model).__name__}")
    method = CovarianceMethod(method) if not isinstance(method, CovarianceMethod) \
        else method
    h = float(h)
    if not math.isfinite(h):
        raise DomainError(f"lag must be finite, got {h!r}")
    if node_count is not None and not (isinstance(node_count, int)
                                       and node_count >= 8):
        raise DomainError(f"node_count must be an integer >= 8, got {node_count!r}")
    if h == 0.0 and not has_finite_variance(model):
        raise DivergentVarianceError(
            "zero-lag covariance diverges: the spectral density's tail "
            f"exponent is {spectral_tail_exponent(model)!r} <= 1")
    resolved = _resolve_method(model, h, method)
    if model.family is Family.OddOrder and model.n >= 2 \
            and resolved is not CovarianceMethod.FourierOracle:
        raise DomainError(
            f"odd order {2 * model.n + 1} covariance is computed only via "
            "the Fourier oracle; the oscillatory kernel is not absolutely "
            "integrable")
    if resolved is CovarianceMethod.ClosedForm:
        return _closed_form_value(model, h)
    if resolved is CovarianceMethod.FourierOracle:
        return _fourier_oracle_value(model, h)
    # quadrature routes
    fam = model.family
    if fam is Family.WeylFractional:
        if model.alpha == 1.0:
            return _quadrature_weyl_alpha1(model, h, node_count)
        return covariance_stable_convolution(model, h, node_count)
    if fam is Family.EvenOrder:
        return _quadrature_even(model, h, node_count)
    return _quadrature_odd(model, h)


def covariance_curve(model: ModelSpec, lags: Grid,
                     method: Union[CovarianceMethod, str] = CovarianceMethod.Auto,
                     node_count: Optional[int] = None) -> Curve:
    """Covariance sampled on a lag grid.

    The Fourier-oracle route evaluates the whole grid in one inversion;
    the pointwise routes loop over lags.
    """
    method = CovarianceMethod(method) if not isinstance(method, CovarianceMethod) \
        else method
    if method is CovarianceMethod.FourierOracle or (
            method is CovarianceMethod.Auto
            and model.family is Family.OddOrder and model.n >= 2):
        return inverse_fourier_spectral(model, lags)
    values = np.array([covariance(model, hh, method, node_count)
                       for hh in lags.points()])
    return Curve(grid=lags, values=values, quantity=Quantity.Covariance,
                 method=method.value, model=model)


# --------------------------------------------------------------------------
# decay rate


def decay_rate(model: ModelSpec, h1: float, h2: float) -> float:
    """Exponential decay rate fitted from covariance values at two lags.

    The two-point log slope ``(log Cov(h1) - log Cov(h2))/(h2 - h1)`` is
    corrected for the known power-law prefactor of the closed Bessel-K
    asymptote ``Cov(h) ~ h^q e^{-rate h}`` (q = beta - 1 for the
    fractional family at alpha = 1, q = 2 beta - 1 for the second-order
    family; zero otherwise), so the returned value estimates the pure
    exponential rate.

    Raises
    ------
    DomainError
        Unless 0 < h1 < h2, or if either covariance value is not positive.
    """
    h1, h2 = float(h1), float(h2)
    if not (0.0 < h1 < h2):
        raise DomainError(f"decay_rate requires 0 < h1 < h2, got {h1}, {h2}")
    c1 = covariance(model, h1)
    c2 = covariance(model, h2)
    if c1 <= 0.0 or c2 <= 0.0:
        raise DomainError(
            "decay_rate needs positive covariance values, got "
            f"Cov({h1}) = {c1!r}, Cov({h2}) = {c2!r}")
    slope = (math.log(c1) - math.log(c2)) / (h2 - h1)
    q = 0.0
    if model.family is Family.WeylFractional and model.alpha == 1.0:
        q = model.beta - 1.0
    elif model.family is Family.EvenOrder and model.n == 1:
        q = 2.0 * model.beta - 1.0
    return slope + q * math.log(h2 / h1) / (h2 - h1)
