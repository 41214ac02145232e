"""Fourier duality engine linking spectral densities and covariance curves.

Inversion integrates the spectral density over a finite frequency window
with composite Gauss-Legendre panels and then adds the window's exterior
analytically, using the closed-form power-law expansion of each family's
high-frequency tail. The forward direction integrates a sampled covariance
curve with Simpson weights split at the origin kink, optionally extended
by a fitted power-law lag tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import simpson
from scipy.special import gamma as _gamma_sp, hyp1f1

from ._quad import oscillatory_power_tail, panel_nodes
from .errors import DivergentVarianceError, DomainError, InsufficientDecayError
from .models import (
    Curve,
    Family,
    Grid,
    ModelSpec,
    Quantity,
    has_finite_variance,
    spectral_density,
    spectral_tail_exponent,
)

_CUTOFF_CAP = 4096.0
_OCTAVES = 56


class Taper(Enum):
    """Treatment of the spectrum beyond the frequency cutoff."""

    NoCorrection = "none"
    TailCorrected = "tail_corrected"


@dataclass(frozen=True)
class TransformPlan:
    """Discretization recipe for the frequency-domain integral.

    frequency_cutoff bounds the numerically integrated window,
    sample_count (a power of two, at least 256) sets the node budget and
    halves the panel phase step each time it doubles, taper selects
    whether the analytic tail beyond the cutoff is added.
    """

    frequency_cutoff: float
    sample_count: int
    taper: Taper = Taper.TailCorrected

    def __post_init__(self) -> None:
        if not (self.frequency_cutoff > 0.0) or not math.isfinite(self.frequency_cutoff):
            raise DomainError("frequency_cutoff must be positive and finite")
        n = self.sample_count
        if not isinstance(n, int) or n < 256 or (n & (n - 1)) != 0:
            raise DomainError("sample_count must be a power-of-two integer >= 256")
        if not isinstance(self.taper, Taper):
            raise DomainError("taper must be a Taper member")

    @classmethod
    def auto(cls, model: ModelSpec) -> "TransformPlan":
        """Plan with the cutoff placed where the tail is 1e-12 of f(0).

        The cutoff is capped at 4096; the analytic tail correction covers
        whatever the cap leaves outside the window.
        """
        p = spectral_tail_exponent(model)
        # |f| ~ sigma2 tau^-p while f(0) = sigma2 mu^-2beta
        cutoff = (1e12 * model.mu ** (2.0 * model.beta)) ** (1.0 / p)
        cutoff = min(max(cutoff, 16.0), _CUTOFF_CAP)
        return cls(frequency_cutoff=cutoff, sample_count=1024, taper=Taper.TailCorrected)


def _frequency_edges(cutoff: float, h_max: float, sample_count: int) -> np.ndarray:
    # geometric octaves resolve the |tau|^alpha cusp at the origin; panel
    # phase (width times largest lag) is capped so fixed-order rules stay
    # accurate, and doubling sample_count halves the cap
    phase_cap = 36.0 * 1024.0 / sample_count
    rate = max(h_max, 1e-3)
    octave_tops = cutoff * 2.0 ** -np.arange(_OCTAVES, -1.0, -1.0)
    edges = [0.0]
    prev = 0.0
    for top in octave_tops:
        width = top - prev
        parts = max(1, int(math.ceil(width * rate / phase_cap)))
        step = width / parts
        edges.extend(prev + step * np.arange(1, parts + 1))
        prev = top
    return np.asarray(edges, dtype=float)


def _binom(a: float, k: int) -> float:
    # product form stays finite at negative-integer a where the
    # gamma-function route has poles
    out = 1.0
    for j in range(k):
        out *= (a - j) / (j + 1.0)
    return out


_TAIL_TERMS = 6


def _tail_terms(model: ModelSpec) -> list[tuple[complex, float]]:
    """Leading terms of f(tau) ~ sum a_k tau^-p_k as tau -> +inf."""
    s2 = model.sigma2
    mu = model.mu
    beta = model.beta
    if model.family is Family.WeylFractional:
        alpha = model.alpha
        b = 2.0 * mu * math.cos(0.5 * math.pi * alpha)
        c = mu * mu
        # compose (1+u)^-beta with u = b x + c x^2, x = tau^-alpha
        g = np.zeros(_TAIL_TERMS)
        u_pow = np.zeros(_TAIL_TERMS)
        u_pow[0] = 1.0
        g += u_pow
        u_poly = np.array([0.0, b, c])
        for j in range(1, _TAIL_TERMS):
            u_pow = np.convolve(u_pow, u_poly)[:_TAIL_TERMS]
            g += _binom(-beta, j) * u_pow
        base = 2.0 * alpha * beta
        return [(s2 * g[k], base + k * alpha) for k in range(_TAIL_TERMS)]
    if model.family is Family.EvenOrder:
        m = 2 * model.n
        base = 2.0 * m * beta
        return [
            (s2 * _binom(-2.0 * beta, k) * mu ** k, base + m * k)
            for k in range(_TAIL_TERMS)
        ]
    m = 2 * model.n + 1
    sign = model.kappa * (-1) ** model.n
    base = 2.0 * m * beta
    front = s2 * np.exp(-1j * math.pi * beta * sign)
    return [
        (
            complex(front * _binom(-2.0 * beta, k) * mu ** k
                    * np.exp(-1j * sign * k * math.pi / 2.0)),
            base + m * k,
        )
        for k in range(_TAIL_TERMS)
    ]


def _tail_values(model: ModelSpec, lags: np.ndarray, cutoff: float) -> np.ndarray:
    terms = _tail_terms(model)
    out = np.zeros(lags.shape, dtype=float)
    for i, h in enumerate(lags):
        acc = 0.0 + 0.0j
        for a_k, p_k in terms:
            acc += a_k * oscillatory_power_tail(p_k, -float(h), cutoff)
        out[i] = acc.real / math.pi
    return out


def inverse_fourier_spectral(
    model: ModelSpec, lags: Grid, plan: TransformPlan | None = None
) -> Curve:
    """Covariance curve Cov(h) = (1/2pi) int e^{-i tau h} f(tau) dtau.

    Real families integrate one-sided against a cosine; the odd family
    integrates the full complex density over both half-lines and checks
    that conjugate symmetry cancels the imaginary part to 1e-10 of f(0)
    before discarding it.
    """
    if plan is None:
        plan = TransformPlan.auto(model)
    pts = lags.points()
    if pts.size == 0:
        raise DomainError("lag grid is empty")
    if np.any(pts == 0.0) and not has_finite_variance(model):
        raise DivergentVarianceError(
            "Cov(0) diverges: spectral tail exponent "
            f"{spectral_tail_exponent(model)!r} is not > 1"
        )
    cutoff = plan.frequency_cutoff
    h_max = float(np.max(np.abs(pts)))
    edges = _frequency_edges(cutoff, h_max, plan.sample_count)
    phase_cap = 36.0 * 1024.0 / plan.sample_count
    order = max(16, int(math.ceil(min(phase_cap, 36.0))) + 12)
    nodes, weights = panel_nodes(edges, order)
    scale0 = abs(spectral_density(model, 0.0))

    if model.family is Family.OddOrder:
        full_nodes = np.concatenate([-nodes[::-1], nodes])
        wf = np.concatenate([weights[::-1], weights]) * spectral_density(
            model, full_nodes
        )
        vals = np.empty(pts.shape)
        resid = 0.0
        for k in range(0, pts.size, 64):
            block = np.exp(-1j * np.outer(pts[k : k + 64], full_nodes)) @ wf
            block /= 2.0 * math.pi
            resid = max(resid, float(np.max(np.abs(block.imag))))
            vals[k : k + 64] = block.real
        if resid > 1e-10 * scale0:
            raise DomainError(
                "conjugate-symmetry residual "
                f"{resid!r} exceeds 1e-10 of f(0) = {scale0!r}"
            )
    else:
        wf = weights * spectral_density(model, nodes)
        vals = np.empty(pts.shape)
        for k in range(0, pts.size, 64):
            vals[k : k + 64] = np.cos(np.outer(pts[k : k + 64], nodes)) @ wf
        vals /= math.pi

    if plan.taper is Taper.TailCorrected:
        vals = vals + _tail_values(model, pts, cutoff)
    return Curve(
        grid=lags,
        values=vals,
        quantity=Quantity.Covariance,
        method="fourier_oracle",
        model=model,
    )


def _split_simpson(y: np.ndarray, h: np.ndarray) -> np.ndarray:
    # covariance curves have a kink at lag zero; integrating each side
    # separately keeps Simpson's fourth-order rate
    zero = np.where(np.isclose(h, 0.0, atol=1e-12))[0]
    if zero.size == 1 and 0 < zero[0] < h.size - 1:
        k = int(zero[0])
        return simpson(y[..., : k + 1], x=h[: k + 1]) + simpson(
            y[..., k:], x=h[k:]
        )
    return simpson(y, x=h)


def _cusp_counter_terms(model: ModelSpec) -> list[tuple[float, float]]:
    """Singular lag-zero components (d_k, nu_k): Cov has d_k |h|^nu_k terms.

    Each noninteger power-law tail term a tau^-p of the spectral density
    contributes the algebraic lag singularity (a/pi) Gamma(1-p) sin(pi p/2)
    |h|^{p-1}, which uniform-grid quadrature cannot integrate at full
    order. Integer p are excluded: even p give plain |h|-kinks handled by
    splitting at lag zero, odd p give mild even-power log terms.
    """
    out = []
    for a_k, p_k in _tail_terms(model):
        if p_k >= 5.0:
            continue
        a = a_k.real if isinstance(a_k, complex) else float(a_k)
        near = round(p_k)
        if abs(p_k - near) < 1e-9:
            # even p: a plain |h|-kink handled by splitting at lag zero;
            # odd p >= 3: an even-power log term h^{p-1} ln|h|
            if near % 2 == 1 and near >= 3:
                j = (near - 1) // 2
                d = -a / math.pi * (-1.0) ** j / math.factorial(near - 1)
                out.append((d, float(near - 1), True))
            continue
        d = a / math.pi * _gamma_sp(1.0 - p_k) * math.sin(0.5 * math.pi * p_k)
        out.append((d, p_k - 1.0, False))
    return out


def _damped_power_ft(nu: float, tau: np.ndarray, is_log: bool) -> np.ndarray:
    """Fourier transform of |h|^nu e^{-h^2} (times ln|h| when is_log)."""

    def plain(v: float) -> np.ndarray:
        half = 0.5 * (v + 1.0)
        return _gamma_sp(half) * hyp1f1(half, 0.5, -0.25 * tau * tau)

    if not is_log:
        return plain(nu)
    eps = 1e-6
    return (plain(nu + eps) - plain(nu - eps)) / (2.0 * eps)


def _fit_power_tail(h: np.ndarray, vals: np.ndarray, exps: np.ndarray) -> np.ndarray:
    # least-squares coefficients of sum c_i |h|^-q_i over the outer
    # quarter of one covariance flank
    design = np.abs(h)[:, None] ** (-exps[None, :])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    return coef


def forward_fourier_covariance(
    cov: Curve, freqs: Grid, tail_exponent=None
) -> Curve:
    """Spectral estimate f(tau) = int e^{i tau h} Cov(h) dh from samples.

    The curve must decay below 1e-10 of its peak at both grid ends. When
    tail_exponent is given (a decay exponent q or a sequence of them),
    each flank is instead fitted with sum c_i |h|^-q_i over its outer
    quarter and the lag tails beyond the grid are added analytically,
    which admits curves with slow power-law decay; the end-decay
    requirement is then relaxed to 1e-2 of the peak.
    """
    h = cov.grid.points()
    vals = np.asarray(cov.values)
    if np.iscomplexobj(vals):
        raise DomainError("covariance input must be real")
    if h.size < 8:
        raise DomainError("covariance grid too short to integrate")
    peak = float(np.max(np.abs(vals)))
    if peak == 0.0:
        out = np.zeros(freqs.points().shape)
        return Curve(grid=freqs, values=out, quantity=Quantity.Spectral,
                     method="forward_fourier", model=cov.model)
    lo, hi = float(vals[0]), float(vals[-1])
    limit = 1e-10 if tail_exponent is None else 1e-2
    if max(abs(lo), abs(hi)) > limit * peak:
        raise InsufficientDecayError(
            f"covariance does not decay at the grid ends: boundary values "
            f"{lo!r} and {hi!r} against peak {peak!r}"
        )
    tau = freqs.points()
    work = vals.astype(float)
    counter = []
    if cov.model is not None and cov.model.family is not Family.OddOrder:
        counter = [
            term
            for term in _cusp_counter_terms(cov.model)
            if term[1] > 0.0 or not np.any(h == 0.0)
        ]
    if counter:
        ah = np.abs(h)
        damp = np.exp(-ah * ah)
        work = work.copy()
        for d, nu, is_log in counter:
            base = np.where(ah > 0.0, ah, 1.0)
            shape = base ** nu * (np.log(base) if is_log else 1.0)
            work -= d * np.where(ah > 0.0, shape, 0.0) * damp
    phase = np.outer(tau, h)
    f_cos = _split_simpson(np.cos(phase) * work, h)
    f_sin = _split_simpson(np.sin(phase) * work, h)
    out = f_cos + 1j * f_sin
    for d, nu, is_log in counter:
        out = out + d * _damped_power_ft(nu, tau, is_log)
    if tail_exponent is not None:
        exps = np.atleast_1d(np.asarray(tail_exponent, dtype=float))
        if np.any(exps <= 1.0):
            raise DomainError("tail exponents must exceed 1")
        quarter = max(4, h.size // 4)
        end_hi = float(abs(h[-1]))
        end_lo = float(abs(h[0]))
        c_hi = _fit_power_tail(h[-quarter:], vals[-quarter:], exps)
        c_lo = _fit_power_tail(h[:quarter], vals[:quarter], exps)
        for i, t in enumerate(tau):
            acc = 0.0 + 0.0j
            for q, ch, cl in zip(exps, c_hi, c_lo):
                acc += ch * oscillatory_power_tail(float(q), float(t), end_hi)
                acc += cl * np.conj(
                    oscillatory_power_tail(float(q), float(t), end_lo)
                )
            out[i] += acc
    if float(np.max(np.abs(out.imag))) <= 1e-10 * float(np.max(np.abs(out.real))):
        out = out.real
    return Curve(
        grid=freqs,
        values=out,
        quantity=Quantity.Spectral,
        method="forward_fourier",
        model=cov.model,
    )
