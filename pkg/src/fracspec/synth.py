"""Stationary Gaussian sample paths and their statistical estimators.

The real spectral families (Weyl-fractional and even-order) define
stationary Gaussian processes through a strictly positive, integrable
spectral density ``f``.  :func:`synthesize` builds sample paths directly in
the frequency domain: every frequency bin receives an independent Gaussian
cosine/sine pair whose amplitude is ``sqrt(f(tau_j) * dtau / pi)``, so the
path's covariance is the discretized cosine transform of ``f`` restricted
to the sampled band.  Band-limiting at the sampling Nyquist frequency means
the periodogram of such a path estimates ``f`` itself, with no fold-back
from beyond the band; the aliasing guard bounds the spectral mass this
truncation discards.

Randomness contract
-------------------
Paths are driven by the counter-based Philox generator keyed by the seed.
Uniform variates consume exactly one 64-bit keystream word each, and the
Gaussian pair for frequency bin ``j`` is produced by applying the inverse
normal CDF to the uniforms at keystream positions ``2*j`` and ``2*j + 1``.
The pair therefore depends only on ``(seed, j)``: results are bit-identical
for a given ``(model, count, dt, seed)`` regardless of how the work is
scheduled.

The odd-order family is excluded from synthesis: its spectral function is
complex and its covariance function is not symmetric in the lag, so it does
not define an ordinary stationary Gaussian law.

Estimators are pure functions of the stored path: the biased lag-product
covariance estimator and a band-averaged periodogram, each with an
approximate one-sigma half-width per point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

from .errors import (AliasingGuardError, DivergentVarianceError, DomainError,
                     ModelValidationError)
from .models import (Family, Grid, ModelSpec, has_finite_variance,
                     spectral_density, spectral_tail_exponent)

__all__ = [
    "SamplePath",
    "EstimateCurve",
    "synthesize",
    "empirical_covariance",
    "periodogram",
]

#: Default ceiling on f(pi/dt) / f(0); above it the sampling step discards
#: too much spectral mass and :func:`synthesize` refuses to proceed.
DEFAULT_ALIAS_GUARD = 1e-2


@dataclass(frozen=True)
class SamplePath:
    """A sampled realization of a stationary Gaussian process.

    Fields
    ------
    model : ModelSpec
        The model whose spectral density shaped the path.
    dt : float
        Sampling step; the k-th value sits at time ``k * dt``.
    values : ndarray of float
        The samples themselves (length >= 2, all finite).
    seed : int
        The 64-bit seed that keyed the generator.
    """

    model: ModelSpec
    dt: float
    values: np.ndarray
    seed: int

    def __post_init__(self):
        violations = []
        if not isinstance(self.model, ModelSpec):
            violations.append(f"model must be a ModelSpec, got {type(self.model).__name__}")
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt)
                and self.dt > 0):
            violations.append(f"dt must be a positive finite real, got {self.dt!r}")
        try:
            vals = (np.asarray(self.values, dtype=float)
                    if not np.iscomplexobj(self.values) else None)
        except (TypeError, ValueError):
            vals = None
        if vals is None:
            violations.append("values must be a sequence of reals")
        else:
            if vals.ndim != 1 or vals.shape[0] < 2:
                violations.append(
                    f"values must be a 1-D sequence of length >= 2, got shape {vals.shape}")
            elif not np.all(np.isfinite(vals)):
                violations.append("values must all be finite")
        if not (isinstance(self.seed, (int, np.integer))
                and 0 <= int(self.seed) < 2 ** 64):
            violations.append(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if violations:
            raise ModelValidationError(violations)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class EstimateCurve:
    """A statistical estimate on a grid, with per-point uncertainty.

    ``half_width`` is an approximate one-sigma half-width: the estimate at
    each grid point is expected to lie within about one half-width of the
    quantity it estimates, about two-thirds of the time.
    """

    grid: Grid
    values: np.ndarray
    half_width: np.ndarray

    def __post_init__(self):
        violations = []
        if not isinstance(self.grid, Grid):
            violations.append(f"grid must be a Grid, got {type(self.grid).__name__}")
            raise ModelValidationError(violations)
        vals = np.asarray(self.values, dtype=float)
        hw = np.asarray(self.half_width, dtype=float)
        if vals.shape != (self.grid.count,):
            violations.append(
                f"values shape {vals.shape} != (grid count,) = ({self.grid.count},)")
        if hw.shape != vals.shape:
            violations.append(
                f"half_width shape {hw.shape} != values shape {vals.shape}")
        elif not np.all(np.isfinite(hw)) or np.any(hw < 0):
            violations.append("half_width entries must be finite and nonnegative")
        if vals.shape == (self.grid.count,) and not np.all(np.isfinite(vals)):
            violations.append("values must all be finite")
        if violations:
            raise ModelValidationError(violations)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "half_width", hw)


def _alias_dt_bound(model: ModelSpec, guard: float) -> float:
    """Largest sampling step whose Nyquist frequency satisfies the guard.

    Uses the strict monotone decay of the real-family densities in |tau|:
    bisect for the frequency where f drops to guard * f(0), then convert.
    """
    f0 = float(spectral_density(model, 0.0))
    target = guard * f0
    hi = 1.0
    while float(spectral_density(model, hi)) > target:
        hi *= 2.0
        if hi > 1e300:  # pragma: no cover - guard levels this extreme are rejected earlier
            return 0.0
    lo = hi / 2.0 if hi > 1.0 else 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(spectral_density(model, mid)) > target:
            lo = mid
        else:
            hi = mid
    return math.pi / hi


def synthesize(model: ModelSpec, count: int, dt: float, seed: int,
               *, alias_guard: float = DEFAULT_ALIAS_GUARD) -> SamplePath:
    """Generate a stationary Gaussian path with spectral density ``f``.

    Frequency-domain synthesis: with ``N`` twice the next power of two at or
    above ``count`` and ``dtau = 2 * pi / (N * dt)``, each positive-frequency
    bin ``j`` receives amplitude ``a_j = sqrt(f(j * dtau) * dtau / pi)`` and
    an independent standard Gaussian cosine/sine pair; the edge bins (zero
    and Nyquist frequency) carry half a bin's share of variance.  The first
    ``count`` samples of the inverse FFT form the path, so the wrap-around
    lags of the underlying circular process all exceed the returned span.

    Parameters
    ----------
    model:
        A Weyl-fractional or even-order model with integrable spectral
        density (the odd-order family has no real spectral density and is
        not accepted).
    count:
        Number of samples, at least 256.
    dt:
        Sampling step.  Must satisfy ``f(pi/dt) <= alias_guard * f(0)``;
        otherwise an :class:`AliasingGuardError` reports the largest
        admissible step.
    seed:
        64-bit integer keying the Philox generator.
    alias_guard:
        Ceiling on the relative spectral mass density at the Nyquist
        frequency (default ``1e-2``).  Pass ``math.inf`` to disable the
        check for deliberately band-limited experiments.

    Returns
    -------
    SamplePath
        Deterministic function of ``(model, count, dt, seed)``.
    """
    if not isinstance(model, ModelSpec):
        raise DomainError(f"model must be a ModelSpec, got {type(model).__name__}")
    if model.family is Family.OddOrder:
        raise DomainError(
            "synthesis is defined for the real spectral families only: the "
            "odd-order spectral function is complex and its covariance is "
            "not symmetric in the lag, so no ordinary stationary Gaussian "
            "law carries it")
    if not (isinstance(count, (int, np.integer)) and not isinstance(count, bool)
            and int(count) >= 256):
        raise DomainError(f"count must be an integer >= 256, got {count!r}")
    if not (isinstance(dt, (int, float)) and math.isfinite(dt) and dt > 0):
        raise DomainError(f"dt must be a positive finite real, got {dt!r}")
    if not (isinstance(seed, (int, np.integer)) and 0 <= int(seed) < 2 ** 64):
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    if not (isinstance(alias_guard, (int, float)) and alias_guard > 0):
        raise DomainError(f"alias_guard must be positive, got {alias_guard!r}")
    if not has_finite_variance(model):
        raise DivergentVarianceError(
            "synthesis requires an integrable spectral density, but the "
            f"spectral tail exponent is {spectral_tail_exponent(model)!r} <= 1 "
            "so the path variance would diverge")
    count = int(count)
    dt = float(dt)
    seed = int(seed)

    f0 = float(spectral_density(model, 0.0))
    f_nyq = float(spectral_density(model, math.pi / dt))
    if not f_nyq <= alias_guard * f0:
        bound = _alias_dt_bound(model, float(alias_guard))
        raise AliasingGuardError(
            f"sampling step dt={dt!r} is too coarse: f(pi/dt)/f(0) = "
            f"{f_nyq / f0!r} exceeds the aliasing guard {float(alias_guard)!r}; "
            f"the largest admissible step is dt <= {bound!r}", dt_bound=bound)

    n_fft = 2 * (1 << (count - 1).bit_length())
    dtau = 2.0 * math.pi / (n_fft * dt)
    tau = dtau * np.arange(n_fft // 2 + 1)
    amp = np.sqrt(np.asarray(spectral_density(model, tau), dtype=float)
                  * dtau / math.pi)

    rng = Generator(Philox(key=seed))
    u = rng.random((n_fft // 2 + 1, 2))
    u[u == 0.0] = 0.5 ** 54  # keep the inverse CDF finite
    z = ndtri(u)

    spec = (n_fft / 2.0) * amp * (z[:, 0] - 1j * z[:, 1])
    # Edge bins are their own mirror image: real amplitude, and half a
    # bin's variance share, hence the sqrt(2) after the 1/N of the inverse
    # transform halves them once more.
    spec[0] = (n_fft / 2.0) * amp[0] * z[0, 0] * math.sqrt(2.0)
    spec[-1] = (n_fft / 2.0) * amp[-1] * z[-1, 0] * math.sqrt(2.0)
    values = np.fft.irfft(spec, n=n_fft)[:count]
    return SamplePath(model=model, dt=dt, values=values, seed=seed)


def empirical_covariance(path: SamplePath, max_lag: int) -> EstimateCurve:
    """Biased lag-product covariance estimate at lags ``0 .. max_lag * dt``.

    The estimate at lag ``m`` is ``(1/N) * sum_k x_k x_{k+m}`` (the process
    has mean zero by construction, so no centering is applied; the ``1/N``
    normalization keeps the estimated covariance sequence positive
    semi-definite).  ``half_width`` carries the large-lag one-sigma
    approximation ``sqrt((1/N) * sum_j c_j**2)`` with the sum taken over the
    estimated sequence itself, truncated well before estimation noise would
    dominate it; the same value applies at every lag.
    """
    if not isinstance(path, SamplePath):
        raise DomainError(f"path must be a SamplePath, got {type(path).__name__}")
    x = path.values
    n = x.shape[0]
    if not (isinstance(max_lag, (int, np.integer)) and not isinstance(max_lag, bool)):
        raise DomainError(f"max_lag must be an integer, got {max_lag!r}")
    max_lag = int(max_lag)
    if max_lag < 1:
        raise DomainError(f"max_lag must be at least 1, got {max_lag}")
    if max_lag > n // 8:
        raise DomainError(
            f"max_lag too large: {max_lag} exceeds count/8 = {n // 8} "
            f"(count {n}); longer lags would rest on too few products")

    n_fft = 1 << int(2 * n - 1).bit_length()
    spec = np.fft.rfft(x, n_fft)
    acf = np.fft.irfft(spec.real ** 2 + spec.imag ** 2, n_fft)[:n] / n

    trunc = min(n - 1, max(4 * max_lag, int(10.0 * math.sqrt(n))))
    hw = math.sqrt((acf[0] ** 2 + 2.0 * float(np.sum(acf[1:trunc + 1] ** 2))) / n)
    grid = Grid(start=0.0, step=path.dt, count=max_lag + 1)
    return EstimateCurve(grid=grid, values=acf[:max_lag + 1],
                         half_width=np.full(max_lag + 1, hw))


def periodogram(path: SamplePath, band_count: int) -> EstimateCurve:
    """Band-averaged periodogram over the interior positive frequencies.

    The raw periodogram ordinate at frequency ``tau_j = 2*pi*j/(N*dt)`` is
    ``(dt/N) * |FFT_j|**2``, whose expectation is the spectral density at
    ``tau_j`` for a band-limited synthetic path.  Ordinates are averaged in
    ``band_count`` equal consecutive bands of the interior indices
    ``1 .. ceil(N/2) - 1`` (the zero-frequency and Nyquist ordinates are
    excluded: the first reflects the sample mean, the last has half the
    usual variance), discarding the remainder past the last full band.
    Each band's ``half_width`` is ``value / sqrt(bins per band)``, the
    one-sigma width for averages of excess-one exponential-type ordinates.
    """
    if not isinstance(path, SamplePath):
        raise DomainError(f"path must be a SamplePath, got {type(path).__name__}")
    if not (isinstance(band_count, (int, np.integer))
            and not isinstance(band_count, bool) and int(band_count) >= 8):
        raise DomainError(f"band_count must be an integer >= 8, got {band_count!r}")
    band_count = int(band_count)
    x = path.values
    n = x.shape[0]
    interior = (n - 1) // 2
    per_band = interior // band_count
    if per_band < 1:
        raise DomainError(
            f"degenerate banding: {band_count} bands over {interior} interior "
            f"frequencies leaves no full band")

    spec = np.fft.rfft(x)
    ordinates = (path.dt / n) * (spec.real ** 2 + spec.imag ** 2)
    used = ordinates[1:1 + band_count * per_band].reshape(band_count, per_band)
    values = used.mean(axis=1)
    half_width = values / math.sqrt(per_band)

    dtau = 2.0 * math.pi / (n * path.dt)
    grid = Grid(start=dtau * (1.0 + 0.5 * (per_band - 1)),
                step=dtau * per_band, count=band_count)
    return EstimateCurve(grid=grid, values=values, half_width=half_width)
