"""Self-validation suite: cross-checks every numerical route in the package.

Four sections:

* special-function identities -- each implementation against an independent
  route (the power-weighted integral identity for Bessel K, symmetry in the
  order, both asymptotic regimes, high-precision Airy values, the Levy
  closed form and the Laplace transform of the one-sided stable family);
* covariance method agreement -- ``quadrature``, ``closed_form`` (where
  defined) and ``fourier_oracle`` pairwise over the shipped parameter
  panel at lags {0.1, 0.5, 1, 2, 5};
* Fourier duality -- spectral density -> covariance curve -> spectral
  density round trips at interior frequencies, with power-law lag-tail
  continuation for the slowly decaying fractional models and plan-doubling
  stability checks where the variance diverges;
* (flag-gated) statistical synthesis -- a seeded sample path whose
  empirical covariance and band-averaged periodogram are compared to the
  analytic formulas at three half-widths.

Every check yields a :class:`ValidationRecord` with the observed and
expected numbers, the tolerance in the metric named by the check
(relative deviation unless the name says otherwise), and the verdict.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import mpmath
import numpy as np
from scipy import integrate

from .covariance import (covariance, covariance_closed_even_n1,
                         covariance_closed_even_n1_printed)
from .models import (Family, Grid, ModelSpec, has_finite_variance,
                     spectral_density)
from .specfun import (airy_ai, bessel_k, bessel_k_gr3478, gamma_fn,
                      onesided_stable_density)
from .synth import empirical_covariance, periodogram, synthesize
from .transforms import (TransformPlan, forward_fourier_covariance,
                         inverse_fourier_spectral)

__all__ = ["ValidationRecord", "ValidationReport", "run_validation_suite"]

#: Seed for the flag-gated statistical section; fixed so reruns reproduce
#: the identical path and verdicts.
STATISTICAL_SEED = 2024


@dataclass(frozen=True)
class ValidationRecord:
    """One check: the two compared numbers, the bound, and the verdict.

    ``tolerance`` bounds the deviation in the check's metric: relative
    deviation ``|observed - expected| / max(|observed|, |expected|)``
    unless the name says otherwise (half-width counts, fractions, exact
    matches).
    """

    name: str
    observed: float
    expected: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "observed": self.observed,
                "expected": self.expected, "tolerance": self.tolerance,
                "pass": self.passed}


@dataclass(frozen=True)
class ValidationReport:
    """All records of one suite run plus the wall-clock time it took."""

    records: tuple
    elapsed_seconds: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failures(self) -> tuple:
        return tuple(r for r in self.records if not r.passed)

    def to_payload(self) -> list:
        return [r.to_dict() for r in self.records]

    def human_summary(self) -> str:
        total = len(self.records)
        failed = self.failures
        lines = [
            f"validation: {total} checks, {total - len(failed)} passed, "
            f"{len(failed)} failed ({self.elapsed_seconds:.1f} s)"
        ]
        for r in failed:
            lines.append(
                f"  FAIL {r.name}: observed={r.observed!r} "
                f"expected={r.expected!r} tolerance={r.tolerance!r}")
        return "\n".join(lines)


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0.0 else 0.0


def _rel_record(name: str, observed: float, expected: float,
                tol: float) -> ValidationRecord:
    return ValidationRecord(name=name, observed=float(observed),
                            expected=float(expected), tolerance=tol,
                            passed=_rel(observed, expected) <= tol)


# ---------------------------------------------------------------------------
# Section 1: special-function identities
# ---------------------------------------------------------------------------

_GR_POINTS = [
    # (nu, p, a, b): power-weighted double-exponential integral vs K
    (0.5, 1.0, 0.5, 0.5), (0.5, 1.0, 1.0, 2.0), (0.5, 2.0, 0.7, 1.3),
    (1.0, 1.0, 0.3, 0.9), (1.0, 1.5, 1.2, 0.4), (1.0, 2.0, 2.0, 2.0),
    (1.5, 1.0, 0.6, 1.1), (1.5, 2.0, 1.4, 0.8), (2.0, 1.0, 0.9, 0.5),
    (2.0, 1.5, 0.5, 1.7), (2.5, 1.0, 1.8, 1.2), (2.5, 2.0, 0.4, 0.6),
    (3.0, 1.0, 0.8, 2.2), (3.0, 1.5, 1.1, 1.1), (0.7, 1.0, 2.5, 0.7),
    (0.9, 2.0, 1.6, 1.9), (1.2, 1.0, 0.2, 1.4), (1.8, 1.5, 2.1, 0.3),
    (2.2, 2.0, 1.0, 1.0), (0.4, 1.0, 1.5, 2.5),
]


def _specfun_records() -> list:
    records = []
    # dual-route Bessel check on the power-weighted integral identity
    for i, (nu, p, a, b) in enumerate(_GR_POINTS):
        observed = bessel_k_gr3478(nu, p, a, b)
        expected = (2.0 / p) * (a / b) ** (nu / (2.0 * p)) \
            * bessel_k(nu / p, 2.0 * math.sqrt(a * b))
        records.append(_rel_record(
            f"bessel_k.power_weighted_identity[{i:02d}]", observed, expected,
            1e-8))
    # symmetry in the order
    for nu, x in ((0.5, 1.0), (1.3, 2.0), (2.7, 0.5), (0.9, 7.0)):
        records.append(_rel_record(
            f"bessel_k.order_symmetry[nu={nu},x={x}]",
            bessel_k(-nu, x), bessel_k(nu, x), 0.0))
    # asymptotic regimes: ratio to the limiting form
    for nu in (0.5, 1.5):
        x = 1e-4
        small = 0.5 * gamma_fn(nu) * (2.0 / x) ** nu
        records.append(_rel_record(
            f"bessel_k.small_x_asymptote[nu={nu}]",
            bessel_k(nu, x) / small, 1.0, 1e-3))
    # the relative correction to the leading large-x form is (4 nu^2 - 1)/(8x),
    # so the 1e-2 bound at x = 50 constrains orders up to nu ~ 1.1
    for nu in (0.5, 1.0):
        x = 50.0
        large = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        records.append(_rel_record(
            f"bessel_k.large_x_asymptote[nu={nu}]",
            bessel_k(nu, x) / large, 1.0, 1e-2))
    # Airy values against a 50-digit independent oracle
    for x in (0.0, 1.0):
        expected = float(mpmath.airyai(mpmath.mpf(x)))
        observed = airy_ai(x)
        records.append(ValidationRecord(
            name=f"airy.value_abs[x={x}]", observed=observed,
            expected=expected, tolerance=1e-12,
            passed=abs(observed - expected) <= 1e-12))
    # one-sided stable at index 1/2: closed inverse-Gaussian-type form
    for z, s in ((0.3, 1.0), (1.0, 1.0), (2.5, 1.0), (1.0, 2.0)):
        closed = s / (2.0 * math.sqrt(math.pi)) * z ** -1.5 \
            * math.exp(-s * s / (4.0 * z))
        records.append(_rel_record(
            f"stable.half_index_closed_form[z={z},s={s}]",
            onesided_stable_density(0.5, z, s), closed, 1e-8))
    # Laplace transform of the one-sided density: integral equals e^{-lam^alpha}
    lam = 2.0
    for alpha in (0.3, 0.5, 0.7, 0.9):
        # the outer quadrature probes deep density tails whose pointwise
        # reduced-accuracy warnings are expected and immaterial at the
        # integral's 1e-6 tolerance, so keep them off the error stream
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            # truncating at z = 60 discards less than e^{-120} of the integral
            val, _ = integrate.quad(
                lambda z: math.exp(-lam * z)
                * onesided_stable_density(alpha, z, 1.0),
                0.0, 60.0, limit=200)
        records.append(_rel_record(
            f"stable.laplace_transform[alpha={alpha}]",
            val, math.exp(-lam ** alpha), 1e-6))
    return records


# ---------------------------------------------------------------------------
# Section 2: covariance method agreement over the parameter panel
# ---------------------------------------------------------------------------

AGREEMENT_LAGS = (0.1, 0.5, 1.0, 2.0, 5.0)


def panel_models(quick: bool = False) -> list:
    """The shipped parameter panel (sigma2 = 1 throughout)."""
    models = []
    if quick:
        for alpha in (0.8, 1.0):
            models.append(ModelSpec.weyl(mu=1.0, beta=1.0, alpha=alpha))
        for n in (1, 2):
            models.append(ModelSpec.even_order(n=n, mu=1.0, beta=1.0))
        for kappa in (-1, 1):
            models.append(ModelSpec.odd_order(n=1, kappa=kappa, mu=1.0, beta=1.0))
        return models
    for mu in (1.0, 2.0):
        for alpha in (0.5, 0.8, 1.0):
            for beta in (0.75, 1.0, 2.0):
                models.append(ModelSpec.weyl(mu=mu, beta=beta, alpha=alpha))
        for n in (1, 2):
            for beta in (0.5, 1.0):
                models.append(ModelSpec.even_order(n=n, mu=mu, beta=beta))
        for kappa in (-1, 1):
            for beta in (0.75, 1.0):
                models.append(ModelSpec.odd_order(n=1, kappa=kappa, mu=mu,
                                                  beta=beta))
    return models


def model_label(model: ModelSpec) -> str:
    if model.family is Family.WeylFractional:
        head = f"weyl alpha={model.alpha:g}"
    elif model.family is Family.EvenOrder:
        head = f"even n={model.n}"
    else:
        head = f"odd n={model.n} kappa={model.kappa:+d}"
    return f"{head} beta={model.beta:g} mu={model.mu:g}"


def agreement_tolerance(model: ModelSpec) -> float:
    loose = model.family is Family.OddOrder or (
        model.family is Family.WeylFractional and model.alpha < 1.0)
    return 1e-4 if loose else 1e-6


def _agreement_methods(model: ModelSpec) -> list:
    if model.family is Family.WeylFractional and model.alpha == 1.0:
        return ["quadrature", "closed_form", "fourier_oracle"]
    if model.family is Family.EvenOrder and model.n == 1:
        return ["quadrature", "closed_form", "fourier_oracle"]
    return ["quadrature", "fourier_oracle"]


def agreement_records(quick: bool = False) -> list:
    records = []
    lags = (0.5, 2.0) if quick else AGREEMENT_LAGS
    for model in panel_models(quick):
        tol = agreement_tolerance(model)
        methods = _agreement_methods(model)
        for h in lags:
            values = [covariance(model, h, method=m) for m in methods]
            worst = max(_rel(x, y) for i, x in enumerate(values)
                        for y in values[i + 1:])
            records.append(ValidationRecord(
                name=f"agreement[{model_label(model)}, h={h:g}]",
                observed=worst, expected=0.0, tolerance=tol,
                passed=worst <= tol))
    return records


# ---------------------------------------------------------------------------
# Section 3: Fourier duality round trips
# ---------------------------------------------------------------------------


def _round_trip_residual(model: ModelSpec, span: float, count: int,
                         freqs: Grid, tail) -> float:
    lag_grid = Grid(start=-span, step=2.0 * span / (count - 1), count=count)
    cov = inverse_fourier_spectral(model, lag_grid)
    spec = forward_fourier_covariance(cov, freqs, tail_exponent=tail)
    exact = spectral_density(model, freqs.points())
    vals = np.asarray(spec.values)
    return float(np.max(np.abs(vals - exact) / np.abs(exact)))


def duality_records(quick: bool = False) -> list:
    records = []
    if quick:
        # round trips dominate the quick budget, so cover one model per
        # family; the full suite walks the whole panel
        models = [ModelSpec.weyl(mu=1.0, beta=1.0, alpha=0.8),
                  ModelSpec.even_order(n=1, mu=1.0, beta=1.0),
                  ModelSpec.odd_order(n=1, kappa=1, mu=1.0, beta=1.0)]
    else:
        models = panel_models(quick)
    for model in models:
        tol = agreement_tolerance(model)
        label = model_label(model)
        if model.family is Family.WeylFractional and model.alpha < 1.0 \
                and not has_finite_variance(model):
            # No covariance curve through h = 0 exists; duality is checked
            # as plan stability of the inverse transform at five lags.
            lags = Grid(start=0.1, step=1.2, count=5)
            base = TransformPlan.auto(model)
            doubled = TransformPlan(
                frequency_cutoff=min(2.0 * base.frequency_cutoff, 8192.0),
                sample_count=2 * base.sample_count)
            a = np.asarray(inverse_fourier_spectral(model, lags, base).values)
            b = np.asarray(inverse_fourier_spectral(model, lags, doubled).values)
            worst = float(np.max(np.abs(a - b) / np.abs(b)))
            records.append(ValidationRecord(
                name=f"duality.plan_doubling[{label}]", observed=worst,
                expected=0.0, tolerance=tol, passed=worst <= tol))
            continue
        if model.family is Family.WeylFractional and model.alpha < 1.0:
            resid = _round_trip_residual(
                model, span=60.0, count=2401,
                freqs=Grid(start=0.5, step=0.5, count=6),
                tail=[1.0 + model.alpha, 1.0 + 2.0 * model.alpha])
        elif model.family is Family.OddOrder:
            resid = _round_trip_residual(
                model, span=60.0, count=6145,
                freqs=Grid(start=0.5, step=0.5, count=6), tail=None)
        else:
            resid = _round_trip_residual(
                model, span=40.0, count=4097,
                freqs=Grid(start=0.0, step=0.5, count=7), tail=None)
        records.append(ValidationRecord(
            name=f"duality.round_trip[{label}]", observed=resid,
            expected=0.0, tolerance=tol, passed=resid <= tol))
    return records


# ---------------------------------------------------------------------------
# Section 4 (flag-gated): statistical synthesis checks
# ---------------------------------------------------------------------------


def statistical_records(seed: int = STATISTICAL_SEED) -> list:
    model = ModelSpec.weyl(mu=1.0, beta=1.0, alpha=0.8)
    count, dt = 2 ** 16, 0.05
    path = synthesize(model, count, dt, seed)
    again = synthesize(model, count, dt, seed)
    records = [ValidationRecord(
        name="statistical.determinism_abs",
        observed=float(np.max(np.abs(path.values - again.values))),
        expected=0.0, tolerance=0.0,
        passed=bool(np.array_equal(path.values, again.values)))]

    est = empirical_covariance(path, 8)
    nyquist = math.pi / dt
    for lag_index in (0, 1, 2, 5):
        h = lag_index * dt
        # the synthesis band-limits at the sampling Nyquist frequency, so
        # the estimator is consistent for the band-limited covariance
        band_cov, _ = integrate.quad(
            lambda t: float(spectral_density(model, t)) * math.cos(t * h) / math.pi,
            0.0, nyquist, limit=400)
        dev = abs(float(est.values[lag_index]) - band_cov)
        hw = float(est.half_width[lag_index])
        records.append(ValidationRecord(
            name=f"statistical.covariance_within_3hw[lag={lag_index}*dt]",
            observed=float(est.values[lag_index]), expected=band_cov,
            tolerance=3.0 * hw, passed=dev <= 3.0 * hw))
        if lag_index > 0:
            # away from lag zero the out-of-band mass is below the noise
            # level, so the full analytic covariance must agree as well
            full = covariance(model, h)
            dev = abs(float(est.values[lag_index]) - full)
            records.append(ValidationRecord(
                name=f"statistical.covariance_full_within_3hw[lag={lag_index}*dt]",
                observed=float(est.values[lag_index]), expected=full,
                tolerance=3.0 * hw, passed=dev <= 3.0 * hw))

    bands = periodogram(path, 64)
    f_ref = np.asarray(spectral_density(model, bands.grid.points()), dtype=float)
    inside = np.abs(bands.values - f_ref) <= 3.0 * bands.half_width
    frac = float(np.mean(inside))
    records.append(ValidationRecord(
        name="statistical.periodogram_fraction_within_3hw",
        observed=frac, expected=0.9, tolerance=0.0, passed=frac >= 0.9))
    return records


# ---------------------------------------------------------------------------
# Flag-gated: the second-order printed closed form as a documented discrepancy
# ---------------------------------------------------------------------------


def printed_even_form_records() -> list:
    """The printed variant must disagree with the corrected form at beta=1/2.

    This check passes when the discrepancy IS present (at least 10%
    relative near h = 0) -- it documents a known inconsistency rather than
    flagging a defect.
    """
    records = []
    for h in (0.05, 0.2):
        corrected = covariance_closed_even_n1(h, 1.0, 0.5, 1.0)
        printed = covariance_closed_even_n1_printed(h, 1.0, 0.5, 1.0)
        gap = _rel(printed, corrected)
        records.append(ValidationRecord(
            name=f"expected_discrepancy.printed_even_form[h={h}]",
            observed=gap, expected=0.1, tolerance=0.0, passed=gap > 0.1))
    return records


def run_validation_suite(*, quick: bool = False, statistical: bool = False,
                         include_printed_even_form: bool = False,
                         statistical_seed: int = STATISTICAL_SEED,
                         ) -> ValidationReport:
    """Run the suite and collect one record per check.

    ``quick`` shrinks the panel and the lag set so the run finishes well
    under a minute; ``statistical`` adds the seeded sample-path section;
    ``include_printed_even_form`` adds the documented-discrepancy check of
    the second-order printed closed form (which passes when the known
    discrepancy is observed).
    """
    start = time.perf_counter()
    records = []
    records.extend(_specfun_records())
    records.extend(agreement_records(quick))
    records.extend(duality_records(quick))
    if statistical:
        records.extend(statistical_records(statistical_seed))
    if include_printed_even_form:
        records.extend(printed_even_form_records())
    return ValidationReport(records=tuple(records),
                            elapsed_seconds=time.perf_counter() - start)
