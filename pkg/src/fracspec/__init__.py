"""Spectral functions, covariance functions, and Gaussian-path simulation
for three families of fractional stochastic models.

The families are indexed by the order of the generator driving the
stationary equation: a fractional (Weyl) order alpha in (0, 1], an even
integer order 2n, and an odd integer order 2n+1 with an orientation sign.
Every family exposes the same toolkit:

- exact spectral densities (complex-valued in the odd case),
- covariance by closed forms, gamma-mixture quadrature, and a
  Fourier-inversion oracle that cross-checks them,
- the space-time kernels and special functions the mixtures are built
  from (Bessel K, Airy Ai, stable densities),
- deterministic spectral synthesis of sample paths with empirical
  covariance and periodogram estimators, and
- a validation suite wiring the independent routes against each other.
"""

from .covariance import (CovarianceMethod, QuadratureRule, covariance,
                         covariance_closed_even_n1,
                         covariance_closed_even_n1_printed,
                         covariance_closed_weyl_alpha1, covariance_curve,
                         covariance_stable_convolution, decay_rate,
                         gamma_quadrature)
from .errors import (AccuracyError, AliasingGuardError, DivergentVarianceError,
                     DomainError, InsufficientDecayError, ModelValidationError,
                     NumericalError, TailAccuracyWarning)
from .kernels import KernelSpec, heat_kernel, kernel_mass
from .models import (Curve, Family, Grid, ModelSpec, Quantity,
                     has_finite_variance, spectral_density, spectral_polar,
                     spectral_tail_exponent, validate_model)
from .specfun import (StableIndex, airy_ai, bessel_k, bessel_k_gr3478,
                      gamma_fn, onesided_stable_density,
                      symmetric_stable_density)
from .synth import (DEFAULT_ALIAS_GUARD, EstimateCurve, SamplePath,
                    empirical_covariance, periodogram, synthesize)
from .transforms import (TransformPlan, forward_fourier_covariance,
                         inverse_fourier_spectral)
from ._validation import (ValidationRecord, ValidationReport,
                          run_validation_suite)
from .cli import figure_data

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AliasingGuardError", "CovarianceMethod", "Curve",
    "DEFAULT_ALIAS_GUARD", "DivergentVarianceError", "DomainError",
    "EstimateCurve", "Family", "Grid", "InsufficientDecayError",
    "KernelSpec", "ModelSpec", "ModelValidationError", "NumericalError",
    "Quantity", "QuadratureRule", "SamplePath", "StableIndex",
    "TailAccuracyWarning", "TransformPlan", "ValidationRecord",
    "ValidationReport", "airy_ai", "bessel_k", "bessel_k_gr3478",
    "covariance", "covariance_closed_even_n1",
    "covariance_closed_even_n1_printed", "covariance_closed_weyl_alpha1",
    "covariance_curve", "covariance_stable_convolution", "decay_rate",
    "empirical_covariance", "figure_data", "forward_fourier_covariance",
    "gamma_fn", "gamma_quadrature", "has_finite_variance", "heat_kernel",
    "inverse_fourier_spectral", "kernel_mass", "onesided_stable_density",
    "periodogram", "run_validation_suite", "spectral_density",
    "spectral_polar", "spectral_tail_exponent", "symmetric_stable_density",
    "synthesize", "validate_model",
]
