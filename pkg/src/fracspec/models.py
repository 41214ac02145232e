"""Model families, sampling grids, curves, and exact spectral densities.

Three stationary families are supported, each determined by a shift mu > 0,
a fractional power beta > 0, and a noise intensity sigma2 > 0:

* ``WeylFractional`` -- fractional-derivative dynamics of order alpha in
  (0, 1]; real spectral density
  ``sigma2 / (mu^2 + 2|tau|^alpha mu cos(pi alpha/2) + |tau|^{2 alpha})^beta``.
* ``EvenOrder`` -- derivative order 2n; real spectral density
  ``sigma2 / (mu + tau^{2n})^{2 beta}``.
* ``OddOrder`` -- derivative order 2n+1 with orientation kappa in {-1, +1};
  complex Hermitian spectral density
  ``sigma2 / (mu + (-1)^n kappa i tau^{2n+1})^{2 beta}``
  on the principal branch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ModelValidationError

__all__ = [
    "Family",
    "Quantity",
    "ModelSpec",
    "Grid",
    "Curve",
    "validate_model",
    "spectral_density",
    "spectral_polar",
    "spectral_tail_exponent",
    "has_finite_variance",
]


class Family(enum.Enum):
    WeylFractional = "weyl"
    EvenOrder = "even"
    OddOrder = "odd"


class Quantity(enum.Enum):
    Spectral = "spectral"
    Covariance = "covariance"
    Kernel = "kernel"
    Density = "density"


def _model_violations(family, mu, beta, sigma2, alpha, n, kappa):
    v = []
    if not isinstance(family, Family):
        v.append(f"family must be a Family, got {family!r}")
        return v
    if not (isinstance(mu, (int, float)) and mu > 0):
        v.append(f"mu > 0 required, got {mu!r}")
    if not (isinstance(beta, (int, float)) and beta > 0):
        v.append(f"beta > 0 required, got {beta!r}")
    if not (isinstance(sigma2, (int, float)) and sigma2 > 0):
        v.append(f"sigma2 > 0 required, got {sigma2!r}")
    if family is Family.WeylFractional:
        if alpha is None or not (isinstance(alpha, (int, float)) and 0 < alpha <= 1):
            v.append(f"alpha out of (0, 1] for WeylFractional, got {alpha!r}")
        if n is not None:
            v.append("n is not a WeylFractional field")
        if kappa is not None:
            v.append("kappa is not a WeylFractional field")
    else:
        if n is None or not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
            v.append(f"n >= 1 required, got {n!r}")
        if alpha is not None:
            v.append(f"alpha is not a {family.name} field")
        if family is Family.OddOrder:
            if kappa not in (-1, 1):
                v.append(f"kappa must be -1 or +1, got {kappa!r}")
        elif kappa is not None:
            v.append("kappa is not an EvenOrder field")
    return v


@dataclass(frozen=True)
class ModelSpec:
    """Validated parameter set for one of the three families.

    Fields irrelevant to the family are None, never defaulted.  Instances
    are immutable; invalid combinations cannot be constructed.
    """

    family: Family
    mu: float
    beta: float
    sigma2: float
    alpha: Optional[float] = None
    n: Optional[int] = None
    kappa: Optional[int] = None

    def __post_init__(self):
        violations = _model_violations(self.family, self.mu, self.beta,
                                       self.sigma2, self.alpha, self.n, self.kappa)
        if violations:
            raise ModelValidationError(violations)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))
        if self.n is not None:
            object.__setattr__(self, "n", int(self.n))
        if self.kappa is not None:
            object.__setattr__(self, "kappa", int(self.kappa))

    @classmethod
    def weyl(cls, mu: float, beta: float, sigma2: float = 1.0,
             alpha: float = 1.0) -> "ModelSpec":
        return cls(Family.WeylFractional, mu, beta, sigma2, alpha=alpha)

    @classmethod
    def even_order(cls, n: int, mu: float, beta: float,
                   sigma2: float = 1.0) -> "ModelSpec":
        return cls(Family.EvenOrder, mu, beta, sigma2, n=n)

    @classmethod
    def odd_order(cls, n: int, kappa: int, mu: float, beta: float,
                  sigma2: float = 1.0) -> "ModelSpec":
        return cls(Family.OddOrder, mu, beta, sigma2, n=n, kappa=kappa)

    @property
    def derivative_order(self) -> float:
        if self.family is Family.WeylFractional:
            return self.alpha
        if self.family is Family.EvenOrder:
            return 2 * self.n
        return 2 * self.n + 1

    def to_dict(self) -> dict:
        d = {"family": self.family.value, "mu": self.mu, "beta": self.beta,
             "sigma2": self.sigma2}
        if self.alpha is not None:
            d["alpha"] = self.alpha
        if self.n is not None:
            d["n"] = self.n
        if self.kappa is not None:
            d["kappa"] = self.kappa
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        fam = d.get("family")
        try:
            family = Family(fam) if not isinstance(fam, Family) else fam
        except ValueError:
            raise ModelValidationError(
                [f"family must be one of {[f.value for f in Family]}, got {fam!r}"])
        return validate_model(family=family, mu=d.get("mu"), beta=d.get("beta"),
                              sigma2=d.get("sigma2", 1.0), alpha=d.get("alpha"),
                              n=d.get("n"), kappa=d.get("kappa"))


def validate_model(family, mu, beta, sigma2=1.0, alpha=None, n=None,
                   kappa=None) -> ModelSpec:
    """Build a :class:`ModelSpec`, reporting every violated constraint.

    Raises
    ------
    ModelValidationError
        With a ``violations`` list naming each offending field and bound.
    """
    if isinstance(family, str):
        try:
            family = Family(family)
        except ValueError:
            raise ModelValidationError(
                [f"family must be one of {[f.value for f in Family]}, got {family!r}"])
    violations = _model_violations(family, mu, beta, sigma2, alpha, n, kappa)
    if violations:
        raise ModelValidationError(violations)
    return ModelSpec(family, mu, beta, sigma2, alpha=alpha, n=n, kappa=kappa)


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D lattice: points are start + k*step for k in [0, count)."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ModelValidationError([f"step > 0 required, got {self.step!r}"])
        if not (isinstance(self.count, int) and self.count >= 2):
            raise ModelValidationError([f"count >= 2 required, got {self.count!r}"])
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)


@dataclass(frozen=True)
class Curve:
    """Values on a grid with provenance: which model, quantity, and method."""

    grid: Grid
    values: np.ndarray
    quantity: Quantity
    method: str
    model: Optional[ModelSpec] = None

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.count,):
            raise ModelValidationError(
                [f"values length {vals.shape} != grid count {self.grid.count}"])
        if np.iscomplexobj(vals):
            ok = (self.quantity is Quantity.Spectral and self.model is not None
                  and self.model.family is Family.OddOrder)
            if not ok:
                raise ModelValidationError(
                    ["complex values permitted only for Spectral curves of "
                     "the OddOrder family"])
        object.__setattr__(self, "values", vals)


def _weyl_density(model: ModelSpec, tau):
    at = np.abs(tau)
    cos_term = math.cos(0.5 * math.pi * model.alpha)
    base = (model.mu ** 2 + 2.0 * at ** model.alpha * model.mu * cos_term
            + at ** (2.0 * model.alpha))
    return model.sigma2 * base ** (-model.beta)


def _even_density(model: ModelSpec, tau):
    return model.sigma2 * (model.mu + np.asarray(tau, dtype=float) ** (2 * model.n)) ** (-2.0 * model.beta)


def _odd_density(model: ModelSpec, tau):
    tau = np.asarray(tau, dtype=float)
    s = model.kappa * (-1) ** model.n
    y = s * tau ** (2 * model.n + 1)
    modulus = model.sigma2 * (model.mu ** 2 + tau ** (2 * (2 * model.n + 1))) ** (-model.beta)
    phase = -2.0 * model.beta * np.arctan2(y, model.mu)
    return modulus * np.exp(1j * phase)


def spectral_density(model: ModelSpec, tau: Union[float, Sequence[float]]):
    """Exact spectral density of ``model`` at frequency ``tau``.

    Real and strictly positive for WeylFractional and EvenOrder; complex with
    Hermitian symmetry for OddOrder.  Accepts scalars or arrays.
    """
    scalar = np.isscalar(tau)
    tau = np.asarray(tau, dtype=float)
    if model.family is Family.WeylFractional:
        out = _weyl_density(model, tau)
    elif model.family is Family.EvenOrder:
        out = _even_density(model, tau)
    else:
        out = _odd_density(model, tau)
    if scalar:
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def spectral_polar(model: ModelSpec, tau):
    """Modulus and phase of the spectral density (phase is 0 for real families)."""
    val = spectral_density(model, tau)
    return np.abs(val), np.angle(val)


def spectral_tail_exponent(model: ModelSpec) -> float:
    """Power p of the large-frequency decay |f(tau)| ~ sigma2 |tau|^{-p}."""
    if model.family is Family.WeylFractional:
        return 2.0 * model.alpha * model.beta
    if model.family is Family.EvenOrder:
        return 4.0 * model.n * model.beta
    return 2.0 * model.beta * (2 * model.n + 1)


def has_finite_variance(model: ModelSpec) -> bool:
    """Whether Cov(0) is finite, i.e. the spectral density is integrable."""
    return spectral_tail_exponent(model) > 1.0
