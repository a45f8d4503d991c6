"""Closed-form steady-state families of the gambling dynamics.

All families are normalized to unit mean: the exponential law e^{-v}, the
Gamma(shape a, scale 1/a) family, the heavy-tailed inverse-Gamma family
with shape a and scale a-1 (k-th moment finite iff k < a), the degenerate
unit-wealth state, and the rescaled Slanina profile, which coincides with
the inverse-Gamma family at a = 3/2 but carries the explicit Laplace
transform (1 + sqrt(2 xi)) e^{-sqrt(2 xi)}.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .fraction_laws import standard_gamma
from .special import log_gamma, reg_lower_gamma, reg_upper_gamma

_INVGAMMA_LAPLACE_RELTOL = 1e-10


class EquilibriumFamily:
    """Base tag for the closed-form steady states."""


@dataclass(frozen=True)
class ExponentialUnit(EquilibriumFamily):
    """Gibbs steady state e^{-v}."""


@dataclass(frozen=True)
class GammaShape(EquilibriumFamily):
    """Gamma steady state with shape a and scale 1/a (mean 1, variance 1/a)."""

    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError("GammaShape requires a > 0")


@dataclass(frozen=True)
class InverseGammaShape(EquilibriumFamily):
    """Inverse-Gamma steady state, shape a > 1 and scale a-1 (mean 1)."""

    a: float

    def __post_init__(self):
        if not self.a > 1.0:
            raise ValueError("InverseGammaShape requires a > 1")


@dataclass(frozen=True)
class DiracUnit(EquilibriumFamily):
    """All wealth concentrated at the mean value 1."""


@dataclass(frozen=True)
class SlaninaRescaled(EquilibriumFamily):
    """Self-similar Slanina profile; equals InverseGammaShape(3/2)."""


def equilibrium_pdf(fam, v):
    """Density of the family at v > 0 (DiracUnit has none)."""
    if isinstance(fam, DiracUnit):
        raise ValueError("DiracUnit has no density")
    if v <= 0.0:
        raise ValueError("equilibrium_pdf requires v > 0")
    if isinstance(fam, ExponentialUnit):
        return math.exp(-v)
    if isinstance(fam, GammaShape):
        a = fam.a
        return math.exp(a * math.log(a) + (a - 1.0) * math.log(v) - a * v
                        - log_gamma(a))
    if isinstance(fam, SlaninaRescaled):
        return _invgamma_pdf(1.5, v)
    if isinstance(fam, InverseGammaShape):
        return _invgamma_pdf(fam.a, v)
    raise ValueError("unknown equilibrium family %r" % (fam,))


def _invgamma_pdf(a, v):
    b = a - 1.0
    return math.exp(a * math.log(b) - b / v - (a + 1.0) * math.log(v)
                    - log_gamma(a))


def equilibrium_cdf(fam, v):
    """Cumulative distribution at v >= 0."""
    if v < 0.0:
        raise ValueError("equilibrium_cdf requires v >= 0")
    if isinstance(fam, DiracUnit):
        return 1.0 if v >= 1.0 else 0.0
    if v == 0.0:
        return 0.0
    if isinstance(fam, ExponentialUnit):
        return -math.expm1(-v)
    if isinstance(fam, GammaShape):
        return reg_lower_gamma(fam.a, fam.a * v)
    if isinstance(fam, SlaninaRescaled):
        return reg_upper_gamma(1.5, 0.5 / v)
    if isinstance(fam, InverseGammaShape):
        return reg_upper_gamma(fam.a, (fam.a - 1.0) / v)
    raise ValueError("unknown equilibrium family %r" % (fam,))


def equilibrium_laplace(fam, xi):
    """Laplace transform of the family at xi >= 0.

    The inverse-Gamma transform has no elementary closed form for general
    shape, so it is evaluated by adaptive quadrature; at a = 3/2 it must
    agree with the Slanina closed form, which the tests cross-check.
    """
    if xi < 0.0:
        raise ValueError("equilibrium_laplace requires xi >= 0")
    if xi == 0.0:
        return 1.0
    if isinstance(fam, ExponentialUnit):
        return 1.0 / (1.0 + xi)
    if isinstance(fam, GammaShape):
        return (1.0 + xi / fam.a) ** (-fam.a)
    if isinstance(fam, DiracUnit):
        return math.exp(-xi)
    if isinstance(fam, SlaninaRescaled):
        s = math.sqrt(2.0 * xi)
        return (1.0 + s) * math.exp(-s)
    if isinstance(fam, InverseGammaShape):
        a = fam.a
        val, _ = integrate.quad(
            lambda v: math.exp(-xi * v) * _invgamma_pdf(a, v),
            0.0, np.inf, epsabs=1e-13, epsrel=_INVGAMMA_LAPLACE_RELTOL,
            limit=200)
        return val
    raise ValueError("unknown equilibrium family %r" % (fam,))


def equilibrium_moment(fam, k):
    """k-th raw moment (k >= 1); +inf for divergent inverse-Gamma moments."""
    if k < 1 or int(k) != k:
        raise ValueError("equilibrium_moment requires integer k >= 1")
    k = int(k)
    if isinstance(fam, ExponentialUnit):
        return math.exp(log_gamma(k + 1.0))
    if isinstance(fam, GammaShape):
        a = fam.a
        return math.exp(log_gamma(a + k) - log_gamma(a) - k * math.log(a))
    if isinstance(fam, DiracUnit):
        return 1.0
    if isinstance(fam, SlaninaRescaled):
        return _invgamma_moment(1.5, k)
    if isinstance(fam, InverseGammaShape):
        return _invgamma_moment(fam.a, k)
    raise ValueError("unknown equilibrium family %r" % (fam,))


def _invgamma_moment(a, k):
    if k >= a:
        return math.inf
    b = a - 1.0
    return math.exp(k * math.log(b) + log_gamma(a - k) - log_gamma(a))


def equilibrium_sample(fam, rng, size):
    """Seeded iid draws from the family (used as tree leaves and test data)."""
    n = int(size)
    if isinstance(fam, ExponentialUnit):
        return rng.generator.standard_exponential(n)
    if isinstance(fam, GammaShape):
        return standard_gamma(rng, fam.a, n) / fam.a
    if isinstance(fam, DiracUnit):
        return np.ones(n)
    if isinstance(fam, SlaninaRescaled):
        return 0.5 / standard_gamma(rng, 1.5, n)
    if isinstance(fam, InverseGammaShape):
        return (fam.a - 1.0) / standard_gamma(rng, fam.a, n)
    raise ValueError("unknown equilibrium family %r" % (fam,))
