"""Convergence key function G(s) = <eps1^s + eps2^s> - 1 and its slope at 1.

G'(1) < 0 is the hypothesis under which the dynamics converge to the
steady state.  Closed forms are used where available; +infinity is a
representable outcome of g_value (the pole structure marks the moment
divergence threshold, it is not an error).  For the inverse-Beta law the
slope factors as G'(1) = -(1/4) * GammaRatio(a) * Q(a) with
Q(a) = 2 log 2 + psi(a - 1/2) - psi(a), which vanishes at a = 1 and is
strictly increasing, so G'(1) < 0 for every a > 1.
"""

import math

from scipy import integrate

from .fraction_laws import (DiracHalf, InverseBetaQuarter, SlaninaPQ,
                            SymmetricBeta, Uniform01)
from .special import digamma, log_beta, log_gamma

_LN2 = math.log(2.0)
_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-11, limit=200)


def g_value(law, s):
    """G(s) for s >= 0; +inf where the defining expectation diverges."""
    if s < 0.0:
        raise ValueError("g_value requires s >= 0")
    if s == 0.0:
        return 1.0  # <eps1^0 + eps2^0> - 1, for every paired law
    if isinstance(law, Uniform01):
        law = SymmetricBeta(1.0)
    if isinstance(law, SymmetricBeta):
        a = law.a
        return math.expm1(_LN2 + log_beta(a + s, a) - log_beta(a, a))
    if isinstance(law, DiracHalf):
        return math.expm1((1.0 - s) * _LN2)
    if isinstance(law, InverseBetaQuarter):
        a = law.a
        if s >= a + 0.5:
            return math.inf
        return math.expm1((1.0 - 2.0 * s) * _LN2 + log_gamma(2.0 * a)
                          + log_gamma(a - s + 0.5) - log_gamma(2.0 * a - s)
                          - log_gamma(a + 0.5))
    if isinstance(law, SlaninaPQ):
        return law.p ** s + law.q ** s - 1.0
    raise ValueError("unknown fraction law %r" % (law,))


def g_value_by_quadrature(law, s):
    """Brute-force G(s) by adaptive quadrature of the defining expectation.

    Independent of the closed forms in g_value; used to cross-validate
    them.  Degenerate laws are evaluated directly.
    """
    if s < 0.0:
        raise ValueError("g_value requires s >= 0")
    if isinstance(law, DiracHalf):
        return 2.0 * 0.5 ** s - 1.0
    if isinstance(law, SlaninaPQ):
        return law.p ** s + law.q ** s - 1.0
    if isinstance(law, Uniform01):
        law = SymmetricBeta(1.0)
    # QAWS quadrature: the x^s factor and the algebraic endpoint
    # singularities of the Beta density combine into a single weight
    if isinstance(law, SymmetricBeta):
        a = law.a
        norm = math.exp(-log_beta(a, a))
        val, _ = integrate.quad(lambda x: norm, 0.0, 1.0,
                                weight="alg", wvar=(a - 1.0 + s, a - 1.0),
                                **_QUAD_OPTS)
        return 2.0 * val - 1.0
    if isinstance(law, InverseBetaQuarter):
        a = law.a
        if s >= a + 0.5:
            return math.inf
        norm = 4.0 ** (-s) * math.exp(-log_beta(a + 0.5, a - 0.5))
        val, _ = integrate.quad(lambda x: norm, 0.0, 1.0,
                                weight="alg", wvar=(a - 0.5 - s, a - 1.5),
                                **_QUAD_OPTS)
        return 2.0 * val - 1.0
    raise ValueError("unknown fraction law %r" % (law,))


def g_prime_at_one(law):
    """dG/ds at s = 1; negative for every supported conservative law."""
    if isinstance(law, Uniform01):
        law = SymmetricBeta(1.0)
    if isinstance(law, SymmetricBeta):
        a = law.a
        # 2 <eps log eps>: QAWS with weight x^a (1-x)^(a-1) log(x)
        norm = math.exp(-log_beta(a, a))
        val, _ = integrate.quad(
            lambda x: norm, 0.0, 1.0,
            weight="alg-loga", wvar=(a, a - 1.0), **_QUAD_OPTS)
        return 2.0 * val
    if isinstance(law, DiracHalf):
        return -_LN2
    if isinstance(law, InverseBetaQuarter):
        a = law.a
        ratio = math.exp(log_gamma(2.0 * a) + log_gamma(a - 0.5)
                         - log_gamma(2.0 * a - 1.0) - log_gamma(a + 0.5))
        return -0.25 * ratio * q_value(a)
    if isinstance(law, SlaninaPQ):
        return law.p * math.log(law.p) + law.q * math.log(law.q)
    raise ValueError("unknown fraction law %r" % (law,))


def q_value(a):
    """Q(a) = 2 log 2 + psi(a - 1/2) - psi(a) for a >= 1.

    Q(1) = 0 and Q'(a) = psi'(a-1/2) - psi'(a) > 0, hence Q > 0 on (1, inf).
    """
    if a < 1.0:
        raise ValueError("q_value requires a >= 1")
    return 2.0 * _LN2 + digamma(a - 0.5) - digamma(a)
