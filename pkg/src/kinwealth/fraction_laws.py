"""Random trade-fraction laws and the seeded variate generators behind them.

A trade splits the pooled wealth of a pair according to a fraction pair
(eps1, eps2).  Five laws are supported: uniform on (0,1), symmetric
Beta(a,a), inverse-Beta eps = 1/(4 theta) with theta ~ Beta(a+1/2, a-1/2),
the degenerate 1/2, and the deterministic non-conservative Slanina (p, q)
mixing weights.  Beta variates are generated through the two-Gamma
construction X1/(X1+X2), with Gamma variates from the squeeze-free
Marsaglia-Tsang rejection sampler (shape < 1 is boosted through the power
transform so the winner-takes-all regime a < 1 is supported).
"""

import math
from dataclasses import dataclass, field

import numpy as np

SLANINA_CONSTRAINT_TOL = 1e-12


class FractionLaw:
    """Base tag for the supported fraction laws."""


@dataclass(frozen=True)
class Uniform01(FractionLaw):
    """eps uniform on (0, 1); pair (eps, 1 - eps)."""


@dataclass(frozen=True)
class SymmetricBeta(FractionLaw):
    """eps ~ Beta(a, a); pair (eps, 1 - eps)."""

    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError("SymmetricBeta requires shape a > 0")


@dataclass(frozen=True)
class InverseBetaQuarter(FractionLaw):
    """eps_i = 1/(4 theta_i), theta_i independent Beta(a+1/2, a-1/2), a > 1."""

    a: float

    def __post_init__(self):
        if not self.a > 1.0:
            raise ValueError("InverseBetaQuarter requires a > 1")


@dataclass(frozen=True)
class DiracHalf(FractionLaw):
    """Degenerate law eps = 1/2."""


@dataclass(frozen=True)
class SlaninaPQ(FractionLaw):
    """Deterministic mixing weights (p, q); non-conservative in the mean."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.p >= self.q > 0.0):
            raise ValueError("SlaninaPQ requires p >= q > 0")
        if abs(math.sqrt(self.p) + math.sqrt(self.q) - 1.0) > SLANINA_CONSTRAINT_TOL:
            raise ValueError("SlaninaPQ requires sqrt(p) + sqrt(q) = 1")


def is_conservative_in_mean(law):
    """True when the law satisfies <eps1 + eps2> = 1."""
    return not isinstance(law, SlaninaPQ)


def mean_fraction_sum(law):
    if isinstance(law, SlaninaPQ):
        return law.p + law.q
    return 1.0


@dataclass
class SeededRng:
    """Reproducible random stream keyed by (seed, stream).

    Identical (seed, stream) pairs replay bit-identical draw sequences;
    distinct stream ids give statistically independent replicas.
    """

    seed: int
    stream: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def uniform(self, size=None):
        return self.generator.random(size)

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def integers(self, low, high, size=None):
        return self.generator.integers(low, high, size=size)


def standard_gamma(rng, shape, size):
    """Gamma(shape, 1) variates by squeeze-free Marsaglia-Tsang rejection."""
    if shape <= 0.0:
        raise ValueError("standard_gamma requires shape > 0")
    n = int(size)
    if shape < 1.0:
        boosted = standard_gamma(rng, shape + 1.0, n)
        u = rng.uniform(n)
        return boosted * u ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = n - filled
        x = rng.normal(m)
        v = (1.0 + c * x) ** 3
        u = rng.uniform(m)
        pos = v > 0.0
        logv = np.log(np.where(pos, v, 1.0))
        accept = pos & (np.log(u) < 0.5 * x * x + d - d * v + d * logv)
        got = int(accept.sum())
        out[filled:filled + got] = d * v[accept]
        filled += got
    return out


def beta_variates(rng, a, b, size):
    """Beta(a, b) variates via the two-Gamma construction X1/(X1+X2)."""
    g1 = standard_gamma(rng, a, size)
    g2 = standard_gamma(rng, b, size)
    return g1 / (g1 + g2)


def sample_fraction_pairs(law, rng, size):
    """Vectorized draw of `size` fraction pairs; returns (eps1, eps2) arrays."""
    n = int(size)
    if isinstance(law, Uniform01):
        e = rng.uniform(n)
        return e, 1.0 - e
    if isinstance(law, SymmetricBeta):
        e = beta_variates(rng, law.a, law.a, n)
        return e, 1.0 - e
    if isinstance(law, DiracHalf):
        half = np.full(n, 0.5)
        return half, half.copy()
    if isinstance(law, InverseBetaQuarter):
        th1 = beta_variates(rng, law.a + 0.5, law.a - 0.5, n)
        th2 = beta_variates(rng, law.a + 0.5, law.a - 0.5, n)
        return 0.25 / th1, 0.25 / th2
    if isinstance(law, SlaninaPQ):
        return np.full(n, law.p), np.full(n, law.q)
    raise ValueError("unknown fraction law %r" % (law,))


def sample_fraction_pair(law, rng):
    """Single fraction pair (eps1, eps2) as floats."""
    e1, e2 = sample_fraction_pairs(law, rng, 1)
    return float(e1[0]), float(e2[0])
