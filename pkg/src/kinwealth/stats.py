"""Empirical diagnostics comparing simulation output to analytic equilibria.

KS distance is the primary acceptance metric; Wasserstein-1 is reported as
a secondary, more tail-sensitive one (noisy by construction for families
with divergent second moments, a <= 2).  The Gini coefficient uses the
sort-based formula, the tail index the Hill estimator on the top order
statistics.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .equilibria import equilibrium_cdf, equilibrium_moment

MIN_KS_SAMPLES = 100
MIN_HILL_SAMPLES = 1000
_QUANTILE_BISECTIONS = 80


@dataclass
class MomentRow:
    k: int
    empirical: float
    analytic: float  # may be +inf: divergent, empirical value unstable by design


@dataclass
class FitReport:
    ks: float
    wasserstein1: float
    gini: float
    hill_index: Optional[float]
    moments: list

    def to_dict(self):
        return {
            "ks": self.ks,
            "wasserstein1": self.wasserstein1,
            "gini": self.gini,
            "hill_index": self.hill_index,
            "moments": [
                {"k": row.k,
                 "empirical": row.empirical,
                 "analytic": "inf" if math.isinf(row.analytic) else row.analytic}
                for row in self.moments
            ],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)


def _cdf_values(fam, xs):
    return np.array([equilibrium_cdf(fam, float(x)) for x in xs])


def ks_distance(samples, fam):
    """Sup distance between the empirical CDF and the family CDF."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n < MIN_KS_SAMPLES:
        raise ValueError("ks_distance needs at least %d samples" % MIN_KS_SAMPLES)
    cdf = _cdf_values(fam, xs)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))


def family_quantiles(fam, probs):
    """Quantiles by bisection on the family CDF."""
    probs = np.asarray(probs, dtype=float)
    if np.any((probs <= 0.0) | (probs >= 1.0)):
        raise ValueError("quantile probabilities must lie in (0, 1)")
    hi = 1.0
    while equilibrium_cdf(fam, hi) < probs.max() and hi < 1e30:
        hi *= 2.0
    lo = np.zeros_like(probs)
    hi = np.full_like(probs, hi)
    for _ in range(_QUANTILE_BISECTIONS):
        mid = 0.5 * (lo + hi)
        below = _cdf_values(fam, mid) < probs
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def wasserstein1(samples, fam):
    """Mean absolute gap between order statistics and matched quantiles."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n < MIN_KS_SAMPLES:
        raise ValueError("wasserstein1 needs at least %d samples" % MIN_KS_SAMPLES)
    qs = family_quantiles(fam, (np.arange(n) + 0.5) / n)
    return float(np.mean(np.abs(xs - qs)))


def gini(samples):
    """Gini coefficient of a non-negative sample with positive total."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n == 0:
        raise ValueError("gini of an empty sample is undefined")
    if np.any(xs < 0.0):
        raise ValueError("gini requires non-negative samples")
    total = xs.sum()
    if total <= 0.0:
        raise ValueError("gini of an all-zero sample is undefined")
    i = np.arange(1, n + 1)
    return float(np.sum((2.0 * i - n - 1.0) * xs) / (n * total))


def hill_tail_index(samples, top_fraction=0.01):
    """Hill estimate of the Pareto survival exponent from the top tail."""
    if not 0.0 < top_fraction <= 0.1:
        raise ValueError("top_fraction must lie in (0, 0.1]")
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n < MIN_HILL_SAMPLES:
        raise ValueError("hill_tail_index needs at least %d samples"
                         % MIN_HILL_SAMPLES)
    k = int(math.ceil(top_fraction * n))
    threshold = xs[n - k - 1]
    if threshold <= 0.0:
        raise ValueError("tail threshold must be positive")
    logs = np.log(xs[n - k:]) - math.log(threshold)
    mean_log = logs.mean()
    if mean_log <= 0.0:
        raise ValueError("degenerate tail: no spread above the threshold")
    return float(1.0 / mean_log)


def moment_table(samples, fam, max_order=3):
    """Empirical vs analytic raw moments up to max_order."""
    xs = np.asarray(samples, dtype=float)
    rows = []
    for k in range(1, max_order + 1):
        rows.append(MomentRow(k, float(np.mean(xs ** k)),
                              equilibrium_moment(fam, k)))
    return rows


def build_fit_report(samples, fam, max_order=3, top_fraction=0.01):
    """Full empirical-vs-analytic FitReport; Hill index absent when degenerate."""
    try:
        hill = hill_tail_index(samples, top_fraction)
    except ValueError:
        hill = None
    return FitReport(
        ks=ks_distance(samples, fam),
        wasserstein1=wasserstein1(samples, fam),
        gini=gini(samples),
        hill_index=hill,
        moments=moment_table(samples, fam, max_order),
    )
