"""Binary trade kernels and the finite-N population simulator.

A population of N agents evolves by repeated binary trades: a pair is
picked uniformly at random (no self-pairing), fractions are drawn from the
rule's law, and the matching kernel reassigns the pooled wealth.  Kinetic
time is tau = 2 t / N.  Pure gambling conserves the pair sum pointwise;
the mean-conservative rule exchanges the signed difference with the market
reservoir; the Slanina rule shrinks the pair sum by 1 - 2 sqrt(pq) each
trade so the raw mean decays exponentially at rate 2 sqrt(pq).

The trade rules are positively homogeneous in wealth, so per-trade
renormalization to unit mean commutes with the dynamics; the simulator
exploits this and rescales lazily (at chunk boundaries and on emission)
instead of scaling the whole vector after every trade.
"""

import concurrent.futures
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fraction_laws import (DiracHalf, FractionLaw, InverseBetaQuarter,
                            SeededRng, SlaninaPQ, SymmetricBeta, Uniform01,
                            beta_variates)

INITIAL_TAGS = ("all-equal-1", "exponential-mean-1", "uniform-on-(0,2)")

_MAX_CHUNK = 1 << 21
_RESCALE_BAND = (1e-3, 1e3)


class TradeRule:
    """Base tag for the trade rules; law variant must match rule variant."""

    renormalize: bool


@dataclass(frozen=True)
class PureGambling(TradeRule):
    """Pointwise-conservative split v* = eps (v+w), w* = (1-eps)(v+w)."""

    law: FractionLaw
    renormalize: bool = False

    def __post_init__(self):
        if not isinstance(self.law, (Uniform01, SymmetricBeta, DiracHalf)):
            raise ValueError("PureGambling requires a Uniform01, SymmetricBeta "
                             "or DiracHalf law")


@dataclass(frozen=True)
class MeanConservative(TradeRule):
    """Random-profit rule v* = eps1 (v+w), w* = eps2 (v+w), <eps1+eps2> = 1."""

    law: InverseBetaQuarter
    renormalize: bool = True

    def __post_init__(self):
        if not isinstance(self.law, InverseBetaQuarter):
            raise ValueError("MeanConservative requires an InverseBetaQuarter law")


@dataclass(frozen=True)
class SlaninaMix(TradeRule):
    """Non-conservative mixing v* = p v + q w, w* = q v + p w."""

    law: SlaninaPQ
    renormalize: bool = True

    def __post_init__(self):
        if not isinstance(self.law, SlaninaPQ):
            raise ValueError("SlaninaMix requires a SlaninaPQ law")


def apply_trade_pure(v, w, eps):
    """Single pure-gambling trade; pair sum conserved to one rounding."""
    if v < 0.0 or w < 0.0:
        raise ValueError("wealth must be non-negative")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("pure trade requires eps in [0, 1]")
    s = v + w
    v_new = eps * s
    return v_new, s - v_new


def apply_trade_mean(v, w, eps1, eps2):
    """Single mean-conservative trade; also returns the market flow delta."""
    if v < 0.0 or w < 0.0:
        raise ValueError("wealth must be non-negative")
    if eps1 < 0.0 or eps2 < 0.0:
        raise ValueError("fractions must be non-negative")
    s = v + w
    v_new = eps1 * s
    w_new = eps2 * s
    return v_new, w_new, (v_new + w_new) - s


def apply_trade_slanina(v, w, p, q):
    """Single Slanina trade with validated mixing weights."""
    if v < 0.0 or w < 0.0:
        raise ValueError("wealth must be non-negative")
    SlaninaPQ(p, q)
    return p * v + q * w, q * v + p * w


@dataclass
class Population:
    """Wealth vector plus elapsed trade count; kinetic time is 2 t / N."""

    wealth: np.ndarray
    trades_done: int
    agent_count: int

    @property
    def kinetic_time(self):
        return 2.0 * self.trades_done / self.agent_count

    def __post_init__(self):
        if self.agent_count != len(self.wealth):
            raise ValueError("agent_count does not match wealth vector length")


@dataclass
class TimeSeries:
    tau: np.ndarray
    mean: np.ndarray
    variance: np.ndarray


@dataclass
class SimulationResult:
    population: Population
    series: TimeSeries
    rule: TradeRule
    seed: int
    stream: int
    total_drift: float = 0.0


def initial_wealth(tag, n_agents, rng):
    """Initial wealth vector, normalized to empirical mean exactly 1."""
    if tag == "all-equal-1":
        return np.ones(n_agents)
    if tag == "exponential-mean-1":
        w = rng.generator.standard_exponential(n_agents)
    elif tag == "uniform-on-(0,2)":
        w = 2.0 * rng.uniform(n_agents)
    else:
        raise ValueError("unknown initial tag %r (expected one of %s)"
                         % (tag, ", ".join(INITIAL_TAGS)))
    return w / w.mean()


def _draw_pairs(rng, n_agents, count):
    # uniform ordered pairs with i != j: draw j on [0, N-1) and shift past i
    i_idx = rng.integers(0, n_agents, count)
    j_idx = rng.integers(0, n_agents - 1, count)
    j_idx += (j_idx >= i_idx)
    return i_idx, j_idx


def _run_chunk(rule, w, rng, n_agents, count):
    i_idx, j_idx = _draw_pairs(rng, n_agents, count)
    law = rule.law
    if isinstance(rule, PureGambling):
        if isinstance(law, DiracHalf):
            _kernels.dirac_trades(w, i_idx, j_idx)
        elif isinstance(law, Uniform01):
            _kernels.pure_trades(w, i_idx, j_idx, rng.uniform(count))
        else:
            eps = beta_variates(rng, law.a, law.a, count)
            _kernels.pure_trades(w, i_idx, j_idx, eps)
    elif isinstance(rule, MeanConservative):
        th1 = beta_variates(rng, law.a + 0.5, law.a - 0.5, count)
        th2 = beta_variates(rng, law.a + 0.5, law.a - 0.5, count)
        _kernels.mean_trades(w, i_idx, j_idx, 0.25 / th1, 0.25 / th2)
    elif isinstance(rule, SlaninaMix):
        _kernels.slanina_trades(w, i_idx, j_idx, law.p, law.q)
    else:
        raise ValueError("unknown trade rule %r" % (rule,))


def simulate(rule, n_agents, total_trades, seed=0, stream=0,
             initial="all-equal-1", sample_stride=None, series_start=0):
    """Run `total_trades` trades and record a (tau, mean, variance) series.

    The series is sampled every `sample_stride` trades (default N // 2,
    i.e. one kinetic time unit) starting after `series_start` trades; the
    final state is always recorded.  With renormalization the recorded
    mean is identically 1 and the snapshot is rescaled to unit mean.
    """
    if n_agents < 2:
        raise ValueError("simulate requires at least 2 agents")
    if total_trades < 1:
        raise ValueError("simulate requires at least 1 trade")
    if not isinstance(rule, TradeRule):
        raise ValueError("rule must be a TradeRule")
    if sample_stride is None:
        sample_stride = max(n_agents // 2, 1)
    if sample_stride < 1:
        raise ValueError("sample_stride must be positive")
    series_start = max(0, min(int(series_start), total_trades))

    rng = SeededRng(seed, stream)
    w = initial_wealth(initial, n_agents, rng)
    total0 = w.sum()
    scale_log = 0.0
    conservative_pointwise = isinstance(rule, PureGambling)

    taus, means, variances = [], [], []

    def record(t):
        m = w.mean()
        var = w.var()
        taus.append(2.0 * t / n_agents)
        if rule.renormalize:
            means.append(1.0)
            variances.append(var / (m * m))
        else:
            means.append(m * math.exp(scale_log))
            variances.append(var * math.exp(2.0 * scale_log))

    max_chunk = _MAX_CHUNK
    if isinstance(rule, SlaninaMix):
        # the raw pair sum shrinks every trade; keep chunks short enough
        # (tau span <= 20) that the rescale below runs before underflow
        max_chunk = min(max_chunk, 10 * n_agents)

    t = 0
    next_sample = series_start if series_start > 0 else sample_stride
    while t < total_trades:
        count = min(max_chunk, total_trades - t, next_sample - t)
        _run_chunk(rule, w, rng, n_agents, count)
        t += count
        if not conservative_pointwise:
            # lazy renormalization: fold the running scale out of the vector
            total = w.sum()
            ratio = total / n_agents
            if rule.renormalize or not (_RESCALE_BAND[0] < ratio < _RESCALE_BAND[1]):
                scale_log += math.log(ratio)
                w *= 1.0 / ratio
        if t == next_sample:
            record(t)
            next_sample = min(t + sample_stride, total_trades)
    if not taus or taus[-1] != 2.0 * total_trades / n_agents:
        record(total_trades)

    if rule.renormalize:
        w_out = w / w.mean()
        drift = 0.0
    else:
        w_out = w * math.exp(scale_log)
        drift = abs(w_out.sum() - total0) / total0
    series = TimeSeries(np.asarray(taus), np.asarray(means),
                        np.asarray(variances))
    population = Population(w_out, total_trades, n_agents)
    return SimulationResult(population, series, rule, seed, stream, drift)


def run_replicas(rule, n_agents, total_trades, seed=0, replicas=1,
                 max_workers=None, **kwargs):
    """Run independent replicas on streams 0..R-1; results ordered by stream.

    Replicas execute concurrently (the compiled kernels release the GIL);
    the merge is by stream index so it is independent of completion order.
    """
    if replicas < 1:
        raise ValueError("replicas must be positive")
    if replicas == 1:
        return [simulate(rule, n_agents, total_trades, seed=seed, stream=0,
                         **kwargs)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(simulate, rule, n_agents, total_trades,
                               seed=seed, stream=r, **kwargs)
                   for r in range(replicas)]
        return [f.result() for f in futures]


def merged_wealth(results):
    """Concatenated snapshot across replicas, in stream order."""
    ordered = sorted(results, key=lambda r: r.stream)
    return np.concatenate([r.population.wealth for r in ordered])


def write_wealth_csv(path, wealth):
    """Snapshot schema: single `wealth` column with header."""
    with open(path, "w") as fh:
        fh.write("wealth\n")
        for x in wealth:
            fh.write("%r\n" % float(x))


def write_series_csv(path, series):
    """Time-series schema: `tau,mean,variance` with header."""
    with open(path, "w") as fh:
        fh.write("tau,mean,variance\n")
        for tau, m, v in zip(series.tau, series.mean, series.variance):
            fh.write("%r,%r,%r\n" % (float(tau), float(m), float(v)))
