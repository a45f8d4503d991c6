"""Laplace-transform fixed-point machinery for the stationary equations.

A sampled transform lives on a grid with a node at 0 followed by
geometrically spaced nodes up to xi_max (the geometric spacing resolves
the sqrt(xi) cusp of the Slanina transform near 0).  Interpolation over
the positive nodes is monotone cubic (PCHIP) applied in
(sqrt(xi), -log value) coordinates: the supported transforms are analytic
in sqrt(xi) and the log flattens their decay, which is what keeps 256-node
grids inside the 1e-6 residual budget; plain interpolation of the raw
values cannot resolve the cusp at that node count.  Below the first
positive node the transform is represented by a local expansion
1 + c1 u + c2 u^{3/2} + c3 u^2 + c4 u^{5/2} fitted through spread-out
leading nodes (the huge spacing jump between the node at 0 and the
geometric part would otherwise wreck the PCHIP slope estimates there);
c1 is also the one-sided derivative-at-zero estimate.  Arguments beyond
the last node use the analytic continuation supplied with the grid when
one is known, otherwise a power-law decay matched to the last decade of
nodes.

The stationary right-hand side <fhat(xi eps)^2> is integrated with a
128-node Gauss-Jacobi rule that absorbs the Beta density of the law
exactly (it reduces to Gauss-Legendre for the uniform law and stays
spectrally accurate for the singular a < 1 densities).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import interpolate, special

from .equilibria import EquilibriumFamily, equilibrium_sample
from .fraction_laws import (DiracHalf, InverseBetaQuarter, SlaninaPQ,
                            SymmetricBeta, Uniform01, sample_fraction_pairs)
from .special import log_beta

QUAD_NODES = 128
MIN_GRID_LEN = 16
_UPPER_OCTAVES = 15
_TOTAL_OCTAVES = 24
_DEEP_NODES = 12
_VALUE_FLOOR = 1e-300


@dataclass
class TransformGrid:
    """Sampled Laplace transform on [0, xi_max] plus its tail continuation."""

    xi: np.ndarray
    values: np.ndarray
    derivative_at_zero: Optional[float] = None
    tail: Optional[Callable] = None
    _interp: interpolate.PchipInterpolator = field(init=False, repr=False)
    _tail_exponent: float = field(init=False, repr=False)

    def __post_init__(self):
        self.xi = np.asarray(self.xi, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.xi.ndim != 1 or self.xi.shape != self.values.shape:
            raise ValueError("xi and values must be 1-d arrays of equal length")
        if len(self.xi) < MIN_GRID_LEN:
            raise ValueError("grid needs at least %d nodes" % MIN_GRID_LEN)
        if self.xi[0] != 0.0:
            raise ValueError("grid must start at xi = 0")
        if np.any(np.diff(self.xi) <= 0.0):
            raise ValueError("xi nodes must be strictly increasing")
        if abs(self.values[0] - 1.0) > 1e-9:
            raise ValueError("values[0] must equal 1 (normalization)")
        if np.any(self.values < -1e-12) or np.any(self.values > 1.0 + 1e-9):
            raise ValueError("values must lie in [0, 1]")
        if np.any(np.diff(self.values) > 1e-12):
            raise ValueError("values must be nonincreasing in xi")
        # the interpolant starts where the grid becomes dense; sparse deep
        # nodes only anchor the head expansion (PCHIP slope estimates are
        # unreliable across abrupt spacing jumps)
        ratios = self.xi[2:] / self.xi[1:-1]
        dense = np.nonzero(ratios < 1.2)[0]
        self._dense_start = int(dense[0]) + 1 if len(dense) else 1
        logv = -np.log(np.maximum(self.values[self._dense_start:],
                                  _VALUE_FLOOR))
        self._interp = interpolate.PchipInterpolator(
            np.sqrt(self.xi[self._dense_start:]), logv)
        self._head_coeffs = _leading_expansion(self.xi, self.values)
        self._tail_exponent = self._fit_tail_exponent()
        if self.derivative_at_zero is None:
            self.derivative_at_zero = float(self._head_coeffs[0])

    def _fit_tail_exponent(self):
        # log-log slope over the last decade of nodes
        mask = self.xi >= self.xi[-1] / 10.0
        lx = np.log(self.xi[mask])
        lv = np.log(np.maximum(self.values[mask], _VALUE_FLOOR))
        slope = np.polyfit(lx, lv, 1)[0]
        return max(-slope, 0.0)

    def evaluate(self, u):
        """Transform value at arbitrary u >= 0 (scalar or array)."""
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        if np.any(u < 0.0):
            raise ValueError("transform argument must be >= 0")
        out = np.empty_like(u)
        head = u < self.xi[self._dense_start]
        if head.any():
            uh = u[head]
            c1, c2, c3, c4 = self._head_coeffs
            out[head] = (self.values[0] + c1 * uh + c2 * uh ** 1.5
                         + c3 * uh ** 2 + c4 * uh ** 2.5)
        inside = ~head & (u <= self.xi[-1])
        if inside.any():
            out[inside] = np.exp(-self._interp(np.sqrt(u[inside])))
        beyond = u > self.xi[-1]
        if beyond.any():
            if self.tail is not None:
                out[beyond] = [self.tail(float(x)) for x in u[beyond]]
            else:
                out[beyond] = self.values[-1] * (
                    u[beyond] / self.xi[-1]) ** (-self._tail_exponent)
        np.clip(out, 0.0, 1.0, out=out)
        return float(out[0]) if scalar else out


def geometric_grid(xi_max, nodes, total_octaves=_TOTAL_OCTAVES):
    """Node at 0 plus geometric spacing on (2^-total_octaves * xi_max, xi_max].

    Two geometric segments: a dense upper one with a power-of-two steps-
    per-octave count (so halving a node lands exactly on a node, which the
    DiracHalf map exploits) and a short coarse tail of deep nodes that
    anchor the derivative fit at 0.
    """
    if xi_max <= 0.0:
        raise ValueError("xi_max must be positive")
    if nodes < MIN_GRID_LEN:
        raise ValueError("need at least %d nodes" % MIN_GRID_LEN)
    n_pos = nodes - 1
    n_deep = min(_DEEP_NODES, n_pos // 2)
    n_up = n_pos - n_deep
    # steps per octave: power of two in [4, 64], about n_up/_UPPER_OCTAVES;
    # k/steps is then exact in binary
    steps_exp = 2
    if n_up >= 4 * _UPPER_OCTAVES:
        steps_exp = min(6, int(math.log2(n_up / _UPPER_OCTAVES)))
    steps = 2 ** steps_exp
    up = np.arange(n_up) / steps
    deep_end = max(float(total_octaves), up[-1] + 3.0)
    deep = np.linspace(up[-1], deep_end, n_deep + 1)[1:]
    exponents = np.concatenate([up, deep])
    xi = np.empty(nodes)
    xi[0] = 0.0
    xi[1:] = xi_max * np.exp2(-exponents[::-1])
    return xi


def grid_from_function(fn, xi_max, nodes=256, analytic_tail=True):
    """Sample a transform on the standard grid, keeping fn as continuation."""
    xi = geometric_grid(xi_max, nodes)
    values = np.array([fn(x) for x in xi], dtype=float)
    return TransformGrid(xi, values, tail=fn if analytic_tail else None)


def _leading_expansion(xi, values):
    """Coefficients (c1, c2, c3, c4) of the head model near xi = 0.

    Interpolates 1 + c1 u + c2 u^{3/2} + c3 u^2 + c4 u^{5/2} through four
    leading nodes spaced roughly by doubling; the half-integer powers
    absorb the cusp of the inverse-Beta transforms, which a plain two-point
    difference cannot (its derivative error decays only like sqrt(xi1)).
    """
    idx = [1]
    for _ in range(3):
        nxt = int(np.searchsorted(xi, 2.0 * xi[idx[-1]]))
        idx.append(min(max(nxt, idx[-1] + 1), len(xi) - 1))
    if len(set(idx)) < 4:
        idx = [1, 2, 3, 4]
    nodes = xi[idx]
    a = np.column_stack([nodes, nodes ** 1.5, nodes ** 2, nodes ** 2.5])
    b = values[idx] - values[0]
    return np.linalg.solve(a, b)


def derivative_at_zero_estimate(xi, values):
    """One-sided derivative of the transform at xi = 0 (head-model slope)."""
    xi = np.asarray(xi, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(xi) < 5:
        raise ValueError("need at least 4 positive nodes")
    return float(_leading_expansion(xi, values)[0])


def law_expectation_rule(law, n_nodes=QUAD_NODES):
    """Quadrature nodes/weights for expectations over the law's density.

    Gauss-Jacobi with the Beta weight absorbed exactly; weights sum to 1.
    """
    if isinstance(law, DiracHalf):
        return np.array([0.5]), np.array([1.0])
    if isinstance(law, Uniform01):
        law = SymmetricBeta(1.0)
    if isinstance(law, SymmetricBeta):
        p = q = law.a - 1.0
        bnorm = log_beta(law.a, law.a)
    elif isinstance(law, InverseBetaQuarter):
        p = law.a - 0.5
        q = law.a - 1.5
        bnorm = log_beta(law.a + 0.5, law.a - 0.5)
    else:
        raise ValueError("no quadrature rule for law %r" % (law,))
    nodes, weights = special.roots_jacobi(n_nodes, q, p)
    x = 0.5 * (nodes + 1.0)
    w = weights * math.exp(-(p + q + 1.0) * math.log(2.0) - bnorm)
    return x, w


def _rhs_values(grid, law, xi_nodes):
    x, w = law_expectation_rule(law)
    if isinstance(law, DiracHalf):
        return grid.evaluate(0.5 * np.asarray(xi_nodes)) ** 2
    if isinstance(law, InverseBetaQuarter):
        args = np.asarray(xi_nodes)[:, None] / (4.0 * x[None, :])
    else:
        args = np.asarray(xi_nodes)[:, None] * x[None, :]
    vals = grid.evaluate(args)
    return (vals * vals) @ w


def stationary_residual(grid, law):
    """Sup-norm residual of fhat(xi) = <fhat(xi eps)^2> over the grid nodes."""
    if isinstance(law, SlaninaPQ):
        raise ValueError("SlaninaPQ stationarity is the rescaled ODE; "
                         "use slanina_ode_residual")
    if not isinstance(law, (Uniform01, SymmetricBeta, InverseBetaQuarter,
                            DiracHalf)):
        raise ValueError("unsupported law %r" % (law,))
    rhs = _rhs_values(grid, law, grid.xi)
    return float(np.max(np.abs(rhs - grid.values)))


@dataclass
class PicardResult:
    grid: TransformGrid
    converged: bool
    iterations: int
    sup_change: float
    derivative_drift: float


def picard_solve(law, xi_max, nodes=256, max_iters=200, tol=1e-8):
    """Iterate fhat <- <fhat(xi eps)^2> from e^{-xi} until stationary.

    Starts from the transform of the all-equal-1 state.  The stationary
    equation has a neutral scale direction (fhat(c xi) solves it for every
    c > 0; the unit-mean condition fhat'(0) = -1 selects c), so after each
    application the iterate is rescaled in xi to re-pin the one-sided
    slope estimate at -1; without the pin, per-application discretization
    bias drifts along the scale family and the iteration stalls above any
    useful tolerance.  Each iterate stays a valid transform (normalized,
    nonincreasing).  Non-convergence is reported, not hidden.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    xi = geometric_grid(xi_max, nodes)
    values = np.exp(-xi)
    sup_change = math.inf
    drift = 0.0
    iterations = 0
    converged = False
    grid = TransformGrid(xi, values.copy())
    for iterations in range(1, max_iters + 1):
        new_values = _rhs_values(grid, law, xi)
        np.clip(new_values, 0.0, 1.0, out=new_values)
        stepped = TransformGrid(xi, new_values.copy())
        drift = max(drift, abs(stepped.derivative_at_zero + 1.0))
        scale = -stepped.derivative_at_zero
        if scale > 0.0 and abs(scale - 1.0) > 1e-15:
            pinned = stepped.evaluate(xi / scale)
            pinned[0] = new_values[0]
            np.clip(pinned, 0.0, 1.0, out=pinned)
            np.minimum.accumulate(pinned, out=pinned)
            new_values = pinned
        sup_change = float(np.max(np.abs(new_values - values)))
        values = new_values
        grid = TransformGrid(xi, values.copy())
        if sup_change < tol:
            converged = True
            break
    return PicardResult(grid, converged, iterations, sup_change, drift)


def slanina_ode_residual(xi, p, q):
    """Residual of the rescaled steady ODE at the explicit Slanina transform.

    LHS xi (p+q-1) dghat/dxi minus RHS ghat(p xi) ghat(q xi) - ghat(xi),
    with ghat(xi) = (1 + sqrt(2 xi)) e^{-sqrt(2 xi)} and analytic
    derivative dghat/dxi = -e^{-sqrt(2 xi)}.
    """
    SlaninaPQ(p, q)
    if xi <= 0.0:
        raise ValueError("slanina_ode_residual requires xi > 0")

    def ghat(z):
        s = math.sqrt(2.0 * z)
        return (1.0 + s) * math.exp(-s)

    lhs = xi * (p + q - 1.0) * (-math.exp(-math.sqrt(2.0 * xi)))
    rhs = ghat(p * xi) * ghat(q * xi) - ghat(xi)
    return lhs - rhs


def tree_sample(law, depth, base, rng, size=1):
    """Sample the distributional recursion Z = eps (Z1 + Z2) at finite depth.

    The pool of `size` samples is advanced level-synchronously: every
    element gets a fresh fraction (eps1 of a new pair) and two parents
    resampled from the previous level, so leaves are `base` draws and depth
    0 returns them unchanged.  A literal per-sample expansion costs 2^depth
    and is infeasible at the depths the verification runs need; pooled
    resampling reproduces the level-d law up to O(1/size) dependence.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = int(size)
    if n < 1:
        raise ValueError("size must be positive")
    if base == "all-equal-1":
        z = np.ones(n)
    elif isinstance(base, EquilibriumFamily):
        z = equilibrium_sample(base, rng, n)
    else:
        raise ValueError("base must be 'all-equal-1' or an EquilibriumFamily")
    for _ in range(depth):
        left = rng.integers(0, n, n)
        right = rng.integers(0, n, n)
        eps1, _ = sample_fraction_pairs(law, rng, n)
        z = eps1 * (z[left] + z[right])
    return z


def write_grid_csv(path, grid):
    """Grid schema: `xi,value` with header."""
    with open(path, "w") as fh:
        fh.write("xi,value\n")
        for x, v in zip(grid.xi, grid.values):
            fh.write("%r,%r\n" % (float(x), float(v)))
