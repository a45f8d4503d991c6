"""Compiled inner loops for the trade dynamics.

Each kernel applies a precomputed batch of trades sequentially to the
wealth vector; all randomness (pair indices, fractions) is drawn outside
by the seeded generator, so the kernels are deterministic.  The pure
kernel writes the partner wealth as s - eps*s so the pair sum is conserved
to the last rounding of s = v + w.
"""

from numba import njit


@njit(cache=True, nogil=True)
def pure_trades(w, i_idx, j_idx, eps):
    for k in range(i_idx.shape[0]):
        i = i_idx[k]
        j = j_idx[k]
        s = w[i] + w[j]
        vi = eps[k] * s
        w[i] = vi
        w[j] = s - vi


@njit(cache=True, nogil=True)
def dirac_trades(w, i_idx, j_idx):
    for k in range(i_idx.shape[0]):
        i = i_idx[k]
        j = j_idx[k]
        half = 0.5 * (w[i] + w[j])
        w[i] = half
        w[j] = half


@njit(cache=True, nogil=True)
def mean_trades(w, i_idx, j_idx, eps1, eps2):
    for k in range(i_idx.shape[0]):
        i = i_idx[k]
        j = j_idx[k]
        s = w[i] + w[j]
        w[i] = eps1[k] * s
        w[j] = eps2[k] * s


@njit(cache=True, nogil=True)
def slanina_trades(w, i_idx, j_idx, p, q):
    for k in range(i_idx.shape[0]):
        i = i_idx[k]
        j = j_idx[k]
        vi = w[i]
        wj = w[j]
        w[i] = p * vi + q * wj
        w[j] = q * vi + p * wj
