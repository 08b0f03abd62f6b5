"""Banded determinants modulo word-size primes, compiled with numba.

Primes stay below ``2**31`` so that a product of two residues fits in a
signed 64-bit integer.
"""

import os

import numba
import numpy as np
from numba import njit, prange

THREADS_ENV = "AZTEC_LSHAPE_THREADS"

# the bundled TBB is too old for numba; prefer the other backends
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def configure_threads():
    """Apply the thread count requested through ``AZTEC_LSHAPE_THREADS``."""
    value = os.environ.get(THREADS_ENV)
    if value:
        numba.set_num_threads(max(1, min(int(value), numba.config.NUMBA_NUM_THREADS)))


@njit(cache=True)
def _inverse(x, p):
    # Fermat: x**(p-2) mod p
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit(cache=True)
def _band_det_mod(rows, cols, vals, n, kl, ku, p, ab):
    width = 2 * kl + ku + 1
    for i in range(n):
        for j in range(width):
            ab[i, j] = 0
    for t in range(rows.shape[0]):
        i = rows[t]
        ab[i, cols[t] - i + kl] = vals[t] % p
    det = 1
    for c in range(n):
        last = min(n - 1, c + kl)
        piv = -1
        for r in range(c, last + 1):
            if ab[r, c - r + kl] != 0:
                piv = r
                break
        if piv < 0:
            return 0
        jmax = min(n - 1, c + kl + ku)
        if piv != c:
            for j in range(c, jmax + 1):
                tmp = ab[c, j - c + kl]
                ab[c, j - c + kl] = ab[piv, j - piv + kl]
                ab[piv, j - piv + kl] = tmp
            det = (p - det) % p
        pivot = ab[c, kl]
        det = det * pivot % p
        inv = _inverse(pivot, p)
        for r in range(c + 1, last + 1):
            f = ab[r, c - r + kl]
            if f == 0:
                continue
            f = f * inv % p
            for j in range(c + 1, jmax + 1):
                v = (ab[r, j - r + kl] - f * ab[c, j - c + kl]) % p
                ab[r, j - r + kl] = v
    return det


@njit(parallel=True, cache=True)
def band_det_residues(rows, cols, vals, n, kl, ku, primes):
    """Determinant of a sparse banded integer matrix modulo each prime.

    ``rows``, ``cols``, ``vals`` list the nonzero entries; ``kl`` and ``ku``
    are the lower and upper bandwidths.
    """
    out = np.empty(primes.shape[0], dtype=np.int64)
    width = 2 * kl + ku + 1
    for q in prange(primes.shape[0]):
        ab = np.empty((n, width), dtype=np.int64)
        out[q] = _band_det_mod(rows, cols, vals, n, kl, ku, primes[q], ab)
    return out
