"""Exact weighted tiling counts ``F = sum_T a**v(T)``.

Two independent routes are provided:

* :func:`count_enumerate` sums over perfect matchings directly with a
  memoized frontier recursion.  It is only meant for small regions and acts
  as the oracle for the second route.
* :func:`count_determinant` evaluates a Kasteleyn-signed bipartite
  adjacency determinant exactly, by reduction modulo many primes followed by
  Chinese remaindering up to a certified Hadamard bound.

For ``a = r/s`` the determinant is taken with integer weights ``r``
(vertical) and ``s`` (horizontal), which multiplies every tiling weight by
``s**n`` where ``n`` is the number of dominoes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
import sympy

from . import _modular
from .errors import CapacityError, ParameterError, UntileableError
from .regions import (
    FULL,
    MatchingGraph,
    RegionSpec,
    as_weight,
    build_graph,
    build_region,
)

ENUMERATION_LIMIT = 60
PRIME_CEILING = 2**31
LOG_DPS = 30


@dataclass(frozen=True)
class ExactCount:
    """Exact weighted count with a high-precision logarithm.

    ``log_value`` is ``-inf`` for untileable regions.
    """

    value: Fraction
    log_value: mpmath.mpf
    method: str

    @property
    def tileable(self) -> bool:
        return self.value > 0

    @property
    def log10(self) -> float:
        return float(self.log_value / mpmath.log(10))


def exact_log(x: Fraction) -> mpmath.mpf:
    """Natural log of a nonnegative rational at ``LOG_DPS`` digits."""
    with mpmath.workdps(LOG_DPS):
        if x == 0:
            return mpmath.mpf("-inf")
        return mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))


def _result(value: Fraction, method: str) -> ExactCount:
    return ExactCount(value, exact_log(value), method)


def count_enumerate(graph: MatchingGraph) -> ExactCount:
    """Sum of ``a**v(T)`` over all perfect matchings, by exhaustive recursion.

    Cells are covered in column-major order; the memo key is the set of
    already-covered cells ahead of the current one, encoded as a bitmask.
    """
    cells = sorted(graph.black + graph.white)
    if len(cells) > ENUMERATION_LIMIT:
        raise CapacityError(
            f"enumeration limited to {ENUMERATION_LIMIT} cells, got {len(cells)}"
        )
    if not graph.balanced:
        return _result(Fraction(0), "enumerate")
    index = {c: n for n, c in enumerate(cells)}
    # each cell pairs with a later cell: the one above, or the one to the right
    forward: list[list[tuple[int, Fraction]]] = [[] for _ in cells]
    for e in graph.edges:
        c1, c2 = e.cells
        i1, i2 = sorted((index[c1], index[c2]))
        forward[i1].append((i2, e.weight))
    total = len(cells)

    @lru_cache(maxsize=None)
    def walk(pos: int, covered: int) -> Fraction:
        while pos < total and covered >> pos & 1:
            pos += 1
        if pos == total:
            return Fraction(1)
        acc = Fraction(0)
        for other, w in forward[pos]:
            if not covered >> other & 1:
                acc += w * walk(pos + 1, covered | (1 << other))
        return acc

    value = walk(0, 0)
    walk.cache_clear()
    return _result(value, "enumerate")


@lru_cache(maxsize=None)
def _prime_block(start: int, count: int) -> tuple[int, ...]:
    primes = []
    p = start
    while len(primes) < count:
        p = sympy.prevprime(p)
        primes.append(p)
    return tuple(primes)


def primes_below_ceiling(count: int) -> np.ndarray:
    """The ``count`` largest primes below ``2**31``, in decreasing order."""
    return np.array(_prime_block(PRIME_CEILING, count), dtype=np.int64)


@dataclass(frozen=True)
class KasteleynMatrix:
    """Sparse signed integer adjacency, rows black cells, columns white cells."""

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    n: int
    kl: int
    ku: int

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int64)
        out[self.rows, self.cols] = self.vals
        return out

    def hadamard_bound_squared(self) -> int:
        """Square of the product of the row norms, an upper bound for ``det**2``."""
        norms = [0] * self.n
        for i, v in zip(self.rows.tolist(), self.vals.tolist()):
            norms[i] += v * v
        return math.prod(norms)


def kasteleyn_matrix(graph: MatchingGraph, vertical_weight: int = 1,
                     horizontal_weight: int = 1, orientation: str = "columns") -> KasteleynMatrix:
    """Signed adjacency with a Kasteleyn signing of the square lattice.

    ``orientation="columns"`` puts the sign ``(-1)**x`` on the vertical edge
    in column ``x``; ``orientation="rows"`` puts ``(-1)**y`` on the
    horizontal edge in row ``y``.  Both make every unit square face carry an
    odd number of minus signs, and deleting edges keeps the property.
    Cells are ordered row by row, which keeps the bandwidth near ``N``.
    """
    if orientation not in ("columns", "rows"):
        raise ParameterError(f"unknown orientation {orientation!r}", "orientation")
    if not graph.balanced:
        raise ParameterError("colour classes differ in size", "balanced")
    row_major = lambda c: (c[1], c[0])  # noqa: E731
    border = sorted(range(len(graph.black)), key=lambda b: row_major(graph.black[b]))
    worder = sorted(range(len(graph.white)), key=lambda w: row_major(graph.white[w]))
    brank = {b: r for r, b in enumerate(border)}
    wrank = {w: r for r, w in enumerate(worder)}
    rows, cols, vals = [], [], []
    for e in graph.edges:
        (x, y), _ = e.cells
        if e.vertical:
            v = vertical_weight
            if orientation == "columns" and x % 2:
                v = -v
        else:
            v = horizontal_weight
            if orientation == "rows" and y % 2:
                v = -v
        rows.append(brank[e.black])
        cols.append(wrank[e.white])
        vals.append(v)
    rows_a = np.array(rows, dtype=np.int64)
    cols_a = np.array(cols, dtype=np.int64)
    n = len(graph.black)
    kl = int(max(0, (rows_a - cols_a).max())) if rows else 0
    ku = int(max(0, (cols_a - rows_a).max())) if rows else 0
    return KasteleynMatrix(rows_a, cols_a, np.array(vals, dtype=np.int64), n, kl, ku)


def modular_determinant(matrix: KasteleynMatrix, batch: int = 64) -> int:
    """Exact integer determinant by multimodular reduction.

    Primes are consumed in batches until their product exceeds twice the
    Hadamard bound, so the symmetric residue is certified to be the
    determinant.
    """
    if matrix.n == 0:
        return 1
    _modular.configure_threads()
    bound_sq = matrix.hadamard_bound_squared()
    if bound_sq == 0:
        return 0
    # need M > 2B, i.e. M**2 > 4 B**2
    need_bits = (4 * bound_sq).bit_length() // 2 + 2
    est = need_bits // 30 + 1
    value, modulus, used = 0, 1, 0
    while modulus.bit_length() <= need_bits:
        count = max(batch, est - used) if used == 0 else batch
        primes = primes_below_ceiling(used + count)[used:]
        residues = _modular.band_det_residues(
            matrix.rows, matrix.cols, matrix.vals, matrix.n, matrix.kl, matrix.ku, primes
        )
        for p, r in zip(primes.tolist(), residues.tolist()):
            # Garner step: keep value = residue mod modulus*p
            t = (r - value) * pow(modulus % p, -1, p) % p
            value += modulus * t
            modulus *= p
        used += count
    if value > modulus // 2:
        value -= modulus
    return value


def count_determinant(graph: MatchingGraph, a=None, orientation: str = "columns") -> ExactCount:
    """Exact ``sum_T a**v(T)`` as ``|det K| / s**n`` with integer weights."""
    a = graph.a if a is None else as_weight(a)
    if a != graph.a:
        graph = build_graph(graph.grid, a)
    if not graph.balanced:
        return _result(Fraction(0), "determinant")
    r, s = a.numerator, a.denominator
    matrix = kasteleyn_matrix(graph, r, s, orientation)
    det = abs(modular_determinant(matrix))
    return _result(Fraction(det, s**matrix.n), "determinant")


METHODS = ("auto", "enumerate", "determinant")


def count(spec: RegionSpec, a, method: str = "auto") -> ExactCount:
    """Exact count for a region specification.

    ``method="auto"`` uses the determinant route.
    """
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}", "method")
    graph = build_graph(build_region(spec), as_weight(a))
    if method == "enumerate":
        return count_enumerate(graph)
    return count_determinant(graph)


def aztec_closed_form(N: int, a) -> Fraction:
    """``(1 + a**2)**(N(N+1)/2)``, the weighted count of ``A_N``."""
    a = as_weight(a)
    return (1 + a * a) ** (N * (N + 1) // 2)


def mirror_closed_form(N: int, m: int, epsilon: int, a) -> Fraction:
    """Weighted count of the reduced region at ``k = 1``.

    The region splits into two disjoint Aztec diamonds, of orders
    ``m - 1 + epsilon`` and ``N - m``.
    """
    a = as_weight(a)
    return (1 + a * a) ** (N * (N + 1) // 2 - m * (N + epsilon - m))


def _check_neighbours(high: RegionSpec, low: RegionSpec):
    same = (high.N, high.m, high.epsilon, high.variant) == (low.N, low.m, low.epsilon, low.variant)
    if not same or high.k != low.k + 1 or high.variant == FULL:
        raise ParameterError("specs must differ only by k -> k+1", "k_high = k_low + 1")


def ratio(spec_high: RegionSpec, spec_low: RegionSpec, a, method: str = "auto") -> Fraction:
    """``F_N^{m,k+1} / F_N^{m,k}`` for two specs differing only in ``k``."""
    _check_neighbours(spec_high, spec_low)
    low = count(spec_low, a, method).value
    if low == 0:
        raise UntileableError(f"region with k={spec_low.k} has no tilings")
    return count(spec_high, a, method).value / low


def frozen_probability(spec: RegionSpec, a, method: str = "auto") -> Fraction:
    """Probability that a weighted random tiling of ``A_N`` contains the frozen corner."""
    if spec.variant == FULL:
        raise ParameterError("frozen probability needs a reduced region", "variant")
    if not spec.tileable:
        raise UntileableError(f"region with k={spec.k} has no tilings")
    return count(spec, a, method).value / aztec_closed_form(spec.N, a)
