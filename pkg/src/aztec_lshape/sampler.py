"""Random weighted tilings of the Aztec diamond by domino shuffling.

A tiling ``T`` of ``A_N`` is drawn with probability
``a**v(T) / (1+a^2)**(N(N+1)/2)``, ``v(T)`` the number of vertical dominoes.
Each shuffling step removes colliding pairs, slides every domino one unit in
its direction and fills the resulting empty 2x2 blocks with two verticals
(odds ``a^2``) or two horizontals (odds 1).

Dominoes are stored on an array by their lower-left cell with codes
1..4 for north, south, east and west.  North/south dominoes are horizontal,
east/west vertical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit, prange

from ._modular import configure_threads
from .errors import ParameterError
from .regions import (DominoType, RegionSpec, aztec_cells, as_weight, build_region,
                      classify_domino, north_completion)

_NORTH, _SOUTH, _EAST, _WEST = 1, 2, 3, 4
_CODES = {_NORTH: DominoType.NORTH, _SOUTH: DominoType.SOUTH,
          _EAST: DominoType.EAST, _WEST: DominoType.WEST}
COLORS = {DominoType.NORTH: "red", DominoType.SOUTH: "yellow",
          DominoType.EAST: "green", DominoType.WEST: "blue"}
BATCH = 2048


def uniforms_needed(N: int) -> int:
    """Upper bound on the number of 2x2 blocks created while growing ``A_N``."""
    return N * (N + 1) * (N + 2) // 6


def _uniforms(seed: int, index: int, count: int) -> np.ndarray:
    # one Philox stream per (seed, sample index)
    key = (int(seed) % 2**64) * 2**64 + int(index)
    return np.random.Generator(np.random.Philox(key=key)).random(count)


@njit(cache=True)
def _shuffle(N, p_vertical, u, grid):
    """Grow ``A_N`` from the empty diamond; ``grid`` is filled in place.

    ``grid[x + N + 1, y + N + 1]`` holds the code of the domino whose
    lower-left cell is ``(x, y)``.  Returns the number of uniforms used.
    """
    off = N + 1
    size = grid.shape[0]
    occ = np.zeros((size, size), dtype=np.bool_)
    moved = np.zeros((size, size), dtype=np.int8)
    used = 0
    for n in range(N):
        # destruction of colliding pairs in A_n
        for x in range(size - 1):
            for y in range(size - 1):
                c = grid[x, y]
                if c == _NORTH and grid[x, y + 1] == _SOUTH:
                    grid[x, y] = 0
                    grid[x, y + 1] = 0
                elif c == _EAST and grid[x + 1, y] == _WEST:
                    grid[x, y] = 0
                    grid[x + 1, y] = 0
        # sliding
        moved[:, :] = 0
        for x in range(size):
            for y in range(size):
                c = grid[x, y]
                if c == _NORTH:
                    moved[x, y + 1] = c
                elif c == _SOUTH:
                    moved[x, y - 1] = c
                elif c == _EAST:
                    moved[x + 1, y] = c
                elif c == _WEST:
                    moved[x - 1, y] = c
        grid[:, :] = moved
        # creation in A_{n+1}
        occ[:, :] = False
        for x in range(size):
            for y in range(size):
                c = grid[x, y]
                if c != 0:
                    occ[x, y] = True
                    if c == _NORTH or c == _SOUTH:
                        occ[x + 1, y] = True
                    else:
                        occ[x, y + 1] = True
        order = n + 1
        for y in range(-order, order):
            half = order + 1 - max(abs(y), abs(y + 1))
            for x in range(-half, half):
                X = x + off
                Y = y + off
                if occ[X, Y]:
                    continue
                occ[X, Y] = True
                occ[X + 1, Y] = True
                occ[X, Y + 1] = True
                occ[X + 1, Y + 1] = True
                if u[used] < p_vertical:
                    grid[X, Y] = _WEST
                    grid[X + 1, Y] = _EAST
                else:
                    grid[X, Y] = _SOUTH
                    grid[X, Y + 1] = _NORTH
                used += 1
    return used


@njit(parallel=True, cache=True)
def _batch_stats(N, p_vertical, u, north_anchors, cut_anchor, check_cut):
    """Per sample: vertical domino count and the frozen-corner indicator."""
    samples = u.shape[0]
    size = 2 * N + 2
    verticals = np.zeros(samples, dtype=np.int64)
    frozen = np.zeros(samples, dtype=np.bool_)
    for s in prange(samples):
        grid = np.zeros((size, size), dtype=np.int8)
        _shuffle(N, p_vertical, u[s], grid)
        v = 0
        for x in range(size):
            for y in range(size):
                if grid[x, y] == _EAST or grid[x, y] == _WEST:
                    v += 1
        verticals[s] = v
        ok = True
        for r in range(north_anchors.shape[0]):
            if grid[north_anchors[r, 0], north_anchors[r, 1]] != _NORTH:
                ok = False
                break
        if ok and check_cut:
            c = grid[cut_anchor[0], cut_anchor[1]]
            if c == _NORTH or c == _SOUTH:
                ok = False
        frozen[s] = ok
    return verticals, frozen


@njit(parallel=True, cache=True)
def _batch_grids(N, p_vertical, u):
    samples = u.shape[0]
    size = 2 * N + 2
    out = np.zeros((samples, size, size), dtype=np.int8)
    for s in prange(samples):
        _shuffle(N, p_vertical, u[s], out[s])
    return out


@dataclass(frozen=True)
class Domino:
    anchor: tuple[int, int]
    vertical: bool
    kind: DominoType

    @property
    def cells(self) -> tuple[tuple[int, int], tuple[int, int]]:
        x, y = self.anchor
        return ((x, y), (x, y + 1)) if self.vertical else ((x, y), (x + 1, y))


@dataclass(frozen=True)
class Tiling:
    """A domino tiling of ``A_N`` together with the seed that produced it."""

    dominoes: tuple
    N: int
    seed: int | None = None

    @property
    def vertical_count(self) -> int:
        return sum(d.vertical for d in self.dominoes)

    def key(self) -> tuple:
        """Hashable canonical form, used to compare and tally tilings."""
        return tuple(sorted((d.anchor, d.vertical) for d in self.dominoes))

    def validate(self) -> None:
        """Raise ``ValueError`` unless the dominoes partition ``A_N`` with consistent types."""
        seen = set()
        for d in self.dominoes:
            c1, c2 = d.cells
            if classify_domino(c1, c2, self.N) != d.kind:
                raise ValueError(f"domino at {d.anchor} has type {d.kind}, expected otherwise")
            for c in (c1, c2):
                if c in seen:
                    raise ValueError(f"cell {c} covered twice")
                seen.add(c)
        if seen != aztec_cells(self.N):
            raise ValueError("dominoes do not cover A_N exactly")


def _tiling_from_grid(grid: np.ndarray, N: int, seed) -> Tiling:
    off = N + 1
    xs, ys = np.nonzero(grid)
    dominoes = []
    for X, Y in zip(xs.tolist(), ys.tolist()):
        code = int(grid[X, Y])
        dominoes.append(Domino((X - off, Y - off), code in (_EAST, _WEST), _CODES[code]))
    dominoes.sort(key=lambda d: (d.anchor[1], d.anchor[0]))
    return Tiling(tuple(dominoes), N, seed)


def _check(N, a):
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise ParameterError(f"N={N} must be a positive integer", "N >= 1")
    w = float(as_weight(a))
    return w * w / (1 + w * w)


def sample_tiling(N: int, a=1, seed: int = 0, index: int = 0) -> Tiling:
    """Exact sample from the weighted measure on tilings of ``A_N``.

    Deterministic in ``(seed, index)``; ``index`` selects an independent stream.
    """
    p = _check(N, a)
    u = _uniforms(seed, index, uniforms_needed(N))
    grid = np.zeros((2 * N + 2, 2 * N + 2), dtype=np.int8)
    _shuffle(N, p, u, grid)
    return _tiling_from_grid(grid, N, seed)


def _frozen_pattern(spec: RegionSpec):
    """Anchors that must carry north dominoes, and the anchor of the forbidden domino."""
    grid = build_region(spec)
    off = spec.N + 1
    anchors = np.array([[c1[0] + off, c1[1] + off] for c1, _ in north_completion(grid)],
                       dtype=np.int64).reshape(-1, 2)
    cut = np.zeros(2, dtype=np.int64)
    if grid.cut is not None:
        x, y = grid.cut[0]
        cut[:] = (x - 1 + off, y + off)
    return anchors, cut, grid.cut is not None


def _run_batches(N, a, samples, seed, anchors, cut, check_cut):
    p = _check(N, a)
    if samples < 1:
        raise ParameterError(f"samples={samples} must be positive", "samples >= 1")
    configure_threads()
    count = uniforms_needed(N)
    verticals, frozen = [], []
    for start in range(0, samples, BATCH):
        stop = min(samples, start + BATCH)
        u = np.stack([_uniforms(seed, i, count) for i in range(start, stop)])
        v, f = _batch_stats(N, p, u, anchors, cut, check_cut)
        verticals.append(v)
        frozen.append(f)
    return np.concatenate(verticals), np.concatenate(frozen)


def sample_grids(N: int, a, samples: int, seed: int = 0) -> np.ndarray:
    """Raw domino arrays of ``samples`` tilings, shape ``(samples, 2N+2, 2N+2)``.

    Sample ``i`` equals ``sample_tiling(N, a, seed, index=i)``.
    """
    p = _check(N, a)
    configure_threads()
    count = uniforms_needed(N)
    out = []
    for start in range(0, samples, BATCH):
        stop = min(samples, start + BATCH)
        u = np.stack([_uniforms(seed, i, count) for i in range(start, stop)])
        out.append(_batch_grids(N, p, u))
    return np.concatenate(out)


def tiling_from_grid(grid: np.ndarray, N: int, seed=None) -> Tiling:
    """:class:`Tiling` from one array returned by :func:`sample_grids`."""
    return _tiling_from_grid(grid, N, seed)


def vertical_counts(N: int, a, samples: int, seed: int = 0) -> np.ndarray:
    """Number of vertical dominoes in ``samples`` independent tilings."""
    empty = np.zeros((0, 2), dtype=np.int64)
    v, _ = _run_batches(N, a, samples, seed, empty, np.zeros(2, dtype=np.int64), False)
    return v


def expected_vertical_count(N: int, a) -> float:
    """``N(N+1) a^2 / (1+a^2)``, the mean of ``v(T)``."""
    w = float(as_weight(a))
    return N * (N + 1) * w * w / (1 + w * w)


def estimate_frozen_probability(N: int, m: int, k: int, eps: int, a, samples: int,
                                seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo frequency of a north-frozen removed corner.

    The event is that every cell of ``A_N`` outside the region of
    ``F_N^{m,k}(a; eps)`` is covered by north dominoes and, for ``eps = 0``,
    that no domino crosses the removed unit segment.  Returns
    ``(estimate, stderr)``; with no successes the second entry is the
    one-sided 95% upper bound ``3/samples`` instead of a standard error.
    """
    spec = RegionSpec.lshape(N, m, k, eps)
    if not spec.tileable:
        raise ParameterError(f"k={k} gives an untileable region", "k >= 1")
    anchors, cut, check_cut = _frozen_pattern(spec)
    _, frozen = _run_batches(N, a, samples, seed, anchors, cut, check_cut)
    hits = int(frozen.sum())
    est = hits / samples
    if hits == 0:
        return 0.0, 3.0 / samples
    return est, math.sqrt(est * (1 - est) / samples)


def tiling_svg(t: Tiling, scale: float = 12.0) -> str:
    """SVG of the tiling: north red, south yellow, east green, west blue."""
    N = t.N
    lo, hi = -N - 1, N + 1
    size = (hi - lo) * scale
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" '
             f'height="{size:g}" viewBox="0 0 {size:g} {size:g}">']
    for d in t.dominoes:
        x, y = d.anchor
        w, h = (1, 2) if d.vertical else (2, 1)
        parts.append(f'<rect x="{(x - lo) * scale:g}" y="{(hi - y - h) * scale:g}" '
                     f'width="{w * scale:g}" height="{h * scale:g}" fill="{COLORS[d.kind]}" '
                     f'stroke="black" stroke-width="0.5" data-type="{d.kind.value}"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def render_svg(t: Tiling, path, scale: float = 12.0) -> Path:
    """Write :func:`tiling_svg` to ``path``."""
    path = Path(path)
    path.write_text(tiling_svg(t, scale))
    return path
