"""Aztec diamonds, their L-shaped reductions and the dimer graph on the cells.

Cells are unit squares ``[i, i+1] x [j, j+1]`` addressed by their integer
lower-left corner ``(i, j)``.  The Aztec diamond of order ``N`` consists of
the ``2N(N+1)`` cells inside ``|x| + |y| <= N + 1``; the L-shaped domain
``A_N^{m,k}`` additionally drops every cell that meets the open wedge above
the two lines ``y = 2m-1-N-x`` and ``y = x-2m-1+N+2k``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ParameterError, StructureError

FULL = "full"
REDUCED = "reduced"
REDUCED_TILDE = "reduced-tilde"
VARIANTS = (FULL, REDUCED, REDUCED_TILDE)

Cell = tuple[int, int]


class DominoType(str, enum.Enum):
    NORTH = "N"
    SOUTH = "S"
    EAST = "E"
    WEST = "W"


def as_weight(a) -> Fraction:
    """Convert ``a`` to an exact rational in ``(0, 1]``.

    Accepts ints, Fractions, decimal strings, ``"p/q"`` strings and floats
    (floats go through their shortest repr, so ``0.7845`` becomes
    ``1569/2000``).
    """
    if isinstance(a, Fraction):
        w = a
    elif isinstance(a, float):
        w = Fraction(repr(a))
    else:
        try:
            w = Fraction(a)
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"cannot read weight {a!r}", "a rational") from exc
    if not 0 < w <= 1:
        raise ParameterError(f"weight a={w} outside (0, 1]", "0 < a <= 1")
    return w


@dataclass(frozen=True)
class RegionSpec:
    """Parameters of ``A_N``, ``A_N^{m,k}`` (epsilon=1) or ``~A_N^{m,k}`` (epsilon=0)."""

    N: int
    m: int = 0
    k: int = 0
    epsilon: int = 1
    variant: str = FULL

    def __post_init__(self):
        if self.N < 1:
            raise ParameterError(f"N={self.N} must be positive", "N >= 1")
        if self.variant not in VARIANTS:
            raise ParameterError(f"unknown variant {self.variant!r}", "variant")
        if self.epsilon not in (0, 1):
            raise ParameterError(f"epsilon={self.epsilon} not in {{0, 1}}", "epsilon in {0,1}")
        if self.variant == FULL:
            return
        expected = 1 if self.variant == REDUCED else 0
        if self.epsilon != expected:
            raise ParameterError(
                f"variant {self.variant} requires epsilon={expected}", "epsilon/variant"
            )
        lo = 1 if self.variant == REDUCED else 0
        if not lo <= self.m <= self.N:
            raise ParameterError(
                f"m={self.m} outside [{lo}, N={self.N}]", f"{lo} <= m <= N"
            )
        if self.k > self.m + 1:
            raise ParameterError(f"k={self.k} exceeds m+1={self.m + 1}", "k <= m+1")

    @classmethod
    def full(cls, N: int) -> "RegionSpec":
        return cls(N=N, m=N, k=N + 1, epsilon=1, variant=FULL)

    @classmethod
    def lshape(cls, N: int, m: int, k: int, epsilon: int = 1) -> "RegionSpec":
        """The domain counted by ``F_N^{m,k}(a; epsilon)``."""
        if epsilon not in (0, 1):
            raise ParameterError(f"epsilon={epsilon} not in {{0, 1}}", "epsilon in {0,1}")
        return cls(N=N, m=m, k=k, epsilon=epsilon,
                   variant=REDUCED if epsilon == 1 else REDUCED_TILDE)

    @property
    def tileable(self) -> bool:
        return self.variant == FULL or self.k >= 1

    def with_k(self, k: int) -> "RegionSpec":
        return RegionSpec(self.N, self.m, k, self.epsilon, self.variant)

    def to_dict(self) -> dict:
        return {"N": self.N, "m": self.m, "k": self.k,
                "epsilon": self.epsilon, "variant": self.variant}


@dataclass(frozen=True)
class CellGrid:
    """Cell set of a region, plus the unit segment that no domino may cross."""

    spec: RegionSpec
    cells: frozenset
    cut: tuple[Cell, Cell] | None = None

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell):
        return cell in self.cells

    def sorted_cells(self) -> list[Cell]:
        """Cells in column-major order."""
        return sorted(self.cells)

    def classify(self, c1: Cell, c2: Cell) -> DominoType:
        return classify_domino(c1, c2, self.spec.N)

    def to_json(self) -> str:
        payload = self.spec.to_dict()
        payload["cells"] = [list(c) for c in self.sorted_cells()]
        return json.dumps(payload)


def aztec_cells(N: int) -> frozenset:
    """The ``2N(N+1)`` cells of the Aztec diamond ``A_N``."""
    cells = set()
    for j in range(-N, N):
        # row [j, j+1]: both horizontal edges must satisfy |x| + |y| <= N + 1
        half = N + 1 - max(abs(j), abs(j + 1))
        for i in range(-half, half):
            cells.add((i, j))
    return frozenset(cells)


def in_removed_wedge(cell: Cell, N: int, m: int, k: int) -> bool:
    """Does the cell meet the open wedge cut out of ``A_N`` to form ``A_N^{m,k}``?"""
    i, j = cell
    # the wedge boundary max(2m-1-N-x, x-2m-1+N+2k) is convex with its
    # minimum k-1 at x = 2m-N-k
    x = min(max(2 * m - N - k, i), i + 1)
    floor = max(2 * m - 1 - N - x, x - 2 * m - 1 + N + 2 * k)
    return j + 1 > floor


def lshape_cells(N: int, m: int, k: int) -> frozenset:
    return frozenset(c for c in aztec_cells(N) if not in_removed_wedge(c, N, m, k))


def tilde_cut(N: int, m: int, k: int) -> tuple[Cell, Cell]:
    """Unit segment removed from ``A_N^{m+1,k+1}`` to form ``~A_N^{m,k}``.

    It hangs directly below the tip ``(2m-N-k+1, k)`` of the removed wedge.
    """
    x = 2 * m - N - k + 1
    return (x, k - 1), (x, k)


def build_region(spec: RegionSpec) -> CellGrid:
    """Exact cell set of the region described by ``spec``."""
    N, m, k = spec.N, spec.m, spec.k
    if spec.variant == FULL:
        return CellGrid(spec, aztec_cells(N))
    if spec.variant == REDUCED:
        return CellGrid(spec, lshape_cells(N, m, k))
    if m == N:
        return CellGrid(spec, aztec_cells(N))
    return CellGrid(spec, lshape_cells(N, m + 1, k + 1), cut=tilde_cut(N, m, k))


def removed_corner(grid: CellGrid) -> frozenset:
    """Cells of ``A_N`` that are not part of the region."""
    return aztec_cells(grid.spec.N) - grid.cells


def classify_domino(c1: Cell, c2: Cell, N: int) -> DominoType:
    """North/south/east/west type of the domino covering two adjacent cells.

    With ``(j, k)`` the lower-left corner of the domino, horizontal dominoes
    are north when ``j + k + N`` is even and south otherwise; vertical ones
    are east when it is even and west otherwise.
    """
    (x1, y1), (x2, y2) = sorted((tuple(c1), tuple(c2)))
    if y1 == y2 and x2 == x1 + 1:
        return DominoType.NORTH if (x1 + y1 + N) % 2 == 0 else DominoType.SOUTH
    if x1 == x2 and y2 == y1 + 1:
        return DominoType.EAST if (x1 + y1 + N) % 2 == 0 else DominoType.WEST
    raise StructureError(f"cells {c1} and {c2} are not adjacent")


def north_completion(grid: CellGrid) -> list[tuple[Cell, Cell]]:
    """Tile the removed corner with north dominoes only.

    Raises :class:`StructureError` when that is impossible.
    """
    N = grid.spec.N
    todo = set(removed_corner(grid))
    dominoes = []
    for cell in sorted(todo, key=lambda c: (c[1], c[0])):
        if cell not in todo:
            continue
        right = (cell[0] + 1, cell[1])
        if right not in todo or classify_domino(cell, right, N) != DominoType.NORTH:
            raise StructureError(f"corner cell {cell} cannot start a north domino")
        todo -= {cell, right}
        dominoes.append((cell, right))
    return dominoes


@dataclass(frozen=True)
class Edge:
    """A possible domino: black cell index, white cell index and its weight."""

    black: int
    white: int
    cells: tuple[Cell, Cell]
    vertical: bool
    kind: DominoType
    weight: Fraction


@dataclass(frozen=True)
class MatchingGraph:
    """Weighted bipartite dimer graph of a region.

    Black cells have ``i + j`` even.  Vertical edges carry weight ``a`` and
    horizontal ones weight 1, so a perfect matching ``T`` has weight
    ``a**v(T)``.
    """

    grid: CellGrid
    a: Fraction
    black: tuple
    white: tuple
    edges: tuple
    deleted: tuple[Cell, Cell] | None = None

    @property
    def N(self) -> int:
        return self.grid.spec.N

    @property
    def balanced(self) -> bool:
        return len(self.black) == len(self.white)

    def adjacency(self) -> dict[int, list[Edge]]:
        adj: dict[int, list[Edge]] = {}
        for e in self.edges:
            adj.setdefault(e.black, []).append(e)
        return adj


def build_graph(grid: CellGrid, a=1) -> MatchingGraph:
    """Dimer graph of ``grid`` with vertical dominoes weighted by ``a``."""
    a = as_weight(a)
    N = grid.spec.N
    cells = sorted(grid.cells)
    black = tuple(c for c in cells if (c[0] + c[1]) % 2 == 0)
    white = tuple(c for c in cells if (c[0] + c[1]) % 2 == 1)
    widx = {c: n for n, c in enumerate(white)}
    deleted = None
    if grid.cut is not None:
        (x, y), _ = grid.cut
        deleted = ((x - 1, y), (x, y))
    edges = []
    for b, (i, j) in enumerate(black):
        for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
            if nb not in widx:
                continue
            pair = tuple(sorted(((i, j), nb)))
            if pair == deleted:
                continue
            vertical = nb[0] == i
            edges.append(Edge(b, widx[nb], pair, vertical,
                              classify_domino(*pair, N), a if vertical else Fraction(1)))
    return MatchingGraph(grid, a, black, white, tuple(edges), deleted)


def region_svg(grid: CellGrid, scale: float = 12.0) -> str:
    """SVG drawing of the region: shaded cells and their outer boundary."""
    cells = grid.cells
    if not cells:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="1" height="1"/>'
    N = grid.spec.N
    lo, hi = -N - 1, N + 1
    size = (hi - lo) * scale

    def px(x, y):
        return (x - lo) * scale, (hi - y) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" '
             f'height="{size:g}" viewBox="0 0 {size:g} {size:g}">']
    for (i, j) in sorted(cells):
        x, y = px(i, j + 1)
        parts.append(f'<rect x="{x:g}" y="{y:g}" width="{scale:g}" '
                     f'height="{scale:g}" fill="#dddddd"/>')
    for seg in _boundary_segments(cells, grid.cut):
        (x1, y1), (x2, y2) = px(*seg[0]), px(*seg[1])
        parts.append(f'<line x1="{x1:g}" y1="{y1:g}" x2="{x2:g}" y2="{y2:g}" '
                     'stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _boundary_segments(cells: Iterable[Cell], cut=None):
    cells = set(cells)
    for (i, j) in cells:
        if (i - 1, j) not in cells:
            yield (i, j), (i, j + 1)
        if (i + 1, j) not in cells:
            yield (i + 1, j), (i + 1, j + 1)
        if (i, j - 1) not in cells:
            yield (i, j), (i + 1, j)
        if (i, j + 1) not in cells:
            yield (i, j + 1), (i + 1, j + 1)
    if cut is not None:
        yield cut
