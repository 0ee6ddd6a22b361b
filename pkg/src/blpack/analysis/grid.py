"""Coordinate-compressed cell grid of a packing, unoccupied pieces and trenches.

Cells are the rectangles between consecutive distinct face coordinates, so every
placement is an exact union of cells and connectivity questions become
questions about a small boolean array.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import ndimage

from ..core import Packing
from ..engine import PackingTrace

Cell = tuple[int, int]  # (row, column)


class CellGrid:
    """Cells of ``[0, W] x [0, height]`` cut along every face of every placement.

    ``owner[r, c]`` is the placement index (position in placement order) of the
    item covering the cell, or ``n`` when the cell stays empty.
    """

    def __init__(self, packing: Packing, extra_ys: Iterable[Fraction] = ()):
        self.packing = packing
        self.width = packing.instance.width
        self.placements = packing.placements
        top = packing.height
        xs = {Fraction(0), self.width}
        ys = {Fraction(0), top}
        for p in self.placements:
            xs.update((p.lf, p.rf))
            ys.update((p.bf, p.tf))
        ys.update(y for y in extra_ys if 0 <= y <= top)
        self.xs = sorted(xs)
        self.ys = sorted(ys)
        self.nx = len(self.xs) - 1
        self.ny = len(self.ys) - 1
        n = len(self.placements)
        self.owner = np.full((self.ny, self.nx), n, dtype=np.int64)
        for idx, p in enumerate(self.placements):
            r0, r1 = self.row_of(p.bf), self.row_of(p.tf)
            c0, c1 = self.col_of(p.lf), self.col_of(p.rf)
            self.owner[r0:r1, c0:c1] = idx

    def col_of(self, x: Fraction) -> int:
        return bisect_left(self.xs, x)

    def row_of(self, y: Fraction) -> int:
        return bisect_left(self.ys, y)

    def cell_rect(self, cell: Cell) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """(x0, y0, x1, y1) of a cell."""
        r, c = cell
        return self.xs[c], self.ys[r], self.xs[c + 1], self.ys[r + 1]

    def cell_area(self, cell: Cell) -> Fraction:
        r, c = cell
        return (self.xs[c + 1] - self.xs[c]) * (self.ys[r + 1] - self.ys[r])

    def area(self, cells: Iterable[Cell]) -> Fraction:
        return sum((self.cell_area(cell) for cell in cells), Fraction(0))

    def occupied_by_first(self, i: int) -> np.ndarray:
        return self.owner < i


def merged_rects(grid: CellGrid, cells: Iterable[Cell]) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Cells merged into horizontal runs, as (x0, y0, x1, y1) rectangles."""
    rects = []
    ordered = sorted(cells)
    k = 0
    while k < len(ordered):
        r, c = ordered[k]
        end = c
        while k + 1 < len(ordered) and ordered[k + 1] == (r, end + 1):
            k += 1
            end += 1
        rects.append((grid.xs[c], grid.ys[r], grid.xs[end + 1], grid.ys[r + 1]))
        k += 1
    return rects


def connected(cells: frozenset[Cell] | set[Cell]) -> bool:
    """Whether cells form one component under edge adjacency."""
    if not cells:
        return True
    start = next(iter(cells))
    seen = {start}
    todo = [start]
    while todo:
        r, c = todo.pop()
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Piece:
    """Bounded unoccupied region, frozen at the step that enclosed it.

    ``birth_step`` counts placed items, so a piece enclosed by the fourth item
    has birth step 4.
    """

    id: int
    birth_step: int
    cells: frozenset
    kind: str  # "left", "middle" or "right"
    lf: Fraction
    rf: Fraction
    bf: Fraction
    tf: Fraction
    area: Fraction
    grid: CellGrid = field(compare=False, repr=False)
    touches_both_sides: bool = False

    @property
    def rects(self):
        return merged_rects(self.grid, self.cells)


def _make_piece(pid: int, step: int, cells: frozenset, grid: CellGrid) -> Piece:
    rows = [r for r, _ in cells]
    cols = [c for _, c in cells]
    at_left = min(cols) == 0
    at_right = max(cols) == grid.nx - 1
    kind = "left" if at_left else "right" if at_right else "middle"
    return Piece(
        pid, step, cells, kind,
        grid.xs[min(cols)], grid.xs[max(cols) + 1], grid.ys[min(rows)], grid.ys[max(rows) + 1],
        grid.area(cells), grid, touches_both_sides=at_left and at_right,
    )


def analysis_grid(trace: PackingTrace) -> CellGrid:
    """Grid of the final packing, also cut at the trench line h_BL - h_max."""
    packing = trace.packing
    line = packing.height - packing.instance.max_height
    return CellGrid(packing, extra_ys=(line,))


def extract_pieces(trace: PackingTrace, grid: CellGrid | None = None) -> list[Piece]:
    """Pieces in birth order.

    After each placement the empty cells, minus earlier pieces, are split into
    components; a component that cannot reach the open space above the packing
    is a new piece. Earlier pieces stay blocked even after later items fill
    them partially.
    """
    grid = grid or analysis_grid(trace)
    frozen = np.zeros((grid.ny, grid.nx), dtype=bool)
    pieces: list[Piece] = []
    open_row = np.ones((1, grid.nx), dtype=bool)
    for step in range(1, len(grid.placements) + 1):
        free = ~(grid.occupied_by_first(step) | frozen)
        labels, count = ndimage.label(np.vstack([free, open_row]))
        if count == 0:
            continue
        unbounded = set(np.unique(labels[-1])) - {0}
        grid_labels = labels[:-1]
        for lab in range(1, count + 1):
            if lab in unbounded:
                continue
            rows, cols = np.nonzero(grid_labels == lab)
            cells = frozenset(zip(rows.tolist(), cols.tolist()))
            pieces.append(_make_piece(len(pieces), step, cells, grid))
            frozen[rows, cols] = True
    return pieces


def piece_free_area(grid: CellGrid, piece: Piece) -> Fraction:
    """Area of a piece still empty in the final packing."""
    n = len(grid.placements)
    return grid.area(cell for cell in piece.cells if grid.owner[cell] == n)


@dataclass(frozen=True)
class Trench:
    id: int
    cells: frozenset
    area: Fraction
    is_right: bool
    grid: CellGrid = field(compare=False, repr=False)

    @property
    def rects(self):
        return merged_rects(self.grid, self.cells)


def extract_trenches(trace: PackingTrace, pieces: list[Piece] | None = None,
                     grid: CellGrid | None = None) -> list[Trench]:
    """Empty components of the box [0, W] x [0, h_BL - h_max] outside every piece.

    The trench touching x = W is flagged as the right trench; if several do,
    the lowest one is flagged.
    """
    grid = grid or analysis_grid(trace)
    if pieces is None:
        pieces = extract_pieces(trace, grid)
    line = trace.packing.height - trace.instance.max_height
    if line <= 0:
        return []
    rows = grid.row_of(line)
    n = len(grid.placements)
    free = grid.owner[:rows] == n
    for piece in pieces:
        for r, c in piece.cells:
            if r < rows:
                free[r, c] = False
    labels, count = ndimage.label(free)
    found = []
    for lab in range(1, count + 1):
        rr, cc = np.nonzero(labels == lab)
        cells = frozenset(zip(rr.tolist(), cc.tolist()))
        touches_right = bool((cc == grid.nx - 1).any())
        found.append((min(rr.tolist()), cells, touches_right))
    found.sort(key=lambda f: (f[0], min(f[1])))
    right_pick = next((f for f in found if f[2]), None)
    return [Trench(k, f[1], grid.area(f[1]), f is right_pick, grid) for k, f in enumerate(found)]


def box_measure_identity(trace: PackingTrace, pieces: list[Piece], trenches: list[Trench],
                         grid: CellGrid) -> tuple[bool, dict[str, Fraction]]:
    """Check that occupied area, empty piece area and trench area fill the trench box exactly."""
    line = trace.packing.height - trace.instance.max_height
    if line <= 0:
        zero = Fraction(0)
        return True, {"box": zero, "occupied": zero, "pieces": zero, "trenches": zero}
    rows = grid.row_of(line)
    n = len(grid.placements)
    box = trace.instance.width * line
    occupied = grid.area((r, c) for r in range(rows) for c in range(grid.nx) if grid.owner[r, c] < n)
    in_pieces = grid.area(cell for p in pieces for cell in p.cells if cell[0] < rows and grid.owner[cell] == n)
    in_trenches = sum((t.area for t in trenches), Fraction(0))
    parts = {"box": box, "occupied": occupied, "pieces": in_pieces, "trenches": in_trenches}
    return occupied + in_pieces + in_trenches == box, parts


def flood_fill_bounded_area(packing: Packing) -> Fraction:
    """Total empty area not connected to the open space above, by plain BFS.

    Independent of the piece bookkeeping: it builds its own compressed grid in
    exact arithmetic and never looks at placement order.
    """
    width = packing.instance.width
    xs = sorted({Fraction(0), width} | {p.lf for p in packing.placements} | {p.rf for p in packing.placements})
    ys = sorted({Fraction(0)} | {p.bf for p in packing.placements} | {p.tf for p in packing.placements})
    nx, ny = len(xs) - 1, len(ys) - 1

    def empty(r: int, c: int) -> bool:
        x, y = (xs[c] + xs[c + 1]) / 2, (ys[r] + ys[r + 1]) / 2
        return not any(p.lf < x < p.rf and p.bf < y < p.tf for p in packing.placements)

    free = {(r, c) for r in range(ny) for c in range(nx) if empty(r, c)}
    # everything reachable from the top row escapes upward
    reach = deque(cell for cell in free if cell[0] == ny - 1)
    escaped = set(reach)
    while reach:
        r, c = reach.popleft()
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in free and nb not in escaped:
                escaped.add(nb)
                reach.append(nb)
    return sum(((xs[c + 1] - xs[c]) * (ys[r + 1] - ys[r]) for r, c in free - escaped), Fraction(0))
