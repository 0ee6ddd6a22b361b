"""Natural cover partition of a piece and the size inequalities it supports."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import FORMAL, PieceGraph, Vertex
from .grid import Cell, CellGrid, Piece, connected
from .report import Check


@dataclass(frozen=True)
class Subpiece:
    label: str  # "V1", "V2", ..., "end" or "top"
    square: Vertex
    cells: frozenset
    width: Fraction
    height: Fraction


@dataclass(frozen=True)
class CoverPartition:
    piece: Piece
    subpieces: tuple[Subpiece, ...]
    leftover: frozenset  # cells the construction failed to assign

    def get(self, label: str) -> Subpiece | None:
        return next((s for s in self.subpieces if s.label == label), None)


def _merge(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Union of closed intervals; touching intervals merge."""
    out: list[list[Fraction]] = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def horizontal_lines(grid: CellGrid, cells: frozenset) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Components of the closure of ``cells`` on each horizontal line, as (y, x0, x1).

    Lines are constant between grid rows, so one line per row interior and one
    per row boundary covers every distinct line.
    """
    by_row: dict[int, list[tuple[Fraction, Fraction]]] = {}
    for r, c in cells:
        by_row.setdefault(r, []).append((grid.xs[c], grid.xs[c + 1]))
    lines = []
    rows = sorted(by_row)
    for r in rows:
        mid = (grid.ys[r] + grid.ys[r + 1]) / 2
        lines += [(mid, a, b) for a, b in _merge(by_row[r])]
    for y_row in sorted({r for r in rows} | {r + 1 for r in rows}):
        parts = by_row.get(y_row - 1, []) + by_row.get(y_row, [])
        lines += [(grid.ys[y_row], a, b) for a, b in _merge(parts)]
    return sorted(lines)


def subpiece_width(grid: CellGrid, cells: frozenset) -> Fraction:
    return max((b - a for _, a, b in horizontal_lines(grid, cells)), default=Fraction(0))


def subpiece_height(grid: CellGrid, cells: frozenset) -> Fraction:
    if not cells:
        return Fraction(0)
    rows = [r for r, _ in cells]
    return grid.ys[max(rows) + 1] - grid.ys[min(rows)]


def nested_lines_violations(grid: CellGrid, cells: frozenset) -> list[str]:
    """Pairs of lines, one below the other, whose projections overlap without nesting."""
    lines = horizontal_lines(grid, cells)
    out = []
    for i, (y, a, b) in enumerate(lines):
        for y2, a2, b2 in lines[i + 1:]:
            if y2 == y:
                continue
            disjoint = b < a2 or b2 < a
            if not disjoint and not (a2 <= a and b <= b2):
                out.append(f"line [{a}, {b}] at y={y} is not inside line [{a2}, {b2}] at y={y2}")
                if len(out) >= 5:
                    return out
    return out


def _flood(seeds: set[Cell], allowed: set[Cell]) -> set[Cell]:
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        r, c = todo.pop()
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in allowed and nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return seen


def _below_face(grid: CellGrid, cells: set[Cell], faces) -> set[Cell]:
    """Cells directly under a square's bottom face."""
    return {
        (r, c) for r, c in cells
        if grid.ys[r + 1] == faces.bf and faces.lf <= grid.xs[c] and grid.xs[c + 1] <= faces.rf
    }


def cover_squares(pg: PieceGraph) -> tuple[list[Vertex], bool]:
    """Squares that open a new subpiece along the path end, pen, ..., start, ..., top,
    and whether the end square gets a subpiece of its own."""
    n = len(pg.circuit)
    t = (pg.top - pg.start) % n
    path = [pg.at(pg.start + j) for j in range(t + 1, n + 1)] + [pg.at(pg.start + j) for j in range(1, t + 1)]
    faces = pg.faces
    chosen = []
    for prev, cur in zip(path, path[1:-1]):
        if faces[cur].rf > faces[prev].rf and "up" in pg.types(prev, cur):
            chosen.append(cur)
    end_v, pen_v = pg.at(pg.end), pg.at(pg.pen)
    return chosen, "down" in pg.types(end_v, pen_v)


def natural_cover_partition(pg: PieceGraph) -> CoverPartition:
    """Carve the piece bottom-up: each chosen square claims the empty space
    below its bottom face that hangs from it, and the top square takes the rest
    it can reach."""
    piece = pg.piece
    grid = piece.grid
    chosen, with_end = cover_squares(pg)
    faces = pg.faces
    jobs = [(faces[v].bf, k, f"V{k + 1}", v) for k, v in enumerate(chosen)]
    if with_end:
        jobs.append((faces[pg.at(pg.end)].bf, -1, "end", pg.at(pg.end)))
    jobs.sort(key=lambda j: (j[0], j[1]))
    free = set(piece.cells)
    subs = []
    for bf, _, label, v in jobs:
        allowed = {cell for cell in free if grid.ys[cell[0] + 1] <= bf}
        part = _flood(_below_face(grid, allowed, faces[v]), allowed)
        free -= part
        subs.append((label, v, frozenset(part)))
    top_v = pg.at(pg.top)
    part = _flood(_below_face(grid, free, faces[top_v]), free)
    free -= part
    subs.append(("top", top_v, frozenset(part)))
    # subpieces of measure zero are dropped
    kept = tuple(
        Subpiece(label, v, cells, subpiece_width(grid, cells), subpiece_height(grid, cells))
        for label, v, cells in subs if cells
    )
    return CoverPartition(piece, kept, frozenset(free))


def check_cover_partition(cp: CoverPartition) -> Check:
    """Disjoint, exactly covering, each part connected and with nested lines."""
    out = []
    grid = cp.piece.grid
    if cp.leftover:
        out.append(f"{len(cp.leftover)} cells of the piece are in no subpiece")
    seen: set = set()
    for sub in cp.subpieces:
        if seen & sub.cells:
            out.append(f"subpiece {sub.label} overlaps an earlier subpiece")
        seen |= sub.cells
        if not sub.cells <= cp.piece.cells:
            out.append(f"subpiece {sub.label} leaves the piece")
        if not connected(sub.cells):
            out.append(f"subpiece {sub.label} is not connected")
        out += [f"subpiece {sub.label}: {msg}" for msg in nested_lines_violations(grid, sub.cells)]
    if seen != set(cp.piece.cells) and not cp.leftover:
        out.append("subpieces do not add up to the piece")
    if grid.area(seen) + grid.area(cp.leftover) != cp.piece.area:
        out.append("subpiece areas do not add up to the piece area")
    return Check("cover", "fail" if out else "pass", out,
                 {"subpieces": [f"{s.label}:{s.square}" for s in cp.subpieces]})


def check_wide_squares(cp: CoverPartition, pg: PieceGraph, bottom_left: bool = True) -> Check:
    """Each cover square is wider than its subpiece; extra inequalities when the
    penultimate square meets the end square from below.

    Only meaningful for bottom-left packings; otherwise reported as not applicable.
    """
    if not bottom_left:
        return Check("wide_squares", "n/a", [], {"reason": "packing is not bottom-left"})
    faces = pg.faces
    out = []
    notes = []
    for sub in cp.subpieces:
        if sub.label == "end":
            continue
        if sub.square in FORMAL:
            notes.append(f"subpiece {sub.label} hangs from a boundary square")
            continue
        if not faces[sub.square].size > sub.width:
            out.append(f"(a) square {sub.square} of size {faces[sub.square].size} is not wider than "
                       f"subpiece {sub.label} of width {sub.width}")
    pre_v, top_v, end_v, pen_v = pg.at(pg.pre), pg.at(pg.top), pg.at(pg.end), pg.at(pg.pen)
    if "up" in pg.types(pen_v, end_v):
        if pre_v in FORMAL:
            notes.append("(b) not applicable: the pre-top square is a boundary square")
        elif not faces[pre_v].size > faces[top_v].bf - faces[end_v].bf:
            out.append(f"(b) pre-top square {pre_v} of size {faces[pre_v].size} is not larger than "
                       f"{faces[top_v].bf - faces[end_v].bf}")
        end_sub = cp.get("end")
        w_end = end_sub.width if end_sub else Fraction(0)
        if not faces[top_v].size > faces[pen_v].size + w_end:
            out.append(f"(c) top square {top_v} of size {faces[top_v].size} is not larger than "
                       f"{faces[pen_v].size} + {w_end}")
    else:
        notes.append("(b), (c) not applicable")
    return Check("wide_squares", "fail" if out else "pass", out, {"notes": notes} if notes else {})
