"""Adjacency graph around a piece: boundary circuit, arrow types, structure and peaks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

from .grid import CellGrid, Piece
from .report import Check

LEFT, RIGHT, BOTTOM = "LEFT", "RIGHT", "BOTTOM"
FORMAL = (LEFT, RIGHT, BOTTOM)

Vertex = Union[int, str]  # item id or formal tag


class Faces(NamedTuple):
    lf: Fraction
    rf: Fraction
    bf: Fraction
    tf: float | Fraction
    size: Fraction  # side length; 0 for the formal boundary squares


def vertex_faces(v: Vertex, grid: CellGrid) -> Faces:
    width = grid.width
    zero = Fraction(0)
    if v == LEFT:
        return Faces(zero, zero, zero, math.inf, zero)
    if v == RIGHT:
        return Faces(width, width, zero, math.inf, zero)
    if v == BOTTOM:
        return Faces(zero, width, zero, zero, zero)
    p = grid.packing.by_id[v]
    return Faces(p.lf, p.rf, p.bf, p.tf, p.w)


def arrow_types(a: Faces, b: Faces) -> frozenset[str]:
    types = set()
    if a.lf == b.rf:
        types.add("left")
    if a.rf == b.lf:
        types.add("right")
    if a.tf == b.bf:
        types.add("up")
    if a.bf == b.tf:
        types.add("down")
    return frozenset(types)


def closures_meet(a: Vertex, b: Vertex, grid: CellGrid) -> bool:
    if a == b:
        return True
    if a in FORMAL and b in FORMAL:
        return BOTTOM in (a, b)
    if a in FORMAL:
        a, b = b, a
    p = grid.packing.by_id[a]
    if b == LEFT:
        return p.lf == 0
    if b == RIGHT:
        return p.rf == grid.width
    if b == BOTTOM:
        return p.bf == 0
    q = grid.packing.by_id[b]
    return p.lf <= q.rf and q.lf <= p.rf and p.bf <= q.tf and q.bf <= p.tf


# Directions clockwise, each followed by the quadrant between it and the next.
_CLOCKWISE = ("N", "E", "S", "W")
_QUADRANT_AFTER = {"N": "NE", "E": "SE", "S": "SW", "W": "NW"}
_BACK = {"N": "S", "S": "N", "E": "W", "W": "E"}
# offset of the cell occupying a quadrant, from vertex (row, col)
_QUADRANT_CELL = {"NE": (0, 0), "SE": (-1, 0), "SW": (-1, -1), "NW": (0, -1)}


def _cell_owner(grid: CellGrid, r: int, c: int, step: int) -> Vertex | None:
    """Who occupies a cell after ``step`` placements; cells outside the strip
    belong to the formal boundary squares."""
    if c < 0:
        return LEFT if r >= 0 else None
    if c >= grid.nx:
        return RIGHT if r >= 0 else None
    if r < 0:
        return BOTTOM
    if r >= grid.ny:
        return None
    idx = int(grid.owner[r, c])
    return grid.placements[idx].id if idx < step else None


def _boundary_edges(cells: frozenset) -> dict[tuple, list[tuple]]:
    """Directed boundary edges keyed by tail vertex, with the piece on the right."""
    out: dict[tuple, list[tuple]] = {}

    def add(tail, head, d):
        out.setdefault(tail, []).append((d, head))

    for r, c in cells:
        if (r - 1, c) not in cells:
            add((r, c + 1), (r, c), "W")
        if (r + 1, c) not in cells:
            add((r + 1, c), (r + 1, c + 1), "E")
        if (r, c - 1) not in cells:
            add((r, c), (r + 1, c), "N")
        if (r, c + 1) not in cells:
            add((r + 1, c + 1), (r, c + 1), "S")
    return out


def boundary_walk(piece: Piece) -> tuple[list[Vertex], list[str]]:
    """Squares met while walking the piece boundary clockwise, and any problems.

    At each boundary vertex the exterior quadrants between the incoming and the
    outgoing edge are visited in clockwise order; their occupants are recorded.
    """
    grid, step = piece.grid, piece.birth_step
    edges = _boundary_edges(piece.cells)
    total = sum(len(v) for v in edges.values())
    tail = min(edges)
    d_in, vertex = edges[tail][0]
    first = (tail, d_in)
    used = {first}
    owners: list[Vertex] = []
    problems: list[str] = []
    while True:
        outs = {d: head for d, head in edges.get(vertex, [])}
        k = _CLOCKWISE.index(_BACK[d_in])
        chosen = None
        for _ in range(4):
            quad = _QUADRANT_AFTER[_CLOCKWISE[k]]
            dr, dc = _QUADRANT_CELL[quad]
            who = _cell_owner(grid, vertex[0] + dr, vertex[1] + dc, step)
            if who is not None:
                owners.append(who)
            k = (k + 1) % 4
            if _CLOCKWISE[k] in outs:
                chosen = _CLOCKWISE[k]
                break
        if chosen is None:
            problems.append(f"boundary walk stuck at grid vertex {vertex}")
            break
        edge = (vertex, chosen)
        if edge == first:
            break
        if edge in used:
            problems.append("boundary walk revisits an edge")
            break
        used.add(edge)
        d_in, vertex = chosen, outs[chosen]
    if len(used) != total:
        problems.append(f"boundary is not a single closed curve ({len(used)} of {total} edges walked)")
    return owners, problems


def collapse_cyclic(seq: list) -> list:
    out = []
    for v in seq:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


@dataclass(frozen=True)
class PieceGraph:
    """Squares around a piece in clockwise order, starting at the start square.

    ``start``, ``pre``, ``top``, ``end`` and ``pen`` are indices into ``circuit``.
    """

    piece: Piece
    circuit: tuple[Vertex, ...]
    faces: dict
    arrows: dict  # (a, b) -> frozenset of types, for every adjacent ordered pair
    start: int
    pre: int
    top: int
    end: int
    pen: int
    problems: tuple[str, ...] = ()
    adjacent: frozenset = field(default_factory=frozenset)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.circuit)

    def at(self, k: int) -> Vertex:
        return self.circuit[k % len(self.circuit)]

    def types(self, a: Vertex, b: Vertex) -> frozenset[str]:
        return self.arrows.get((a, b), frozenset())

    def with_specials(self, start: int, top: int) -> "PieceGraph":
        """Copy with the start and top squares moved (for negative controls)."""
        n = len(self.circuit)
        return PieceGraph(self.piece, self.circuit, self.faces, self.arrows, start,
                          (top - 1) % n, top, (top + 1) % n, (top + 2) % n, self.problems, self.adjacent)


def _adjacent_to_piece(piece: Piece) -> frozenset:
    """Every (formal) square whose closure meets the piece closure, found directly."""
    grid = piece.grid
    found = set()
    for cell in piece.cells:
        x0, y0, x1, y1 = grid.cell_rect(cell)
        if x0 == 0:
            found.add(LEFT)
        if x1 == grid.width:
            found.add(RIGHT)
        if y0 == 0:
            found.add(BOTTOM)
    for p in grid.placements[:piece.birth_step]:
        for cell in piece.cells:
            x0, y0, x1, y1 = grid.cell_rect(cell)
            if p.lf <= x1 and x0 <= p.rf and p.bf <= y1 and y0 <= p.tf:
                found.add(p.id)
                break
    return frozenset(found)


def build_piece_graph(piece: Piece) -> PieceGraph:
    grid = piece.grid
    owners, problems = boundary_walk(piece)
    circuit = collapse_cyclic(owners)
    if len(set(circuit)) != len(circuit):
        problems.append("boundary circuit visits a square more than once")
    adjacent = _adjacent_to_piece(piece)
    if set(circuit) != adjacent:
        problems.append(f"circuit squares {sorted(map(str, set(circuit)))} differ from adjacent squares "
                        f"{sorted(map(str, adjacent))}")
    faces = {v: vertex_faces(v, grid) for v in set(circuit) | adjacent}
    for a, b in zip(circuit, circuit[1:] + circuit[:1]):
        if not closures_meet(a, b, grid):
            problems.append(f"consecutive circuit squares {a} and {b} do not touch")
    arrows = {}
    verts = sorted(set(circuit) | adjacent, key=str)
    for a in verts:
        for b in verts:
            if a != b and closures_meet(a, b, grid):
                arrows[(a, b)] = arrow_types(faces[a], faces[b])
    if len(set(circuit)) < 4:
        problems.append(f"only {len(set(circuit))} squares around the piece")
    if not circuit:
        return PieceGraph(piece, (), faces, arrows, 0, 0, 0, 0, 0, tuple(problems), adjacent)
    uniq = list(dict.fromkeys(circuit))
    start_v = min(uniq, key=lambda v: (faces[v].tf, faces[v].lf))
    top_v = max(uniq, key=lambda v: (faces[v].bf, faces[v].lf))
    s = circuit.index(start_v)
    circuit = circuit[s:] + circuit[:s]
    n = len(circuit)
    t = circuit.index(top_v)
    return PieceGraph(piece, tuple(circuit), faces, arrows, 0, (t - 1) % n, t, (t + 1) % n, (t + 2) % n,
                      tuple(problems), adjacent)


def _arrow_check(pg: PieceGraph, a: Vertex, b: Vertex, allowed: set[str], clause: str, out: list[str]):
    types = pg.types(a, b)
    if not types & allowed:
        shown = "/".join(sorted(types)) or "no arrow"
        out.append(f"({clause}) arrow {a}->{b} is {shown}, expected {' or '.join(sorted(allowed))}")


def check_structure(pg: PieceGraph) -> Check:
    """Arrow types along the top path and the bottom path of the circuit."""
    out = list(pg.problems)
    n = len(pg.circuit)
    if n < 4:
        return Check("structure", "fail", out or ["circuit too short"])
    # start square: lowest top face, then leftmost; top square: highest bottom face, then rightmost
    start_v, top_v = pg.at(pg.start), pg.at(pg.top)
    faces = pg.faces
    low = min((faces[v].tf, faces[v].lf) for v in pg.circuit)
    if (faces[start_v].tf, faces[start_v].lf) != low:
        out.append(f"start square {start_v} does not have the lowest top face")
    high = max((faces[v].bf, faces[v].lf) for v in pg.circuit)
    if (faces[top_v].bf, faces[top_v].lf) != high:
        out.append(f"top square {top_v} does not have the highest bottom face")
    t = (pg.top - pg.start) % n
    rel = lambda j: pg.at(pg.start + j)  # noqa: E731
    if t < 2 or t > n - 2:
        out.append(f"top square sits at circuit position {t} of {n}")
        return Check("structure", "fail", out)
    for j in range(t - 1):
        _arrow_check(pg, rel(j), rel(j + 1), {"left", "up"}, "a", out)
    _arrow_check(pg, rel(t - 1), rel(t), {"right", "up"}, "b", out)
    _arrow_check(pg, rel(t), rel(t + 1), {"right", "down"}, "c", out)
    # bottom path runs from the start square backwards around the circuit to the end square
    for j in range(t + 2, n):
        _arrow_check(pg, rel(j + 1), rel(j), {"right", "down"}, "d", out)
    _arrow_check(pg, rel(t + 2), rel(t + 1), {"right", "up"}, "e", out)
    return Check("structure", "fail" if out else "pass", out)


def peak_squares(pg: PieceGraph) -> list[Vertex]:
    """Squares whose bottom face is a strict local maximum along start..top..end..start."""
    n = len(pg.circuit)
    seq = [pg.at(pg.start + j) for j in range(n + 1)]
    bf = [pg.faces[v].bf for v in seq]
    peaks = []
    for i in range(1, n):
        before = next((bf[k] for k in range(i - 1, -1, -1) if bf[k] != bf[i]), None)
        after = next((bf[k] for k in range(i + 1, n + 1) if bf[k] != bf[i]), None)
        if before is not None and after is not None and before < bf[i] and after < bf[i]:
            peaks.append(seq[i])
    return peaks


def check_peaks(pg: PieceGraph) -> Check:
    if len(pg.circuit) < 4:
        return Check("peaks", "fail", ["circuit too short"])
    peaks = peak_squares(pg)
    out = []
    allowed = {pg.at(pg.top), pg.at(pg.pre)}
    if len(peaks) > 2:
        out.append(f"{len(peaks)} peak squares: {peaks}")
    for v in peaks:
        if v not in allowed:
            out.append(f"peak square {v} is neither the top nor the pre-top square")
    return Check("peaks", "fail" if out else "pass", out, {"peaks": [str(v) for v in peaks]})
