"""Empty-space analysis of bottom-left packings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..core import feasible
from ..engine import PackingTrace
from .bound import BoundReport, NotSquares, bound_check, check_global_bound, verify_bottom_left
from .cover import (
    CoverPartition,
    Subpiece,
    check_cover_partition,
    check_wide_squares,
    natural_cover_partition,
)
from .graph import (
    BOTTOM,
    LEFT,
    RIGHT,
    PieceGraph,
    build_piece_graph,
    check_peaks,
    check_structure,
    peak_squares,
)
from .grid import (
    CellGrid,
    Piece,
    Trench,
    analysis_grid,
    box_measure_identity,
    extract_pieces,
    extract_trenches,
    flood_fill_bounded_area,
    piece_free_area,
)
from .report import Check

# above this many items the bottom-left check uses the engine instead of the quartic oracle
ORACLE_ITEM_LIMIT = 60

ALL_CHECKS = ("bl", "pieces", "structure", "peaks", "cover", "wide", "trenches", "bound", "oracle")


@dataclass
class PieceResult:
    piece: Piece
    graph: PieceGraph
    checks: list[Check]
    cover: CoverPartition | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


@dataclass
class AnalysisReport:
    checks: list[Check] = field(default_factory=list)
    pieces: list[PieceResult] = field(default_factory=list)
    trenches: list[Trench] = field(default_factory=list)
    bound: BoundReport | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and all(p.ok for p in self.pieces)

    def violations(self) -> list[str]:
        out = [f"{c.name}: {v}" for c in self.checks for v in c.violations if c.status == "fail"]
        for res in self.pieces:
            out += [f"piece {res.piece.id} {c.name}: {v}"
                    for c in res.checks for v in c.violations if c.status == "fail"]
        return out


def analyze(trace: PackingTrace, checks=ALL_CHECKS, bl_oracle: bool | None = None) -> AnalysisReport:
    """Run the selected checks on a trace and collect the verdicts.

    ``bl_oracle`` picks how bottom-left positions are recomputed: the candidate
    grid scan (True), the engine (False), or by instance size (None).
    """
    checks = set(checks)
    unknown = checks - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    report = AnalysisReport()
    ok, problems = feasible(trace.packing)
    report.checks.append(Check("feasible", "pass" if ok else "fail", problems))
    if not ok:
        return report
    is_bl = True
    if "bl" in checks or "wide" in checks:
        use_oracle = trace.instance.n <= ORACLE_ITEM_LIMIT if bl_oracle is None else bl_oracle
        is_bl, problems = verify_bottom_left(trace, oracle=use_oracle)
        report.checks.append(Check("bottom_left", "pass" if is_bl else "fail", problems,
                                   {"method": "candidate grid" if use_oracle else "engine"}))
    is_squares = trace.instance.kind == "squares"
    if "bound" in checks:
        if is_squares:
            report.bound = check_global_bound(trace.packing)
            report.checks.append(bound_check(trace.packing))
        else:
            report.checks.append(Check("bound", "n/a", [], {"reason": "instance has non-square items"}))

    wants_pieces = checks & {"pieces", "structure", "peaks", "cover", "wide", "trenches", "oracle"}
    if not wants_pieces:
        return report
    grid = analysis_grid(trace)
    pieces = extract_pieces(trace, grid)
    for piece in pieces:
        graph = build_piece_graph(piece)
        res = PieceResult(piece, graph, [])
        if piece.touches_both_sides:
            res.checks.append(Check("sides", "fail", ["piece touches both strip sides"]))
        if "structure" in checks:
            res.checks.append(check_structure(graph))
        if "peaks" in checks:
            res.checks.append(check_peaks(graph))
        if checks & {"cover", "wide"} and len(graph.circuit) >= 4:
            res.cover = natural_cover_partition(graph)
            if "cover" in checks:
                res.checks.append(check_cover_partition(res.cover))
            if "wide" in checks:
                res.checks.append(check_wide_squares(res.cover, graph, is_bl and is_squares))
        report.pieces.append(res)
    if "trenches" in checks:
        report.trenches = extract_trenches(trace, pieces, grid)
        ok, parts = box_measure_identity(trace, pieces, report.trenches, grid)
        rights = sum(t.is_right for t in report.trenches)
        touching = [t for t in report.trenches if any(c == grid.nx - 1 for _, c in t.cells)]
        notes = [] if len(touching) <= 1 else [f"{len(touching)} trenches touch the right side"]
        report.checks.append(Check("trenches", "pass" if ok else "fail",
                                   [] if ok else [f"box areas do not add up: {parts}"],
                                   {"count": len(report.trenches), "right": rights, **parts,
                                    **({"notes": notes} if notes else {})}))
    if "oracle" in checks:
        expected = flood_fill_bounded_area(trace.packing)
        got = sum((piece_free_area(grid, p) for p in pieces), Fraction(0))
        msg = [] if got == expected else [f"pieces hold {got} of empty area, flood fill finds {expected}"]
        report.checks.append(Check("oracle", "fail" if msg else "pass", msg,
                                   {"bounded_empty_area": expected}))
    return report


__all__ = [
    "ALL_CHECKS", "AnalysisReport", "ORACLE_ITEM_LIMIT", "BOTTOM", "BoundReport", "CellGrid", "Check", "CoverPartition", "LEFT",
    "NotSquares", "Piece", "PieceGraph", "PieceResult", "RIGHT", "Subpiece", "Trench", "analysis_grid",
    "analyze", "box_measure_identity", "build_piece_graph", "check_cover_partition", "check_global_bound",
    "check_peaks", "check_structure", "check_wide_squares", "extract_pieces", "extract_trenches",
    "flood_fill_bounded_area", "natural_cover_partition", "peak_squares", "piece_free_area",
    "verify_bottom_left",
]
