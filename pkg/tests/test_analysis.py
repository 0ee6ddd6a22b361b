from fractions import Fraction

import pytest

from blpack import Instance, Packing, PackingTrace, pack
from blpack.analysis import (
    BOTTOM,
    LEFT,
    RIGHT,
    NotSquares,
    analysis_grid,
    analyze,
    build_piece_graph,
    check_cover_partition,
    check_global_bound,
    peak_squares,
    check_structure,
    check_wide_squares,
    extract_pieces,
    flood_fill_bounded_area,
    natural_cover_partition,
    verify_bottom_left,
)
from blpack.analysis.cover import horizontal_lines, nested_lines_violations
from blpack.analysis.graph import arrow_types, vertex_faces
from blpack.analysis.grid import connected
from blpack.corpus import square_corpus
from blpack.generators import build


def frame():
    """Two unit squares with a gap between them, capped by a 3-square."""
    inst = Instance.of_squares(3, [1, 1, 3])
    return PackingTrace.from_packing(Packing.from_positions(inst, [(0, 0, 0), (1, 2, 0), (2, 0, 1)]))


def test_single_hole():
    trace = frame()
    pieces = extract_pieces(trace)
    assert len(pieces) == 1
    piece = pieces[0]
    assert piece.birth_step == 3 and piece.area == 1
    assert (piece.lf, piece.rf, piece.bf, piece.tf) == (1, 2, 0, 1)
    assert flood_fill_bounded_area(trace.packing) == 1
    g = build_piece_graph(piece)
    assert set(g.circuit) == {0, 1, 2, BOTTOM}
    assert not g.problems
    assert g.at(g.top) == 2


def test_hole_open_to_the_top_is_not_a_piece():
    inst = Instance.of_squares(3, [1, 1])
    trace = PackingTrace.from_packing(Packing.from_positions(inst, [(0, 0, 0), (1, 2, 0)]))
    assert extract_pieces(trace) == []
    assert flood_fill_bounded_area(trace.packing) == 0


def test_formal_faces_and_arrows():
    grid = analysis_grid(frame())
    assert vertex_faces(LEFT, grid)[:3] == (0, 0, 0)
    assert vertex_faces(RIGHT, grid)[:2] == (3, 3)
    assert vertex_faces(BOTTOM, grid)[:4] == (0, 3, 0, 0)
    a, b = vertex_faces(0, grid), vertex_faces(2, grid)
    # the cap sits on square 0 with equal left faces
    assert "up" in arrow_types(a, b)
    assert "down" in arrow_types(b, a)


def test_connected():
    assert connected({(0, 0), (0, 1), (1, 1)})
    assert not connected({(0, 0), (1, 1)})


def test_nested_lines():
    grid = analysis_grid(frame())
    cells = frozenset((r, c) for r in range(grid.ny) for c in range(grid.nx))
    assert horizontal_lines(grid, frozenset())[:1] == []
    assert nested_lines_violations(grid, cells) == []
    # wider at the bottom than on top breaks the nesting; the reverse is fine
    assert grid.ny >= 2 and grid.nx == 3
    assert nested_lines_violations(grid, frozenset({(0, 0), (0, 1), (0, 2), (1, 0)}))
    assert not nested_lines_violations(grid, frozenset({(0, 0), (1, 0), (1, 1), (1, 2)}))


def corpus_reports(count=80):
    for case in square_corpus(count, 7):
        trace = pack(case.instance, case.ordering)
        yield trace, analyze(trace, ("pieces", "structure", "cover", "trenches", "oracle", "bl", "bound"))


def test_corpus_structure_cover_and_oracles():
    pieces = 0
    for trace, report in corpus_reports():
        assert all(c.status != "fail" for c in report.checks), report.violations()
        for res in report.pieces:
            pieces += 1
            assert len(res.graph.circuit) >= 4
            assert not res.graph.problems
            assert all(c.ok for c in res.checks), [c.violations for c in res.checks]
    assert pieces > 20


def test_structure_check_catches_wrong_specials():
    caught = 0
    for trace, report in corpus_reports(40):
        for res in report.pieces:
            g = res.graph
            moved = g.with_specials(g.start + 1, g.top)
            caught += check_structure(moved).status == "fail"
    assert caught > 0


def test_cover_check_catches_a_missing_subpiece():
    for trace, report in corpus_reports(40):
        for res in report.pieces:
            cp = natural_cover_partition(res.graph)
            if len(cp.subpieces) > 1:
                broken = type(cp)(cp.piece, cp.subpieces[1:], cp.leftover)
                assert check_cover_partition(broken).status == "fail"
                return
    pytest.fail("no piece with two subpieces in the corpus sample")


def test_bottom_left_detection():
    rect = build("rect43", eps=Fraction(1, 100))
    ok, problems = verify_bottom_left(PackingTrace.from_packing(rect.reference_packings["opt"]))
    assert not ok and problems
    ok, _ = verify_bottom_left(pack(rect.instance, rect.orderings["layout"]))
    assert ok
    assert verify_bottom_left(frame(), oracle=False)[0] is False


def test_wide_squares_only_for_bottom_left():
    for trace, report in corpus_reports(20):
        for res in report.pieces:
            cp = natural_cover_partition(res.graph)
            assert check_wide_squares(cp, res.graph, bottom_left=False).status == "n/a"
            return


def test_wide_squares_counterexample():
    # a bottom-left packing where the pre-top square only ties the required size
    inst = Instance.of_squares(Fraction(105, 4), [Fraction(5, 4), 8, 15, Fraction(9, 2), Fraction(11, 3), 9])
    trace = pack(inst, (4, 1, 2, 5, 3, 0))
    report = analyze(trace, ("wide",))
    assert [v for v in report.violations() if "(b)" in v] == [
        "piece 1 wide_squares: (b) pre-top square 1 of size 8 is not larger than 8"]


def test_peak_count_counterexample():
    sides = [Fraction(15, 2), Fraction(17, 2), Fraction(11, 3), Fraction(16, 3), 19, Fraction(7, 4),
             Fraction(8, 3), Fraction(11, 3), 11, Fraction(5, 3), 4]
    trace = pack(Instance.of_squares(Fraction(57, 2), sides), (8, 7, 3, 4, 1, 2, 6, 9, 10, 5, 0))
    report = analyze(trace, ("peaks",))
    peaks = [c for res in report.pieces for c in res.checks if c.name == "peaks"]
    assert [c.status for c in peaks] == ["fail"]
    assert peak_squares(report.pieces[0].graph) == [9, 6, 4]


def test_trench_identity_on_a_construction():
    case = build("checkerboard", m=4)
    report = analyze(pack(case.instance, case.orderings["decreasing"]), ("trenches", "oracle"))
    assert report.ok
    assert sum(t.is_right for t in report.trenches) <= 1


def test_bound():
    case = build("square43", h=2, eps=Fraction(1, 10))
    rep = check_global_bound(pack(case.instance, case.orderings["decreasing"]).packing)
    assert rep.passed and rep.factor == 16
    assert rep.lower_bound == max(case.instance.total_area / 22, case.instance.max_height)
    with pytest.raises(NotSquares):
        check_global_bound(build("rect43", eps=Fraction(1, 100)).reference_packings["opt"])
    report = analyze(pack(build("rect43", eps=Fraction(1, 100)).instance, range(7)), ("bound",))
    assert [c.status for c in report.checks if c.name == "bound"] == ["n/a"]


def test_infeasible_packing_stops_early():
    inst = Instance.of_squares(2, [1, 1])
    trace = PackingTrace.from_packing(Packing.from_positions(inst, [(0, 0, 0), (1, 0, 0)]))
    report = analyze(trace)
    assert not report.ok
    assert [c.name for c in report.checks] == ["feasible"]


def test_unknown_check():
    with pytest.raises(ValueError):
        analyze(frame(), ("nonsense",))
