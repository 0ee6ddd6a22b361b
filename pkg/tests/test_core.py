from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blpack import (
    Instance,
    InvalidInstance,
    InvalidOrdering,
    Item,
    Packing,
    area_lower_bound,
    feasible,
    format_rational,
    parse_rational,
)
from blpack.core import as_rational, check_ordering, order_by_decreasing_size, order_by_decreasing_width


@given(st.fractions())
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-7/14", Fraction(-1, 2)), (" 10 / 4 ", Fraction(5, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "1.5", "1/0", "a/b", "1/-2", "2e3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_as_rational_refuses_floats():
    with pytest.raises(TypeError):
        as_rational(0.1)
    with pytest.raises(TypeError):
        as_rational(True)


def test_tiny_eps_stays_exact():
    m = 4
    eps = Fraction(2, m ** 3 * (m * m + 1))
    assert eps == Fraction(1, 544)
    assert sum([eps] * 544) == 1


def test_instance_validation():
    with pytest.raises(InvalidInstance):
        Instance(2, (Item(0, 3, 1),))
    with pytest.raises(InvalidInstance):
        Instance(5, (Item(1, 1, 1),))
    with pytest.raises(InvalidInstance):
        Instance(0, ())
    with pytest.raises(ValueError):
        Item(0, 0, 1)


def test_instance_kind_and_bounds():
    sq = Instance.of_squares(4, [1, 2, 2])
    assert sq.kind == "squares"
    assert area_lower_bound(sq) == Fraction(9, 4) > 2
    rect = Instance.from_sizes(4, [(1, 3), (2, 1)])
    assert rect.kind == "rectangles"
    assert area_lower_bound(rect) == 3


def test_orderings():
    inst = Instance.from_sizes(10, [(1, 1), (3, 1), (2, 2), (3, 1)])
    assert order_by_decreasing_size(inst) == (2, 1, 3, 0)
    assert order_by_decreasing_width(inst) == (1, 3, 2, 0)
    assert check_ordering(inst, [3, 2, 1, 0]) == (3, 2, 1, 0)
    with pytest.raises(InvalidOrdering):
        check_ordering(inst, [0, 1, 2, 2])
    with pytest.raises(InvalidOrdering):
        check_ordering(inst, [0, 1, 2])


def test_feasible_touching_is_fine():
    inst = Instance.of_squares(2, [1, 1, 1])
    ok, problems = feasible(Packing.from_positions(inst, [(0, 0, 0), (1, 1, 0), (2, 0, 1)]))
    assert ok, problems


def test_feasible_reports_problems():
    inst = Instance.of_squares(2, [1, 1])
    ok, problems = feasible(Packing.from_positions(inst, [(0, 0, 0), (1, "1/2", "1/2")]))
    assert not ok and problems == ["items 0 and 1 overlap"]
    ok, problems = feasible(Packing.from_positions(inst, [(0, "3/2", 0), (1, 0, -1)]))
    assert not ok and len(problems) == 2


def test_packing_height():
    inst = Instance.from_sizes(3, [(1, "5/2"), (2, 1)])
    p = Packing.from_positions(inst, [(0, 0, 0), (1, 1, 2)])
    assert p.height == 3
    assert p.order == (0, 1)
    assert p.by_id[1].rf == 3
