import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from blpack import Instance, Packing, bl_height, bottom_left_position, feasible, pack
from blpack.engine import (
    InstanceTooLarge,
    distinct_extremes,
    distinct_orderings,
    exhaustive_extremes,
    sampled_extremes,
    worker_count,
)
from blpack.oracle import candidate_grid_position

from conftest import instance_and_order


def oracle_pack(inst, order):
    placed = Packing(inst, ())
    for i in order:
        x, y = candidate_grid_position(placed, inst.items[i])
        placed = Packing.from_positions(inst, [(p.id, p.x, p.y) for p in placed.placements] + [(i, x, y)])
    return placed


@settings(max_examples=150, deadline=None)
@given(instance_and_order())
def test_engine_matches_candidate_grid(case):
    inst, order = case
    trace = pack(inst, order)
    assert trace.packing == oracle_pack(inst, order)
    assert feasible(trace.packing)[0]
    assert bl_height(inst, order) == trace.height


@settings(max_examples=60, deadline=None)
@given(instance_and_order(squares=True, max_items=10))
def test_engine_matches_candidate_grid_squares(case):
    inst, order = case
    assert pack(inst, order).packing == oracle_pack(inst, order)


def test_fills_hole_before_going_up():
    inst = Instance.from_sizes(4, [(1, 2), (2, 1), (1, 2), (2, 1)])
    trace = pack(inst, [0, 1, 2, 3])
    pos = {p.id: (p.x, p.y) for p in trace.packing.placements}
    assert pos == {0: (0, 0), 1: (1, 0), 2: (3, 0), 3: (1, 1)}
    assert trace.height == 2


def test_prefers_lower_over_lefter():
    # the item fits at x=0 only at y=2, but at x=3 already at y=0
    inst = Instance.from_sizes(4, [(3, 2), (1, 1)])
    assert [(p.x, p.y) for p in pack(inst, [0, 1]).packing.placements] == [(0, 0), (3, 0)]


def test_trace_prefixes():
    inst = Instance.of_squares(3, [2, 1, 1, 1])
    trace = pack(inst, [0, 1, 2, 3])
    prefixes = list(trace.prefixes())
    assert len(prefixes) == 5 and prefixes[0].placements == ()
    for k, prefix in enumerate(prefixes[:-1]):
        nxt = trace.packing.placements[k]
        assert bottom_left_position(prefix, inst.items[nxt.id]) == (nxt.x, nxt.y)


def test_non_integer_sizes_scale_exactly():
    eps = Fraction(1, 10 ** 9)
    inst = Instance.of_squares(2, [1 - eps, 1, eps])
    trace = pack(inst, [0, 1, 2])
    assert trace.packing.by_id[1].x == 1 - eps
    assert trace.packing.by_id[2].x == 2 - eps
    assert trace.height == 1


def test_exhaustive_extremes_and_cap():
    inst = Instance.from_sizes(3, [(2, 1), (1, 2), (1, 1), (2, 2)])
    best, worst = exhaustive_extremes(inst)
    heights = [bl_height(inst, o) for o in itertools.permutations(range(4))]
    assert best.height == min(heights) and worst.height == max(heights)
    assert best.orderings_examined == 24
    assert bl_height(inst, best.ordering) == best.height
    assert best.packing.height == best.height
    with pytest.raises(InstanceTooLarge):
        exhaustive_extremes(Instance.of_squares(10, [1] * 10))


def test_distinct_orderings_cover_all_shapes():
    inst = Instance.of_squares(5, [1, 2, 1, 2, 3])
    orders = list(distinct_orderings(inst))
    assert len(orders) == math.factorial(5) // (2 * 2)
    assert len({tuple(inst.items[i].w for i in o) for o in orders}) == len(orders)
    assert [r.height for r in distinct_extremes(inst)] == [r.height for r in exhaustive_extremes(inst)]


def test_sampling_is_seeded(monkeypatch):
    inst = Instance.of_squares(6, [3, 2, 2, 1, 1, 1, 2, 3])
    a = sampled_extremes(inst, 200, seed=5)
    b = sampled_extremes(inst, 200, seed=5, workers=2)
    assert [(r.ordering, r.height) for r in a] == [(r.ordering, r.height) for r in b]
    with pytest.raises(ValueError):
        sampled_extremes(inst, 0, seed=1)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("BLPACK_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("BLPACK_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.setenv("BLPACK_THREADS", "junk")
    assert worker_count() >= 1
