"""Bottom-left placement and ordering search.

The packer keeps the set of maximal free rectangles of the strip (top side open).
A feasible position for a w x h item always lies in one of them, and moving it to
that rectangle's lower-left corner never makes it lexicographically larger, so the
bottom-left position is simply the smallest (y, x) corner among maximal free
rectangles that are large enough. Everything runs on integers after multiplying
by a common denominator, which keeps the arithmetic exact and fast.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .core import Instance, Item, Ordering, Packing, Placement, check_ordering

INF = math.inf
DEFAULT_EXHAUSTIVE_CAP = 9


class InstanceTooLarge(ValueError):
    pass


def _container_first(r: tuple) -> tuple:
    y0, x0, x1, y1 = r
    return (x0, -x1, y0, -y1)


class BottomLeftPacker:
    """Incremental bottom-left placer on integer coordinates.

    Free rectangles are stored as ``(y0, x0, x1, y1)`` tuples sorted
    lexicographically, so the first one that fits gives the bottom-left corner.
    ``y1`` is ``math.inf`` for rectangles open to the top.
    """

    def __init__(self, width: int):
        self.width = width
        self.free: list[tuple] = [(0, 0, width, INF)]
        self._min_w = 0
        self._min_h = 0

    def find(self, w: int, h: int) -> tuple[int, int]:
        for y0, x0, x1, y1 in self.free:
            if x1 - x0 >= w and y1 - y0 >= h:
                return x0, y0
        raise ValueError(f"item of width {w} does not fit a strip of width {self.width}")

    def occupy(self, x: int, y: int, w: int, h: int) -> None:
        """Remove the rectangle [x, x+w] x [y, y+h] from free space."""
        px1, py1 = x + w, y + h
        min_w, min_h = self._min_w, self._min_h
        kept = []
        # pieces of split rectangles, grouped by the side of the item they lie on
        left, right, below, above = set(), set(), set(), set()
        for r in self.free:
            y0, x0, x1, y1 = r
            if x < x1 and px1 > x0 and y < y1 and py1 > y0:
                if x > x0 and x - x0 >= min_w:
                    left.add((y0, x0, x, y1))
                if px1 < x1 and x1 - px1 >= min_w:
                    right.add((y0, px1, x1, y1))
                if y > y0 and y - y0 >= min_h:
                    below.add((y0, x0, x1, y))
                if py1 < y1 and y1 - py1 >= min_h:
                    above.add((py1, x0, x1, y1))
            else:
                kept.append(r)
        # A piece on one side can only sit inside another piece from the same side,
        # or inside an untouched rectangle whose opposite edge touches the item.
        for parts, touching in (
            (left, [q for q in kept if q[2] == x]),
            (right, [q for q in kept if q[1] == px1]),
            (below, [q for q in kept if q[3] == y]),
            (above, [q for q in kept if q[0] == py1]),
        ):
            if not parts:
                continue
            # sorted so that any container precedes what it contains; checking
            # against survivors then suffices, since containment is transitive
            survivors = list(touching)
            for p in sorted(parts, key=_container_first):
                a0, b0, b1, a1 = p
                for q in survivors:
                    if q[0] <= a0 and q[1] <= b0 and b1 <= q[2] and a1 <= q[3]:
                        break
                else:
                    survivors.append(p)
                    insort(kept, p)
        self.free = kept

    def place(self, w: int, h: int) -> tuple[int, int]:
        x, y = self.find(w, h)
        self.occupy(x, y, w, h)
        return x, y

    def forget_smaller_than(self, min_w: int, min_h: int) -> None:
        """Drop free rectangles that no remaining item can use.

        Safe because anything such a rectangle could host is contained in it.
        """
        if (min_w, min_h) == (self._min_w, self._min_h):
            return
        self._min_w, self._min_h = min_w, min_h
        self.free = [r for r in self.free if r[2] - r[1] >= min_w and r[3] - r[0] >= min_h]


def _suffix_minima(values: Sequence[int]) -> list[int]:
    """out[i] = min(values[i:]), with out[len(values)] = 0."""
    out = [0] * (len(values) + 1)
    for i in range(len(values) - 1, -1, -1):
        out[i] = values[i] if i == len(values) - 1 else min(values[i], out[i + 1])
    return out


def _pack_scaled(width: int, ws: Sequence[int], hs: Sequence[int], order: Sequence[int]) -> list[tuple[int, int]]:
    seq_w = [ws[i] for i in order]
    seq_h = [hs[i] for i in order]
    min_w = _suffix_minima(seq_w)
    min_h = _suffix_minima(seq_h)
    packer = BottomLeftPacker(width)
    out = []
    for step in range(len(order)):
        w, h = seq_w[step], seq_h[step]
        x, y = packer.find(w, h)
        # only items still to come need free space from here on
        packer.forget_smaller_than(min_w[step + 1], min_h[step + 1])
        packer.occupy(x, y, w, h)
        out.append((x, y))
    return out


def _height_scaled(width: int, ws: Sequence[int], hs: Sequence[int], order: Sequence[int]) -> int:
    top = 0
    for (x, y), i in zip(_pack_scaled(width, ws, hs, order), order):
        top = max(top, y + hs[i])
    return top


@dataclass(frozen=True)
class PackingTrace:
    """The result of packing an instance in a given order.

    Prefix ``i`` is the packing of the first ``i`` items of ``order``; prefixes
    are materialised on demand from the final placement list.
    """

    instance: Instance
    order: Ordering
    packing: Packing
    produced_by_engine: bool = True

    @classmethod
    def from_packing(cls, packing: Packing) -> "PackingTrace":
        """Treat an arbitrary complete packing as a trace in its placement order."""
        return cls(packing.instance, packing.order, packing, produced_by_engine=False)

    @property
    def height(self) -> Fraction:
        return self.packing.height

    def __len__(self) -> int:
        return len(self.order)

    def prefix(self, i: int) -> Packing:
        return Packing(self.instance, self.packing.placements[:i])

    def prefixes(self) -> Iterable[Packing]:
        for i in range(len(self.order) + 1):
            yield self.prefix(i)


def pack(instance: Instance, ordering: Sequence[int]) -> PackingTrace:
    order = check_ordering(instance, ordering)
    scale, width, ws, hs = instance.scaled
    positions = _pack_scaled(width, ws, hs, order)
    placements = tuple(
        Placement(i, Fraction(x, scale), Fraction(y, scale), instance.items[i].w, instance.items[i].h)
        for (x, y), i in zip(positions, order)
    )
    return PackingTrace(instance, order, Packing(instance, placements))


def bl_height(instance: Instance, ordering: Sequence[int]) -> Fraction:
    scale, width, ws, hs = instance.scaled
    return Fraction(_height_scaled(width, ws, hs, tuple(ordering)), scale)


def bottom_left_position(prefix: Packing, item: Item) -> tuple[Fraction, Fraction]:
    """Lexicographically minimal (y, x) feasible spot for ``item`` next to ``prefix``.

    The prefix does not need to be a bottom-left packing itself.
    """
    width = prefix.instance.width
    scale = lcm(width.denominator, item.w.denominator, item.h.denominator,
                *(v.denominator for p in prefix.placements for v in (p.x, p.y, p.w, p.h)))
    packer = BottomLeftPacker(int(width * scale))
    for p in prefix.placements:
        packer.occupy(int(p.x * scale), int(p.y * scale), int(p.w * scale), int(p.h * scale))
    x, y = packer.find(int(item.w * scale), int(item.h * scale))
    return Fraction(x, scale), Fraction(y, scale)


@dataclass(frozen=True)
class SearchResult:
    ordering: Ordering
    height: Fraction
    orderings_examined: int
    instance: Instance

    @cached_property
    def packing(self) -> Packing:
        return pack(self.instance, self.ordering).packing


def worker_count() -> int:
    """Parallelism cap from BLPACK_THREADS (0 or unset means one per CPU)."""
    raw = os.environ.get("BLPACK_THREADS", "0").strip() or "0"
    try:
        wanted = int(raw)
    except ValueError:
        wanted = 0
    if wanted <= 0:
        wanted = os.cpu_count() or 1
    return max(1, wanted)


def _scan(args) -> tuple[tuple[int, Ordering], tuple[int, Ordering], int]:
    width, ws, hs, orders = args
    best = worst = None
    count = 0
    for order in orders:
        count += 1
        hgt = _height_scaled(width, ws, hs, order)
        if best is None or (hgt, order) < best:
            best = (hgt, order)
        if worst is None or (-hgt, order) < worst:
            worst = (-hgt, order)
    return best, worst, count


def _chunks(iterable, size):
    it = iter(iterable)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _extremes(instance: Instance, orders: Iterable[Ordering], workers: int | None) -> tuple[SearchResult, SearchResult]:
    scale, width, ws, hs = instance.scaled
    workers = worker_count() if workers is None else max(1, workers)
    if workers == 1:
        results = [_scan((width, ws, hs, orders))]
    else:
        jobs = ((width, ws, hs, block) for block in _chunks(orders, 5000))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, jobs))
    results = [r for r in results if r[2]]
    best = min(r[0] for r in results)
    worst = min(r[1] for r in results)
    total = sum(r[2] for r in results)
    return (
        SearchResult(best[1], Fraction(best[0], scale), total, instance),
        SearchResult(worst[1], Fraction(-worst[0], scale), total, instance),
    )


def exhaustive_extremes(instance: Instance, cap: int = DEFAULT_EXHAUSTIVE_CAP,
                        workers: int | None = None) -> tuple[SearchResult, SearchResult]:
    """Best and worst bottom-left heights over all n! orderings.

    Orderings are enumerated in lexicographic id order; ties resolve to the
    lexicographically smallest ordering.
    """
    if instance.n > cap:
        raise InstanceTooLarge(f"{instance.n} items exceeds the exhaustive cap of {cap}")
    return _extremes(instance, itertools.permutations(range(instance.n)), workers)


def best_exhaustive(instance: Instance, cap: int = DEFAULT_EXHAUSTIVE_CAP,
                    workers: int | None = None) -> SearchResult:
    return exhaustive_extremes(instance, cap, workers)[0]


def distinct_orderings(instance: Instance) -> Iterable[Ordering]:
    """One ordering per distinct sequence of item sizes, in lexicographic order.

    Items with equal dimensions are interchangeable for the geometry, so this
    covers every bottom-left height while visiting far fewer orderings.
    """
    kinds: dict[tuple, list[int]] = {}
    for it in instance.items:
        kinds.setdefault((it.w, it.h), []).append(it.id)
    labels = sorted(kinds)
    seq = sorted(labels.index(k) for k in (((it.w, it.h)) for it in instance.items))
    pools = [kinds[lab] for lab in labels]
    while True:
        taken = [0] * len(pools)
        order = []
        for lab in seq:
            order.append(pools[lab][taken[lab]])
            taken[lab] += 1
        yield tuple(order)
        # next lexicographic permutation of the multiset
        i = len(seq) - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(seq) - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])


def distinct_extremes(instance: Instance, workers: int | None = None) -> tuple[SearchResult, SearchResult]:
    return _extremes(instance, distinct_orderings(instance), workers)


def sampled_extremes(instance: Instance, samples: int, seed: int,
                     workers: int | None = None) -> tuple[SearchResult, SearchResult]:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = random.Random(seed)
    ids = list(range(instance.n))
    orders = [tuple(rng.sample(ids, len(ids))) for _ in range(samples)]
    return _extremes(instance, orders, workers)
