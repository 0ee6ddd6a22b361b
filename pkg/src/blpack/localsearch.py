"""k-local search over orderings, driven by bottom-left heights."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .core import Instance, Ordering, check_ordering
from .engine import bl_height


class Strategy(str, Enum):
    FIRST = "first"
    BEST = "best"


@dataclass(frozen=True)
class SearchTrace:
    """Orderings visited by a run, with their heights, initial ordering first."""

    steps: tuple[tuple[Ordering, Fraction], ...]
    strategy: Strategy
    k: int

    @property
    def step_count(self) -> int:
        return len(self.steps) - 1

    @property
    def final(self) -> tuple[Ordering, Fraction]:
        return self.steps[-1]

    @property
    def heights(self) -> list[Fraction]:
        return [h for _, h in self.steps]


def _displacing(chosen: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Permutations of ``chosen`` (lexicographic) that move every element."""
    for perm in itertools.permutations(chosen):
        if all(a != b for a, b in zip(perm, chosen)):
            yield perm


def neighbors(ordering: Sequence[int], k: int) -> Iterator[Ordering]:
    """Orderings that differ from ``ordering`` at between 2 and k positions.

    Displaced index sets come in lexicographic order; within a set, the
    rearrangements come in lexicographic order of the permuted positions.
    """
    base = tuple(ordering)
    n = len(base)
    if k < 1:
        raise ValueError("k must be at least 1")
    sets = sorted(s for size in range(2, min(k, n) + 1) for s in itertools.combinations(range(n), size))
    for chosen in sets:
        for perm in _displacing(chosen):
            out = list(base)
            for dst, src in zip(chosen, perm):
                out[dst] = base[src]
            yield tuple(out)


def support(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where two orderings differ."""
    return sum(1 for x, y in zip(a, b) if x != y)


def _shape_key(instance: Instance, ordering: Sequence[int]) -> tuple:
    return tuple((instance.items[i].w, instance.items[i].h) for i in ordering)


def improve_step(instance: Instance, ordering: Sequence[int], k: int,
                 strategy: Strategy | str = Strategy.FIRST) -> Ordering | None:
    """One improving move, or None at a k-local optimum."""
    strategy = Strategy(strategy)
    ordering = check_ordering(instance, ordering)
    current = bl_height(instance, ordering)
    # orderings with the same sequence of item shapes pack identically
    seen: dict[tuple, Fraction] = {_shape_key(instance, ordering): current}
    best: tuple[Fraction, Ordering] | None = None
    for cand in neighbors(ordering, k):
        key = _shape_key(instance, cand)
        hgt = seen.get(key)
        if hgt is None:
            hgt = seen[key] = bl_height(instance, cand)
        if hgt < current:
            if strategy is Strategy.FIRST:
                return cand
            if best is None or hgt < best[0]:
                best = (hgt, cand)
    return None if best is None else best[1]


def run(instance: Instance, ordering: Sequence[int], k: int,
        strategy: Strategy | str = Strategy.FIRST, max_steps: int = 1000) -> SearchTrace:
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    strategy = Strategy(strategy)
    current = check_ordering(instance, ordering)
    steps = [(current, bl_height(instance, current))]
    while len(steps) <= max_steps:
        nxt = improve_step(instance, current, k, strategy)
        if nxt is None:
            break
        current = nxt
        steps.append((current, bl_height(instance, current)))
    return SearchTrace(tuple(steps), strategy, k)


def countdown_schedule(k: int) -> list[Ordering]:
    """Orderings for the tall/flat staircase instance whose heights fall by one each step.

    Ordering p writes N = 2^k - p - 1 in binary and lists the tall rectangles by
    scanning bits upward: a set bit j emits j, followed by the zero bits below it
    that are still waiting, largest first. Tall rectangle j has id 2j; flat
    rectangles keep their original odd slots, so consecutive orderings only
    differ among the tall ones.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    out = []
    for p in range(2 ** (k - 1)):
        number = 2 ** k - p - 1
        talls: list[int] = []
        waiting: list[int] = []
        for j in range(k):
            if number >> j & 1:
                talls.append(j)
                talls.extend(reversed(waiting))
                waiting.clear()
            else:
                waiting.append(j)
        order = []
        for pos, j in enumerate(talls):
            order += [2 * j, 2 * pos + 1]
        out.append(tuple(order))
    return out


def run_schedule(instance: Instance, schedule: Sequence[Sequence[int]], k: int) -> SearchTrace:
    """Follow a prescribed list of orderings, checking that each one is a legal improving move."""
    steps = []
    for order in schedule:
        order = check_ordering(instance, order)
        hgt = bl_height(instance, order)
        if steps:
            prev, prev_h = steps[-1]
            if support(prev, order) > k:
                raise ValueError(f"scheduled move changes {support(prev, order)} positions, more than k={k}")
            if hgt >= prev_h:
                raise ValueError(f"scheduled move does not improve: {prev_h} -> {hgt}")
        steps.append((order, hgt))
    return SearchTrace(tuple(steps), Strategy.FIRST, k)
