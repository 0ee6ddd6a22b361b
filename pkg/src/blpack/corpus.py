"""Seeded random square instances for the property suites."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, Ordering


@dataclass(frozen=True)
class CorpusCase:
    index: int
    instance: Instance
    ordering: Ordering


def random_square_case(rng: random.Random, index: int = 0) -> CorpusCase:
    """4 to 12 squares with sides p/q (p in 1..20, q in 1..4), width between the
    largest side and four times it in quarter steps, and a shuffled order."""
    n = rng.randint(4, 12)
    sides = [Fraction(rng.randint(1, 20), rng.randint(1, 4)) for _ in range(n)]
    width = max(sides) * Fraction(rng.randint(4, 16), 4)
    order = list(range(n))
    rng.shuffle(order)
    return CorpusCase(index, Instance.of_squares(width, sides), tuple(order))


def square_corpus(count: int, seed: int) -> list[CorpusCase]:
    rng = random.Random(seed)
    return [random_square_case(rng, k) for k in range(count)]
