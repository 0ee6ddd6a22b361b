"""Slow, obviously-correct reference implementations used to cross-check the engine."""

from __future__ import annotations

from fractions import Fraction

from .core import Item, Packing


def fits_at(prefix: Packing, item: Item, x: Fraction, y: Fraction) -> bool:
    if x < 0 or y < 0 or x + item.w > prefix.instance.width:
        return False
    for p in prefix.placements:
        if x < p.rf and p.lf < x + item.w and y < p.tf and p.bf < y + item.h:
            return False
    return True


def candidate_grid_position(prefix: Packing, item: Item) -> tuple[Fraction, Fraction]:
    """Scan y in {0} + top faces, then x in {0} + right faces, and take the first fit.

    A lexicographically minimal position can be pushed neither down nor left, so
    its coordinates are always among these candidates.
    """
    ys = sorted({Fraction(0)} | {p.tf for p in prefix.placements})
    xs = sorted({Fraction(0)} | {p.rf for p in prefix.placements})
    for y in ys:
        for x in xs:
            if fits_at(prefix, item, x, y):
                return x, y
    raise AssertionError("no feasible position; the top face candidate should always fit")
