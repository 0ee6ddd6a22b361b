"""Exact value types for strip packing: items, instances, placements, packings.

Every coordinate and size is a ``fractions.Fraction``. Floats are rejected at the
boundary so that tie-breaking stays meaningful.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction
Ordering = tuple[int, ...]

_RATIONAL_TEXT = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class InvalidInstance(ValueError):
    pass


class InvalidOrdering(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (q > 0, not necessarily reduced)."""
    if not isinstance(text, str):
        raise TypeError(f"expected rational text, got {type(text).__name__}")
    match = _RATIONAL_TEXT.match(text)
    if match is None:
        raise ValueError(f"not a rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(q: Fraction | int) -> str:
    # Fraction normalises on construction, so str() is already lowest terms
    return str(Fraction(q))


def as_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not sizes")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"refusing inexact value {value!r}; use int, Fraction or 'p/q' text")


@dataclass(frozen=True)
class Item:
    id: int
    w: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", as_rational(self.w))
        object.__setattr__(self, "h", as_rational(self.h))
        if self.w <= 0 or self.h <= 0:
            raise InvalidInstance(f"item {self.id} must have positive size, got {self.w}x{self.h}")

    @property
    def is_square(self) -> bool:
        return self.w == self.h

    @property
    def area(self) -> Fraction:
        return self.w * self.h


@dataclass(frozen=True)
class Instance:
    width: Fraction
    items: tuple[Item, ...]

    def __post_init__(self):
        object.__setattr__(self, "width", as_rational(self.width))
        object.__setattr__(self, "items", tuple(self.items))
        if self.width <= 0:
            raise InvalidInstance(f"strip width must be positive, got {self.width}")
        for pos, item in enumerate(self.items):
            if item.id != pos:
                raise InvalidInstance(f"item ids must be 0..n-1 in order; position {pos} has id {item.id}")
            if item.w > self.width:
                raise InvalidInstance(f"item {item.id} is wider ({item.w}) than the strip ({self.width})")

    @classmethod
    def from_sizes(cls, width, sizes: Iterable[tuple]) -> "Instance":
        return cls(width, tuple(Item(i, w, h) for i, (w, h) in enumerate(sizes)))

    @classmethod
    def of_squares(cls, width, sides: Iterable) -> "Instance":
        return cls(width, tuple(Item(i, s, s) for i, s in enumerate(sides)))

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def kind(self) -> str:
        return "squares" if all(it.is_square for it in self.items) else "rectangles"

    @cached_property
    def total_area(self) -> Fraction:
        return sum((it.area for it in self.items), Fraction(0))

    @cached_property
    def max_height(self) -> Fraction:
        return max((it.h for it in self.items), default=Fraction(0))

    @cached_property
    def scaled(self) -> tuple[int, int, tuple[int, ...], tuple[int, ...]]:
        """Common denominator view: (scale, width, widths, heights) as integers."""
        scale = lcm(self.width.denominator, *(it.w.denominator for it in self.items),
                    *(it.h.denominator for it in self.items))
        return (
            scale,
            int(self.width * scale),
            tuple(int(it.w * scale) for it in self.items),
            tuple(int(it.h * scale) for it in self.items),
        )


def check_ordering(instance: Instance, order: Sequence[int]) -> Ordering:
    order = tuple(order)
    if sorted(order) != list(range(instance.n)):
        raise InvalidOrdering(f"ordering is not a permutation of 0..{instance.n - 1}: {list(order)}")
    return order


def identity_ordering(instance: Instance) -> Ordering:
    return tuple(range(instance.n))


def order_by_decreasing_size(instance: Instance) -> Ordering:
    """Largest area first; equal items keep id order."""
    return tuple(sorted(range(instance.n), key=lambda i: (-instance.items[i].area, i)))


def order_by_decreasing_width(instance: Instance) -> Ordering:
    return tuple(sorted(range(instance.n), key=lambda i: (-instance.items[i].w, i)))


@dataclass(frozen=True)
class Placement:
    id: int
    x: Fraction
    y: Fraction
    w: Fraction
    h: Fraction

    @property
    def lf(self) -> Fraction:
        return self.x

    @property
    def rf(self) -> Fraction:
        return self.x + self.w

    @property
    def bf(self) -> Fraction:
        return self.y

    @property
    def tf(self) -> Fraction:
        return self.y + self.h


@dataclass(frozen=True)
class Packing:
    """An instance plus lower-left corners for some (usually all) of its items.

    ``placements`` are kept in placement order, which matters for traces.
    """

    instance: Instance
    placements: tuple[Placement, ...]

    @classmethod
    def from_positions(cls, instance: Instance, positions: Iterable[tuple]) -> "Packing":
        out = []
        for item_id, x, y in positions:
            item = instance.items[item_id]
            out.append(Placement(item_id, as_rational(x), as_rational(y), item.w, item.h))
        return cls(instance, tuple(out))

    @cached_property
    def height(self) -> Fraction:
        return max((p.tf for p in self.placements), default=Fraction(0))

    @cached_property
    def by_id(self) -> dict[int, Placement]:
        return {p.id: p for p in self.placements}

    @property
    def order(self) -> Ordering:
        return tuple(p.id for p in self.placements)

    @property
    def is_complete(self) -> bool:
        return len(self.by_id) == self.instance.n == len(self.placements)


def height(packing: Packing) -> Fraction:
    return packing.height


def area_lower_bound(instance: Instance) -> Fraction:
    if instance.n == 0:
        return Fraction(0)
    return max(instance.total_area / instance.width, instance.max_height)


def feasible(packing: Packing) -> tuple[bool, list[str]]:
    """Check strip containment and pairwise interior-disjointness.

    Returns the verdict and a list of human-readable violations. Pairs are found
    with a sweep over x so large packings stay cheap.
    """
    inst = packing.instance
    violations: list[str] = []
    seen: set[int] = set()
    for p in packing.placements:
        if p.id in seen:
            violations.append(f"item {p.id} placed twice")
        seen.add(p.id)
        if not 0 <= p.id < inst.n:
            violations.append(f"unknown item id {p.id}")
            continue
        item = inst.items[p.id]
        if (p.w, p.h) != (item.w, item.h):
            violations.append(f"item {p.id} placed with size {p.w}x{p.h}, expected {item.w}x{item.h}")
        if p.x < 0 or p.y < 0 or p.rf > inst.width:
            violations.append(f"item {p.id} at ({p.x}, {p.y}) leaves the strip")

    ordered = sorted(packing.placements, key=lambda p: (p.x, p.id))
    for i, a in enumerate(ordered):
        a_rf = a.rf
        for b in ordered[i + 1:]:
            if b.x >= a_rf:
                break
            if b.y < a.tf and a.y < b.tf:
                first, second = sorted((a.id, b.id))
                violations.append(f"items {first} and {second} overlap")
    return not violations, violations
