"""Builders for the adversarial instance families.

Each builder returns a :class:`GeneratedCase`: the instance, named orderings,
hand-placed reference layouts, and the heights those should produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .core import Instance, Item, Ordering, Packing, as_rational, order_by_decreasing_size
from .engine import BottomLeftPacker


class InvalidParameter(ValueError):
    pass


@dataclass(frozen=True)
class GeneratedCase:
    name: str
    params: dict
    instance: Instance
    orderings: dict[str, Ordering] = field(default_factory=dict)
    reference_packings: dict[str, Packing] = field(default_factory=dict)
    expected: dict[str, Fraction] = field(default_factory=dict)
    groups: dict[str, tuple[int, ...]] = field(default_factory=dict)


def _eps(value, upper: Fraction, inclusive: bool = True) -> Fraction:
    eps = as_rational(value)
    ok = eps > 0 and (eps <= upper if inclusive else eps < upper)
    if not ok:
        bound = f"<= {upper}" if inclusive else f"< {upper}"
        raise InvalidParameter(f"eps must satisfy 0 < eps {bound}, got {eps}")
    return eps


def _int_param(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidParameter(f"{name} must be >= {minimum}, got {value}")
    return value


def rect43(eps) -> GeneratedCase:
    """Seven rectangles in a strip of width 7: optimum 3+eps, best bottom-left 4."""
    eps = _eps(eps, Fraction(1, 5))
    big, small, tall = (3 - eps, 2), (2, 1), (1, 1 + eps)
    inst = Instance.from_sizes(7, [big, big, small, small, small, small, tall])
    # the left optimum of the unperturbed instance, with the top pair lifted by eps
    opt = Packing.from_positions(inst, [
        (0, 0, 0), (2, 3, 0), (3, 5, 0), (6, 3, 1), (1, 4, 1), (4, 0, 2 + eps), (5, 2, 2 + eps),
    ])
    # what bottom-left makes of that optimum's order
    attempt = Packing.from_positions(inst, [
        (0, 0, 0), (2, 3 - eps, 0), (3, 5 - eps, 0), (6, 3 - eps, 1), (1, 4 - eps, 1), (4, 0, 2), (5, 0, 3),
    ])
    return GeneratedCase(
        "rect43", {"eps": eps}, inst,
        orderings={"layout": (0, 2, 3, 6, 1, 4, 5), "decreasing": order_by_decreasing_size(inst)},
        reference_packings={"opt": opt, "bl_layout": attempt},
        expected={"opt_height": 3 + eps, "bl_best_height": Fraction(4), "bl_height_layout": Fraction(4)},
    )


def rect43int(h: int) -> GeneratedCase:
    """Integer version in width 10: optimum 3h+1, best bottom-left 4h (h >= 2)."""
    h = _int_param(h, "h", 1)
    big, small, tall = (4, 2 * h), (3, h), (1, h + 1)
    inst = Instance.from_sizes(10, [big, big, small, small, small, small, tall])
    opt = Packing.from_positions(inst, [
        (0, 0, 0), (2, 4, 0), (3, 7, 0), (6, 4, h), (1, 6, h), (4, 0, 2 * h + 1), (5, 3, 2 * h + 1),
    ])
    expected = {"opt_height": Fraction(3 * h + 1)}
    if h >= 2:
        # for h = 1 the bound is vacuous and only measured values are reported
        expected["bl_best_height"] = Fraction(4 * h)
    return GeneratedCase(
        "rect43int", {"h": h}, inst,
        orderings={"layout": (0, 2, 3, 6, 1, 4, 5), "decreasing": order_by_decreasing_size(inst)},
        reference_packings={"opt": opt},
        expected=expected,
    )


def square65(eps) -> GeneratedCase:
    """Squares 3-2eps (x2), 2 (x4), 1+eps in width 7."""
    eps = _eps(eps, Fraction(1, 5))
    big, unit = 3 - 2 * eps, 1 + eps
    inst = Instance.of_squares(7, [big, big, 2, 2, 2, 2, unit])
    opt_a = Packing.from_positions(inst, [
        (0, 0, 0), (2, 3, 0), (3, 5, 0), (6, 3, 2), (1, 4 + eps, 2), (4, 0, 3 + eps), (5, 2, 3 + eps),
    ])
    opt_b = Packing.from_positions(inst, [
        (2, 0, 0), (3, 2, 0), (0, 4, 0), (1, 0, 2), (6, 3 - 2 * eps, 2),
        (4, 3 - 2 * eps, 3 + eps), (5, 5 - 2 * eps, 3 + eps),
    ])
    best_bl = Packing.from_positions(inst, [
        (0, 0, 0), (2, 3 - 2 * eps, 0), (3, 5 - 2 * eps, 0), (4, 3 - 2 * eps, 2),
        (5, 5 - 2 * eps, 2), (1, 0, 3 - 2 * eps), (6, 3 - 2 * eps, 4),
    ])
    return GeneratedCase(
        "square65", {"eps": eps}, inst,
        orderings={"layout": (0, 2, 3, 4, 5, 1, 6), "decreasing": order_by_decreasing_size(inst)},
        reference_packings={"opt_a": opt_a, "opt_b": opt_b, "bl_layout": best_bl},
        expected={
            "opt_height": 5 + eps,
            "bl_best_height": 6 - 4 * eps,
            "bl_height_layout": 6 - 4 * eps,
        },
    )


def square43(h: int, eps) -> GeneratedCase:
    """One square h+eps, 4h squares h+1, 2h squares 2h+1-eps in width 4h^2+3h.

    The optimum layout (``opt``) has a column holding two (h+1)-squares around
    the (h+eps)-square, so its height is 3h+2+eps. The "opt_height_claimed"
    entry keeps the value 3h+2-eps for comparison; see the tests for why no
    packing reaches it.
    """
    h = _int_param(h, "h", 2)
    eps = _eps(eps, Fraction(1, 4 * h), inclusive=False)
    mid, small, big = h + eps, Fraction(h + 1), 2 * h + 1 - eps
    sizes = [mid] + [small] * (4 * h) + [big] * (2 * h)
    inst = Instance.of_squares(4 * h * h + 3 * h, sizes)
    smalls = list(range(1, 4 * h + 1))
    bigs = list(range(4 * h + 1, 6 * h + 1))

    left_span = 2 * h * (h + 1)
    opt = [(smalls[k], k * (h + 1), 0) for k in range(2 * h)]
    opt += [(bigs[k], k * big, h + 1) for k in range(h)]
    opt.append((0, h * big, h + 1))
    opt += [(bigs[h + k], left_span + k * big, 0) for k in range(h)]
    opt += [(smalls[2 * h + k], h * big + k * (h + 1), 2 * h + 1 + eps) for k in range(2 * h)]

    row_layout = [(bigs[k], k * big, 0) for k in range(h)]
    row_layout += [(smalls[k], h * big + k * (h + 1), 0) for k in range(2 * h)]
    row_layout += [(smalls[2 * h + k], h * big + k * (h + 1), h + 1) for k in range(2 * h)]
    row_layout += [(bigs[h + k], k * big, big) for k in range(h)]
    row_layout.append((0, h * big, 2 * h + 2))
    layout = tuple(p[0] for p in row_layout)

    return GeneratedCase(
        "square43", {"h": h, "eps": eps}, inst,
        orderings={"layout": layout, "decreasing": order_by_decreasing_size(inst)},
        reference_packings={
            "opt": Packing.from_positions(inst, opt),
            "bl_layout": Packing.from_positions(inst, row_layout),
        },
        expected={
            "opt_height": 3 * h + 2 + eps,
            "opt_height_claimed": 3 * h + 2 - eps,
            "bl_best_height": 4 * h + 2 - 2 * eps,
            "bl_height_layout": 4 * h + 2 - 2 * eps,
        },
        groups={"middle": (0,), "small": tuple(smalls), "big": tuple(bigs)},
    )


def _even_m(m) -> int:
    m = _int_param(m, "m", 2)
    if m % 2:
        raise InvalidParameter(f"m must be even, got {m}")
    return m


def checkerboard_eps(m: int) -> Fraction:
    return Fraction(2, m ** 3 * (m * m + 1))


def _checkerboard_sizes(m: int) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    eps = checkerboard_eps(m)
    graded = [2 - i * eps for i in range(1, m * m + 1)]
    units = [Fraction(1)] * (m ** 3 + m * (m - 1) // 2)
    return eps, graded, units


def checkerboard(m: int) -> GeneratedCase:
    """m^2 graded squares 2 - i*eps followed by unit squares, in width 2m^2 - 1/m."""
    m = _even_m(m)
    eps, graded, units = _checkerboard_sizes(m)
    inst = Instance.of_squares(2 * m * m - Fraction(1, m), graded + units)
    n_graded = len(graded)
    return GeneratedCase(
        "checkerboard", {"m": m}, inst,
        orderings={"decreasing": tuple(range(inst.n))},
        expected={
            "eps": eps,
            "bl_height_decreasing": m + 2 - eps,
            "opt_upper_bound": Fraction(m, 2) + 3,
        },
        groups={"graded": tuple(range(n_graded)), "unit": tuple(range(n_graded, inst.n))},
    )


def reset_row_sizes(m: int) -> list[Fraction]:
    """Sizes of the row that levels the checkerboard at height m+3, largest first."""
    m = _even_m(m)
    eps = checkerboard_eps(m)
    indices = [m * m] * (m + 1)
    indices += range(m * m - 1, m, -1)
    indices += [i for i in range(m, 0, -1) if i % 2]
    return [1 + i * eps for i in indices]


def reset_row(m: int, first_id: int = 0) -> tuple[list[Item], Ordering]:
    sizes = reset_row_sizes(m)
    items = [Item(first_id + k, s, s) for k, s in enumerate(sizes)]
    return items, tuple(it.id for it in items)


def resetrow(m: int) -> GeneratedCase:
    """Checkerboard followed by its reset row."""
    m = _even_m(m)
    base = checkerboard(m)
    items, suffix = reset_row(m, first_id=base.instance.n)
    inst = Instance(base.instance.width, base.instance.items + tuple(items))
    groups = dict(base.groups)
    groups["reset"] = suffix
    expected = dict(base.expected)
    expected["reset_top"] = Fraction(m + 3)
    return GeneratedCase(
        "resetrow", {"m": m}, inst,
        orderings={"decreasing": tuple(range(inst.n))},
        expected=expected,
        groups=groups,
    )


def ten_thirds_m(n: int) -> int:
    """Largest even m with m <= (4/3) 2^n."""
    m = (4 * 2 ** n) // 3
    return m - (m % 2)


class _RowBuilder:
    """Packs items as they are created so end-of-row space can be measured."""

    def __init__(self, width: Fraction, scale: int):
        self.width = width
        self.scale = scale
        self.packer = BottomLeftPacker(int(width * scale))
        # every item of the construction is at least 1 x 1
        self.packer.forget_smaller_than(scale, scale)
        self.sizes: list[Fraction] = []
        self.positions: list[tuple[Fraction, Fraction]] = []

    def add(self, size: Fraction) -> int:
        s = int(size * self.scale)
        x, y = self.packer.place(s, s)
        self.sizes.append(size)
        self.positions.append((Fraction(x, self.scale), Fraction(y, self.scale)))
        return len(self.sizes) - 1

    def space_after(self, idx: int) -> Fraction:
        return self.width - (self.positions[idx][0] + self.sizes[idx])


def tenthirds(n: int) -> GeneratedCase:
    """Checkerboard, reset row, rows of doubling squares, and a capstone square.

    Filler squares are appended to a row while the space right of the row's
    last square meets the threshold (at least 4+2eps for row 1, strictly more
    than 2^(j+1) + 2^j eps for row j >= 2).
    """
    n = _int_param(n, "n", 2)
    m = ten_thirds_m(n)
    eps, graded, units = _checkerboard_sizes(m)
    width = 2 * m * m - Fraction(1, m)
    scale = lcm(eps.denominator, width.denominator)
    rows = _RowBuilder(width, scale)
    groups: dict[str, list[int]] = {"graded": [], "unit": [], "reset": []}

    for s in graded:
        groups["graded"].append(rows.add(s))
    for s in units:
        groups["unit"].append(rows.add(s))
    for s in reset_row_sizes(m):
        groups["reset"].append(rows.add(s))

    row1: list[int] = []
    for i in range(1, int(width // 6) + 1):
        a = i % 2
        for _ in range(4):
            row1.append(rows.add(Fraction(1)))
        row1.append(rows.add(2 + (a + 1) * eps))
    while rows.space_after(row1[-1]) >= 4 + 2 * eps:
        row1.append(rows.add(2 + eps))
    groups["row1"] = row1

    for j in range(2, n):
        row: list[int] = []
        for i in range(1, int(width // (2 ** j + 2 ** (j + 1))) + 1):
            row.append(rows.add(2 ** j + (i % 2 + 2 ** (j - 1)) * eps))
        while rows.space_after(row[-1]) > 2 ** (j + 1) + 2 ** j * eps:
            row.append(rows.add(2 ** j + 2 ** (j - 1) * eps))
        groups[f"row{j}"] = row

    groups["capstone"] = [rows.add(2 ** n + 2 ** (n - 1) * eps)]

    inst = Instance.of_squares(width, rows.sizes)
    measured = max(y + s for (x, y), s in zip(rows.positions, rows.sizes))
    bound = m + sum(2 ** i for i in range(1, n)) + 2 ** n
    return GeneratedCase(
        "tenthirds", {"n": n}, inst,
        orderings={"adversarial": tuple(range(inst.n))},
        expected={
            "eps": eps,
            "m": Fraction(m),
            "bl_height_lower_bound": Fraction(bound),
            "bl_height_adversarial": measured,
        },
        groups={k: tuple(v) for k, v in groups.items()},
    )


def localsearch(k: int) -> GeneratedCase:
    """2k+4 unit squares and 2k+5 squares of size k+2 in width (2k+4)(k+3)."""
    k = _int_param(k, "k", 1)
    n_units, n_bigs, side = 2 * k + 4, 2 * k + 5, k + 2
    inst = Instance.of_squares((2 * k + 4) * (k + 3), [1] * n_units + [side] * n_bigs)
    units = list(range(n_units))
    bigs = list(range(n_units, n_units + n_bigs))
    adversarial = []
    for u, b in zip(units, bigs):
        adversarial += [u, b]
    adversarial.append(bigs[-1])

    opt = [(b, i * side, 0) for i, b in enumerate(bigs)]
    x0 = n_bigs * side
    opt += [(u, x0 + j % side, j // side) for j, u in enumerate(units)]
    return GeneratedCase(
        "localsearch", {"k": k}, inst,
        orderings={"adversarial": tuple(adversarial), "decreasing": order_by_decreasing_size(inst)},
        reference_packings={"opt": Packing.from_positions(inst, opt)},
        expected={
            "opt_height": Fraction(side),
            "klocal_height": Fraction(2 * side),
            "bl_height_adversarial": Fraction(2 * side),
        },
        groups={"unit": tuple(units), "big": tuple(bigs)},
    )


def expsteps(k: int) -> GeneratedCase:
    """Tall rectangles (1/k, 2^i) interleaved with flat ones (1, 1/k), width 1.

    Ids alternate: 2i is the tall rectangle of height 2^i, 2i+1 a flat one.
    """
    k = _int_param(k, "k", 1)
    sizes = []
    for i in range(k):
        sizes += [(Fraction(1, k), Fraction(2 ** i)), (Fraction(1), Fraction(1, k))]
    inst = Instance.from_sizes(1, sizes)
    return GeneratedCase(
        "expsteps", {"k": k}, inst,
        orderings={"initial": tuple(range(2 * k))},
        expected={"bl_height_initial": Fraction(2 ** k), "final_height": Fraction(2 ** (k - 1) + 1)},
        groups={"tall": tuple(range(0, 2 * k, 2)), "flat": tuple(range(1, 2 * k, 2))},
    )


CONSTRUCTIONS = {
    "rect43": (rect43, {"eps": Fraction}),
    "rect43int": (rect43int, {"h": int}),
    "square65": (square65, {"eps": Fraction}),
    "square43": (square43, {"h": int, "eps": Fraction}),
    "checkerboard": (checkerboard, {"m": int}),
    "resetrow": (resetrow, {"m": int}),
    "tenthirds": (tenthirds, {"n": int}),
    "localsearch": (localsearch, {"k": int}),
    "expsteps": (expsteps, {"k": int}),
}


def build(name: str, **params) -> GeneratedCase:
    if name not in CONSTRUCTIONS:
        raise InvalidParameter(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")
    builder, schema = CONSTRUCTIONS[name]
    missing = set(schema) - set(params)
    extra = set(params) - set(schema)
    if missing or extra:
        raise InvalidParameter(f"{name} takes parameters {sorted(schema)}, got {sorted(params)}")
    return builder(**params)
