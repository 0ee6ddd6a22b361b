from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core import Packing, area_lower_bound
from ..engine import PackingTrace, bottom_left_position
from ..oracle import candidate_grid_position
from .report import Check

COVER_COPIES = 12  # copies of the squares needed to cover pieces and trenches
TRENCH_STRIPS = 3  # strips of height h_max charged to the trenches
BOUND_FACTOR = COVER_COPIES + TRENCH_STRIPS + 1


class NotSquares(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    bl_height: Fraction
    lower_bound: Fraction
    ratio: Fraction
    f: int
    g: int
    h_max: Fraction
    area_squares: Fraction
    area_unoccupied: Fraction

    @property
    def factor(self) -> int:
        return self.f + self.g + 1

    @property
    def passed(self) -> bool:
        return self.bl_height <= self.factor * self.lower_bound


def check_global_bound(packing: Packing) -> BoundReport:
    """Height against 16 times max(area / W, tallest item)."""
    inst = packing.instance
    if inst.kind != "squares":
        raise NotSquares("the worst-order bound only covers instances of squares")
    lb = area_lower_bound(inst)
    h = packing.height
    area = inst.total_area
    return BoundReport(
        h, lb, h / lb if lb else Fraction(0), COVER_COPIES, TRENCH_STRIPS,
        inst.max_height, area, inst.width * h - area,
    )


def verify_bottom_left(trace: PackingTrace, oracle: bool = True) -> tuple[bool, list[str]]:
    """Recompute every placement from its prefix and compare.

    With ``oracle`` the independent candidate-grid scan is used, otherwise the
    engine's own free-rectangle search.
    """
    where = candidate_grid_position if oracle else bottom_left_position
    out = []
    placements = trace.packing.placements
    for step, p in enumerate(placements):
        prefix = Packing(trace.instance, placements[:step])
        want = where(prefix, trace.instance.items[p.id])
        if (p.x, p.y) != want:
            out.append(f"step {step + 1}: item {p.id} at ({p.x}, {p.y}), bottom-left position is "
                       f"({want[0]}, {want[1]})")
    return not out, out


def bound_check(packing: Packing) -> Check:
    rep = check_global_bound(packing)
    details = {"height": rep.bl_height, "lower_bound": rep.lower_bound, "ratio": rep.ratio, "factor": rep.factor}
    if rep.passed:
        return Check("bound", "pass", [], details)
    return Check("bound", "fail", [f"height {rep.bl_height} exceeds {rep.factor} x {rep.lower_bound}"], details)
