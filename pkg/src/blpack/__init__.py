"""Exact bottom-left strip packing, adversarial instance families and packing analysis."""

from .core import (
    Instance,
    InvalidInstance,
    InvalidOrdering,
    Item,
    Packing,
    Placement,
    area_lower_bound,
    feasible,
    format_rational,
    parse_rational,
)
from .engine import PackingTrace, bl_height, bottom_left_position, pack

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "InvalidInstance",
    "InvalidOrdering",
    "Item",
    "Packing",
    "PackingTrace",
    "Placement",
    "area_lower_bound",
    "bl_height",
    "bottom_left_position",
    "feasible",
    "format_rational",
    "pack",
    "parse_rational",
]
