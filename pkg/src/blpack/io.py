"""JSON file formats. Every rational is written as a "p/q" string so nothing is lost."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import Instance, InvalidInstance, Item, Packing, Placement, check_ordering, format_rational, parse_rational
from .engine import PackingTrace


class FormatError(ValueError):
    """A file parsed as JSON but does not describe what it should."""


def to_jsonable(value: Any) -> Any:
    """Recursively turn Fractions into strings and tuples into lists."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(doc: Any) -> str:
    return json.dumps(to_jsonable(doc), indent=2) + "\n"


def write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def _rational(value, what: str) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"{what}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise FormatError(f"{what}: {exc}") from exc
    raise FormatError(f"{what}: expected an integer or 'p/q' string, got {value!r}")


def instance_to_dict(instance: Instance, metadata: dict | None = None,
                     orderings: dict | None = None) -> dict:
    doc: dict[str, Any] = {
        "width": instance.width,
        "items": [{"id": it.id, "w": it.w, "h": it.h} for it in instance.items],
    }
    if orderings:
        doc["orderings"] = {name: list(order) for name, order in orderings.items()}
    if metadata:
        doc["metadata"] = metadata
    return doc


def instance_from_dict(doc: Any) -> tuple[Instance, dict[str, tuple[int, ...]], dict]:
    """Returns the instance, its stored orderings and its metadata."""
    if not isinstance(doc, dict) or "width" not in doc or "items" not in doc:
        raise FormatError("instance needs 'width' and 'items'")
    if not isinstance(doc["items"], list):
        raise FormatError("'items' must be a list")
    items = []
    for k, raw in enumerate(doc["items"]):
        if not isinstance(raw, dict) or not {"id", "w", "h"} <= raw.keys():
            raise FormatError(f"item {k} needs 'id', 'w' and 'h'")
        items.append(Item(raw["id"], _rational(raw["w"], f"item {k} w"), _rational(raw["h"], f"item {k} h")))
    try:
        inst = Instance(_rational(doc["width"], "width"), tuple(items))
    except InvalidInstance as exc:
        raise FormatError(str(exc)) from exc
    orderings = {}
    for name, order in (doc.get("orderings") or {}).items():
        try:
            orderings[name] = check_ordering(inst, order)
        except ValueError as exc:
            raise FormatError(f"ordering {name!r}: {exc}") from exc
    return inst, orderings, doc.get("metadata") or {}


def packing_to_dict(packing: Packing, metadata: dict | None = None) -> dict:
    """Placements are listed in placement order, so the file doubles as a trace."""
    doc = {
        "instance": instance_to_dict(packing.instance),
        "placements": [{"id": p.id, "x": p.x, "y": p.y} for p in packing.placements],
        "height": packing.height,
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def trace_to_dict(trace: PackingTrace, metadata: dict | None = None) -> dict:
    doc = packing_to_dict(trace.packing, metadata)
    steps = []
    top = Fraction(0)
    for k, p in enumerate(trace.packing.placements, start=1):
        top = max(top, p.tf)
        steps.append({"step": k, "id": p.id, "x": p.x, "y": p.y, "height": top})
    doc["steps"] = steps
    return doc


def packing_from_dict(doc: Any) -> Packing:
    if not isinstance(doc, dict) or "instance" not in doc or "placements" not in doc:
        raise FormatError("packing needs 'instance' and 'placements'")
    inst, _, _ = instance_from_dict(doc["instance"])
    placements = []
    for k, raw in enumerate(doc["placements"]):
        if not isinstance(raw, dict) or not {"id", "x", "y"} <= raw.keys():
            raise FormatError(f"placement {k} needs 'id', 'x' and 'y'")
        item_id = raw["id"]
        if isinstance(item_id, bool) or not isinstance(item_id, int) or not 0 <= item_id < inst.n:
            raise FormatError(f"placement {k}: unknown item id {item_id!r}")
        item = inst.items[item_id]
        placements.append(Placement(item_id, _rational(raw["x"], f"placement {k} x"),
                                    _rational(raw["y"], f"placement {k} y"), item.w, item.h))
    packing = Packing(inst, tuple(placements))
    if "height" in doc and _rational(doc["height"], "height") != packing.height:
        raise FormatError(f"stored height {doc['height']} does not match the placements ({packing.height})")
    return packing


def read_instance(path: str | Path) -> tuple[Instance, dict[str, tuple[int, ...]], dict]:
    return instance_from_dict(read_json(path))


def read_packing(path: str | Path) -> Packing:
    return packing_from_dict(read_json(path))


def read_trace(path: str | Path) -> PackingTrace:
    return PackingTrace.from_packing(read_packing(path))


def read_ordering(path: str | Path) -> list[int]:
    """An ordering file holds a JSON list of ids, or an object with an 'ordering' list."""
    doc = read_json(path)
    if isinstance(doc, dict):
        doc = doc.get("ordering")
    if not isinstance(doc, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in doc):
        raise FormatError(f"{path}: expected a list of item ids")
    return doc
