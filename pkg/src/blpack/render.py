"""SVG drawings of packings. Decimal coordinates appear here and nowhere else."""

from __future__ import annotations

from fractions import Fraction

from .core import Packing

_FILLS = ("#9ecae1", "#a1d99b", "#fdd0a2", "#bcbddc", "#fcbba1", "#d9d9d9")


def _num(q: Fraction) -> str:
    return format(float(q), ".12g")


def render_svg(packing: Packing, scale: int = 40) -> str:
    """Draw the strip from its bottom up to the packing height, 1:1 aspect.

    ``scale`` is pixels per unit and only affects the width/height attributes.
    """
    width = packing.instance.width
    view_h = packing.height
    stroke = _num(max(width, view_h) / 400)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_num(width)} {_num(view_h)}" '
        f'width="{_num(width * scale)}" height="{_num(view_h * scale)}" overflow="visible">',
        f'<g stroke="black" stroke-width="{stroke}">',
    ]
    sizes = sorted({(p.w, p.h) for p in packing.placements}, reverse=True)
    colour = {s: _FILLS[k % len(_FILLS)] for k, s in enumerate(sizes)}
    for p in packing.placements:
        # flip: svg y grows downward
        lines.append(
            f'<rect x="{_num(p.x)}" y="{_num(view_h - p.tf)}" width="{_num(p.w)}" height="{_num(p.h)}" '
            f'fill="{colour[(p.w, p.h)]}"><title>item {p.id}</title></rect>'
        )
    lines.append("</g>")
    # left side, bottom, right side
    lines.append(
        f'<polyline class="strip" fill="none" stroke="black" stroke-width="{stroke}" '
        f'points="0,0 0,{_num(view_h)} {_num(width)},{_num(view_h)} {_num(width)},0"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
