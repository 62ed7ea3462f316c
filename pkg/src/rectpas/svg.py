"""Deterministic SVG 1.1 rendering of instances, solutions and packings."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Union

from .geometry import GknapInstance, MisrInstance, Packing
from .misr import Grid

_VIEW = 640
_MARGIN = 20

_STYLE = (
    "rect.frame{fill:none;stroke:#333;stroke-width:1.5}"
    "rect.item{fill:none;stroke:#777;stroke-width:1}"
    "rect.placed{fill:#7fb2d9;fill-opacity:0.75;stroke:#1f4e79;stroke-width:1}"
    "line.grid{stroke:#b33;stroke-width:0.75;stroke-dasharray:5,4}"
)


def _fmt(v: Union[int, Fraction, float]) -> str:
    return f"{float(v):.3f}"


def _scaled(v, scale, offset=_MARGIN) -> str:
    return _fmt(offset + float(v) * scale)


def render_svg(
    instance: Union[MisrInstance, GknapInstance],
    selected: Optional[Iterable[int]] = None,
    packing: Optional[Packing] = None,
    grid: Optional[Grid] = None,
) -> str:
    """Render an instance to SVG text.

    Selected or packed objects are filled, all other input objects drawn in
    outline. MISR grid lines are overlaid when a grid is supplied. The
    output is a pure function of the arguments.
    """
    if isinstance(instance, MisrInstance):
        world = max((max(r.x2, r.y2) for r in instance.rects), default=1)
        boxes = [(r.x1, r.y1, r.x2, r.y2) for r in instance.rects]
    else:
        world = instance.N
        boxes = []
    scale = (_VIEW - 2 * _MARGIN) / world
    chosen = set(selected or ())

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_VIEW}" height="{_VIEW}" viewBox="0 0 {_VIEW} {_VIEW}">',
        f"<style>{_STYLE}</style>",
        f'<rect class="frame" x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" '
        f'width="{_fmt(world * scale)}" height="{_fmt(world * scale)}"/>',
    ]

    def emit_box(x1, y1, x2, y2, cls: str) -> None:
        # SVG y axis points down; flip so the knapsack origin is bottom left.
        parts.append(
            f'<rect class="{cls}" x="{_scaled(x1, scale)}" '
            f'y="{_scaled(world - y2, scale)}" '
            f'width="{_fmt((x2 - x1) * scale)}" height="{_fmt((y2 - y1) * scale)}"/>'
        )

    for i, box in enumerate(boxes):
        emit_box(*box, "placed" if i in chosen else "item")

    if packing is not None and isinstance(instance, GknapInstance):
        for pl in packing.placements:
            emit_box(*pl.box(instance.items[pl.item]), "placed")

    if grid is not None and isinstance(instance, MisrInstance):
        for v in grid.interior_v:
            x = _scaled(Fraction(v, 2), scale)
            parts.append(
                f'<line class="grid" x1="{x}" y1="{_scaled(0, scale)}" '
                f'x2="{x}" y2="{_scaled(world, scale)}"/>'
            )
        for h in grid.interior_h:
            y = _scaled(world - Fraction(h, 2), scale)
            parts.append(
                f'<line class="grid" x1="{_scaled(0, scale)}" y1="{y}" '
                f'x2="{_scaled(world, scale)}" y2="{y}"/>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
