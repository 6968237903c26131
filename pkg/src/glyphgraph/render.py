"""Deterministic SVG 1.1 output for resolved graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple
from xml.sax.saxutils import quoteattr

from .errors import UsageError
from .model import Graph


@dataclass(frozen=True)
class RenderStyle:
    stroke_width: float = 0.05
    margin: float = 0.25
    canvas: Optional[Tuple[float, float]] = None
    y_flip: bool = True

    def __post_init__(self):
        if not self.stroke_width > 0:
            raise UsageError(f"stroke width must be > 0, got {self.stroke_width!r}")
        if not self.margin >= 0:
            raise UsageError(f"margin must be >= 0, got {self.margin!r}")
        if self.canvas is not None and not (self.canvas[0] > 0 and self.canvas[1] > 0):
            raise UsageError(f"canvas size must be positive, got {self.canvas!r}")


def fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def to_svg(g: Graph, style: RenderStyle = RenderStyle()) -> str:
    """One ``<line>`` per graph line, in line order; the viewBox hugs the drawing plus margin."""
    if not g.lines:
        raise UsageError("nothing to draw: the graph has no lines")
    if not g.is_resolved:
        raise UsageError("graph coordinates are not resolved")
    sign = -1.0 if style.y_flip else 1.0

    def screen(n):
        x, y = g.coords[n]
        return x, sign * y

    pts = [screen(n) for ln in g.lines for n in (ln.start, ln.end)]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    # a perfectly straight drawing still gets a non-empty box
    pad = style.margin if style.margin > 0 else style.stroke_width
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    size = ""
    if style.canvas is not None:
        size = f' width="{fmt(style.canvas[0])}" height="{fmt(style.canvas[1])}"'
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1"{size} '
        f'viewBox="{fmt(x0)} {fmt(y0)} {fmt(w)} {fmt(h)}">',
    ]
    if g.name:
        out.append(f"  <title>{quoteattr(g.name)[1:-1]}</title>")
    out.append(
        f'  <g stroke="black" fill="none" stroke-width="{fmt(style.stroke_width)}" '
        'stroke-linecap="round" stroke-linejoin="round">'
    )
    for ln in g.lines:
        (x1, y1), (x2, y2) = screen(ln.start), screen(ln.end)
        out.append(f'    <line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}"/>')
    out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
