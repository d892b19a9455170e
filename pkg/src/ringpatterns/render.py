"""SVG rendering of planar patterns for the command-line front end.

Patterns are drawn as plain circle elements: one outer and one inner
circle per ring, colored by orientation (orange for positive rho, pink
for negative).  Rings with a vanishing inner radius draw the inner
circle as a small dot.  Output is deterministic: same pattern, same
bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .layout import PlanarPattern

POSITIVE_COLOR = "#e08020"   # orange
NEGATIVE_COLOR = "#e060a0"   # pink


@dataclass(frozen=True)
class RenderOptions:
    canvas_size: int = 800
    margin: float = 0.05            # fraction of the content extent
    stroke_width: float = 1.2       # pixels
    show_inner: bool = True
    show_outer: bool = True
    show_touching_points: bool = False
    positive_color: str = POSITIVE_COLOR
    negative_color: str = NEGATIVE_COLOR

    def __post_init__(self):
        if self.canvas_size <= 0:
            raise ValueError("canvas size must be positive")


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def render_svg(p: PlanarPattern, options: RenderOptions | None = None) -> str:
    """Render a :class:`PlanarPattern` as an SVG document string."""
    opts = options or RenderOptions()
    c = p.complex

    xs, ys, rads = [], [], []
    for v in c.vertices:
        x, y = p.centers[v]
        R = p.outer_radius(v)
        xs.append(x)
        ys.append(y)
        rads.append(R)
    x_min = min(x - r for x, r in zip(xs, rads))
    x_max = max(x + r for x, r in zip(xs, rads))
    y_min = min(y - r for y, r in zip(ys, rads))
    y_max = max(y + r for y, r in zip(ys, rads))
    extent = max(x_max - x_min, y_max - y_min, 1e-30)
    pad = opts.margin * extent
    x_min, x_max = x_min - pad, x_max + pad
    y_min, y_max = y_min - pad, y_max + pad
    width = x_max - x_min
    height = y_max - y_min

    size = opts.canvas_size
    # y axis flipped so the mathematical orientation is upright on screen
    def sx(x: float) -> float:
        return (x - x_min) / width * size

    def sy(y: float) -> float:
        return (y_max - y) / height * size

    scale = size / max(width, height)
    dot = 0.004 * size

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for v in c.vertices:
        x, y = p.centers[v]
        color = opts.positive_color if p.rho[v] >= 0 else opts.negative_color
        cx, cy = _fmt(sx(x)), _fmt(sy(y))
        if opts.show_outer:
            lines.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_fmt(p.outer_radius(v) * scale)}" '
                f'fill="none" stroke="{color}" stroke-width="{_fmt(opts.stroke_width)}"/>'
            )
        if opts.show_inner:
            r_px = abs(p.inner_radius(v)) * scale
            if r_px < dot:
                lines.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(dot)}" fill="{color}"/>')
            else:
                lines.append(
                    f'<circle cx="{cx}" cy="{cy}" r="{_fmt(r_px)}" fill="none" '
                    f'stroke="{color}" stroke-width="{_fmt(opts.stroke_width)}"/>'
                )
    if opts.show_touching_points:
        for sq in c.faces:
            x, y = p.face_points[sq]
            lines.append(
                f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="{_fmt(dot)}" fill="#303030"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
