"""SVG portraits of separatrix skeletons on the Poincaré disc.

Output is a standalone SVG document.  Numbers are printed with a fixed number
of decimals and elements are emitted in a fixed order, so identical skeletons
give byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from shapely.geometry import LineString

from .skeleton import SeparatrixSkeleton

SIZE = 1000


@dataclass(frozen=True)
class RenderStyle:
    radius: float = 470.0  # disc radius in px
    separatrix_color: str = "#1f4fd1"
    orbit_color: str = "#000000"
    boundary_color: str = "#000000"
    boundary_width: float = 5.0  # the ring of singular points at infinity is drawn solid and heavy
    separatrix_width: float = 2.0
    orbit_width: float = 1.0
    glyph_size: float = 9.0
    tolerance: float = 0.25  # polyline simplification, px
    glyphs: dict = field(
        default_factory=lambda: {
            "saddle": "square",
            "stable_node": "circle",
            "unstable_node": "triangle",
            "saddle_node": "diamond",
            "origin_at_infinity": "ring",
        }
    )


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _px(style: RenderStyle, pt) -> tuple:
    x, y = pt
    c = SIZE / 2
    return (c + style.radius * x, c - style.radius * y)


def _simplify(points: list, tol: float) -> list:
    if len(points) < 3:
        return points if len(points) == 2 else points * 2
    line = LineString(points).simplify(tol, preserve_topology=False)
    coords = list(line.coords)
    return coords if len(coords) >= 2 else [points[0], points[-1]]


def _arrow(points: list, color: str, size: float) -> str:
    """Arrowhead at the arc-length midpoint of a pixel polyline, pointing along it."""
    seg = [math.dist(a, b) for a, b in zip(points, points[1:])]
    total = sum(seg)
    if total <= 2 * size:
        return ""
    half = total / 2
    for (a, b), d in zip(zip(points, points[1:]), seg):
        if half <= d and d > 0:
            t = half / d
            mx, my = a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])
            ux, uy = (b[0] - a[0]) / d, (b[1] - a[1]) / d
            break
        half -= d
    else:
        return ""
    tip = (mx + size * ux, my + size * uy)
    left = (mx - size * 0.5 * ux - size * 0.6 * uy, my - size * 0.5 * uy + size * 0.6 * ux)
    right = (mx - size * 0.5 * ux + size * 0.6 * uy, my - size * 0.5 * uy - size * 0.6 * ux)
    d = "M{} {} L{} {} L{} {} Z".format(*(_f(v) for p in (tip, left, right) for v in p))
    return f'<path class="arrow" d="{d}" fill="{color}"/>'


def _glyph(shape: str, x: float, y: float, s: float, key: str) -> str:
    title = f"<title>{escape(key)}</title>"
    if shape == "square":
        return f'<rect class="point" x="{_f(x - s / 2)}" y="{_f(y - s / 2)}" width="{_f(s)}" height="{_f(s)}">{title}</rect>'
    if shape == "triangle":
        pts = [(x, y - s * 0.6), (x - s * 0.55, y + s * 0.45), (x + s * 0.55, y + s * 0.45)]
        return f'<polygon class="point" points="{" ".join(_f(a) + "," + _f(b) for a, b in pts)}">{title}</polygon>'
    if shape == "diamond":
        pts = [(x, y - s * 0.65), (x + s * 0.65, y), (x, y + s * 0.65), (x - s * 0.65, y)]
        return f'<polygon class="point" points="{" ".join(_f(a) + "," + _f(b) for a, b in pts)}">{title}</polygon>'
    if shape == "ring":
        return f'<circle class="origin" cx="{_f(x)}" cy="{_f(y)}" r="{_f(s * 0.6)}" fill="#ffffff" stroke="#000000" stroke-width="2">{title}</circle>'
    return f'<circle class="point" cx="{_f(x)}" cy="{_f(y)}" r="{_f(s / 2)}">{title}</circle>'


def _polyline(cls: str, pts: list, color: str, width: float) -> str:
    coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
    return f'<polyline class="{cls}" points="{coords}" fill="none" stroke="{color}" stroke-width="{_f(width)}"/>'


def render_svg(s: SeparatrixSkeleton, style: RenderStyle | None = None, title: str | None = None) -> bytes:
    """Standalone SVG document for a skeleton."""
    style = style or RenderStyle()
    c = SIZE / 2
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(
        f'<circle class="infinity" cx="{_f(c)}" cy="{_f(c)}" r="{_f(style.radius)}" fill="none" '
        f'stroke="{style.boundary_color}" stroke-width="{_f(style.boundary_width)}"/>'
    )
    for r in s.region_orbits:
        pts = _simplify([_px(style, p) for p in r.points], style.tolerance)
        out.append(_polyline("orbit", pts, style.orbit_color, style.orbit_width))
        out.append(_arrow(pts, style.orbit_color, style.glyph_size * 0.8))
    for e in s.edges:
        pts = _simplify([_px(style, p) for p in e.points], style.tolerance)
        out.append(_polyline("separatrix", pts, style.separatrix_color, style.separatrix_width))
        out.append(_arrow(pts, style.separatrix_color, style.glyph_size))
    for key in sorted(s.nodes):
        node = s.nodes[key]
        shape = style.glyphs.get(node.kind)
        if shape is None:
            continue  # contact points on the boundary ring are not marked
        x, y = _px(style, node.position)
        out.append(_glyph(shape, x, y, style.glyph_size, key))
        if node.is_origin:
            lx, ly = c + (style.radius + 18) * node.position[0], c - (style.radius + 18) * node.position[1]
            out.append(
                f'<text x="{_f(lx)}" y="{_f(ly + 5)}" text-anchor="middle" font-family="sans-serif" '
                f"font-size=\"14\">{escape(key)}</text>"
            )
    out.append("</svg>")
    return ("\n".join(line for line in out if line) + "\n").encode("utf-8")


def polyline_count(svg: bytes) -> int:
    return svg.count(b"<polyline ")


__all__ = ["RenderStyle", "render_svg", "polyline_count"]
