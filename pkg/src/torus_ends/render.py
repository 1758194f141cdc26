"""SVG picture of the Farey tessellation in the unit disk.

Slope t sits at angle 2 arctan(t) on the boundary.  Farey edges are drawn as
geodesics (circular arcs orthogonal to the unit circle), each slope gets a
small horodisk tinted by log|trace|, and the cover of E(rho) is drawn as a
thick band just outside the circle.
"""

from __future__ import annotations

import math

from .characters import Character, is_saturated
from .ends import ArcCover
from .farey import Arc, FareyPair, Slope, iter_triples
from .trace_tree import traces_at

MAX_DEPTH = 16
BAND_R = 1.04
PALETTE = ["#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6", "#4292c6", "#2171b5", "#08519c", "#08306b"]


class RenderError(ValueError):
    pass


def fmt(v: float) -> str:
    v = float(v)
    if v == 0:
        v = 0.0  # no "-0"
    return f"{v:.9g}"


def point(theta: float, r: float = 1.0) -> tuple[float, float]:
    # svg y axis points down
    return r * math.cos(theta), -r * math.sin(theta)


def geodesic_path(a: Slope, b: Slope) -> str:
    ta, tb = a.angle(), b.angle()
    x1, y1 = point(ta)
    x2, y2 = point(tb)
    d = (tb - ta) % (2 * math.pi)
    sweep_short = d <= math.pi
    delta = d if sweep_short else 2 * math.pi - d
    if abs(delta - math.pi) < 1e-12:
        return f"M{fmt(x1)},{fmt(y1)}L{fmt(x2)},{fmt(y2)}"
    r = math.tan(delta / 2)
    # the orthogonal circle bulges toward the centre: sweep opposite to the boundary
    sweep = 1 if sweep_short else 0
    return f"M{fmt(x1)},{fmt(y1)}A{fmt(r)},{fmt(r)} 0 0 {sweep} {fmt(x2)},{fmt(y2)}"


def bucket(v: complex) -> int:
    if is_saturated(v):
        return len(PALETTE) - 1
    m = abs(v)
    if m <= 2:
        return 0
    b = 1 + int(math.log(m / 2) / math.log(4))
    return min(b, len(PALETTE) - 1)


def boundary_arc_path(a: Arc, r: float = BAND_R) -> str:
    if a.is_full:
        return ""
    t0 = a.lo.angle()
    span = a.measure()
    x1, y1 = point(t0, r)
    x2, y2 = point(t0 + span, r)
    large = 1 if span > math.pi else 0
    # anticlockwise in the picture is sweep flag 0 with y flipped
    return f"M{fmt(x1)},{fmt(y1)}A{fmt(r)},{fmt(r)} 0 {large} 0 {fmt(x2)},{fmt(y2)}"


def render_svg(ch: Character, depth: int, cover: ArcCover | None = None) -> str:
    if depth < 0 or depth > MAX_DEPTH:
        raise RenderError(f"depth must be in 0..{MAX_DEPTH}")
    edges: dict[FareyPair, None] = {}
    slopes: dict[Slope, None] = {}
    for _, t in iter_triples(depth):
        for pair, _ in t.edges():
            edges.setdefault(pair, None)
        for s in t.slopes():
            slopes.setdefault(s, None)
    ordered_slopes = sorted(slopes, key=lambda s: s.circle_key())
    vals = traces_at(ch, ordered_slopes)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.15 -1.15 2.3 2.3" width="800" height="800">',
        f"<title>{_esc(str(ch))}</title>",
        '<circle cx="0" cy="0" r="1" fill="white" stroke="black" stroke-width="0.004"/>',
        '<g fill="none" stroke="#555" stroke-width="0.002">',
    ]
    for pair in sorted(edges, key=lambda e: (e.a.circle_key(), e.b.circle_key())):
        out.append(f'<path d="{geodesic_path(pair.a, pair.b)}"/>')
    out.append("</g>")
    out.append('<g stroke="none">')
    for s in ordered_slopes:
        # horodisk of Euclidean radius ~ 1/(p^2 + q^2), tangent to the boundary
        r = 0.5 / (1 + s.p * s.p + s.q * s.q)
        cx, cy = point(s.angle(), 1 - r)
        out.append(
            f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{fmt(r)}" fill="{PALETTE[bucket(vals[s])]}" data-slope="{s}"/>'
        )
    out.append("</g>")
    if cover is not None:
        out.append('<g fill="none" stroke="#d62728" stroke-width="0.04">')
        for a in cover.arcs:
            if a.is_full:
                out.append(f'<circle cx="0" cy="0" r="{fmt(BAND_R)}"/>')
            else:
                out.append(f'<path d="{boundary_arc_path(a)}"/>')
        out.append("</g>")
        out.append('<g fill="#d62728" stroke="none">')
        for s in cover.kept_points:
            x, y = point(s.angle(), BAND_R)
            out.append(f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="0.025" data-slope="{s}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(t: str) -> str:
    return t.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
