"""SVG rendering of width-annotated toolpaths with a diverging width colormap.

Each extrusion segment is stroked at its own width with round caps, so the
picture equals the coverage the analyzer measures.  Widths below the preferred
width fade to blue, above it to red; optional overlay layers show overfill
(orange) and underfill (azure).
"""

from __future__ import annotations

MARGIN = 1.0  # mm around the drawing
BLUE = (43, 102, 194)
GRAY = (128, 128, 128)
RED = (205, 43, 43)
OVERFILL_FILL = "#ff8c1a"  # orange
UNDERFILL_FILL = "#66ccee"  # azure


def _width_color(w: float, w_star: float) -> str:
    t = (w - w_star) / w_star if w_star > 0 else 0.0
    t = max(-1.0, min(1.0, 2.0 * t))
    lo, hi = (BLUE, GRAY) if t < 0 else (GRAY, RED)
    f = t + 1.0 if t < 0 else t
    rgb = [round(a + (b - a) * f) for a, b in zip(lo, hi)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _ring_path(ring_mm) -> str:
    pts = " L ".join(f"{x:.3f} {y:.3f}" for x, y in ring_mm)
    return f"M {pts} Z"


def _region_element(ps, fill: str, opacity: float) -> str:
    if ps is None or ps.is_empty():
        return ""
    d = " ".join(_ring_path(r) for r in ps.rings_mm())
    return (f'<path d="{d}" fill="{fill}" fill-opacity="{opacity:.2f}" '
            f'fill-rule="evenodd" stroke="none"/>')


def render_svg(lines: list, outline=None, w_star: float = 0.4,
               report=None) -> str:
    """Render toolpaths (and optionally outline + misfill overlay) as SVG.

    Args:
        lines: extrusion lines to draw.
        outline: optional PolygonSet drawn as a thin black contour.
        w_star: preferred width, the gray midpoint of the colormap.
        report: optional AccuracyReport whose overfill/underfill regions are
            drawn as orange/azure overlay layers.
    """
    xs, ys = [], []
    for line in lines:
        xs.extend(s.x for s in line.sites)
        ys.extend(s.y for s in line.sites)
    if outline is not None:
        for ring in outline.rings_mm():
            xs.extend(ring[:, 0])
            ys.extend(ring[:, 1])
    if not xs:
        xs, ys = [0.0], [0.0]
    x0, y0 = min(xs) - MARGIN, min(ys) - MARGIN
    w_box, h_box = max(xs) - x0 + MARGIN, max(ys) - y0 + MARGIN

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0:.3f} {-y0 - h_box:.3f} {w_box:.3f} {h_box:.3f}">',
        '<g transform="scale(1,-1)">',  # mm Y-up to SVG Y-down
    ]
    if outline is not None:
        d = " ".join(_ring_path(r) for r in outline.rings_mm())
        parts.append(f'<path d="{d}" fill="none" stroke="black" '
                     'stroke-width="0.02"/>')
    for line in lines:
        sites = list(line.sites)
        if line.closed and len(sites) > 1:
            sites.append(sites[0])
        for s0, s1 in zip(sites, sites[1:]):
            w = (s0.w + s1.w) / 2.0
            parts.append(
                f'<line x1="{s0.x:.3f}" y1="{s0.y:.3f}" '
                f'x2="{s1.x:.3f}" y2="{s1.y:.3f}" '
                f'stroke="{_width_color(w, w_star)}" '
                f'stroke-width="{w:.3f}" stroke-linecap="round"/>')
    if report is not None:
        parts.append(_region_element(report.overfill, OVERFILL_FILL, 0.8))
        parts.append(_region_element(report.underfill, UNDERFILL_FILL, 0.8))
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(p for p in parts if p) + "\n"


def save_svg(lines: list, path: str, outline=None, w_star: float = 0.4,
             report=None):
    with open(path, "w") as f:
        f.write(render_svg(lines, outline, w_star, report))
