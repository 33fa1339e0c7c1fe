"""Marlin-style G-code emission with back-pressure compensated feedrates.

Paths are ordered greedily by nearest endpoint (closed loops may start at any
vertex), adaptive-width segments are discretized into ≤0.2 mm pieces carrying
their average width, and the extruder axis E advances by deposited volume
converted to 1.75 mm filament length (absolute E).
"""

from __future__ import annotations

import math

from .backpressure import FlowModel, speed_for_width
from .extraction import DOT_LENGTH

D_STEP = 0.2  # mm; max piece length for adaptive-width discretization
FILAMENT_DIAMETER = 1.75  # mm
FILAMENT_AREA = math.pi * (FILAMENT_DIAMETER / 2.0) ** 2
TRAVEL_SPEED = 150.0  # mm/s


def _fmt_f(v_mm_s: float) -> str:
    s = f"{v_mm_s * 60.0:.1f}"
    return s[:-2] if s.endswith(".0") else s


def _path_points(line) -> list:
    pts = [(s.x, s.y, s.w) for s in line.sites]
    if line.closed and len(pts) > 1:
        pts.append(pts[0])
    return pts


def _order_paths(lines: list, start) -> list:
    """Greedy nearest-endpoint ordering; returns oriented point lists."""
    remaining = list(lines)
    ordered = []
    cx, cy = start
    while remaining:
        best = None
        for line in remaining:
            pts = _path_points(line)
            if line.closed:
                candidates = range(len(pts) - 1)
            else:
                candidates = (0, len(pts) - 1)
            for i in candidates:
                d = math.hypot(pts[i][0] - cx, pts[i][1] - cy)
                if best is None or d < best[0]:
                    best = (d, line, i)
        _, line, i = best
        remaining.remove(line)
        pts = _path_points(line)
        if line.closed:
            pts = pts[i:-1] + pts[:i] + [pts[i]]  # rotate to nearest vertex
        elif i != 0:
            pts = pts[::-1]
        ordered.append((line, pts))
        cx, cy = pts[-1][:2]
    return ordered


def _speed_width(line, w: float) -> float:
    """Width used for the feedrate lookup.

    Dots carry an accounting width (volume of a point bead squeezed into a
    10 µm move); their speed is taken from the original bead width instead.
    """
    if line.dot:
        return math.sqrt(4.0 * DOT_LENGTH * w / math.pi)
    return w


def generate_gcode(lines: list, model: FlowModel | None = None,
                   start=(0.0, 0.0)) -> str:
    """Emit G-code text for extrusion lines.

    Args:
        lines: extrusion polylines/loops with per-site widths.
        model: back-pressure flow model (defaults to FlowModel()).
        start: initial nozzle position (mm) for greedy ordering.
    """
    model = model or FlowModel()
    out = [
        "; beadpath toolpath",
        "G21 ; units: mm",
        "G90 ; absolute positioning",
        "M82 ; absolute extrusion",
        "G92 E0",
    ]
    e = 0.0
    for line, pts in _order_paths(lines, start):
        x, y, _ = pts[0]
        out.append(f"G0 F{_fmt_f(TRAVEL_SPEED)} X{x:.3f} Y{y:.3f}")
        for (x0, y0, w0), (x1, y1, w1) in zip(pts, pts[1:]):
            length = math.hypot(x1 - x0, y1 - y0)
            if length <= 0:
                continue
            n = max(1, math.ceil(length / D_STEP))
            for i in range(n):
                t0, t1 = i / n, (i + 1) / n
                px, py = x0 + (x1 - x0) * t1, y0 + (y1 - y0) * t1
                w = w0 + (w1 - w0) * (t0 + t1) / 2.0
                v, _f = speed_for_width(model, _speed_width(line, w))
                volume = (length / n) * w * model.h * model.flow_factor
                e += volume / FILAMENT_AREA
                out.append(f"G1 F{_fmt_f(v)} X{px:.3f} Y{py:.3f} E{e:.5f}")
    out.append("M107")
    out.append("; end")
    return "\n".join(out) + "\n"


def save_gcode(lines: list, path: str, model: FlowModel | None = None,
               start=(0.0, 0.0)):
    with open(path, "w") as f:
        f.write(generate_gcode(lines, model, start))
