"""Geometric accuracy and statistics of width-annotated toolpaths.

Each extrusion segment deposits a trapezoidal quad (linearly varying width)
plus a semicircular cap at its start site; open polylines additionally get a
cap at their final site.  Overfill is material deposited twice (or outside the
outline), underfill is outline area no bead covers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from shapely.geometry import Point, Polygon
from shapely.ops import unary_union
from shapely.strtree import STRtree

from .geometry import PolygonSet, from_shapely, to_shapely

CAP_SEGMENTS = 16
CLOSE_RADIUS = 0.005  # mm; ignore slivers thinner than 10 µm
WIDTH_BIN = 0.01  # mm
ANGLE_BIN = 1.0  # degrees


@dataclass
class _Piece:
    """One extrusion segment's deposit: trapezoid quad and quad+caps shape."""

    line: int
    seg: int
    nsegs: int
    closed: bool
    quad: Polygon
    shape: Polygon
    s0: float = 0.0  # arclength span along the parent line
    s1: float = 0.0
    total: float = 0.0  # parent line length
    w: float = 0.4
    start: tuple = (0.0, 0.0, 0.4)  # endpoint sites (x, y, w)
    end: tuple = (0.0, 0.0, 0.4)


def _semicircle(cx: float, cy: float, radius: float, angle: float) -> list:
    """Half-disc boundary points facing direction `angle` ± 90°."""
    pts = []
    for i in range(CAP_SEGMENTS + 1):
        a = angle - math.pi / 2 + math.pi * i / CAP_SEGMENTS
        pts.append((cx + radius * math.cos(a), cy + radius * math.sin(a)))
    return pts


def _segment_quad(s0, s1) -> Polygon | None:
    dx, dy = s1.x - s0.x, s1.y - s0.y
    length = math.hypot(dx, dy)
    if length <= 0:
        return None
    nx, ny = -dy / length, dx / length
    h0, h1 = s0.w / 2.0, s1.w / 2.0
    quad = Polygon([(s0.x + nx * h0, s0.y + ny * h0),
                    (s1.x + nx * h1, s1.y + ny * h1),
                    (s1.x - nx * h1, s1.y - ny * h1),
                    (s0.x - nx * h0, s0.y - ny * h0)])
    return quad if quad.is_valid and quad.area > 0 else None


def _line_pieces(line, index: int) -> list:
    sites = line.sites
    pairs = list(zip(sites, sites[1:]))
    if line.closed and len(sites) > 1:
        pairs.append((sites[-1], sites[0]))
    pieces = []
    nsegs = len(pairs)
    lengths = [math.hypot(s1.x - s0.x, s1.y - s0.y) for s0, s1 in pairs]
    total = sum(lengths)
    arc = 0.0
    for seg, (s0, s1) in enumerate(pairs):
        a0, arc = arc, arc + lengths[seg]
        quad = _segment_quad(s0, s1)
        if quad is None:
            continue
        if line.dot:
            shape = quad  # dots carry their area in the quad alone
        else:
            angle = math.atan2(s1.y - s0.y, s1.x - s0.x)
            caps = [_semicircle(s0.x, s0.y, s0.w / 2.0, angle + math.pi)]
            if not line.closed and seg == nsegs - 1:
                caps.append(_semicircle(s1.x, s1.y, s1.w / 2.0, angle))
            shape = unary_union([quad] + [Polygon(c) for c in caps
                                          if len(c) >= 3])
            if shape.geom_type != "Polygon":
                shape = shape.buffer(0)
        pieces.append(_Piece(index, seg, nsegs, line.closed, quad, shape,
                             a0, arc, total, max(s0.w, s1.w),
                             (s0.x, s0.y, s0.w), (s1.x, s1.y, s1.w)))
    return pieces


def bead_shape(line) -> PolygonSet:
    """Deposited area of one extrusion line as a polygon set."""
    pieces = _line_pieces(line, 0)
    if not pieces:
        return PolygonSet([])
    return from_shapely(unary_union([p.shape for p in pieces]))


def _close(geom):
    """Morphological close on raw shapely geometry (drops <10 µm slivers)."""
    if geom.is_empty:
        return geom
    return geom.buffer(CLOSE_RADIUS).buffer(-CLOSE_RADIUS)


def _adjacent(a: _Piece, b: _Piece) -> bool:
    """Same-line pieces closer along the path than one bead width.

    Between such near neighbors only the bare quads may legitimately double
    deposit (a bend kite); the joint caps reaching over them lay material
    exactly once, so capped shapes are compared only for genuine revisits.
    """
    if a.line != b.line:
        return False
    lo, hi = (a, b) if a.s0 <= b.s0 else (b, a)
    gap = hi.s0 - lo.s1
    if a.closed:
        gap = min(abs(gap), abs(lo.s0 + a.total - hi.s1))
    return gap <= max(a.w, b.w)


def _pair_overlap(a: _Piece, b: _Piece):
    """Doubly-deposited region between two pieces.

    Near neighbors along one path compare bare quads with the joint cap
    discs removed — the cap there is laid down once, so only material the
    quads deposit beyond it (a sharp doubling back) counts twice.
    """
    if not _adjacent(a, b):
        return a.shape.intersection(b.shape)
    inter = a.quad.intersection(b.quad)
    if inter.is_empty:
        return inter
    lo, hi = (a, b) if a.s0 <= b.s0 else (b, a)
    joints = [lo.end, hi.start]
    if a.closed and abs(lo.s0 + a.total - hi.s1) < abs(hi.s0 - lo.s1):
        joints = [lo.start, hi.end]  # the pair meets across the loop seam
    discs = [Point(x, y).buffer(w / 2.0, quad_segs=CAP_SEGMENTS // 2)
             for x, y, w in joints if w > 0]
    return inter.difference(unary_union(discs)) if discs else inter


@dataclass
class AccuracyReport:
    """Overfill/underfill areas plus the regions themselves."""

    outline_area: float
    overfill_area: float
    underfill_area: float
    overfill: PolygonSet
    underfill: PolygonSet

    @property
    def overfill_fraction(self) -> float:
        return self.overfill_area / self.outline_area if self.outline_area else 0.0

    @property
    def underfill_fraction(self) -> float:
        return self.underfill_area / self.outline_area if self.outline_area else 0.0

    def to_dict(self) -> dict:
        return {
            "outline_area": self.outline_area,
            "overfill_area": self.overfill_area,
            "underfill_area": self.underfill_area,
            "overfill_fraction": self.overfill_fraction,
            "underfill_fraction": self.underfill_fraction,
        }


def compute_accuracy(lines: list, outline: PolygonSet) -> AccuracyReport:
    """Measure overfill and underfill of toolpaths against a layer outline.

    Overlap between consecutive segments of one line is measured between the
    bare quads (the shared joint cap is deposited once, not twice); all other
    overlaps use the full capped shapes.  Regions covered three times count
    double toward overfill.  Both region sets are morphologically closed at a
    10 µm diameter before their area is taken.

    Args:
        lines: extrusion lines as produced by toolpath generation.
        outline: the layer outline the paths were generated for.
    """
    target = to_shapely(outline)
    pieces = []
    for i, line in enumerate(lines):
        pieces.extend(_line_pieces(line, i))

    if not pieces:
        under = _close(target)
        return AccuracyReport(target.area, 0.0, under.area,
                              PolygonSet([]), from_shapely(under))

    shapes = [p.shape for p in pieces]
    coverage = unary_union(shapes)
    tree = STRtree(shapes)
    overlaps = []
    triples = []
    seen = set()
    for i, pi in enumerate(pieces):
        for j in tree.query(shapes[i]):
            j = int(j)
            if j <= i or (i, j) in seen:
                continue
            seen.add((i, j))
            pj = pieces[j]
            inter = _pair_overlap(pi, pj)
            if inter.is_empty or inter.area <= 0:
                continue
            overlaps.append(inter)
            # triple coverage: this pairwise region under yet another shape
            for k in tree.query(inter):
                k = int(k)
                if k in (i, j):
                    continue
                third = inter.intersection(shapes[k])
                if not third.is_empty and third.area > 0:
                    triples.append(third)

    overflow = coverage.difference(target)
    over_geom = _close(unary_union(overlaps + [overflow]))
    over_area = over_geom.area
    if triples:
        over_area += _close(unary_union(triples)).area

    under_geom = _close(target.difference(coverage))
    return AccuracyReport(target.area, over_area, under_geom.area,
                          from_shapely(over_geom), from_shapely(under_geom))


@dataclass
class Statistics:
    """Length-weighted width and corner-angle distributions."""

    total_length: float
    n_open: int
    n_closed: int
    mean_width: float
    width_histogram: dict = field(default_factory=dict)  # bin-center -> length
    angle_histogram: dict = field(default_factory=dict)  # bin-center -> count

    def to_dict(self) -> dict:
        return {
            "total_length": self.total_length,
            "n_open": self.n_open,
            "n_closed": self.n_closed,
            "mean_width": self.mean_width,
            "width_histogram": {f"{k:.3f}": v
                                for k, v in sorted(self.width_histogram.items())},
            "angle_histogram": {f"{k:.1f}": v
                                for k, v in sorted(self.angle_histogram.items())},
        }


def compute_statistics(lines: list) -> Statistics:
    """Aggregate toolpath statistics: lengths, widths, corner angles.

    Widths are binned at 10 µm weighted by segment length using the segment's
    mean width; corner angles (interior angle between consecutive segments)
    are binned at 1°.
    """
    widths: dict = {}
    angles: dict = {}
    total = 0.0
    weighted = 0.0
    n_open = n_closed = 0
    for line in lines:
        sites = line.sites
        if line.closed:
            n_closed += 1
        else:
            n_open += 1
        pairs = list(zip(sites, sites[1:]))
        if line.closed and len(sites) > 1:
            pairs.append((sites[-1], sites[0]))
        for s0, s1 in pairs:
            length = math.hypot(s1.x - s0.x, s1.y - s0.y)
            if length <= 0:
                continue
            w = (s0.w + s1.w) / 2.0
            total += length
            weighted += w * length
            b = (math.floor(w / WIDTH_BIN) + 0.5) * WIDTH_BIN
            widths[b] = widths.get(b, 0.0) + length
        # interior angles at joints
        m = len(pairs)
        for k in range(m - (0 if line.closed else 1)):
            s0, s1 = pairs[k]
            _, s2 = pairs[(k + 1) % m]
            v0 = (s1.x - s0.x, s1.y - s0.y)
            v1 = (s2.x - s1.x, s2.y - s1.y)
            l0, l1 = math.hypot(*v0), math.hypot(*v1)
            if l0 <= 0 or l1 <= 0:
                continue
            dot = (v0[0] * v1[0] + v0[1] * v1[1]) / (l0 * l1)
            turn = math.degrees(math.acos(max(-1.0, min(1.0, dot))))
            interior = 180.0 - turn
            b = (math.floor(interior / ANGLE_BIN) + 0.5) * ANGLE_BIN
            angles[b] = angles.get(b, 0) + 1
    mean_w = weighted / total if total else 0.0
    return Statistics(total, n_open, n_closed, mean_w, widths, angles)
