"""Fixed-point polygon containers and the boolean/morphology engine.

Coordinates are stored as signed 64-bit integer micrometers; every length in
the public API is in millimeters and converted at this boundary.  Boolean and
morphological operations are delegated to shapely (GEOS) on micrometer-valued
doubles, which represent the integer grid exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import shapely
import shapely.geometry
from shapely.geometry.polygon import orient

from .errors import InvalidPolygon

MM_PER_UM = 1e-3
UM_PER_MM = 1000.0


def mm_to_um(coords) -> np.ndarray:
    """Round mm coordinates to the integer micrometer grid."""
    return np.asarray(np.rint(np.asarray(coords, dtype=float) * UM_PER_MM),
                      dtype=np.int64)


def um_to_mm(coords) -> np.ndarray:
    return np.asarray(coords, dtype=float) * MM_PER_UM


def signed_area(ring) -> float:
    """Shoelace area of one ring in mm²; positive for CCW, negative for CW.

    Args:
        ring: (k, 2) array-like of integer micrometer vertices.
    """
    r = np.asarray(ring, dtype=np.int64)
    if r.ndim != 2 or r.shape[0] < 3:
        raise InvalidPolygon("ring needs at least 3 vertices")
    x, y = r[:, 0], r[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    # int64 shoelace: coordinates are µm, products fit comfortably
    area_um2 = float(np.sum(x * y2 - x2 * y)) / 2.0
    return area_um2 * 1e-6


def _dedupe_ring(ring: np.ndarray) -> np.ndarray:
    """Drop consecutive duplicate vertices (including wrap-around)."""
    if len(ring) == 0:
        return ring
    keep = np.any(ring != np.roll(ring, 1, axis=0), axis=1)
    return ring[keep]


@dataclass
class PolygonSet:
    """A set of closed polygons with holes on the µm integer grid.

    Outer rings are counter-clockwise, holes clockwise.  Rings do not repeat
    their first vertex.
    """

    rings: list = field(default_factory=list)

    @classmethod
    def from_mm(cls, rings_mm) -> "PolygonSet":
        return cls([mm_to_um(r) for r in rings_mm])

    def rings_mm(self) -> list:
        return [um_to_mm(r) for r in self.rings]

    @property
    def area(self) -> float:
        return sum(signed_area(r) for r in self.rings)

    def is_empty(self) -> bool:
        return not self.rings

    def validate(self) -> "PolygonSet":
        """Raise InvalidPolygon unless rings form valid, non-crossing polygons."""
        to_shapely(self)
        return self


def to_shapely(ps: PolygonSet):
    """Assemble a validated shapely (Multi)Polygon in mm units."""
    outers, holes = [], []
    for ring in ps.rings:
        ring = _dedupe_ring(np.asarray(ring, dtype=np.int64))
        if len(ring) < 3:
            raise InvalidPolygon("ring needs at least 3 vertices")
        a = signed_area(ring)
        if a == 0.0:
            raise InvalidPolygon("zero-area ring")
        (outers if a > 0 else holes).append(um_to_mm(ring))

    if not outers:
        if holes:
            raise InvalidPolygon("hole rings without any outer ring")
        return shapely.geometry.MultiPolygon([])

    shells = [shapely.geometry.Polygon(o) for o in outers]
    for sh in shells:
        if not sh.is_valid:
            raise InvalidPolygon("self-intersecting or degenerate ring")
    hole_lists: list = [[] for _ in shells]
    for h in holes:
        pt = shapely.geometry.Polygon(h).representative_point()
        owner = next((i for i, sh in enumerate(shells) if sh.contains(pt)), None)
        if owner is None:
            raise InvalidPolygon("hole ring not contained in any outer ring")
        hole_lists[owner].append(h)

    polys = [shapely.geometry.Polygon(o, hl) for o, hl in zip(outers, hole_lists)]
    geom = shapely.geometry.MultiPolygon(polys)
    if not geom.is_valid:
        raise InvalidPolygon("rings cross each other")
    return geom


def from_shapely(geom) -> PolygonSet:
    """Convert a shapely geometry (mm) back to a µm PolygonSet.

    Zero-area rings produced by rounding are dropped.
    """
    rings = []
    polys = getattr(geom, "geoms", [geom])
    for p in polys:
        if p.is_empty or p.geom_type != "Polygon":
            continue
        p = orient(p, sign=1.0)  # exterior CCW, holes CW
        for ring in [p.exterior, *p.interiors]:
            r = _dedupe_ring(mm_to_um(np.asarray(ring.coords)[:-1]))
            if len(r) >= 3 and signed_area(r) != 0.0:
                rings.append(r)
    return PolygonSet(rings)


def boolean(a: PolygonSet, b: PolygonSet, op: str) -> PolygonSet:
    """Set operation on polygon sets: union | difference | intersection | xor."""
    ga, gb = to_shapely(a), to_shapely(b)
    if op == "union":
        g = ga.union(gb)
    elif op == "difference":
        g = ga.difference(gb)
    elif op == "intersection":
        g = ga.intersection(gb)
    elif op == "xor":
        g = ga.symmetric_difference(gb)
    else:
        raise ValueError(f"unknown boolean op: {op!r}")
    return from_shapely(g)


def morphological_close(s: PolygonSet, radius: float) -> PolygonSet:
    """Dilate then erode by `radius` mm; merges gaps narrower than 2·radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if s.is_empty() or radius == 0:
        return PolygonSet(list(s.rings))
    g = to_shapely(s).buffer(radius).buffer(-radius)
    return from_shapely(g)
