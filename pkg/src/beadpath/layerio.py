"""JSON serialization of layer outlines and generated toolpaths.

Layer files carry polygons as outer rings plus holes with explicit winding;
toolpath files carry width-annotated polylines.  Both round-trip losslessly at
1 µm precision and serialize deterministically.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InvalidPolygon
from .extraction import ExtrusionLine, ExtrusionSite
from .geometry import PolygonSet, mm_to_um, signed_area


def layer_to_dict(outline: PolygonSet, config: dict | None = None) -> dict:
    polygons = []
    current = None
    for ring in outline.rings:
        coords = [[round(float(x) / 1000.0, 3), round(float(y) / 1000.0, 3)]
                  for x, y in ring]
        if signed_area(ring) > 0:
            current = {"outer": coords, "holes": []}
            polygons.append(current)
        elif current is None:
            raise InvalidPolygon("hole ring before any outer ring")
        else:
            current["holes"].append(coords)
    doc = {"units": "mm", "polygons": polygons}
    if config:
        doc["config"] = config
    return doc


def layer_from_dict(doc: dict) -> tuple:
    """Parse a layer document; returns (PolygonSet, config dict)."""
    if doc.get("units", "mm") != "mm":
        raise InvalidPolygon(f"unsupported units: {doc.get('units')!r}")
    rings = []
    for poly in doc.get("polygons", []):
        outer = mm_to_um(np.asarray(poly["outer"], dtype=float))
        if signed_area(outer) < 0:
            outer = outer[::-1]  # normalize winding: outer CCW
        rings.append(outer)
        for hole in poly.get("holes", []):
            h = mm_to_um(np.asarray(hole, dtype=float))
            if signed_area(h) > 0:
                h = h[::-1]  # holes CW
            rings.append(h)
    return PolygonSet(rings), doc.get("config", {})


def save_layer(outline: PolygonSet, path: str, config: dict | None = None):
    with open(path, "w") as f:
        json.dump(layer_to_dict(outline, config), f, indent=1)
        f.write("\n")


def load_layer(path: str) -> tuple:
    with open(path) as f:
        return layer_from_dict(json.load(f))


def toolpaths_to_dict(lines: list) -> dict:
    paths = []
    for line in lines:
        entry = {
            "closed": line.closed,
            "index": line.index,
            "sites": [[round(s.x, 3), round(s.y, 3), round(s.w, 3)]
                      for s in line.sites],
        }
        if line.dot:
            entry["dot"] = True
        paths.append(entry)
    return {"units": "mm", "paths": paths}


def toolpaths_from_dict(doc: dict) -> list:
    lines = []
    for p in doc.get("paths", []):
        sites = [ExtrusionSite(x, y, w, p["index"]) for x, y, w in p["sites"]]
        lines.append(ExtrusionLine(sites, p["closed"], p["index"],
                                   dot=p.get("dot", False)))
    return lines


def save_toolpaths(lines: list, path: str):
    with open(path, "w") as f:
        json.dump(toolpaths_to_dict(lines), f, indent=1)
        f.write("\n")


def load_toolpaths(path: str) -> list:
    with open(path) as f:
        return toolpaths_from_dict(json.load(f))


def save_report(report, stats, path: str):
    """Serialize an accuracy report plus statistics with stable ordering."""
    doc = {"accuracy": report.to_dict(), "statistics": stats.to_dict()}
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
