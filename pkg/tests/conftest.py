"""Shared geometry builders and cached pipeline runs for the test suite."""

from __future__ import annotations

import math

import pytest

from beadpath.geometry import PolygonSet
from beadpath.pipeline import generate_toolpaths


def rect_ring(width, height, x0=0.0, y0=0.0):
    return [(x0, y0), (x0 + width, y0), (x0 + width, y0 + height),
            (x0, y0 + height)]


def wedge_ring(opening_deg, length=4.0):
    """Triangle wedge: apex at the origin, flat base at x=length."""
    t = math.tan(math.radians(opening_deg / 2.0))
    return [(0.0, 0.0), (length, -length * t), (length, length * t)]


def asym_wedge_ring():
    """Generic-position wedge: walls at -15 deg and +25 deg, base at x=6."""
    return [(0.0, 0.0), (6.0, -6.0 * math.tan(math.radians(15))),
            (6.0, 6.0 * math.tan(math.radians(25)))]


def sweep_ring(half_deg=5.0, n_tip=12, n_base=48):
    """Convex hull of discs r=0.2 and r=2.0: spine diameters sweep 0.4-4 mm."""
    r0, r1 = 0.2, 2.0
    dist = (r1 - r0) / math.sin(math.radians(half_deg))
    phi = math.radians(90.0 + half_deg)  # tangent-point angle on each disc
    pts = []
    for i in range(n_tip + 1):
        a = phi + (2.0 * math.pi - 2.0 * phi) * i / n_tip
        pts.append((r0 * math.cos(a), r0 * math.sin(a)))
    for i in range(n_base + 1):
        a = -phi + 2.0 * phi * i / n_base
        pts.append((dist + r1 * math.cos(a), r1 * math.sin(a)))
    return pts


def hexagon_ring(radius, rot_deg=0.0):
    return [(radius * math.cos(math.radians(60 * k + rot_deg)),
             radius * math.sin(math.radians(60 * k + rot_deg)))
            for k in range(6)]


def hex_with_hole():
    """Hexagonal cell wall whose thickness sweeps 0.86-1.75 mm."""
    return PolygonSet.from_mm([hexagon_ring(4.0),
                               hexagon_ring(2.6, rot_deg=30.0)[::-1]])


def wavy_strip_ring(n):
    """Closed strip ~0.8 mm wide with 0.02 mm ripples, ~n vertices total."""
    half = n // 2
    length = half * 0.1
    top, bot = [], []
    for i in range(half):
        x = length * i / (half - 1)
        r = 0.02 * math.sin(2.0 * math.pi * x / 2.5)
        top.append((x, 0.8 + r))
        bot.append((x, -r))
    return bot + top[::-1]


def segment_walk(line):
    """Per-segment (mid_width, length, arc_distance_to_nearest_open_end)."""
    sites = list(line.sites)
    if line.closed and len(sites) > 1:
        sites.append(sites[0])
    lens = [math.hypot(b.x - a.x, b.y - a.y)
            for a, b in zip(sites, sites[1:])]
    total = sum(lens)
    out = []
    s = 0.0
    for (a, b), seg_len in zip(zip(sites, sites[1:]), lens):
        to_end = math.inf if line.closed else min(s, total - s - seg_len)
        out.append(((a.w + b.w) / 2.0, seg_len, to_end))
        s += seg_len
    return out


@pytest.fixture(scope="session")
def sweep_outline():
    return PolygonSet.from_mm([sweep_ring()])


@pytest.fixture(scope="session")
def toolpath_cache():
    """Memoized generate_toolpaths runs keyed by (fixture name, scheme)."""
    outlines = {"sweep": PolygonSet.from_mm([sweep_ring()]),
                "hex": hex_with_hole()}
    cache = {}

    def get(fixture, scheme):
        key = (fixture, scheme)
        if key not in cache:
            cache[key] = generate_toolpaths(outlines[fixture], scheme)
        return outlines[fixture], cache[key]

    return get
