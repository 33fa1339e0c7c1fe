"""Interior Voronoi diagram of a polygon with segment and vertex sites.

Strategy: sample the boundary densely and compute the point Voronoi diagram
(scipy/Qhull).  Ridges between samples of *different* outline elements
approximate the segment-Voronoi edges; same-site-pair ridge chains are
contracted to single edges and their junctions are snapped to the exact
equidistant point of the adjacent sites with a Newton iteration.  Sampling
only decides topology — final node positions and radii are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from scipy.spatial import Voronoi

from .errors import InvalidPolygon
from .geometry import PolygonSet, to_shapely

MERGE_TOL = 1e-3  # mm; nodes closer than 1 µm are merged


@dataclass(frozen=True)
class Site:
    """One generating outline element: a boundary segment or a reflex vertex."""

    kind: str  # "segment" | "vertex"
    ring: int
    index: int
    ax: float
    ay: float
    bx: float
    by: float

    @property
    def a(self) -> np.ndarray:
        return np.array([self.ax, self.ay])

    @property
    def b(self) -> np.ndarray:
        return np.array([self.bx, self.by])


def site_closest_point(site: Site, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if site.kind == "vertex":
        return site.a
    a, b = site.a, site.b
    d = b - a
    denom = float(d @ d)
    t = 0.0 if denom == 0 else float((p - a) @ d) / denom
    t = min(1.0, max(0.0, t))
    return a + t * d


def site_distance(site: Site, p) -> float:
    q = site_closest_point(site, p)
    return float(math.hypot(*(np.asarray(p, dtype=float) - q)))


def edge_kind(s0: Site, s1: Site) -> str:
    """Classify the bisector curve between two sites."""
    kinds = sorted([s0.kind, s1.kind])
    if kinds == ["segment", "segment"]:
        return "line-line"
    if kinds == ["vertex", "vertex"]:
        return "vertex-vertex"
    v, s = (s0, s1) if s0.kind == "vertex" else (s1, s0)
    # vertex incident to the segment → bisector degenerates to a straight ray
    if (math.hypot(v.ax - s.ax, v.ay - s.ay) < 1e-9
            or math.hypot(v.ax - s.bx, v.ay - s.by) < 1e-9):
        return "vertex-ray"
    return "vertex-line"


@dataclass
class VdEdge:
    n0: int
    n1: int
    s0: Site
    s1: Site


@dataclass
class VdGraph:
    positions: np.ndarray  # (N,2) mm
    radii: np.ndarray  # (N,)
    edges: list
    sites: list


def _ring_sites(rings_mm) -> list:
    """Segment sites for every boundary edge plus vertex sites at reflex corners."""
    sites = []
    for ri, ring in enumerate(rings_mm):
        n = len(ring)
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            sites.append(Site("segment", ri, i, a[0], a[1], b[0], b[1]))
        d = np.roll(ring, -1, axis=0) - ring  # d[i] = edge i direction
        dprev = np.roll(d, 1, axis=0)
        cross = dprev[:, 0] * d[:, 1] - dprev[:, 1] * d[:, 0]
        # interior lies left of the ring direction, so a right turn is reflex
        for i in np.nonzero(cross < 0)[0]:
            v = ring[i]
            sites.append(Site("vertex", ri, int(i), v[0], v[1], v[0], v[1]))
    return sites


def _sample_sites(sites, spacing: float):
    pts, owner = [], []
    for si, s in enumerate(sites):
        if s.kind == "vertex":
            pts.append(s.a)
            owner.append(si)
        else:
            a, b = s.a, s.b
            length = math.hypot(*(b - a))
            k = max(2, int(math.ceil(length / spacing)))
            t = (np.arange(k) + 0.5) / k
            pts.extend(a + t[:, None] * (b - a))
            owner.extend([si] * k)
    return np.asarray(pts), np.asarray(owner, dtype=np.intp)


def _newton_snap(seeds: np.ndarray, constraints):
    """Solve for points equidistant to three constraints per seed.

    Each constraint is (is_line, q, m): distance is |x−q| for points and
    m·(x−q) for oriented lines.  Returns (positions, residuals).
    """
    x = seeds.copy()
    is_line = np.stack([c[0] for c in constraints])  # (3,N)
    q = np.stack([c[1] for c in constraints])  # (3,N,2)
    m = np.stack([c[2] for c in constraints])  # (3,N,2)
    alive = np.ones(len(seeds), dtype=bool)
    F = np.zeros((2, len(seeds)))
    for _ in range(30):
        diff = x[None, :, :] - q  # (3,N,2)
        pt_d = np.linalg.norm(diff, axis=2)
        pt_d = np.where(pt_d < 1e-15, 1e-15, pt_d)
        d = np.where(is_line, np.einsum("cnk,cnk->cn", m, diff), pt_d)
        g = np.where(is_line[:, :, None], m, diff / pt_d[:, :, None])
        F[0] = d[0] - d[1]
        F[1] = d[0] - d[2]
        if np.max(np.abs(F[:, alive]), initial=0.0) < 1e-12:
            break
        J00, J01 = (g[0] - g[1]).T
        J10, J11 = (g[0] - g[2]).T
        det = J00 * J11 - J01 * J10
        ok = alive & (np.abs(det) > 1e-13)
        inv = np.where(ok, det, 1.0)
        dx = (J11 * F[0] - J01 * F[1]) / inv
        dy = (-J10 * F[0] + J00 * F[1]) / inv
        x[ok, 0] -= dx[ok]
        x[ok, 1] -= dy[ok]
        alive = ok
    res = np.max(np.abs(F), axis=0)
    return x, res


def _junction_constraints(sites_3, seeds):
    """Per-site nearest-feature constraints for the Newton solver."""
    out = []
    for col in range(3):
        is_line = np.zeros(len(seeds), dtype=bool)
        q = np.zeros((len(seeds), 2))
        m = np.zeros((len(seeds), 2))
        for j, (slist, seed) in enumerate(zip(sites_3, seeds)):
            s = slist[col]
            if s.kind == "vertex":
                q[j] = s.a
                continue
            a, b = s.a, s.b
            d = b - a
            denom = float(d @ d)
            t = float((seed - a) @ d) / denom if denom else 0.0
            if t <= 1e-9:
                q[j] = a
            elif t >= 1 - 1e-9:
                q[j] = b
            else:
                is_line[j] = True
                n = np.array([-d[1], d[0]]) / math.sqrt(denom)
                if float(n @ (seed - a)) < 0:
                    n = -n
                q[j] = a
                m[j] = n
        out.append((is_line, q, m))
    return out


def _shared_boundary_point(s0: Site, s1: Site, ring_sizes) -> np.ndarray | None:
    """Outline point where the bisector of two adjacent sites meets the boundary."""
    for p, r in ((s0, s1), (s1, s0)):
        if p.kind == "vertex":
            v = p.a
            if r.kind == "segment" and (
                    math.hypot(v[0] - r.ax, v[1] - r.ay) < 1e-9
                    or math.hypot(v[0] - r.bx, v[1] - r.by) < 1e-9):
                return v
            if r.kind == "vertex" and math.hypot(v[0] - r.ax, v[1] - r.ay) < 1e-9:
                return v
    if s0.kind == s1.kind == "segment" and s0.ring == s1.ring:
        n = ring_sizes[s0.ring]
        i, j = s0.index, s1.index
        if (i + 1) % n == j:
            return s0.b
        if (j + 1) % n == i:
            return s1.b
    return None


def build_interior_voronoi(outline: PolygonSet, spacing: float = 0.05) -> VdGraph:
    """Compute the graph of interior Voronoi edges with site attribution.

    Args:
        outline: validated polygon set (outer rings CCW, holes CW).
        spacing: boundary sampling step in mm; controls topological resolution
            only — node positions are snapped to exact equidistant points.
    """
    geom = to_shapely(outline)
    if geom.is_empty or geom.area <= 0:
        raise InvalidPolygon("outline has no interior")
    shapely.prepare(geom)

    rings_mm = outline.rings_mm()
    ring_sizes = [len(r) for r in rings_mm]
    sites = _ring_sites(rings_mm)
    pts, owner = _sample_sites(sites, spacing)
    vor = Voronoi(pts)

    rp = vor.ridge_points
    rv = np.asarray(vor.ridge_vertices)
    keep = (rv[:, 0] >= 0) & (rv[:, 1] >= 0) & (owner[rp[:, 0]] != owner[rp[:, 1]])
    rv, rp = rv[keep], rp[keep]
    mids = 0.5 * (vor.vertices[rv[:, 0]] + vor.vertices[rv[:, 1]])
    inside = shapely.contains_xy(geom, mids[:, 0], mids[:, 1])
    rv, rp = rv[inside], rp[inside]

    # adjacency between Voronoi vertices, labeled by sorted site pair
    adj: dict = {}
    edge_set = set()
    for (u, v), (p0, p1) in zip(rv, rp):
        pair = (min(owner[p0], owner[p1]), max(owner[p0], owner[p1]))
        key = (min(u, v), max(u, v), pair)
        if key in edge_set or u == v:
            continue
        edge_set.add(key)
        adj.setdefault(u, []).append((v, pair))
        adj.setdefault(v, []).append((u, pair))

    def is_breakpoint(u):
        nb = adj[u]
        return not (len(nb) == 2 and nb[0][1] == nb[1][1])

    breaks = [u for u in adj if is_breakpoint(u)]

    # contract chains of same-pair ridges between breakpoints
    chains = []  # (u, v, pair)
    seen = set()
    for u in breaks:
        for v, pair in adj[u]:
            key = (min(u, v), max(u, v), pair)
            if key in seen:
                continue
            seen.add(key)
            prev, cur = u, v
            while cur not in breaks and cur != u:
                nxt = next((w for w, p in adj[cur]
                            if p == pair and w != prev), None)
                if nxt is None:
                    break
                k2 = (min(cur, nxt), max(cur, nxt), pair)
                if k2 in seen:
                    break
                seen.add(k2)
                prev, cur = cur, nxt
            if cur in breaks:
                chains.append((u, cur, pair))

    # snap every breakpoint: 3-site junctions via Newton, 2-site chain ends to
    # the shared outline point when the sites are adjacent
    site_sets = {u: sorted({s for _, p in adj[u] for s in p}) for u in breaks}
    pos: dict = {}
    junc, seeds, combos = [], [], []
    for u in breaks:
        ss = site_sets[u]
        if len(ss) >= 3:
            junc.append(u)
            seeds.append(vor.vertices[u])
            combos.append([sites[i] for i in ss[:3]])
        else:
            s0, s1 = (sites[i] for i in ss[:2]) if len(ss) == 2 else (None, None)
            shared = _shared_boundary_point(s0, s1, ring_sizes) if s0 else None
            pos[u] = shared if shared is not None else vor.vertices[u].copy()
    if junc:
        seeds = np.asarray(seeds)
        snapped, res = _newton_snap(seeds, _junction_constraints(combos, seeds))
        moved = np.linalg.norm(snapped - seeds, axis=1)
        good = (res < 1e-6) & (moved < 5 * spacing + 0.05)
        for u, p, s, g in zip(junc, snapped, seeds, good):
            pos[u] = p if g else s

    # merge to the µm grid and emit final graph
    node_ids: dict = {}
    positions: list = []

    def node_of(p):
        key = (round(p[0] / MERGE_TOL), round(p[1] / MERGE_TOL))
        if key not in node_ids:
            node_ids[key] = len(positions)
            positions.append(np.asarray(p, dtype=float))
        return node_ids[key]

    edges = []
    emitted = set()
    for u, v, pair in chains:
        i, j = node_of(pos[u]), node_of(pos[v])
        if i == j:
            continue
        key = (min(i, j), max(i, j), pair)
        if key in emitted:
            continue
        emitted.add(key)
        edges.append(VdEdge(i, j, sites[pair[0]], sites[pair[1]]))

    positions = np.asarray(positions) if positions else np.zeros((0, 2))
    radii = np.zeros(len(positions))
    site_lists = [[] for _ in positions]
    for e in edges:
        site_lists[e.n0].extend((e.s0, e.s1))
        site_lists[e.n1].extend((e.s0, e.s1))
    for i, sl in enumerate(site_lists):
        if sl:
            radii[i] = min(site_distance(s, positions[i]) for s in sl)
    return VdGraph(positions, radii, edges, sites)
