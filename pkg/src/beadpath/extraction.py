"""Toolpath extraction: sites on skeletal/rib edges, paired per face into
segments, chained into polylines per domain, with center dedup, 3-way
junction retreat and dot handling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beading import BeadingScheme
from .skeleton import St, node_supports

EPS = 1e-9
DOT_LENGTH = 0.01  # mm; emitted length of a zero-length center dot
MIN_WIDTH = 1e-6


def _key(x: float, y: float):
    return (round(x * 1000.0), round(y * 1000.0))


@dataclass
class ExtrusionSite:
    x: float
    y: float
    w: float
    index: int


@dataclass
class ExtrusionLine:
    sites: list
    closed: bool
    index: int
    dot: bool = False  # converted zero-length center dot

    @property
    def length(self) -> float:
        return sum(math.hypot(b.x - a.x, b.y - a.y)
                   for a, b in zip(self.sites, self.sites[1:]))


@dataclass
class Domain:
    """Ordered trapezoid faces along one boundary ring."""

    ring: int
    faces: list


class _PEdge:
    """Planar-subdivision edge: outline piece, skeletal edge, or rib."""

    __slots__ = ("k0", "k1", "kind", "lo_key", "sites", "ring", "fwd")

    def __init__(self, k0, k1, kind, lo_key=None, sites=(), ring=-1, fwd=None):
        self.k0 = k0
        self.k1 = k1
        self.kind = kind  # "outline" | "skel" | "rib"
        self.lo_key = lo_key  # low-radius end for site ordering
        self.sites = list(sites)  # (index, l, x, y, w) ascending in l
        self.ring = ring
        self.fwd = fwd  # outline: vertex key order along the ring direction


def generate_sites(st: St) -> St:
    """Fill per-edge toolpath sites from the upper node's beading.

    For an edge with radii R(lo) < R(hi) a site is emitted for every bead
    location l with R(lo) < l ≤ R(hi); marked edges get none.
    """
    for e in st.edges:
        e.sites_out = []
        if e.marked:
            continue
        lo, hi = e.lower_upper()
        b = hi.beading
        if b is None or hi.r - lo.r <= EPS:
            continue
        e.sites_out = _sites_between(b, lo.r, hi.r, lo.pos, hi.pos)
    return st


def _sites_between(beading, r_lo, r_hi, p_lo, p_hi):
    out = []
    span = r_hi - r_lo
    tol = 1e-7  # absorbs solver noise in node radii at the interval ends
    for i, l in enumerate(beading.locations):
        if r_lo + tol < l <= r_hi + tol and beading.widths[i] > MIN_WIDTH:
            t = min(1.0, max(0.0, (r_hi - l) / span))
            x = p_hi[0] + (p_lo[0] - p_hi[0]) * t
            y = p_hi[1] + (p_lo[1] - p_hi[1]) * t
            out.append((i, l, x, y, beading.widths[i]))
    return out


def _build_planar(st: St):
    """Vertices, edges and per-ring outline chains of the trapezoidation."""
    verts: dict = {}

    def vert(x, y, r):
        k = _key(x, y)
        cur = verts.get(k)
        if cur is None or r < cur[2]:
            verts[k] = (x, y, r)
        return k

    rings = st.outline.rings_mm()
    arc_start = []
    for ring in rings:
        acc = [0.0]
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            acc.append(acc[-1] + math.hypot(b[0] - a[0], b[1] - a[1]))
        arc_start.append(acc)

    edges: dict = {}

    def add_edge(e: _PEdge):
        k = (min(e.k0, e.k1), max(e.k0, e.k1))
        if e.k0 != e.k1 and k not in edges:
            edges[k] = e

    # skeletal edges
    for e in st.edges:
        lo, hi = e.lower_upper()
        klo = vert(lo.x, lo.y, lo.r)
        khi = vert(hi.x, hi.y, hi.r)
        add_edge(_PEdge(klo, khi, "skel", lo_key=klo, sites=e.sites_out or ()))

    # ribs with their own sites, plus foot positions per ring for the outline
    feet: dict = {}  # ring -> {key: arc param}
    for node in st.nodes:
        kn = _key(node.x, node.y)
        for p, site in node_supports(node):
            kf = vert(p[0], p[1], 0.0)
            if kf == kn:
                continue
            if site.kind == "segment":
                s_arc = arc_start[site.ring][site.index] + math.hypot(
                    p[0] - site.ax, p[1] - site.ay)
            else:
                s_arc = arc_start[site.ring][site.index]
            feet.setdefault(site.ring, {})[kf] = s_arc
            sites = []
            if node.beading is not None and node.r > EPS:
                sites = _sites_between(node.beading, 0.0, node.r,
                                       (p[0], p[1]), (node.x, node.y))
            add_edge(_PEdge(kf, _key(node.x, node.y), "rib",
                            lo_key=kf, sites=sites, ring=site.ring))

    # outline chains: ring vertices plus rib feet, in arc order
    for ri, ring in enumerate(rings):
        marks = {}
        for i, v in enumerate(ring):
            marks[vert(v[0], v[1], 0.0)] = arc_start[ri][i]
        for kf, s_arc in feet.get(ri, {}).items():
            marks.setdefault(kf, s_arc)
        ordered = sorted(marks.items(), key=lambda kv: kv[1])
        for (ka, _), (kb, _) in zip(ordered, ordered[1:] + ordered[:1]):
            add_edge(_PEdge(ka, kb, "outline", ring=ri, fwd=(ka, kb)))

    return verts, list(edges.values())


def _faces(verts, edges):
    """Face cycles of the planar subdivision, interior side only."""
    out: dict = {}
    for e in edges:
        for a, b in ((e.k0, e.k1), (e.k1, e.k0)):
            ax, ay, _ = verts[a]
            bx, by, _ = verts[b]
            out.setdefault(a, []).append((math.atan2(by - ay, bx - ax), b, e))
    for k in out:
        out[k].sort()
    index_of = {}
    for k, lst in out.items():
        for i, (_, b, e) in enumerate(lst):
            index_of[(k, b, id(e))] = i

    faces = []
    visited = set()
    for e in edges:
        for start in ((e.k0, e.k1, e), (e.k1, e.k0, e)):
            if (start[0], start[1], id(start[2])) in visited:
                continue
            cycle = []
            u, v, ed = start
            while (u, v, id(ed)) not in visited:
                visited.add((u, v, id(ed)))
                cycle.append((u, v, ed))
                i = index_of[(v, u, id(ed))]
                lst = out[v]
                _, w, ed2 = lst[(i - 1) % len(lst)]
                u, v, ed = v, w, ed2
            if cycle:
                faces.append(cycle)

    interior = []
    for cycle in faces:
        ok = True
        has_outline = False
        for u, v, ed in cycle:
            if ed.kind == "outline":
                has_outline = True
                if ed.fwd != (u, v):
                    ok = False
                    break
        if not ok:
            continue
        if not has_outline:
            # faces without outline pieces (e.g. fans at reflex corners) are
            # interior iff wound counter-clockwise
            area = 0.0
            for u, v, _ in cycle:
                ax, ay, _r = verts[u]
                bx, by, _r = verts[v]
                area += ax * by - bx * ay
            if area <= 0:
                continue
        interior.append(cycle)
    return interior


def assign_domains(st: St) -> list:
    """Partition trapezoid faces into per-ring, outline-ordered domains."""
    verts, edges = _build_planar(st)
    faces = _faces(verts, edges)
    return _order_domains(verts, faces, st)


def _order_domains(verts, faces, st) -> list:
    rings = st.outline.rings_mm()
    arc = {}
    for ri, ring in enumerate(rings):
        acc = 0.0
        for i in range(len(ring)):
            a = ring[i]
            arc[_key(a[0], a[1])] = (ri, acc)
            b = ring[(i + 1) % len(ring)]
            acc += math.hypot(b[0] - a[0], b[1] - a[1])

    keyed = []
    for cycle in faces:
        ring_id = min((ed.ring for _, _, ed in cycle if ed.ring >= 0),
                      default=-1)
        # order along the outline: smallest arc position of any boundary
        # vertex the face touches
        positions = [arc[u][1] for u, _, _ in cycle
                     if u in arc and arc[u][0] == ring_id]
        tag = (min(positions) if positions else math.inf,
               min(u for u, _, _ in cycle))
        keyed.append(((ring_id,) + tag, cycle))
    keyed.sort(key=lambda kv: kv[0])

    domains: dict = {}
    for key, cycle in keyed:
        domains.setdefault(key[0], []).append(cycle)
    return [Domain(ring, fl) for ring, fl in sorted(domains.items())]


def _face_segments(verts, cycle):
    """Pair equal-index sites around one face into extrusion segments.

    Rotates the cycle to start at the lowest-radius corner so that level-set
    crossings alternate enter/exit; consecutive occurrences pair up.
    """
    rot = min(range(len(cycle)), key=lambda i: verts[cycle[i][0]][2])
    cycle = cycle[rot:] + cycle[:rot]

    ordered = []
    for u, v, ed in cycle:
        if ed.kind == "outline" or not ed.sites:
            continue
        sites = ed.sites if u == ed.lo_key else ed.sites[::-1]
        ordered.extend(sites)

    skel_pairs = set()
    for u, v, ed in cycle:
        if ed.kind == "skel":
            skel_pairs.add((u, v))
            skel_pairs.add((v, u))

    pending: dict = {}
    segments = []
    dots = []
    for i, l, x, y, w in ordered:
        if i in pending:
            i0, l0, x0, y0, w0 = pending.pop(i)
            ka, kb = _key(x0, y0), _key(x, y)
            if ka == kb:
                dots.append((x0, y0, w0, i))
                continue
            if (ka, kb) in skel_pairs:
                # segment runs along a shared skeletal edge: the mirror face
                # sees it reversed, so emit from one side only
                if not (ka < kb):
                    continue
            segments.append(((x0, y0, w0), (x, y, w), i))
        else:
            pending[i] = (i, l, x, y, w)
    return segments, dots


def _chain(segments, dots, retreat_ratio):
    """Stitch segments into polylines; retreat extra branches at junctions."""
    ends: dict = {}
    for si, (a, b, i) in enumerate(segments):
        ends.setdefault((_key(a[0], a[1]), i), []).append((si, 0))
        ends.setdefault((_key(b[0], b[1]), i), []).append((si, 1))

    links: dict = {}  # (segment, end) -> (segment, end)
    retreat_ends = []
    for _, lst in sorted(ends.items()):
        if len(lst) >= 2:
            links[lst[0]] = lst[1]
            links[lst[1]] = lst[0]
        retreat_ends.extend(lst[2:])
    retreat_set = set(retreat_ends)

    used = [False] * len(segments)
    lines = []

    def emit(start_seg, start_end):
        sites = []
        cur, end = start_seg, start_end
        closed = False
        while True:
            used[cur] = True
            a, b, _ = segments[cur]
            if end == 1:
                a, b = b, a
            if not sites:
                sites.append(a)
            sites.append(b)
            nxt = links.get((cur, 1 - end))
            if nxt is None:
                break
            ncur, nend = nxt
            if used[ncur]:
                closed = ncur == start_seg and nend == start_end
                break
            cur, end = ncur, nend
        idx = segments[start_seg][2]
        lines.append(ExtrusionLine(
            [ExtrusionSite(p[0], p[1], p[2], idx) for p in sites],
            closed, idx))

    # open polylines start at unlinked ends; the rest are closed loops
    for si in range(len(segments)):
        for end in (0, 1):
            if not used[si] and (si, end) not in links:
                emit(si, end)
    for si in range(len(segments)):
        if not used[si]:
            emit(si, 0)

    if retreat_ratio > 0:
        _retreat(lines, segments, retreat_set, retreat_ratio)
    _append_dots(lines, dots)
    return lines


def _retreat(lines, segments, retreat_set, ratio):
    if not retreat_set:
        return
    cut_keys = {}
    for si, end in retreat_set:
        a, b, i = segments[si]
        p = a if end == 0 else b
        cut_keys[(_key(p[0], p[1]), i)] = True
    for line in lines:
        if line.closed or not line.sites:
            continue
        for which in (0, -1):
            s = line.sites[which]
            if (_key(s.x, s.y), s.index) in cut_keys:
                _trim_end(line, which, s.w * ratio)


def _trim_end(line, which, amount):
    sites = line.sites if which == 0 else line.sites[::-1]
    total = sum(math.hypot(b.x - a.x, b.y - a.y)
                for a, b in zip(sites, sites[1:]))
    amount = min(amount, max(total - 1e-3, 0.0))
    removed = 0.0
    i = 0
    while i + 1 < len(sites):
        step = math.hypot(sites[i + 1].x - sites[i].x,
                          sites[i + 1].y - sites[i].y)
        if removed + step >= amount - EPS:
            break
        removed += step
        i += 1
    if i + 1 >= len(sites):
        return
    a, b = sites[i], sites[i + 1]
    step = math.hypot(b.x - a.x, b.y - a.y)
    t = (amount - removed) / step if step > 0 else 0.0
    new = ExtrusionSite(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t,
                        a.w + (b.w - a.w) * t, a.index)
    rest = [new] + sites[i + 1:]
    line.sites = rest if which == 0 else rest[::-1]


def _append_dots(lines, dots):
    covered = set()
    for line in lines:
        for s in line.sites:
            covered.add((_key(s.x, s.y), s.index))
    emitted = set()
    for x, y, w, i in dots:
        k = (_key(x, y), i)
        if k in covered or k in emitted:
            continue
        emitted.add(k)
        # zero-length center dot: emit a short segment whose width preserves
        # the volume of the inscribed disc
        w_eff = math.pi * w * w / (4.0 * DOT_LENGTH)
        half = DOT_LENGTH / 2.0
        lines.append(ExtrusionLine(
            [ExtrusionSite(x - half, y, w_eff, i),
             ExtrusionSite(x + half, y, w_eff, i)], False, i, dot=True))


def extract_toolpaths(st: St, scheme: BeadingScheme,
                      retreat_ratio: float | None = None) -> list:
    """Full extraction: sites → per-face segments → stitched polylines."""
    if retreat_ratio is None:
        retreat_ratio = scheme.retreat_ratio
    generate_sites(st)
    verts, edges = _build_planar(st)
    faces = _faces(verts, edges)
    domains = _order_domains(verts, faces, st)
    segments = []
    dots = []
    for dom in domains:
        for cycle in dom.faces:
            segs, ds = _face_segments(verts, cycle)
            segments.extend(segs)
            dots.extend(ds)
    lines = _chain(segments, dots, retreat_ratio)
    lines = [ln for ln in lines if len(ln.sites) >= 2]
    lines.sort(key=lambda ln: (ln.index, -ln.length))
    return lines
