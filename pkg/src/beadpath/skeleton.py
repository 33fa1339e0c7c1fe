"""Skeletal graph construction: discretized interior Voronoi with radii.

Curved (vertex-line) and vertex-vertex edges are discretized in a canonical
frame and mapped back, so the significance-boundary points (where the bisector
angle crosses alpha_max) land exactly on discretization nodes.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import PolygonSet
from .voronoi import (MERGE_TOL, Site, VdGraph, build_interior_voronoi,
                      edge_kind, site_closest_point, site_distance)
from .errors import InvalidPolygon

DEFAULT_ALPHA_MAX = 135.0
DEFAULT_D_DISCRETIZATION = 0.2


class StNode:
    """Skeleton node: position, feature radius and per-node pipeline state."""

    __slots__ = ("x", "y", "r", "marked", "b_int", "b_frac", "beading", "edges")

    def __init__(self, x, y, r):
        self.x = float(x)
        self.y = float(y)
        self.r = float(r)
        self.marked = False
        self.b_int = None
        self.b_frac = None
        self.beading = None
        self.edges = []

    @property
    def pos(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def b_tilde(self, w_star: float) -> float:
        return 2.0 * self.r / w_star

    def __repr__(self):
        return f"StNode({self.x:.4f},{self.y:.4f},R={self.r:.4f})"


class StEdge:
    """Undirected skeletal edge between two nodes, labeled by its two sites."""

    __slots__ = ("n0", "n1", "s0", "s1", "kind", "marked", "sites_out")

    def __init__(self, n0: StNode, n1: StNode, s0: Site, s1: Site, kind: str):
        self.n0 = n0
        self.n1 = n1
        self.s0 = s0
        self.s1 = s1
        self.kind = kind
        self.marked = False
        self.sites_out = None  # toolpath sites, filled by extraction

    def other(self, n: StNode) -> StNode:
        return self.n1 if n is self.n0 else self.n0

    @property
    def length(self) -> float:
        return math.hypot(self.n1.x - self.n0.x, self.n1.y - self.n0.y)

    def lower_upper(self):
        """Endpoints ordered by radius (ties broken by position)."""
        a, b = self.n0, self.n1
        if (a.r, a.x, a.y) <= (b.r, b.x, b.y):
            return a, b
        return b, a


class St:
    """The skeletal graph plus the outline it was built from."""

    def __init__(self, outline: PolygonSet, w_star: float, alpha_max: float):
        self.outline = outline
        self.w_star = w_star
        self.alpha_max = alpha_max
        self.nodes: list = []
        self.edges: list = []
        self._grid: dict = {}

    def node_at(self, x, y, r) -> StNode:
        key = (round(x / MERGE_TOL), round(y / MERGE_TOL))
        n = self._grid.get(key)
        if n is None:
            n = StNode(x, y, r)
            self._grid[key] = n
            self.nodes.append(n)
        return n

    def add_edge(self, n0, n1, s0, s1, kind) -> StEdge | None:
        if n0 is n1:
            return None
        e = StEdge(n0, n1, s0, s1, kind)
        self.edges.append(e)
        n0.edges.append(e)
        n1.edges.append(e)
        return e

    def split_edge(self, e: StEdge, pos, r) -> StNode:
        """Insert a node inside edge `e`, replacing it with two edges.

        Returns the (possibly pre-existing, merged) node at `pos`.
        """
        mid = self.node_at(pos[0], pos[1], r)
        if mid is e.n0 or mid is e.n1:
            return mid
        self.edges.remove(e)
        e.n0.edges.remove(e)
        e.n1.edges.remove(e)
        for a, b in ((e.n0, mid), (mid, e.n1)):
            ne = self.add_edge(a, b, e.s0, e.s1, e.kind)
            if ne is not None:
                ne.marked = e.marked
        return mid


def parabola_x_bound(alpha_max_deg: float) -> float:
    """Significance boundary |x| for the canonical parabola (focus (0,1))."""
    return 1.0 / math.tan(math.radians(alpha_max_deg) / 2.0)


def vertex_vertex_x_bound(alpha_max_deg: float) -> float:
    """Significance boundary |x| for the canonical vertex pair (0,0),(0,1)."""
    return 0.5 / math.tan(math.radians(alpha_max_deg) / 2.0)


def _subdivided(x0: float, x1: float, bounds, n_of_span) -> np.ndarray:
    """Knot sequence from x0 to x1 with bound values inserted, then subdivided."""
    lo, hi = min(x0, x1), max(x0, x1)
    knots = [lo] + sorted(b for b in bounds if lo + 1e-12 < b < hi - 1e-12) + [hi]
    xs = [knots[0]]
    for a, b in zip(knots, knots[1:]):
        n = max(1, n_of_span(a, b))
        xs.extend(a + (b - a) * (np.arange(1, n + 1) / n))
    out = np.asarray(xs)
    return out if x0 <= x1 else out[::-1]


def _emit_chain(st: St, points, radii, s0, s1, kind):
    prev = None
    for (x, y), r in zip(points, radii):
        node = st.node_at(x, y, r)
        if prev is not None and node is not prev:
            st.add_edge(prev, node, s0, s1, kind)
        prev = node


def _discretize_parabola(st, e, p0, p1, d_disc, alpha_max):
    v = e.s0 if e.s0.kind == "vertex" else e.s1
    seg = e.s1 if v is e.s0 else e.s0
    a, b = seg.a, seg.b
    t = (b - a) / np.linalg.norm(b - a)
    foot = a + float((v.a - a) @ t) * t
    h = float(np.linalg.norm(v.a - foot))
    if h < 1e-9:  # vertex on the carrier line: straight degenerate bisector
        st.add_edge(st.node_at(*p0, site_distance(v, p0)),
                    st.node_at(*p1, site_distance(v, p1)), e.s0, e.s1, "vertex-ray")
        return
    ny = (v.a - foot) / h
    x0 = float((p0 - foot) @ t) / h
    x1 = float((p1 - foot) @ t) / h
    xb = parabola_x_bound(alpha_max)
    # chord length rule plus a sagitta bound so the polyline stays within
    # ~d²/4000 mm of the true curve (0.01 mm at the 0.2 mm default)
    tol = 0.01 * (d_disc / 0.2) ** 2

    def n_of_span(xa, xb_):
        xm = max(abs(xa), abs(xb_))
        arc = h * abs(xb_ - xa) * math.sqrt(1 + xm * xm)
        rho = h * (1 + min(xa * xa, xb_ * xb_)) ** 1.5
        step = min(d_disc, math.sqrt(8.0 * rho * tol))
        return int(math.ceil(arc / step))

    xs = _subdivided(x0, x1, (-xb, xb), n_of_span)
    ys = (xs * xs + 1.0) / 2.0
    pts = foot[None, :] + h * (xs[:, None] * t[None, :] + ys[:, None] * ny[None, :])
    # exact endpoints (they may sit slightly off the ideal curve after merging)
    pts[0], pts[-1] = p0, p1
    radii = h * ys
    radii[0] = min(site_distance(e.s0, p0), site_distance(e.s1, p0))
    radii[-1] = min(site_distance(e.s0, p1), site_distance(e.s1, p1))
    _emit_chain(st, pts, radii, e.s0, e.s1, "vertex-line")


def _discretize_vertex_vertex(st, e, p0, p1, d_disc, alpha_max):
    pa, pb = e.s0.a, e.s1.a
    mid = (pa + pb) / 2.0
    d = float(np.linalg.norm(pb - pa))
    perp = np.array([-(pb - pa)[1], (pb - pa)[0]]) / d
    x0 = float((p0 - mid) @ perp) / d
    x1 = float((p1 - mid) @ perp) / d
    xb = vertex_vertex_x_bound(alpha_max)

    def n_of_span(xa, xb_):
        return int(math.ceil(d * abs(xb_ - xa) / d_disc))

    xs = _subdivided(x0, x1, (-xb, xb), n_of_span)
    pts = mid[None, :] + d * xs[:, None] * perp[None, :]
    pts[0], pts[-1] = p0, p1
    radii = d * np.sqrt(xs * xs + 0.25)
    radii[0] = site_distance(e.s0, p0)
    radii[-1] = site_distance(e.s0, p1)
    _emit_chain(st, pts, radii, e.s0, e.s1, "vertex-vertex")


def discretize(vd: VdGraph, st: St, d_discretization: float, alpha_max: float):
    """Transfer the Voronoi graph into `st`, splitting curved edges."""
    for e in vd.edges:
        p0, p1 = vd.positions[e.n0], vd.positions[e.n1]
        kind = edge_kind(e.s0, e.s1)
        if kind == "vertex-line":
            _discretize_parabola(st, e, p0, p1, d_discretization, alpha_max)
        elif kind == "vertex-vertex":
            _discretize_vertex_vertex(st, e, p0, p1, d_discretization, alpha_max)
        else:
            n0 = st.node_at(*p0, vd.radii[e.n0])
            n1 = st.node_at(*p1, vd.radii[e.n1])
            st.add_edge(n0, n1, e.s0, e.s1, kind)


def node_supports(node: StNode):
    """Closest outline points of all sites adjacent to a node (deduplicated)."""
    feet = []
    for e in node.edges:
        for s in (e.s0, e.s1):
            p = site_closest_point(s, node.pos)
            if all(math.hypot(p[0] - q[0], p[1] - q[1]) >= MERGE_TOL for q, _ in feet):
                feet.append((p, s))
    return feet


def build_st(outline: PolygonSet, w_star: float = 0.4,
             d_discretization: float = DEFAULT_D_DISCRETIZATION,
             alpha_max: float = DEFAULT_ALPHA_MAX,
             spacing: float = 0.05) -> St:
    """Build the discretized skeletal graph of an outline.

    Args:
        outline: polygon set in µm fixed point (outer CCW, holes CW).
        w_star: preferred bead width (mm); stored for bead-count queries.
        d_discretization: max discretized piece length for curved edges (mm).
        alpha_max: bisector-angle threshold (degrees) whose significance
            boundaries become discretization nodes.
        spacing: boundary sampling step for the Voronoi stage (mm).
    """
    outline.validate()
    vd = build_interior_voronoi(outline, spacing=spacing)
    if not vd.edges:
        raise InvalidPolygon("outline has no interior skeleton")
    st = St(outline, w_star, alpha_max)
    discretize(vd, st, d_discretization, alpha_max)
    return st

def assign_domains(st: St) -> list:
    """Group the planar faces of the skeletal graph per outline ring,
    ordered contiguously along each ring (delegates to the extraction
    module's planar subdivision)."""
    from .extraction import assign_domains as _assign
    return _assign(st)
