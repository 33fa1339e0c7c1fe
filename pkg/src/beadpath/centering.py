"""Marking of central skeleton elements where adaptive bead width applies.

An edge is central when the walls it bisects are close to parallel: the ridge
slope |ΔR|/|v1−v0| equals cos(α/2) for bisector angle α, so the edge is marked
iff the slope is strictly below cos(α_max/2).  Local-maximum nodes (including
equal-radius plateaus) are always marked.
"""

from __future__ import annotations

import heapq
import math

from .skeleton import St

EPS_R = 1e-9


def _mark_local_maxima(st: St):
    # candidates: no strictly higher neighbor
    candidates = set()
    for n in st.nodes:
        if all(e.other(n).r <= n.r + EPS_R for e in n.edges):
            candidates.add(id(n))
    # a plateau is only a maximum if no plateau member touches a higher node:
    # spread disqualification across equal-radius edges
    stack = [n for n in st.nodes if id(n) not in candidates]
    seen = set(map(id, stack))
    while stack:
        n = stack.pop()
        for e in n.edges:
            m = e.other(n)
            if id(m) in candidates and abs(m.r - n.r) <= EPS_R:
                candidates.discard(id(m))
                if id(m) not in seen:
                    seen.add(id(m))
                    stack.append(m)
    for n in st.nodes:
        if id(n) in candidates:
            n.marked = True


def mark_central(st: St, alpha_max: float | None = None,
                 policy: str = "normal") -> St:
    """Set the `marked` flags on edges and nodes.

    Args:
        st: skeletal graph (mutated in place).
        alpha_max: bisector-angle threshold in degrees; defaults to the value
            the graph was built with.
        policy: "normal" slope test + local maxima; "disabled" marks only
            local-maximum nodes, never edges, so no transitions happen and
            pure offsetting is emulated; "all_but_outline" marks everything
            except edges touching the outline (constant-count emulation).
    """
    if alpha_max is None:
        alpha_max = st.alpha_max
    if policy == "disabled":
        _mark_local_maxima(st)
        return st
    if policy == "all_but_outline":
        for e in st.edges:
            touches = e.n0.r <= EPS_R or e.n1.r <= EPS_R
            e.marked = not touches
        for n in st.nodes:
            n.marked = any(e.marked for e in n.edges)
        _mark_local_maxima(st)
        return st

    threshold = math.cos(math.radians(alpha_max) / 2.0)
    for e in st.edges:
        length = e.length
        if length <= 0:
            continue
        slope = abs(e.n1.r - e.n0.r) / length
        if slope < threshold:
            e.marked = True
            e.n0.marked = True
            e.n1.marked = True
    _mark_local_maxima(st)
    return st


def filter_marking(st: St, d_max_unmarked: float) -> St:
    """Additionally mark short unmarked gaps between marked regions.

    From each marked node, walk unmarked R-non-decreasing edges; when another
    marked node is reachable within `d_max_unmarked` of traversed length, the
    whole walked path becomes marked.  Filtering only adds marks.
    """
    starts = [n for n in st.nodes
              if n.marked and any(not e.marked and e.other(n).r >= n.r - EPS_R
                                  for e in n.edges)]
    for v0 in starts:
        # shortest upward unmarked distances from v0
        dist = {id(v0): 0.0}
        parent = {}
        heap = [(0.0, 0, v0)]
        tie = 1
        found = []
        while heap:
            d, _, n = heapq.heappop(heap)
            if d > dist.get(id(n), math.inf):
                continue
            if n is not v0 and n.marked:
                found.append(n)
                continue  # stop expanding past marked nodes
            for e in n.edges:
                m = e.other(n)
                if e.marked or m.r < n.r - EPS_R:
                    continue
                nd = d + e.length
                if nd < d_max_unmarked and nd < dist.get(id(m), math.inf):
                    dist[id(m)] = nd
                    parent[id(m)] = (n, e)
                    heapq.heappush(heap, (nd, tie, m))
                    tie += 1
        for target in found:
            n = target
            while id(n) in parent:
                prev, e = parent[id(n)]
                e.marked = True
                e.n0.marked = True
                e.n1.marked = True
                n = prev
    return st
