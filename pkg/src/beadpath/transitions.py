"""Bead-count quantization and smooth count transitions on central chains."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .beading import BeadingScheme
from .skeleton import St

EPS = 1e-9
NUDGE = 1e-3  # mm; keeps ramp ends off exact quantization boundaries


@dataclass
class Chain:
    """A maximal run of marked edges through degree-2 marked nodes."""

    nodes: list
    s: list  # cumulative arclength per node
    closed: bool

    @property
    def length(self) -> float:
        return self.s[-1]


@dataclass
class Anchor:
    """Bead-count crossing n → n+1 at arclength `s` along a chain."""

    chain: Chain
    s: float
    n: int
    direction: int  # +1 when the count increases along the chain
    removed: bool = field(default=False)


def densify_marked(st: St, step: float) -> St:
    """Split marked edges into pieces ≤ `step` so that bead widths and
    locations — which vary along central edges — are sampled densely enough
    for smooth polylines and transition ramps."""
    for e in list(st.edges):
        if not e.marked or e.length <= step:
            continue
        k = math.ceil(e.length / step)
        a, b = e.n0, e.n1
        targets = [(a.x + (b.x - a.x) * i / k, a.y + (b.y - a.y) * i / k,
                    a.r + (b.r - a.r) * i / k) for i in range(1, k)]
        cur = e
        for x, y, r in targets:
            mid = st.split_edge(cur, (x, y), r)
            mid.marked = True
            cur = next((e2 for e2 in mid.edges if e2.other(mid) is b), cur)
    return st


def quantize_marked(st: St, scheme: BeadingScheme) -> St:
    for n in st.nodes:
        if n.marked:
            n.b_int = scheme.q(2.0 * n.r)
    return st


def _marked_degree(n) -> int:
    return sum(1 for e in n.edges if e.marked)


def marked_chains(st: St) -> list:
    chains = []
    visited = set()

    def walk(start, first_edge):
        nodes = [start]
        edge = first_edge
        cur = start
        while True:
            visited.add(id(edge))
            cur = edge.other(cur)
            nodes.append(cur)
            if cur is start or _marked_degree(cur) != 2:
                return nodes, cur is start
            edge = next(e for e in cur.edges if e.marked and id(e) != id(edge))

    ends = [n for n in st.nodes if n.marked and _marked_degree(n) not in (0, 2)]
    for n in sorted(ends, key=lambda n: (n.x, n.y)):
        for e in n.edges:
            if e.marked and id(e) not in visited:
                nodes, closed = walk(n, e)
                chains.append(_make_chain(nodes, closed))
    for e in st.edges:  # leftover pure cycles
        if e.marked and id(e) not in visited:
            nodes, closed = walk(e.n0, e)
            chains.append(_make_chain(nodes, closed))
    return chains


def _make_chain(nodes, closed) -> Chain:
    s = [0.0]
    for a, b in zip(nodes, nodes[1:]):
        s.append(s[-1] + math.hypot(b.x - a.x, b.y - a.y))
    return Chain(nodes, s, closed)


def find_transition_anchors(st: St, scheme: BeadingScheme,
                            chains: list | None = None) -> list:
    """Locate every diameter crossing of q⁻¹(n) on the marked chains."""
    if chains is None:
        chains = marked_chains(st)
    anchors = []
    for chain in chains:
        for i in range(len(chain.nodes) - 1):
            a, b = chain.nodes[i], chain.nodes[i + 1]
            ba, bb = a.b_int, b.b_int
            if ba is None or bb is None or ba == bb:
                continue
            lo_n, hi_n = min(ba, bb), max(ba, bb)
            d0, d1 = 2.0 * a.r, 2.0 * b.r
            if abs(d1 - d0) < EPS:
                continue
            for n in range(lo_n, hi_n):
                dx = scheme.q_inv(n)
                if not math.isfinite(dx):
                    continue
                t = (dx - d0) / (d1 - d0)
                t = min(1.0, max(0.0, t))
                s = chain.s[i] + t * (chain.s[i + 1] - chain.s[i])
                anchors.append(Anchor(chain, s, n, 1 if bb > ba else -1))
    anchors.sort(key=lambda a: (id(a.chain), a.s))
    return anchors


def _gap_along(chain: Chain, s0: float, s1: float) -> float:
    gap = s1 - s0
    if chain.closed and gap < 0:
        gap += chain.length
    return gap


def filter_anchors(anchors: list, d_max_transition: float) -> list:
    """Remove close opposite-direction anchor pairs, flattening b̄ between."""
    by_chain: dict = {}
    for a in anchors:
        by_chain.setdefault(id(a.chain), []).append(a)
    for group in by_chain.values():
        chain = group[0].chain
        changed = True
        while changed:
            changed = False
            live = [a for a in group if not a.removed]
            if len(live) < 2:
                break
            pairs = list(zip(live, live[1:]))
            if chain.closed and len(live) > 1:
                pairs.append((live[-1], live[0]))
            for a, b in pairs:
                if a.direction == b.direction:
                    continue
                if _gap_along(chain, a.s, b.s) >= d_max_transition:
                    continue
                a.removed = True
                b.removed = True
                # surrounding counts on either side of the removed pair; on a
                # mismatch the lower-R side wins
                ca = a.n if a.direction > 0 else a.n + 1
                cb = b.n + 1 if b.direction > 0 else b.n
                count = ca if _radius_at(chain, a.s) <= _radius_at(chain, b.s) \
                    else cb
                for node, s in zip(chain.nodes, chain.s):
                    if 0 < _gap_along(chain, a.s, s) < _gap_along(chain, a.s, b.s):
                        node.b_int = count
                changed = True
                break
    return [a for a in anchors if not a.removed]


def _radius_at(chain: Chain, s: float) -> float:
    i = _locate(chain, s)
    a, b = chain.nodes[i], chain.nodes[i + 1]
    span = chain.s[i + 1] - chain.s[i]
    t = 0.0 if span <= 0 else (s - chain.s[i]) / span
    return a.r + t * (b.r - a.r)


def _locate(chain: Chain, s: float) -> int:
    for i in range(len(chain.s) - 1):
        if chain.s[i] - EPS <= s <= chain.s[i + 1] + EPS:
            return i
    return len(chain.s) - 2


def _insert_at(st: St, chain: Chain, s: float):
    """Ensure a chain node exists at arclength s; returns it."""
    if chain.closed:
        s %= chain.length
    i = _locate(chain, s)
    a, b = chain.nodes[i], chain.nodes[i + 1]
    span = chain.s[i + 1] - chain.s[i]
    t = 0.0 if span <= 0 else (s - chain.s[i]) / span
    if t < 1e-6:
        return chain.nodes[i]
    if t > 1 - 1e-6:
        return chain.nodes[i + 1]
    edge = next((e for e in a.edges if e.marked and e.other(a) is b), None)
    if edge is None:
        return chain.nodes[i]
    pos = (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    r = a.r + t * (b.r - a.r)
    mid = st.split_edge(edge, pos, r)
    mid.marked = True
    if mid is not a and mid is not b:
        chain.nodes.insert(i + 1, mid)
        chain.s.insert(i + 1, s)
    return mid


def apply_transitions(st: St, scheme: BeadingScheme, anchors: list,
                      chains: list | None = None) -> St:
    """Install ramps: new end nodes, fractional b̂ between, b̄ elsewhere."""
    for n in st.nodes:
        if n.marked and n.b_int is not None:
            n.b_frac = float(n.b_int)

    for a in anchors:
        chain = a.chain
        t_len = scheme.transition_length(a.n)
        if t_len <= 0:
            continue
        t0 = scheme.transition_anchor_offset(a.n)
        if a.direction > 0:
            s_lo, s_hi = a.s - t0, a.s - t0 + t_len
        else:
            s_lo, s_hi = a.s + t0 - t_len, a.s + t0
        if not chain.closed and (s_lo < -EPS or s_hi > chain.length + EPS):
            continue  # ramp would stick out of the chain: keep the sharp jump
        # keep ramp ends off exact quantization boundaries
        for s_end in (s_lo, s_hi):
            r_end = _radius_at(chain, min(max(s_end, 0.0), chain.length)
                               if not chain.closed else s_end % chain.length)
            if abs(2 * r_end - scheme.q_inv(a.n)) < 1e-6:
                if s_end == s_lo:
                    s_lo -= NUDGE
                else:
                    s_hi += NUDGE
        lo_node = _insert_at(st, chain, s_lo)
        hi_node = _insert_at(st, chain, s_hi)
        n_lo, n_hi = (a.n, a.n + 1) if a.direction > 0 else (a.n + 1, a.n)
        lo_node.b_frac = float(n_lo)
        hi_node.b_frac = float(n_hi)
        span = _gap_along(chain, s_lo, s_hi) if chain.closed else s_hi - s_lo
        for node, s in zip(chain.nodes, chain.s):
            g = _gap_along(chain, s_lo, s) if chain.closed else s - s_lo
            if 0 < g < span:
                f = g / span
                node.b_frac = a.n + (f if a.direction > 0 else 1.0 - f)
    return st
