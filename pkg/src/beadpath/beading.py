"""Beading schemes: how many beads fill a feature and at what widths.

A beading for count n at feature radius r stores only the outline-side half
(⌈n/2⌉ widths and radial locations); extraction mirrors it across the ridge.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import InvalidInterpolation

EPS = 1e-9
EPS_Q = 1e-9  # guards quantization floors against float noise at exact fits


@dataclass(frozen=True)
class Beading:
    """Half-sequences of bead widths and radial center locations."""

    n: int
    r: float
    widths: tuple
    locations: tuple

    def full_widths(self) -> tuple:
        """The complete symmetric width sequence of all n beads."""
        if self.n % 2:
            return self.widths + self.widths[-2::-1]
        return self.widths + self.widths[::-1]


def _locations(widths, n, r) -> tuple:
    locs = []
    acc = 0.0
    for i, w in enumerate(widths):
        acc += w
        if n % 2 and i == (n - 1) // 2:
            locs.append(r)  # odd center bead sits exactly on the ridge
        else:
            locs.append(acc - w / 2.0)
    return tuple(locs)


class BeadingScheme:
    """Interface: bead count quantization q, widths, and transition shape."""

    name = "base"
    centering_policy = "normal"
    retreat_ratio = 0.75

    def __init__(self, w_star: float):
        self.w_star = w_star

    def q(self, d: float) -> int:
        raise NotImplementedError

    def q_inv(self, n: int) -> float:
        """Largest diameter still quantized to n beads."""
        raise NotImplementedError

    def _widths(self, n: int, r: float) -> list:
        raise NotImplementedError

    def beading(self, n: int, r: float) -> Beading:
        if n <= 0:
            return Beading(0, r, (), ())
        w = tuple(self._widths(n, r))
        return Beading(n, r, w, _locations(w, n, r))

    def transition_length(self, n: int) -> float:
        return self.w_star

    def transition_anchor_offset(self, n: int) -> float:
        """Distance from the ramp's lower end to the anchor."""
        return self.transition_length(n) * (self.q_inv(n) / self.w_star - n)

    def nonlinearity_radii(self) -> tuple:
        """Radii where q or W are non-smooth; extra nodes are inserted there."""
        return ()


class UniformScheme(BeadingScheme):
    """Constant-width offsetting emulation: even counts, no adaptivity."""

    name = "uniform"
    centering_policy = "disabled"

    def q(self, d):
        return 2 * int(math.floor(d / (2 * self.w_star) + 0.5 + EPS_Q))

    def q_inv(self, n):
        return (n + 1) * self.w_star

    def _widths(self, n, r):
        return [self.w_star] * ((n + 1) // 2)


class OuterScheme(BeadingScheme):
    """Single outline-hugging bead; interior intentionally left unfilled."""

    name = "outer"
    retreat_ratio = 0.0

    def q(self, d):
        return 1 if d < self.w_star else 2

    def q_inv(self, n):
        return self.w_star if n <= 1 else math.inf

    def _widths(self, n, r):
        return [2.0 * r] if n == 1 else [self.w_star]

    def transition_length(self, n):
        return 0.0


class ConstantScheme(BeadingScheme):
    """Fixed bead count C everywhere; widths divide the local diameter."""

    name = "constant"
    centering_policy = "all_but_outline"

    def __init__(self, w_star, c: int = 4):
        super().__init__(w_star)
        self.c = int(c)

    def q(self, d):
        return self.c

    def q_inv(self, n):
        return math.inf

    def _widths(self, n, r):
        return [2.0 * r / n] * ((n + 1) // 2)


class EvenlyDistributedScheme(BeadingScheme):
    """Round d/w* to the nearest count; spread the diameter evenly."""

    name = "evenly"

    def q(self, d):
        return int(math.floor(d / self.w_star + 0.5 + EPS_Q))

    def q_inv(self, n):
        return (n + 0.5) * self.w_star

    def _widths(self, n, r):
        return [2.0 * r / n] * ((n + 1) // 2)


class CenteredScheme(BeadingScheme):
    """Preferred-width beads with one center bead absorbing the discrepancy."""

    name = "centered"

    def __init__(self, w_star, d_min=None, d_max=None):
        super().__init__(w_star)
        self.d_min = 0.8 * w_star if d_min is None else d_min
        self.d_max = 1.25 * w_star if d_max is None else d_max

    def q(self, d):
        qm = 2 * int(math.floor(d / (2 * self.w_star) + 0.5 + EPS_Q))
        diff = qm * self.w_star - d
        if diff > self.w_star - self.d_min:
            return qm - 1  # innermost pair too close: merge into one center bead
        if diff < self.w_star - self.d_max:
            return qm + 1  # center gap wide enough for an extra bead
        return qm

    def q_inv(self, n):
        if n % 2:
            return n * self.w_star + self.d_min
        return n * self.w_star + self.d_max - self.w_star

    def _widths(self, n, r):
        half = (n + 1) // 2
        w = [self.w_star] * half
        if n % 2:
            w[-1] = 2.0 * r - (n - 1) * self.w_star
        return w

    def transition_length(self, n):
        return 0.5 * self.w_star


class InwardDistributedScheme(BeadingScheme):
    """Distribute the width discrepancy over the innermost ~N beads."""

    name = "inward"

    def __init__(self, w_star, n_weight: float = 2.0):
        super().__init__(w_star)
        self.n_weight = float(n_weight)

    def q(self, d):
        return int(math.floor(d / self.w_star + 0.5 + EPS_Q))

    def q_inv(self, n):
        return (n + 0.5) * self.w_star

    def _widths(self, n, r):
        e = 2.0 * r - n * self.w_star
        inv_n2 = 1.0 / (self.n_weight * self.n_weight)
        omega = [max(0.0, 1.0 - inv_n2 * (i - (n - 1) / 2.0) ** 2)
                 for i in range(n)]
        total = sum(omega)
        return [self.w_star + e * omega[i] / total for i in range((n + 1) // 2)]


class WideningScheme(BeadingScheme):
    """Meta-scheme: print too-thin regions with a single widened bead."""

    name = "widening"

    def __init__(self, inner: BeadingScheme, w_min: float, r_min: float):
        super().__init__(inner.w_star)
        self.inner = inner
        self.w_min = w_min
        self.r_min = r_min
        self.centering_policy = inner.centering_policy
        self.retreat_ratio = inner.retreat_ratio

    def q(self, d):
        if d < 2.0 * self.r_min:
            return 0
        if d < self.w_star:
            return 1
        return self.inner.q(d)

    def q_inv(self, n):
        if n == 0:
            return 2.0 * self.r_min
        return self.inner.q_inv(n)

    def beading(self, n, r):
        if n == 1 and 2.0 * r < self.w_star:
            w = (max(self.w_min, 2.0 * r),)
            return Beading(1, r, w, (r,))
        return self.inner.beading(n, r)

    def _widths(self, n, r):
        return list(self.inner._widths(n, r))

    def transition_length(self, n):
        return self.inner.transition_length(n)

    def nonlinearity_radii(self):
        return tuple(sorted(set(self.inner.nonlinearity_radii())
                            | {self.r_min, self.w_star / 2.0}))


class ShellScheme(BeadingScheme):
    """Meta-scheme: at most M perimeters; the deep interior stays unfilled."""

    name = "shell"

    def __init__(self, inner: BeadingScheme, m: int):
        super().__init__(inner.w_star)
        self.inner = inner
        self.m = int(m)
        self.centering_policy = inner.centering_policy
        self.retreat_ratio = inner.retreat_ratio

    def q(self, d):
        return min(self.m, self.inner.q(d))

    def q_inv(self, n):
        if n >= self.m:
            return math.inf
        return self.inner.q_inv(n)

    def beading(self, n, r):
        if 2.0 * r > self.inner.q_inv(self.m):
            full = self.inner.beading(n, self.m * self.w_star / 2.0)
            return Beading(full.n, r, full.widths, full.locations)
        return self.inner.beading(n, r)

    def _widths(self, n, r):
        return list(self.inner._widths(n, r))

    def transition_length(self, n):
        return self.inner.transition_length(n)

    def nonlinearity_radii(self):
        qm = self.inner.q_inv(self.m)
        vals = {self.m * self.w_star, qm, qm + self.w_star / 2.0}
        vals |= {v / 2.0 for v in set(vals)}
        return tuple(sorted(set(self.inner.nonlinearity_radii())
                            | {v for v in vals if math.isfinite(v)}))


SCHEME_NAMES = ("uniform", "outer", "constant", "evenly", "centered", "inward")


def make_scheme(name: str, w_star: float = 0.4, c: int = 4,
                n_weight: float = 2.0, widening=None, shell=None) -> BeadingScheme:
    """Build a scheme by name with optional widening/shell wrappers.

    Args:
        widening: optional (w_min, r_min) pair.
        shell: optional max perimeter count M.
    """
    base = {
        "uniform": lambda: UniformScheme(w_star),
        "outer": lambda: OuterScheme(w_star),
        "constant": lambda: ConstantScheme(w_star, c),
        "evenly": lambda: EvenlyDistributedScheme(w_star),
        "centered": lambda: CenteredScheme(w_star),
        "inward": lambda: InwardDistributedScheme(w_star, n_weight),
    }
    if name not in base:
        raise ValueError(f"unknown scheme: {name!r}")
    scheme = base[name]()
    if widening is not None:
        scheme = WideningScheme(scheme, widening[0], widening[1])
    if shell is not None:
        scheme = ShellScheme(scheme, shell)
    return scheme


def interpolate_beadings(b1: Beading, b2: Beading, f: float) -> Beading:
    """Linear interpolation between beadings of consecutive counts at equal r.

    Widths and locations blend per inward bead index; the extra innermost bead
    of the larger beading fades in with its width scaled by f.
    """
    if abs(b1.r - b2.r) > 1e-6:
        raise InvalidInterpolation(
            f"beadings at different radii: {b1.r} vs {b2.r}")
    if b2.n != b1.n + 1:
        raise InvalidInterpolation("counts must be consecutive")
    return blend_beadings(b1, b2, f)


def blend_beadings(b1: Beading, b2: Beading, f: float) -> Beading:
    """Index-wise blend of two beadings; extra innermost beads fade in/out.

    Generalizes consecutive-count interpolation to arbitrary count pairs
    (used at beading conflicts); linear in f.
    """
    if f <= 0.0:
        return b1
    if f >= 1.0:
        return b2
    h1, h2 = len(b1.widths), len(b2.widths)
    common = min(h1, h2)
    # the shorter beading contributes a virtual zero-width center bead for
    # each extra innermost entry of the longer one
    if h1 >= h2:
        shorter, longer, grow = b2, b1, 1.0 - f
    else:
        shorter, longer, grow = b1, b2, f
    widths, locs = [], []
    for i in range(common):
        widths.append((1 - f) * b1.widths[i] + f * b2.widths[i])
        locs.append((1 - f) * b1.locations[i] + f * b2.locations[i])
    for i in range(common, len(longer.widths)):
        widths.append(grow * longer.widths[i])
        locs.append((1 - grow) * shorter.r + grow * longer.locations[i])
    n = longer.n if len(widths) > common else max(b1.n, b2.n)
    r = (1 - f) * b1.r + f * b2.r
    return Beading(n, r, tuple(widths), tuple(locs))


def beading_for_node(scheme: BeadingScheme, node) -> Beading:
    """Beading of a marked node from its (possibly fractional) bead count."""
    b_hat = node.b_frac if node.b_frac is not None else float(node.b_int)
    n_lo = int(math.floor(b_hat + EPS))
    frac = b_hat - n_lo
    lo = scheme.beading(n_lo, node.r)
    if frac <= EPS:
        return lo
    return blend_beadings(lo, scheme.beading(n_lo + 1, node.r), frac)


def insert_meta_ribs(st, scheme: BeadingScheme):
    """Split skeletal edges where they cross a scheme nonlinearity radius."""
    for rr in scheme.nonlinearity_radii():
        for e in list(st.edges):
            lo, hi = e.lower_upper()
            if lo.r + EPS < rr < hi.r - EPS:
                t = (rr - lo.r) / (hi.r - lo.r)
                pos = (lo.x + t * (hi.x - lo.x), lo.y + t * (hi.y - lo.y))
                st.split_edge(e, pos, rr)
    return st


def propagate_beadings(st, scheme: BeadingScheme, t_beading: float):
    """Give every node a beading: marked nodes their own, the rest inherited.

    Unmarked nodes take the beading of the node above them on their ramp;
    within `t_beading` (path length) of a lower marked node the inherited
    beading is blended with that node's own to resolve conflicts smoothly.
    """
    marked = [n for n in st.nodes if n.marked]
    for n in marked:
        if n.b_frac is None and n.b_int is None:
            n.b_int = scheme.q(2.0 * n.r)
        n.beading = beading_for_node(scheme, n)

    # distances from the nearest lower marked node along unmarked upward paths
    near: dict = {}
    heap = []
    tie = 0
    for m in marked:
        heapq.heappush(heap, (0.0, tie, m, m))
        tie += 1
    while heap:
        d, _, n, src = heapq.heappop(heap)
        if d > near.get(id(n), (math.inf,))[0]:
            continue
        for e in n.edges:
            v = e.other(n)
            if e.marked or v.marked or v.r < n.r - EPS:
                continue
            nd = d + e.length
            if nd < t_beading and nd < near.get(id(v), (math.inf,))[0]:
                near[id(v)] = (nd, src)
                heapq.heappush(heap, (nd, tie, v, src))
                tie += 1

    # downward pass: inherit from the highest already-resolved neighbor
    order = sorted((n for n in st.nodes if not n.marked),
                   key=lambda n: (-n.r, n.x, n.y))
    for n in order:
        cands = [e.other(n) for e in n.edges]
        cands = [c for c in cands if c.beading is not None
                 and (c.r >= n.r - EPS or c.marked)]
        if not cands:
            cands = [e.other(n) for e in n.edges
                     if e.other(n).beading is not None]
        assert cands, "node left without beading"
        upper = max(cands, key=lambda c: (c.r, c.x, c.y))
        inherited = upper.beading
        hit = near.get(id(n))
        if hit is not None:
            dist, src = hit
            n.beading = blend_beadings(src.beading, inherited, dist / t_beading)
        else:
            n.beading = inherited
    return st
