"""End-to-end toolpath generation pipeline."""

from __future__ import annotations

from dataclasses import dataclass

from .beading import (BeadingScheme, insert_meta_ribs, make_scheme,
                      propagate_beadings)
from .centering import filter_marking, mark_central
from .extraction import extract_toolpaths
from .geometry import PolygonSet
from .skeleton import build_st
from .transitions import (apply_transitions, densify_marked, filter_anchors,
                          find_transition_anchors, marked_chains,
                          quantize_marked)

D_MAX_TRANSITION = 1.0  # mm


@dataclass
class GenerateParams:
    scheme: str = "inward"
    w_star: float = 0.4
    alpha_max: float = 135.0
    d_discretization: float = 0.2
    c: int = 4
    n_weight: float = 2.0
    widening: tuple | None = None
    shell: int | None = None
    retreat: float | None = None
    spacing: float = 0.05


def generate_toolpaths(outline: PolygonSet,
                       scheme: BeadingScheme | str = "inward",
                       params: GenerateParams | None = None) -> list:
    """Convert a layer outline into width-annotated extrusion polylines.

    Args:
        outline: polygon set (outer rings CCW, holes CW, µm fixed point).
        scheme: a BeadingScheme instance or a scheme name.
        params: pipeline parameters; scheme-related fields are only used when
            `scheme` is given by name.
    """
    p = params or GenerateParams()
    if isinstance(scheme, str):
        scheme = make_scheme(scheme, w_star=p.w_star, c=p.c,
                             n_weight=p.n_weight, widening=p.widening,
                             shell=p.shell)
    st = build_st(outline, w_star=scheme.w_star,
                  d_discretization=p.d_discretization,
                  alpha_max=p.alpha_max, spacing=p.spacing)
    mark_central(st, p.alpha_max, policy=scheme.centering_policy)
    filter_marking(st, d_max_unmarked=scheme.w_star)
    densify_marked(st, p.d_discretization)
    insert_meta_ribs(st, scheme)
    quantize_marked(st, scheme)
    chains = marked_chains(st)
    anchors = find_transition_anchors(st, scheme, chains)
    anchors = filter_anchors(anchors, D_MAX_TRANSITION)
    apply_transitions(st, scheme, anchors, chains)
    propagate_beadings(st, scheme, t_beading=scheme.w_star)
    return extract_toolpaths(st, scheme, retreat_ratio=p.retreat)
