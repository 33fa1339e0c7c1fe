"""Back-pressure compensated flow model for constant-pressure extruders.

On Bowden-style extruders the nozzle back pressure rises with bead width, so
rather than varying filament inflow the movement speed is adjusted: requested
flow follows the linear model f(w) = f0 − k(w/w0 − 1) and the speed becomes
v(w) = f(w)/(h·w).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import WidthUnreachable

MIN_FLOW_FRACTION = 0.05  # of f0, when clamping is enabled


@dataclass
class FlowModel:
    """Linear back-pressure model; f0 is derived as v0·w0·h.

    Args:
        v0: movement speed at the reference width, mm/s.
        w0: reference bead width, mm.
        h: layer height, mm.
        k: back-pressure coefficient, mm³/s per relative width.
        flow_factor: scale on extruded volume (printed lines tend to come
            out wider than planned).
        clamp_min_flow: clamp f(w) to 5 % of f0 instead of raising when the
            model would demand non-positive flow.
    """

    v0: float = 30.0
    w0: float = 0.4
    h: float = 0.1
    k: float = 1.1
    flow_factor: float = 0.9
    clamp_min_flow: bool = False
    f0: float = field(init=False)

    def __post_init__(self):
        self.f0 = self.v0 * self.w0 * self.h


def speed_for_width(model: FlowModel, w: float) -> tuple:
    """Movement speed (mm/s) and volumetric flow (mm³/s) for bead width `w`.

    Raises WidthUnreachable when f(w) ≤ 0, unless the model clamps.
    """
    if w <= 0:
        raise ValueError("width must be positive")
    f = model.f0 - model.k * (w / model.w0 - 1.0)
    if f <= 0:
        if not model.clamp_min_flow:
            raise WidthUnreachable(
                f"width {w:.3f} mm demands non-positive flow {f:.4f} mm³/s")
        f = MIN_FLOW_FRACTION * model.f0
    return f / (model.h * w), f
