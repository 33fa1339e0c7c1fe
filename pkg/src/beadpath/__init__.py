"""Adaptive-width contour-parallel toolpath generation for 2D layer outlines."""

from .analysis import (AccuracyReport, Statistics, bead_shape,
                       compute_accuracy, compute_statistics)
from .backpressure import FlowModel, speed_for_width
from .beading import SCHEME_NAMES, BeadingScheme, make_scheme
from .errors import (BeadpathError, InvalidInterpolation, InvalidPolygon,
                     WidthUnreachable)
from .estimator import ToolpathGenerator
from .extraction import ExtrusionLine, ExtrusionSite
from .gcode import generate_gcode, save_gcode
from .geometry import PolygonSet, boolean, morphological_close
from .layerio import (load_layer, load_toolpaths, save_layer, save_report,
                      save_toolpaths)
from .pipeline import GenerateParams, generate_toolpaths
from .svgrender import render_svg, save_svg

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport", "BeadingScheme", "BeadpathError", "ExtrusionLine",
    "ExtrusionSite", "FlowModel", "GenerateParams", "InvalidInterpolation",
    "InvalidPolygon", "PolygonSet", "SCHEME_NAMES", "Statistics",
    "ToolpathGenerator", "WidthUnreachable", "bead_shape", "boolean",
    "compute_accuracy", "compute_statistics", "generate_gcode",
    "generate_toolpaths", "load_layer", "load_toolpaths", "make_scheme",
    "morphological_close", "render_svg", "save_gcode", "save_layer",
    "save_report", "save_svg", "save_toolpaths", "speed_for_width",
]
