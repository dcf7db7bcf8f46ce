"""fbelos: construction and numerical verification of f-belos figures.

An f-belos is the plane region between the graph of an admissible profile
(positive on (0, 1), vanishing at 0 and 1) and two similar copies of it
meeting at a cusp on the baseline; the semicircular profile gives the
classical arbelos and the parabolic profile the parbelos.  The package
builds these figures for arbitrary profile expressions, computes their
derived geometry, verifies the figure's classical properties numerically,
and renders SVG diagrams.
"""

from . import errors
from ._kernels import BACKEND
from .belos import (CharacterizationResult, CheckReport, Circle, FBelos,
                    Parallelogram, SkippedCheck, analyze, boundary_lengths,
                    characterization_residual, circumcircle, construct,
                    diagonal_conditions, diagonal_line, fbelos_area,
                    fbelos_area_direct, mean_parallelogram, mean_value_point,
                    middle_arcs, plato_section, point_parallelogram,
                    prop7_check, rectangle_defect, tangent_parallelogram,
                    tangent_rectangle_check)
from .expr import (CompiledFunction, ProfileExpr, compile_expr, differentiate,
                   evaluate, parse, serialize)
from .geometry import Point
from .numerics import QuadratureResult, fd_derivative, find_root, integrate
from .profile import (PlacedProfile, Profile, arc_length, area_under,
                      build_profile, endpoint_slopes, lower_profiles,
                      nesting_check, preset, slope_is_infinite)
from .render import Scene, render_svg

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CharacterizationResult", "CheckReport", "Circle",
    "CompiledFunction", "FBelos", "Parallelogram", "PlacedProfile", "Point",
    "Profile", "ProfileExpr", "QuadratureResult", "Scene", "SkippedCheck",
    "analyze", "arc_length", "area_under", "boundary_lengths",
    "build_profile", "characterization_residual", "circumcircle",
    "compile_expr", "construct", "diagonal_conditions", "diagonal_line",
    "differentiate", "endpoint_slopes", "errors", "evaluate", "fbelos_area",
    "fbelos_area_direct", "fd_derivative", "find_root", "integrate",
    "lower_profiles", "mean_parallelogram", "mean_value_point", "middle_arcs",
    "nesting_check", "parse", "plato_section", "point_parallelogram",
    "preset", "prop7_check", "rectangle_defect", "render_svg", "serialize",
    "slope_is_infinite", "tangent_parallelogram", "tangent_rectangle_check",
]
