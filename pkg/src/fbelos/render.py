"""Deterministic SVG rendering of an f-belos with optional overlays.

Output is a pure function of the :class:`Scene`: fixed style table, fixed
decimal formatting, and a single affine world-to-screen transform (recorded
in a comment) mapping mathematical y-up to SVG y-down.  Rendering the same
scene twice produces byte-identical documents.
"""

import math
from dataclasses import dataclass, field

from .belos import (FBelos, circumcircle, diagonal_line, mean_parallelogram,
                    point_parallelogram, tangent_parallelogram)
from .errors import (BadParameter, InfiniteSlope, NotARectangle,
                     OverlayUnavailable, ParallelTangents)
from .geometry import Point
from .profile import slope_is_infinite

OVERLAY_KINDS = ("point_parallelogram", "mean_parallelogram",
                 "tangent_parallelogram", "circumcircle", "diagonal", "labels")

_STYLE = """\
    .baseline { stroke: #444444; stroke-width: 1; }
    .arc-upper { stroke: #1f4e9c; stroke-width: 1.5; fill: none; }
    .arc-lower { stroke: #b22222; stroke-width: 1.5; fill: none; }
    .pgram-point { stroke: #1a7a3c; stroke-width: 1.2; fill: none; }
    .pgram-mean { stroke: #7a1a7a; stroke-width: 1.2; fill: none; }
    .pgram-tangent { stroke: #d2691e; stroke-width: 1.2; fill: none; }
    .circumcircle { stroke: #708090; stroke-width: 1.2; fill: none; }
    .diagonal { stroke: #708090; stroke-width: 1.2; stroke-dasharray: 4 3; }
    .marker { fill: #222222; }
    .label { font-family: monospace; font-size: 12px; fill: #222222; }"""


def normalize_overlay(spec):
    """Overlay spec -> (kind, param).  Accepts 'kind' or 'point_parallelogram:x0'."""
    if isinstance(spec, tuple):
        kind, param = spec
    elif ":" in str(spec):
        kind, _, raw = str(spec).partition(":")
        param = float(raw)
    else:
        kind, param = str(spec), None
    if kind not in OVERLAY_KINDS:
        raise BadParameter(f"unknown overlay {kind!r}; expected one of {OVERLAY_KINDS}")
    if kind == "point_parallelogram":
        if param is None:
            raise BadParameter("point_parallelogram overlay needs an x0, e.g. "
                               "point_parallelogram:0.35")
    elif param is not None:
        raise BadParameter(f"overlay {kind!r} takes no parameter")
    return kind, param


@dataclass(frozen=True)
class Scene:
    fbelos: FBelos
    overlays: tuple = ()
    samples_per_arc: int = 512
    width: int = 720
    height: int = 480
    margin: int = 40

    def __post_init__(self):
        if self.samples_per_arc < 16:
            raise BadParameter("samples_per_arc must be at least 16")
        if self.width <= 0 or self.height <= 0 or self.margin < 0:
            raise BadParameter("canvas dimensions must be positive")
        object.__setattr__(self, "overlays",
                           tuple(normalize_overlay(o) for o in self.overlays))


def _sample_xs(a, b, n, refine_left, refine_right):
    """Uniform steps plus two geometrically-placed points per refined end
    (keeps vertical-tangent arcs from showing chordal gaps)."""
    step = (b - a) / (n - 1)
    xs = [a + i * step for i in range(n)]
    xs[-1] = b
    extra = []
    if refine_left:
        extra += [a + step / 8.0, a + step / 64.0]
    if refine_right:
        extra += [b - step / 8.0, b - step / 64.0]
    return sorted(xs + extra)


def _arc_points(profile_like, a, b, n, refine_left, refine_right):
    return [Point(x, profile_like.value(x))
            for x in _sample_xs(a, b, n, refine_left, refine_right)]


def _overlay_geometry(scene):
    """Resolve overlay specs into drawable primitives, validating
    preconditions up front."""
    b = scene.fbelos
    prims = []
    want_labels = any(kind == "labels" for kind, _ in scene.overlays)

    def tangent_or_unavailable(overlay):
        try:
            return tangent_parallelogram(b)
        except (InfiniteSlope, ParallelTangents) as err:
            raise OverlayUnavailable(f"{overlay}: {err}") from err

    for kind, param in scene.overlays:
        if kind == "labels":
            continue
        if kind == "point_parallelogram":
            quad = point_parallelogram(b, param)
            prims.append(("polygon", "pgram-point", quad.vertices,
                          ("P1", "P2", "P", "P3")))
        elif kind == "mean_parallelogram":
            _, quad = mean_parallelogram(b)
            prims.append(("polygon", "pgram-mean", quad.vertices,
                          ("M1", "M2", "P", "M3")))
        elif kind == "tangent_parallelogram":
            quad = tangent_or_unavailable(kind)
            prims.append(("polygon", "pgram-tangent", quad.vertices,
                          ("T1", "T2", "T3", "P")))
        elif kind == "circumcircle":
            tangent_or_unavailable(kind)
            try:
                circle, _ = circumcircle(b)
            except NotARectangle as err:
                raise OverlayUnavailable(f"circumcircle: {err}") from err
            prims.append(("circle", "circumcircle", circle, ("C",)))
        elif kind == "diagonal":
            quad = tangent_or_unavailable(kind)
            t1, _, t3, _ = quad.vertices
            prims.append(("segment", "diagonal", (t1, t3), ()))
    return prims, want_labels


def render_svg(scene: Scene) -> str:
    """Render the scene to an SVG 1.1 document string."""
    b = scene.fbelos
    prims, want_labels = _overlay_geometry(scene)

    s0, s1 = b.slopes
    steep0 = slope_is_infinite(s0)
    steep1 = slope_is_infinite(s1)
    n = scene.samples_per_arc
    upper = _arc_points(b.profile, 0.0, 1.0, n, steep0, steep1)
    gl, gr = b.lower_left.domain
    hl, hr = b.lower_right.domain
    lower_left = _arc_points(b.lower_left, gl, gr, n, steep0, steep1)
    lower_right = _arc_points(b.lower_right, hl, hr, n, steep0, steep1)

    # world bounding box: baseline plus every drawn vertex
    xs = [0.0, 1.0]
    ys = [0.0]
    for pts in (upper, lower_left, lower_right):
        xs += [p.x for p in pts]
        ys += [p.y for p in pts]
    for kind, _, payload, _ in prims:
        if kind == "circle":
            xs += [payload.center.x - payload.radius, payload.center.x + payload.radius]
            ys += [payload.center.y - payload.radius, payload.center.y + payload.radius]
        else:
            xs += [p.x for p in payload]
            ys += [p.y for p in payload]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)

    inner_w = scene.width - 2 * scene.margin
    inner_h = scene.height - 2 * scene.margin
    scale = min(inner_w / (x1 - x0), inner_h / (y1 - y0))
    # center the content in the canvas
    tx = scene.margin + 0.5 * (inner_w - scale * (x1 - x0)) - scale * x0
    ty = scene.height - scene.margin - 0.5 * (inner_h - scale * (y1 - y0)) + scale * y0

    def X(x):
        return tx + scale * x

    def Y(y):
        return ty - scale * y

    def fmt(v):
        return f"{v:.3f}"

    def pts_attr(points):
        return " ".join(f"{fmt(X(p.x))},{fmt(Y(p.y))}" for p in points)

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
               f'width="{scene.width}" height="{scene.height}" '
               f'viewBox="0 0 {scene.width} {scene.height}">')
    out.append(f'  <!-- world-to-screen: X = {tx!r} + {scale!r} * x ; '
               f'Y = {ty!r} - {scale!r} * y -->')
    out.append("  <style>")
    out.append(_STYLE)
    out.append("  </style>")
    out.append(f'  <line class="baseline" x1="{fmt(X(x0))}" y1="{fmt(Y(0.0))}" '
               f'x2="{fmt(X(x1))}" y2="{fmt(Y(0.0))}"/>')
    out.append(f'  <polyline class="arc-upper" points="{pts_attr(upper)}"/>')
    out.append(f'  <polyline class="arc-lower" points="{pts_attr(lower_left)}"/>')
    out.append(f'  <polyline class="arc-lower" points="{pts_attr(lower_right)}"/>')

    for kind, css, payload, names in prims:
        if kind == "polygon":
            out.append(f'  <polygon class="{css}" points="{pts_attr(payload)}"/>')
        elif kind == "circle":
            out.append(f'  <circle class="{css}" cx="{fmt(X(payload.center.x))}" '
                       f'cy="{fmt(Y(payload.center.y))}" '
                       f'r="{fmt(scale * payload.radius)}"/>')
        elif kind == "segment":
            p1, p2 = payload
            out.append(f'  <line class="{css}" x1="{fmt(X(p1.x))}" y1="{fmt(Y(p1.y))}" '
                       f'x2="{fmt(X(p2.x))}" y2="{fmt(Y(p2.y))}"/>')
        if want_labels and names:
            anchors = payload.vertices if hasattr(payload, "vertices") else payload
            if kind == "circle":
                anchors = (payload.center,)
            for name, pt in zip(names, anchors):
                out.append(f'  <text class="label" x="{fmt(X(pt.x) + 4)}" '
                           f'y="{fmt(Y(pt.y) - 4)}">{name}</text>')

    for name, pt in (("O", b.origin), ("P", b.cusp_point), ("I", b.unit_point)):
        out.append(f'  <circle class="marker" cx="{fmt(X(pt.x))}" '
                   f'cy="{fmt(Y(pt.y))}" r="2.5"/>')
        out.append(f'  <text class="label" x="{fmt(X(pt.x) - 4)}" '
                   f'y="{fmt(Y(pt.y) + 16)}">{name}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
