"""The f-belos figure and its verified properties.

An f-belos is the region between the graph of an admissible profile on
[0, 1] and its two homothetic lower copies meeting at the cusp (p, 0).
The operations here compute every derived quantity of the figure (arc
lengths, areas, the point and tangent parallelograms, the circumcircle of
the tangent rectangle, the diagonal line) and :func:`analyze` packages the
numeric verification of the figure's classical properties into sorted
:class:`CheckReport` entries.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from . import expr as ex
from .errors import (BadParameter, BadSection, DegenerateDenominator,
                     DegenerateParallelogram, InfiniteSlope, NestingViolation,
                     NoMeanValuePoint, NotARectangle, ParallelTangents)
from .geometry import Point, distance, intersect_lines, point_line_distance, shoelace_area
from .numerics import DEFAULT_REL_TOL, find_root, integrate
from .profile import (PlacedProfile, Profile, arc_length, area_under,
                      lower_profiles, nesting_check, slope_is_infinite)

PARALLELOGRAM_TOL = 1e-12
DEGENERATE_SIDE = 1e-14
RECTANGLE_COND_TOL = 1e-9
MEAN_SCAN_GRID = 1024


# --- data types -----------------------------------------------------------------

@dataclass(frozen=True)
class Parallelogram:
    """Four ordered vertices with the parallelogram law enforced."""

    vertices: tuple

    def __post_init__(self):
        v1, v2, v3, v4 = self.vertices
        dx = (v1.x - v2.x) - (v4.x - v3.x)
        dy = (v1.y - v2.y) - (v4.y - v3.y)
        if math.hypot(dx, dy) > PARALLELOGRAM_TOL:
            raise BadParameter("vertices do not satisfy the parallelogram law")

    @property
    def area(self):
        return shoelace_area(self.vertices)

    @property
    def diagonals(self):
        v1, v2, v3, v4 = self.vertices
        return (v1, v3), (v2, v4)

    def rectangle_defect(self):
        """|cos| of the vertex angle at V2; exactly 0 for rectangles."""
        v1, v2, v3, _ = self.vertices
        ax, ay = v1.x - v2.x, v1.y - v2.y
        bx, by = v3.x - v2.x, v3.y - v2.y
        na = math.hypot(ax, ay)
        nb = math.hypot(bx, by)
        if na < DEGENERATE_SIDE or nb < DEGENERATE_SIDE:
            raise DegenerateParallelogram(f"side length below {DEGENERATE_SIDE}")
        return abs(ax * bx + ay * by) / (na * nb)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise BadParameter(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class CheckReport:
    """A named numeric comparison: pass iff |lhs - rhs| <= tol."""

    name: str
    lhs: float
    rhs: float
    abs_err: float
    tol: float
    passed: bool
    notes: str = ""

    @classmethod
    def compare(cls, name, lhs, rhs, tol, notes=""):
        err = abs(lhs - rhs)
        return cls(name, lhs, rhs, err, tol, err <= tol, notes)

    def to_jsonable(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "abs_err": self.abs_err, "tol": self.tol, "pass": self.passed,
                "notes": self.notes}


@dataclass(frozen=True)
class SkippedCheck:
    """A check whose precondition does not hold for this figure."""

    name: str
    reason: str

    def to_jsonable(self):
        return {"name": self.name, "status": f"skipped: {self.reason}"}


@dataclass(frozen=True)
class FBelos:
    """An admissible profile with a cusp parameter and its lower copies."""

    profile: Profile
    cusp: float
    lower_left: PlacedProfile
    lower_right: PlacedProfile
    rel_tol: float = DEFAULT_REL_TOL

    @property
    def origin(self):
        return Point(0.0, 0.0)

    @property
    def cusp_point(self):
        return Point(self.cusp, 0.0)

    @property
    def unit_point(self):
        return Point(1.0, 0.0)

    @cached_property
    def lengths(self):
        return boundary_lengths(self)

    @cached_property
    def slopes(self):
        return self.profile.endpoint_slopes

    @cached_property
    def mean_area(self):
        return area_under(self.profile, self.rel_tol)


def construct(f: Profile, p: float, rel_tol: float = DEFAULT_REL_TOL,
              require_nesting: bool = True) -> FBelos:
    """Build the figure; by default the lower arcs must nest below the
    upper arc.

    ``require_nesting=False`` admits profiles whose copies overlap the
    upper arc (possible when the profile is convex near an endpoint); every
    derived quantity is then the corresponding signed version, and all the
    similarity-based identities continue to hold.
    """
    g, h = lower_profiles(f, p)
    if require_nesting and not nesting_check(f, p):
        raise NestingViolation(
            f"lower copies of {f.name} rise above the upper arc at p={p}")
    return FBelos(f, p, g, h, rel_tol)


# --- arc lengths -------------------------------------------------------------------

def boundary_lengths(b: FBelos) -> tuple[float, float, float]:
    """(upper, lower-left, lower-right) arc lengths by quadrature."""
    return (arc_length(b.profile, rel_tol=b.rel_tol),
            arc_length(b.lower_left, rel_tol=b.rel_tol),
            arc_length(b.lower_right, rel_tol=b.rel_tol))


def plato_section(a: float, b: float, c: float) -> tuple[float, float]:
    """Points d <= c <= e with |dc| = |ce| = |ac|*|cb| / |ab|.

    d and e divide [a, c] and [c, b] in the ratio |ac| : |cb|.
    """
    if not a < c < b:
        raise BadSection(f"section point must satisfy a < c < b, got ({a}, {c}, {b})")
    t = (c - a) * (b - c) / (b - a)
    return c - t, c + t


def middle_arcs(b: FBelos) -> tuple[float, float]:
    """Lengths of the two middle lower arcs of the nested sub-figures.

    Each lower arc carries a scaled copy of the whole figure with the cusp
    at the same relative position, producing four lower arcs; the middle
    two are the ones adjacent to the original cusp.
    """
    p = b.cusp
    scale = p * (1.0 - p)
    left_mid = PlacedProfile(b.profile, scale, p * p)
    right_mid = PlacedProfile(b.profile, scale, p)
    return (arc_length(left_mid, rel_tol=b.rel_tol),
            arc_length(right_mid, rel_tol=b.rel_tol))


# --- the parallelogram at a point ----------------------------------------------------

def point_parallelogram(b: FBelos, x0: float) -> Parallelogram:
    """Parallelogram P1 P2 P P3 from the matching points on the three arcs."""
    if not 0.0 < x0 < 1.0:
        raise BadParameter(f"x0 must lie in (0, 1), got {x0}")
    p = b.cusp
    fx = b.profile.value(x0)
    p1 = Point(x0, fx)
    p2 = Point(p * x0, p * fx)
    p3 = Point((1.0 - p) * x0 + p, (1.0 - p) * fx)
    return Parallelogram((p1, p2, b.cusp_point, p3))


def rectangle_defect(q: Parallelogram) -> float:
    return q.rectangle_defect()


def point_rectangle_criterion(b: FBelos, x0: float) -> float:
    """Predicted defect of P(x0): |x0(1-x0) - f(x0)^2| normalized by the
    side lengths; vanishes exactly when the parallelogram is a rectangle."""
    fx = b.profile.value(x0)
    crit = abs(x0 * (1.0 - x0) - fx * fx)
    return crit / (math.hypot(x0, fx) * math.hypot(1.0 - x0, fx))


# --- areas ----------------------------------------------------------------------------

def fbelos_area(b: FBelos) -> float:
    """Area of the figure: 2 p (1-p) times the area below the upper arc."""
    return 2.0 * b.cusp * (1.0 - b.cusp) * b.mean_area


def fbelos_area_direct(b: FBelos) -> float:
    """Independent area computation: quadrature of the upper-minus-lower gap."""
    p = b.cusp
    upper = b.profile.expr
    left_gap = ex._fold(ex.Sub(upper.root, b.lower_left.placed_ast()))
    right_gap = ex._fold(ex.Sub(upper.root, b.lower_right.placed_ast()))
    left = integrate(ex.compile_expr(left_gap), 0.0, p, b.rel_tol).value
    right = integrate(ex.compile_expr(right_gap), p, 1.0, b.rel_tol).value
    return left + right


def mean_value_point(b: FBelos) -> float:
    """Smallest x with f(x) equal to the mean of f over [0, 1]."""
    mean = b.mean_area
    f = b.profile.value
    target = lambda x: f(x) - mean
    prev_x = 0.0
    prev_v = -mean  # f(0) = 0 < mean
    for i in range(1, MEAN_SCAN_GRID + 1):
        x = i / MEAN_SCAN_GRID
        v = target(x)
        if v == 0.0:
            return x
        if (v > 0.0) != (prev_v > 0.0):
            return find_root(target, prev_x, x, 1e-13)
        prev_x, prev_v = x, v
    raise NoMeanValuePoint(
        f"no interior point of {b.profile.name} attains the mean value {mean}")


def mean_parallelogram(b: FBelos) -> tuple[float, Parallelogram]:
    c = mean_value_point(b)
    return c, point_parallelogram(b, c)


# --- the tangent parallelogram ---------------------------------------------------------

def _finite_slopes(b: FBelos):
    s0, s1 = b.slopes
    if slope_is_infinite(s0) or slope_is_infinite(s1):
        raise InfiniteSlope(
            f"{b.profile.name} has a vertical endpoint tangent; "
            "tangent-line operations are unavailable")
    if abs(s0 - s1) <= 1e-12:
        raise ParallelTangents(f"endpoint slopes {s0} and {s1} are parallel")
    return s0, s1


def tangent_parallelogram(b: FBelos) -> Parallelogram:
    """Parallelogram bounded by the endpoint tangents of the upper arc and
    the cusp tangents of the lower arcs (which are parallel to them)."""
    s0, s1 = _finite_slopes(b)
    p = b.cusp
    # lines: y = s0 x;  y = s0 (x - p);  y = s1 (x - p);  y = s1 (x - 1)
    t1 = intersect_lines(s0, 0.0, s1, -s1 * p)
    t2 = intersect_lines(s0, 0.0, s1, -s1)
    t3 = intersect_lines(s0, -s0 * p, s1, -s1)
    return Parallelogram((t1, t2, t3, b.cusp_point))


def tangent_area_closed_form(b: FBelos) -> float:
    s0, s1 = _finite_slopes(b)
    p = b.cusp
    return p * (1.0 - p) * abs(s0 * s1 / (s0 - s1))


def tangent_rectangle_check(b: FBelos) -> CheckReport:
    """Rectangle condition s0*s1 = -1, with the reduced area form cross-check."""
    s0, s1 = _finite_slopes(b)
    p = b.cusp
    residual = abs(s0 * s1 + 1.0)
    if residual <= RECTANGLE_COND_TOL:
        if s0 <= 0.0:
            # impossible for an admissible profile: f >= 0 with f(0) = 0
            # forces s0 >= 0, and the rectangle condition excludes 0
            raise BadParameter(f"rectangle area form needs f'(0) > 0, got {s0}")
        area = tangent_area_closed_form(b)
        reduced = p * (1.0 - p) * s0 / (1.0 + s0 * s0)
        return CheckReport.compare(
            "tangent_rectangle_area", area, reduced, 1e-10,
            notes=f"rectangle: |f'(0)f'(1) + 1| = {residual:.3e}")
    return CheckReport(
        "tangent_rectangle_area", residual, 0.0, residual, RECTANGLE_COND_TOL,
        False, notes="not a rectangle: f'(0)f'(1) != -1")


def is_tangent_rectangle(b: FBelos) -> bool:
    s0, s1 = _finite_slopes(b)
    return abs(s0 * s1 + 1.0) <= RECTANGLE_COND_TOL


def prop7_check(b: FBelos):
    """Mean-point inequality: area(P(c)) >= 2 f(c) area(T) when T is a
    rectangle, with equality iff f'(0) = -f'(1) = 1."""
    if not is_tangent_rectangle(b):
        return SkippedCheck("mean_point_inequality",
                            "tangent parallelogram is not a rectangle")
    c, pc = mean_parallelogram(b)
    fc = b.profile.value(c)
    lhs = pc.area
    rhs = 2.0 * fc * tangent_parallelogram(b).area
    equal = abs(lhs - rhs) <= 1e-10
    note = "equality (f'(0) = -f'(1) = 1)" if equal else f"strict: lhs/rhs = {lhs / rhs:.12g}"
    return CheckReport("mean_point_inequality", lhs, rhs, abs(lhs - rhs),
                       1e-12, lhs >= rhs - 1e-12, notes=note)


# --- circumcircle and diagonal -----------------------------------------------------------

def circumcircle(b: FBelos) -> tuple[Circle, tuple[float, float]]:
    """Circumcircle of the tangent rectangle and its two baseline abscissas
    (the cusp and 1 / (1 + f'(0)^2))."""
    if not is_tangent_rectangle(b):
        raise NotARectangle("circumcircle requires the tangent rectangle condition")
    s0, _ = _finite_slopes(b)
    p = b.cusp
    q = 1.0 + s0 * s0
    center = Point((p + 1.0 + p * s0 * s0) / (2.0 * q), s0 / (2.0 * q))
    radius = distance(center, b.cusp_point)
    return Circle(center, radius), (p, 1.0 / q)


def diagonal_line(b: FBelos) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the line through T1 and T3: Ax + By + C = 0."""
    s0, s1 = _finite_slopes(b)
    p = b.cusp
    return ((1.0 - 2.0 * p) * s0 * s1,
            p * s0 - (1.0 - p) * s1,
            p * p * s0 * s1)


def _diagonal_rhs(p, s0, s1):
    den = p * s0 - (1.0 - p) * s1
    if abs(den) < 1e-12:
        raise DegenerateDenominator(
            f"p f'(0) - (1-p) f'(1) = {den:.3e} is too small")
    return (p * (p - 1.0) * s0 * s1 / den,
            (2.0 * p - 1.0) * s0 * s1 / den)


def diagonal_conditions(b: FBelos) -> tuple[CheckReport, CheckReport]:
    """Incidence and tangency of the upper arc against the T1T3 diagonal.

    The incidence check passes iff (p, f(p)) lies on the diagonal; the
    tangency check additionally requires matching slopes.  Both are
    residual comparisons at 1e-10.
    """
    s0, s1 = _finite_slopes(b)
    p = b.cusp
    rhs_value, rhs_slope = _diagonal_rhs(p, s0, s1)
    fp = b.profile.value(p)
    dp = b.profile.derivative(p)
    incidence = CheckReport.compare("diagonal_incidence", fp, rhs_value, 1e-10)
    tangency = CheckReport.compare("diagonal_tangency", dp, rhs_slope, 1e-10)
    return incidence, tangency


@dataclass(frozen=True)
class CharacterizationResult:
    sup_residual: float
    symmetry_defect: float
    implied_k: float | None

    @property
    def is_parabola_family(self):
        return self.implied_k is not None


def characterization_residual(f: Profile, grid_size: int = 101) -> CharacterizationResult:
    """How far the profile is from the family k*(x - x^2).

    The diagonal is tangent at the cusp for every cusp parameter exactly
    when f(x) = x(x-1) f'(0) f'(1) / (x f'(0) - (1-x) f'(1)) holds
    identically and the endpoint slopes are opposite; both residuals vanish
    only for the parabola family, in which case the coefficient k = f'(0).
    """
    s0, s1 = f.endpoint_slopes
    if slope_is_infinite(s0) or slope_is_infinite(s1):
        raise InfiniteSlope("characterization requires finite endpoint slopes")
    if s0 == 0.0 or s1 == 0.0:
        raise BadParameter("characterization requires nonzero endpoint slopes")
    sup = 0.0
    for i in range(1, grid_size + 1):
        x = i / (grid_size + 1)
        den = x * s0 - (1.0 - x) * s1
        if abs(den) < 1e-12:
            raise DegenerateDenominator(f"x f'(0) - (1-x) f'(1) vanishes at x={x}")
        predicted = x * (x - 1.0) * s0 * s1 / den
        sup = max(sup, abs(f.value(x) - predicted))
    symmetry_defect = abs(s0 + s1)
    implied = s0 if (sup <= 1e-9 and symmetry_defect <= 1e-9) else None
    return CharacterizationResult(sup, symmetry_defect, implied)


# --- assembled verification --------------------------------------------------------------

def analyze(b: FBelos, report_tol: float = 1e-9, grid: int = 101) -> list:
    """Run every applicable property check; returns reports sorted by name.

    Checks whose preconditions fail (vertical or parallel endpoint
    tangents, non-rectangle tangent parallelogram) come back as
    :class:`SkippedCheck` entries, never as failures.  ``report_tol``
    applies to checks without a structurally pinned tolerance.
    """
    checks = []
    p = b.cusp
    upper, left, right = b.lengths

    checks.append(CheckReport.compare(
        "prop1_boundary_length", left + right, upper, 1e-8 * upper,
        notes="lower boundary length vs upper arc length"))

    mid_left, mid_right = middle_arcs(b)
    checks.append(CheckReport.compare(
        "prop2_middle_arcs_congruent", mid_left, mid_right, 1e-10))
    half_harmonic = left * right / (left + right)
    checks.append(CheckReport.compare(
        "prop2_half_harmonic_mean", mid_left, half_harmonic, 1e-8,
        notes="middle arc vs half the harmonic mean of the lower arcs"))

    worst = 0.0
    for i in range(1, grid + 1):
        x0 = i / (grid + 1)
        measured = point_parallelogram(b, x0).rectangle_defect()
        worst = max(worst, abs(measured - point_rectangle_criterion(b, x0)))
    checks.append(CheckReport.compare(
        "prop3_rectangle_criterion", worst, 0.0, 1e-10,
        notes="measured defect of P(x0) vs |x0(1-x0) - f(x0)^2| (normalized)"))

    area = fbelos_area(b)
    checks.append(CheckReport.compare(
        "prop4_area_vs_quadrature", area, fbelos_area_direct(b), 1e-7,
        notes="2p(1-p)*mean area vs direct region quadrature"))
    c, pc = mean_parallelogram(b)
    mid_ref = point_parallelogram(b, 0.5).area
    checks.append(CheckReport.compare(
        "prop4_mean_point_doubling", area, 2.0 * pc.area, report_tol,
        notes=f"c = {c:.12g}; area ratio to P(1/2) = {area / mid_ref:.15g}"))

    try:
        tpar = tangent_parallelogram(b)
    except (InfiniteSlope, ParallelTangents) as err:
        reason = ("endpoint slope is infinite" if isinstance(err, InfiniteSlope)
                  else "endpoint tangents are parallel")
        for name in ("prop5_tangent_area", "prop6_rectangle_defect",
                     "prop6_rectangle_area", "prop7_mean_point_inequality",
                     "prop8_vertices_on_circle", "prop8_axis_intersections",
                     "prop9_diagonal_equation", "prop9_incidence",
                     "prop9_tangency"):
            checks.append(SkippedCheck(name, reason))
        return sorted(checks, key=lambda c: c.name)

    s0, s1 = b.slopes
    checks.append(CheckReport.compare(
        "prop5_tangent_area", tpar.area, tangent_area_closed_form(b), 1e-10,
        notes="shoelace area of T vs p(1-p)|f'(0)f'(1)/(f'(0)-f'(1))|"))

    predicted_defect = abs(1.0 + s0 * s1) / (math.hypot(1.0, s0) * math.hypot(1.0, s1))
    checks.append(CheckReport.compare(
        "prop6_rectangle_defect", tpar.rectangle_defect(), predicted_defect, 1e-10,
        notes="measured defect of T vs |1 + f'(0)f'(1)| (normalized)"))

    rect = is_tangent_rectangle(b)
    if rect:
        rc = tangent_rectangle_check(b)
        checks.append(CheckReport(
            "prop6_rectangle_area", rc.lhs, rc.rhs, rc.abs_err, rc.tol,
            rc.passed, rc.notes))
    else:
        checks.append(SkippedCheck(
            "prop6_rectangle_area", "tangent parallelogram is not a rectangle"))

    seven = prop7_check(b)
    if isinstance(seven, SkippedCheck):
        checks.append(SkippedCheck("prop7_mean_point_inequality", seven.reason))
    else:
        checks.append(CheckReport(
            "prop7_mean_point_inequality", seven.lhs, seven.rhs, seven.abs_err,
            seven.tol, seven.passed, seven.notes))

    if rect:
        circle, (x1, x2) = circumcircle(b)
        worst_vertex = max(abs(distance(v, circle.center) - circle.radius)
                           for v in tpar.vertices)
        checks.append(CheckReport.compare(
            "prop8_vertices_on_circle", worst_vertex, 0.0, 1e-10,
            notes=f"center ({circle.center.x:.12g}, {circle.center.y:.12g}), "
                  f"radius {circle.radius:.12g}"))
        worst_axis = max(abs(distance(Point(x, 0.0), circle.center) - circle.radius)
                         for x in (x1, x2))
        tangent_note = ("tangent to the baseline" if abs(x1 - x2) <= 1e-10
                        else f"baseline intersections at x = {x1:.12g}, {x2:.12g}")
        checks.append(CheckReport.compare(
            "prop8_axis_intersections", worst_axis, 0.0, 1e-10, notes=tangent_note))
    else:
        for name in ("prop8_vertices_on_circle", "prop8_axis_intersections"):
            checks.append(SkippedCheck(name, "tangent parallelogram is not a rectangle"))

    a_coef, b_coef, c_coef = diagonal_line(b)
    t1, _, t3, _ = tpar.vertices
    worst_line = max(point_line_distance(a_coef, b_coef, c_coef, t1),
                     point_line_distance(a_coef, b_coef, c_coef, t3))
    checks.append(CheckReport.compare(
        "prop9_diagonal_equation", worst_line, 0.0, 1e-10,
        notes="T1 and T3 lie on the stated diagonal line"))

    try:
        incidence, tangency = diagonal_conditions(b)
        checks.append(CheckReport(
            "prop9_incidence", incidence.lhs, incidence.rhs, incidence.abs_err,
            incidence.tol, incidence.passed,
            notes="f(p) vs the diagonal height at the cusp"))
        checks.append(CheckReport(
            "prop9_tangency", tangency.lhs, tangency.rhs, tangency.abs_err,
            tangency.tol, tangency.passed,
            notes="f'(p) vs the diagonal slope"))
    except DegenerateDenominator as err:
        for name in ("prop9_incidence", "prop9_tangency"):
            checks.append(SkippedCheck(name, str(err)))

    return sorted(checks, key=lambda c: c.name)
