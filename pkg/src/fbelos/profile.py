"""Admissible profiles and their homothetic lower copies.

A profile is a function on [0, 1] that is positive inside the interval and
vanishes at both ends.  Admissibility is checked by sampling (2049 uniform
points) because no finitely-checkable criterion exists for arbitrary
expressions; endpoint zeros are accepted within 1e-12 of rounding slack.

A :class:`PlacedProfile` stores (scale, offset) instead of a rewritten
expression, so the similarity to its base profile is exact by construction:
it evaluates as ``scale * f((x - offset) / scale)`` on
``[offset, offset + scale]``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

from . import expr as ex
from .errors import (BadCusp, BadParameter, DomainError, NonDifferentiable,
                     NotAdmissible, UnknownPreset)
from .numerics import DEFAULT_REL_TOL, INFINITE_SLOPE, fd_derivative, integrate

ENDPOINT_TOL = 1e-12
ADMISSIBILITY_SAMPLES = 2049
NESTING_SAMPLES = 2049
NESTING_TOL = 1e-12


@dataclass(frozen=True)
class Profile:
    """A validated admissible profile.

    ``derivative_expr`` is None when the expression contains a node without
    a symbolic derivative (abs); slope queries then fall back to finite
    differences.
    """

    expr: ex.ProfileExpr
    derivative_expr: ex.ProfileExpr | None
    name: str = "custom"

    def value(self, x):
        return ex.evaluate(self.expr, x)

    def derivative(self, x):
        if self.derivative_expr is not None:
            return ex.evaluate(self.derivative_expr, x)
        return fd_derivative(self.value, x)

    @cached_property
    def _value_tape(self):
        return ex.compile_expr(self.expr)

    @cached_property
    def _arc_tape(self):
        # domain is [0, 1] whose endpoints are exact doubles, so one tape
        # serves both integration sides
        if self.derivative_expr is None:
            return None
        tape = ex.compile_expr(_arc_integrand_ast(self.derivative_expr.root))
        return tape, tape

    @cached_property
    def arc_length_total(self):
        return arc_length(self)

    @cached_property
    def area(self):
        return area_under(self)

    @cached_property
    def endpoint_slopes(self):
        return endpoint_slopes(self)

    def __str__(self):
        return f"{self.name}: {self.expr.source_text}"


@dataclass(frozen=True)
class PlacedProfile:
    """A scaled and shifted copy of a base profile (exact similarity)."""

    base: Profile
    scale: float
    offset: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.scale < 1.0:
            raise BadParameter(f"scale must lie in (0, 1), got {self.scale}")
        if self.offset < 0.0:
            raise BadParameter(f"offset must be non-negative, got {self.offset}")

    @property
    def domain(self):
        return (self.offset, self.offset + self.scale)

    def value(self, x):
        return self.scale * self.base.value((x - self.offset) / self.scale)

    def derivative(self, x):
        # chain rule: d/dx [s*f((x-o)/s)] = f'((x-o)/s)
        if self.base.derivative_expr is not None:
            return ex.evaluate(self.base.derivative_expr, (x - self.offset) / self.scale)
        return fd_derivative(self.value, x)

    @cached_property
    def _arc_tape(self):
        """Arc-length integrand tapes anchored at each domain endpoint.

        (offset, scale) are doubles, so the local coordinate (x-o)/s can
        overshoot 1 by an ulp near the right end of the domain, which turns
        an endpoint-singular integrand into a division by zero.  Anchoring
        the coordinate at the endpoint a node is measured from keeps it
        strictly inside (0, 1) on that side.
        """
        if self.base.derivative_expr is None:
            return None
        left = ex.substitute(self.base.derivative_expr,
                             _left_anchored_ast(self.offset, self.scale))
        right = ex.substitute(self.base.derivative_expr,
                              _right_anchored_ast(self.domain[1], self.scale))
        return (ex.compile_expr(_arc_integrand_ast(left)),
                ex.compile_expr(_arc_integrand_ast(right)))

    @cached_property
    def _value_tape(self):
        return ex.compile_expr(self.placed_ast())

    def placed_ast(self):
        """AST of scale * f((x - offset) / scale) in global coordinates."""
        inner = _left_anchored_ast(self.offset, self.scale)
        return ex._fold(ex.Mul(ex.Num(self.scale), ex.substitute(self.base.expr, inner)))


def _left_anchored_ast(offset, scale):
    """(x - offset) / scale as an AST node."""
    node = ex.Var()
    if offset != 0.0:
        node = ex.Sub(node, ex.Num(offset))
    return ex._fold(ex.Div(node, ex.Num(scale)))


def _right_anchored_ast(right_end, scale):
    """1 - (r - x) / scale as an AST node (exact at x = r)."""
    return ex._fold(ex.Sub(ex.Num(1.0),
                           ex.Div(ex.Sub(ex.Num(right_end), ex.Var()),
                                  ex.Num(scale))))


def _arc_integrand_ast(derivative_node):
    """sqrt(1 + d(x)^2) as an AST node."""
    return ex.Call("sqrt", ex._fold(
        ex.Add(ex.Num(1.0), ex.Pow(derivative_node, ex.Num(2.0)))))


def build_profile(source) -> Profile:
    """Validate an expression (text or ProfileExpr) as an admissible profile."""
    e = ex.parse(source) if isinstance(source, str) else source
    violations = _admissibility_violations(e)
    if violations:
        head = "; ".join(f"f({x:.6g}) {reason}" for x, _, reason in violations[:4])
        more = f" (+{len(violations) - 4} more)" if len(violations) > 4 else ""
        raise NotAdmissible(f"profile is not admissible: {head}{more}", violations)
    try:
        d = ex.differentiate(e)
    except NonDifferentiable:
        d = None
    return Profile(e, d)


def _admissibility_violations(e):
    violations = []
    for i in range(ADMISSIBILITY_SAMPLES):
        x = i / (ADMISSIBILITY_SAMPLES - 1)
        try:
            v = ex.evaluate(e, x)
        except DomainError as err:
            violations.append((x, math.nan, f"not evaluable ({err})"))
            continue
        if i == 0 or i == ADMISSIBILITY_SAMPLES - 1:
            if abs(v) > ENDPOINT_TOL:
                violations.append((x, v, f"= {v:.6g}, endpoint must vanish"))
        elif v <= 0.0:
            violations.append((x, v, f"= {v:.6g}, must be positive inside (0, 1)"))
    return violations


# --- presets --------------------------------------------------------------------

def preset(name: str, params=()) -> Profile:
    """Named profile catalog: arbelos, parbelos, parabola(k), sine, cubic(a, b)."""
    params = list(params)

    def expect(n):
        if len(params) != n:
            raise UnknownPreset(f"preset {name!r} takes {n} parameter(s), got {len(params)}")

    if name == "arbelos":
        expect(0)
        p = build_profile("sqrt(x - x^2)")
    elif name == "parbelos":
        expect(0)
        p = build_profile("x - x^2")
    elif name == "parabola":
        expect(1)
        k = float(params[0])
        if not k > 0.0:
            raise NotAdmissible(f"parabola preset requires k > 0, got {k}")
        p = build_profile(f"{k!r}*(x - x^2)")
        p = Profile(p.expr, p.derivative_expr, f"parabola:k={k:g}")
    elif name == "sine":
        expect(0)
        p = build_profile("sin(pi*x)/pi")
    elif name == "cubic":
        expect(2)
        a, b = float(params[0]), float(params[1])
        p = build_profile(f"x*(1 - x)*({a!r} + {b!r}*x)")
        p = Profile(p.expr, p.derivative_expr, f"cubic:a={a:g},b={b:g}")
    else:
        raise UnknownPreset(f"unknown preset {name!r}")
    if p.name == "custom":
        p = Profile(p.expr, p.derivative_expr, name)
    return p


# --- operations ------------------------------------------------------------------

def lower_profiles(f: Profile, p: float) -> tuple[PlacedProfile, PlacedProfile]:
    """The two homothetic lower copies meeting at the cusp (p, 0)."""
    if not (1e-9 < p < 1.0 - 1e-9):
        raise BadCusp(f"cusp parameter must lie strictly inside (0, 1), got {p}")
    return PlacedProfile(f, p, 0.0), PlacedProfile(f, 1.0 - p, p)


def nesting_check(f: Profile, p: float) -> bool:
    """True iff both lower copies stay below the upper arc (sampled)."""
    g, h = lower_profiles(f, p)
    for placed in (g, h):
        a, b = placed.domain
        for i in range(NESTING_SAMPLES):
            x = a + (b - a) * (i / (NESTING_SAMPLES - 1))
            if placed.value(x) > f.value(x) + NESTING_TOL:
                return False
    return True


def endpoint_slopes(f: Profile) -> tuple[float, float]:
    """One-sided slopes at x = 0 and x = 1.

    Uses the symbolic derivative when it evaluates to a finite value at the
    endpoint, otherwise a finite-difference estimate with divergence
    detection; +/-inf marks a vertical tangent (see ``slope_is_infinite``).
    """
    return (_one_sided_slope(f, 0.0, "right"), _one_sided_slope(f, 1.0, "left"))


def _one_sided_slope(f, x, side):
    if f.derivative_expr is not None:
        try:
            v = ex.evaluate(f.derivative_expr, x)
            if abs(v) <= INFINITE_SLOPE:
                return v
        except DomainError:
            pass
    return fd_derivative(f.value, x, side=side)


def slope_is_infinite(slope: float) -> bool:
    return abs(slope) > INFINITE_SLOPE


def arc_length(f, a: float = None, b: float = None,
               rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Arc length of a Profile or PlacedProfile graph over [a, b]."""
    lo, hi = f.domain if isinstance(f, PlacedProfile) else (0.0, 1.0)
    if a is None:
        a = lo
    if b is None:
        b = hi
    if a < lo - 1e-12 or b > hi + 1e-12 or not a < b:
        raise BadParameter(f"[{a}, {b}] is not inside the domain [{lo}, {hi}]")
    tape = f._arc_tape
    if tape is not None:
        return integrate(tape, a, b, rel_tol).value
    # no symbolic derivative: integrate a finite-difference integrand
    return integrate(lambda x: math.hypot(1.0, f.derivative(x)), a, b, rel_tol).value


def area_under(f, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Integral of the profile over its domain."""
    lo, hi = f.domain if isinstance(f, PlacedProfile) else (0.0, 1.0)
    return integrate(f._value_tape, lo, hi, rel_tol).value
