"""Quadrature, root finding, and finite differences.

``integrate`` is tanh-sinh (double-exponential) quadrature, chosen because
the arc-length integrand sqrt(1 + f'(x)^2) of profiles with vertical
endpoint tangents diverges at both interval ends and tanh-sinh converges
through integrable endpoint singularities.  Integrands given as
:class:`~fbelos.expr.CompiledFunction` tapes run inside the selected kernel
backend and get double-double sampling next to the endpoints; arbitrary
Python callables are integrated with the same node tables but can only be
sampled at representable points, which limits attainable accuracy for
integrands singular at a nonzero endpoint (bounded integrands are
unaffected).
"""

import math
from dataclasses import dataclass

from . import _kernels
from ._kernels import _tanhsinh
from .errors import NoBracket, NoConvergence
from .expr import CompiledFunction

DEFAULT_REL_TOL = 1e-10

# |slope| beyond this is reported as an infinite (vertical) tangent.
INFINITE_SLOPE = 1e8


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def _tape_args(fn: CompiledFunction):
    return (fn.codes, fn.aux, fn.nodes_ref, fn.consts, fn.consts_lo, fn.max_stack)


def integrate(fn, a: float, b: float, rel_tol: float = DEFAULT_REL_TOL) -> QuadratureResult:
    """Integrate fn over [a, b] (a < b); endpoint values may be singular.

    ``fn`` may be a plain callable, a :class:`CompiledFunction`, or a
    (left, right) pair of CompiledFunctions computing the same function but
    anchored at opposite endpoints (the kernel samples each from its own
    side).  Raises NoConvergence once the level cap is reached, with the
    best estimate attached to the exception.
    """
    if not a < b:
        raise ValueError(f"integration bounds must satisfy a < b, got [{a}, {b}]")
    starts, counts, deltas, weights = _tanhsinh.build_tables()
    if isinstance(fn, CompiledFunction):
        pair = (fn, fn)
    elif isinstance(fn, tuple) and len(fn) == 2 \
            and all(isinstance(t, CompiledFunction) for t in fn):
        pair = fn
    else:
        pair = None
    if pair is not None:
        value, est, evals, status, err, ref, arg, side = _kernels.integrate_tape(
            _tape_args(pair[0]), _tape_args(pair[1]),
            a, b, rel_tol, _tanhsinh.MAX_LEVEL, starts, counts, deltas, weights)
        if status == _kernels.STATUS_DOMAIN_ERROR:
            pair[side].raise_domain_error(err, ref, arg)
    else:
        value, est, evals, status = _integrate_callable(
            fn, a, b, rel_tol, starts, counts, deltas, weights)
    result = QuadratureResult(value, est, evals)
    if status == _kernels.STATUS_NO_CONVERGENCE:
        raise NoConvergence(
            f"quadrature did not converge within {_tanhsinh.MAX_LEVEL} "
            f"halvings (estimate {value!r}, error {est:.3e})", result)
    return result


def _integrate_callable(fn, a, b, rel_tol, starts, counts, deltas, weights):
    hl = 0.5 * (b - a)
    total = 0.0
    result = 0.0
    prev = 0.0
    est = math.inf
    evals = 0
    h = 1.0
    for level in range(_tanhsinh.MAX_LEVEL + 1):
        if level > 0:
            h *= 0.5
        news = 0.0
        start = starts[level]
        for r in range(start, start + counts[level]):
            delta = deltas[r]
            w = weights[r]
            d = hl * delta
            x = a + d
            if x > a:  # skip nodes rounded onto the endpoint
                news += w * fn(x)
                evals += 1
            if delta < 1.0:
                x = b - d
                if x < b:
                    news += w * fn(x)
                    evals += 1
        total += news
        result = hl * h * total
        if level >= 2:
            est = abs(result - prev)
            if est <= rel_tol * abs(result) + 1e-15:
                return result, est, evals, _kernels.STATUS_OK
        prev = result
    return result, est, evals, _kernels.STATUS_NO_CONVERGENCE


def find_root(fn, lo: float, hi: float, tol: float) -> float:
    """Bisection root of fn on [lo, hi]; requires fn(lo)*fn(hi) <= 0.

    Narrows the bracket to |hi - lo| <= tol and returns its midpoint.
    """
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoBracket(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval no longer splittable
            break
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _quotient(fn, x, h, side):
    if side == "central":
        return (fn(x + h) - fn(x - h)) / (2.0 * h)
    if side == "right":
        return (fn(x + h) - fn(x)) / h
    if side == "left":
        return (fn(x) - fn(x - h)) / h
    raise ValueError(f"side must be central/right/left, got {side!r}")


def _richardson(fn, x, h, side):
    """Two Richardson extrapolation levels over the basic quotient."""
    d0 = _quotient(fn, x, h, side)
    d1 = _quotient(fn, x, h / 2.0, side)
    d2 = _quotient(fn, x, h / 4.0, side)
    if side == "central":  # error series in h^2
        r0 = (4.0 * d1 - d0) / 3.0
        r1 = (4.0 * d2 - d1) / 3.0
        return (16.0 * r1 - r0) / 15.0
    r0 = 2.0 * d1 - d0  # one-sided: error series in h
    r1 = 2.0 * d2 - d1
    return (4.0 * r1 - r0) / 3.0


def fd_derivative(fn, x: float, side: str = "central", h0: float = 1e-4) -> float:
    """Richardson-extrapolated finite difference (two levels, base step h0).

    The base-scale estimate is refined by shrinking h until two successive
    estimates agree.  If the estimates keep growing all the way down to the
    representable step floor the slope is diverging and +/-inf is returned
    (callers flag |result| > 1e8 as an infinite tangent).
    """
    h_floor = max(1e-13, 64.0 * 2.2204460492503131e-16 * abs(x))
    first = None
    prev = None
    h = h0
    while h >= h_floor:
        est = _richardson(fn, x, h, side)
        if first is None:
            first = est
        if prev is not None and abs(est - prev) <= 1e-9 * (1.0 + abs(est)):
            return est
        prev = est
        h /= 4.0
    # no agreement at any scale: a vertical tangent keeps the quotients
    # growing into the 1e6+ range by the step floor, while a merely rough
    # estimate (kinks, noise) stays moderate and is returned as-is
    if prev is not None and first is not None and abs(prev) > 4.0 * abs(first) \
            and abs(prev) > 1e5:
        return math.copysign(math.inf, prev)
    return prev if prev is not None else _richardson(fn, x, h_floor, side)
