"""Pure-Python quadrature kernel.

This is the reference implementation; ``_quadcy.pyx`` mirrors it operation
for operation.  Both must produce bit-identical results, which constrains
the code here more than usual:

* identical operation order everywhere (no clever re-association),
* the double-double primitives use Dekker splitting, not FMA,
* libm is reached through :mod:`math`, the same library the C kernel links.

Near interval endpoints plain doubles cannot represent the evaluation
point:  ``b - d`` rounds onto ``b`` once ``d`` drops below half an ulp, and
expressions like ``x - x^2`` cancel catastrophically long before that.  The
kernel therefore switches to double-double arithmetic for the evaluation
point (and everything derived from it) whenever a node's distance factor is
below ``DD_DELTA_THRESHOLD``.  That is what lets arc lengths of profiles
with vertical endpoint tangents converge to ~1e-14 instead of ~1e-8.

Tape evaluation returns ``(value, err_code, node_ref, bad_arg)`` instead of
raising, so the compiled kernel can share the calling convention.
"""

import math

from . import _tanhsinh
from ..expr import (
    ERR_DIV_ZERO, ERR_LOG_NONPOSITIVE, ERR_NONFINITE, ERR_POW_DOMAIN,
    ERR_SQRT_NEGATIVE,
    OP_ABS, OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LOG, OP_MUL, OP_NEG,
    OP_POW, OP_POWI, OP_SIN, OP_SQRT, OP_SUB, OP_TAN, OP_X, SQRT_SLACK,
)

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split constant

STATUS_OK = 0
STATUS_NO_CONVERGENCE = 1
STATUS_DOMAIN_ERROR = 2


# --- double-double primitives -------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def _dd_add(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, bhi)
    e += alo + blo
    return _quick_two_sum(s, e)


def _dd_sub(ahi, alo, bhi, blo):
    return _dd_add(ahi, alo, -bhi, -blo)


def _dd_mul(ahi, alo, bhi, blo):
    p, e = _two_prod(ahi, bhi)
    e += ahi * blo + alo * bhi
    return _quick_two_sum(p, e)


def _dd_div(ahi, alo, bhi, blo):
    q1 = ahi / bhi
    thi, tlo = _two_prod(q1, bhi)
    s, e = _two_sum(ahi, -thi)
    e += alo - tlo - q1 * blo
    q2 = (s + e) / bhi
    return _quick_two_sum(q1, q2)


def _dd_sqrt(ahi, alo):
    if ahi == 0.0:
        return 0.0, 0.0
    q1 = math.sqrt(ahi)
    thi, tlo = _two_prod(q1, q1)
    s, e = _two_sum(ahi, -thi)
    e += alo - tlo
    q2 = (s + e) / (2.0 * q1)
    return _quick_two_sum(q1, q2)


# --- double tape evaluation -----------------------------------------------------

def _powi(base, n):
    invert = n < 0
    if invert:
        n = -n
    r = 1.0
    a = base
    while n:
        if n & 1:
            r = r * a
        n >>= 1
        if n:
            a = a * a
    if invert:
        return math.inf if r == 0.0 else 1.0 / r
    return r


def eval_tape(codes, aux, nrefs, consts, consts_lo, max_stack, x):
    stack = [0.0] * max(max_stack, 1)
    top = -1
    n = len(codes)
    for i in range(n):
        op = codes[i]
        if op == OP_CONST:
            top += 1
            stack[top] = consts[aux[i]]
            continue
        if op == OP_X:
            top += 1
            stack[top] = x
            continue
        if op == OP_NEG:
            stack[top] = -stack[top]
            continue
        a = stack[top]
        if op == OP_ADD:
            top -= 1
            v = stack[top] + a
        elif op == OP_SUB:
            top -= 1
            v = stack[top] - a
        elif op == OP_MUL:
            top -= 1
            v = stack[top] * a
        elif op == OP_DIV:
            top -= 1
            if a == 0.0:
                return 0.0, ERR_DIV_ZERO, nrefs[i], a
            v = stack[top] / a
        elif op == OP_POWI:
            e = aux[i]
            if a == 0.0 and e < 0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], a
            v = _powi(a, e)
        elif op == OP_POW:
            top -= 1
            b = stack[top]
            if b < 0.0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], b
            if b == 0.0 and a < 0.0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], b
            try:
                v = math.pow(b, a)
            except OverflowError:
                v = math.inf
        elif op == OP_SQRT:
            if a < 0.0:
                if a < -SQRT_SLACK:
                    return 0.0, ERR_SQRT_NEGATIVE, nrefs[i], a
                a = 0.0
            v = math.sqrt(a)
        elif op == OP_SIN:
            v = math.sin(a)
        elif op == OP_COS:
            v = math.cos(a)
        elif op == OP_TAN:
            v = math.tan(a)
        elif op == OP_EXP:
            try:
                v = math.exp(a)
            except OverflowError:
                v = math.inf
        elif op == OP_LOG:
            if a <= 0.0:
                return 0.0, ERR_LOG_NONPOSITIVE, nrefs[i], a
            v = math.log(a)
        else:  # OP_ABS
            v = abs(a)
        if not math.isfinite(v):
            return 0.0, ERR_NONFINITE, nrefs[i], a
        stack[top] = v
    return stack[0], 0, 0, 0.0


# --- double-double tape evaluation ------------------------------------------------

def eval_tape_dd(codes, aux, nrefs, consts, consts_lo, max_stack, xhi, xlo):
    hi = [0.0] * max(max_stack, 1)
    lo = [0.0] * max(max_stack, 1)
    top = -1
    n = len(codes)
    for i in range(n):
        op = codes[i]
        if op == OP_CONST:
            top += 1
            hi[top] = consts[aux[i]]
            lo[top] = consts_lo[aux[i]]
            continue
        if op == OP_X:
            top += 1
            hi[top] = xhi
            lo[top] = xlo
            continue
        if op == OP_NEG:
            hi[top] = -hi[top]
            lo[top] = -lo[top]
            continue
        ah = hi[top]
        al = lo[top]
        if op == OP_ADD:
            top -= 1
            vh, vl = _dd_add(hi[top], lo[top], ah, al)
        elif op == OP_SUB:
            top -= 1
            vh, vl = _dd_sub(hi[top], lo[top], ah, al)
        elif op == OP_MUL:
            top -= 1
            vh, vl = _dd_mul(hi[top], lo[top], ah, al)
        elif op == OP_DIV:
            top -= 1
            if ah == 0.0:
                return 0.0, ERR_DIV_ZERO, nrefs[i], ah
            vh, vl = _dd_div(hi[top], lo[top], ah, al)
        elif op == OP_POWI:
            e = aux[i]
            if ah == 0.0 and e < 0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], ah
            vh, vl = _dd_powi(ah, al, e)
        elif op == OP_POW:
            top -= 1
            bh = hi[top]
            bl = lo[top]
            if bh < 0.0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], bh
            if bh == 0.0 and ah < 0.0:
                return 0.0, ERR_POW_DOMAIN, nrefs[i], bh
            try:
                v = math.pow(bh, ah)
            except OverflowError:
                v = math.inf
            if bh > 0.0 and math.isfinite(v):
                # first-order sensitivity to both dd tails
                corr = v * (al * math.log(bh) + ah * bl / bh)
                vh, vl = _two_sum(v, corr)
            else:
                vh, vl = v, 0.0
        elif op == OP_SQRT:
            if ah < 0.0:
                if ah < -SQRT_SLACK:
                    return 0.0, ERR_SQRT_NEGATIVE, nrefs[i], ah
                ah, al = 0.0, 0.0
            vh, vl = _dd_sqrt(ah, al)
        elif op == OP_SIN:
            vh, vl = _two_sum(math.sin(ah), math.cos(ah) * al)
        elif op == OP_COS:
            vh, vl = _two_sum(math.cos(ah), -math.sin(ah) * al)
        elif op == OP_TAN:
            t = math.tan(ah)
            vh, vl = _two_sum(t, (1.0 + t * t) * al)
        elif op == OP_EXP:
            try:
                v = math.exp(ah)
            except OverflowError:
                v = math.inf
            vh, vl = (v, 0.0) if not math.isfinite(v) else _two_sum(v, v * al)
        elif op == OP_LOG:
            if ah <= 0.0:
                return 0.0, ERR_LOG_NONPOSITIVE, nrefs[i], ah
            vh, vl = _two_sum(math.log(ah), al / ah)
        else:  # OP_ABS
            vh, vl = (-ah, -al) if ah < 0.0 else (ah, al)
        if not math.isfinite(vh):
            return 0.0, ERR_NONFINITE, nrefs[i], ah
        hi[top] = vh
        lo[top] = vl
    return hi[0] + lo[0], 0, 0, 0.0


def _dd_powi(bh, bl, n):
    invert = n < 0
    if invert:
        n = -n
    rh, rl = 1.0, 0.0
    ah, al = bh, bl
    while n:
        if n & 1:
            rh, rl = _dd_mul(rh, rl, ah, al)
        n >>= 1
        if n:
            ah, al = _dd_mul(ah, al, ah, al)
    if invert:
        if rh == 0.0:
            return math.inf, 0.0
        return _dd_div(1.0, 0.0, rh, rl)
    return rh, rl


# --- tanh-sinh integration ----------------------------------------------------------

def _eval_point(tape, endpoint, d, delta, from_left):
    """Evaluate a tape at distance d from an endpoint, switching to the
    double-double path for nodes too close for plain doubles."""
    codes, aux, nrefs, consts, consts_lo, max_stack = tape
    if delta >= _tanhsinh.DD_DELTA_THRESHOLD:
        x = endpoint + d if from_left else endpoint - d
        v, err, ref, arg = eval_tape(codes, aux, nrefs, consts, consts_lo,
                                     max_stack, x)
        if not err:
            return v, 0, 0, 0.0
    # dd path: x = endpoint +/- d with d carried exactly
    if from_left:
        xh, xl = _two_sum(endpoint, d)
    else:
        xh, xl = _two_sum(endpoint, -d)
    return eval_tape_dd(codes, aux, nrefs, consts, consts_lo, max_stack, xh, xl)


def integrate_tape(left_tape, right_tape, a, b, rel_tol, max_level,
                   starts, counts, deltas, weights):
    """Tanh-sinh integration over [a, b].

    ``left_tape``/``right_tape`` are (codes, aux, nrefs, consts, consts_lo,
    max_stack) tuples evaluated for nodes measured from a and from b
    respectively (they compute the same function; placed profiles anchor
    their local coordinate at the sampled endpoint so it never overshoots
    its domain).  Returns (value, err_estimate, evaluations, status,
    err_code, node_ref, bad_arg, err_side); status: 0 converged, 1 level
    cap reached, 2 domain error.
    """
    hl = 0.5 * (b - a)
    total = 0.0
    result = 0.0
    prev = 0.0
    est = math.inf
    evals = 0
    h = 1.0
    for level in range(min(max_level, len(starts) - 1) + 1):
        if level > 0:
            h *= 0.5
        news = 0.0
        start = starts[level]
        for r in range(start, start + counts[level]):
            delta = deltas[r]
            w = weights[r]
            d = hl * delta
            v, err, ref, arg = _eval_point(left_tape, a, d, delta, True)
            evals += 1
            if err:
                return 0.0, 0.0, evals, STATUS_DOMAIN_ERROR, err, ref, arg, 0
            news += w * v
            if delta < 1.0:  # mirrored node; delta == 1.0 only at t == 0
                v, err, ref, arg = _eval_point(right_tape, b, d, delta, False)
                evals += 1
                if err:
                    return 0.0, 0.0, evals, STATUS_DOMAIN_ERROR, err, ref, arg, 1
                news += w * v
        total += news
        result = hl * h * total
        if level >= 2:
            est = abs(result - prev)
            if est <= rel_tol * abs(result) + 1e-15:
                return result, est, evals, STATUS_OK, 0, 0, 0.0, 0
        prev = result
    return result, est, evals, STATUS_NO_CONVERGENCE, 0, 0, 0.0, 0
