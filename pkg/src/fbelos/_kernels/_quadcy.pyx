# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernel.

Mirror of ``_quadpy.py``; every operation is performed in the same order on
IEEE doubles so results are bit-identical to the pure-Python kernel (the
build disables FP contraction for this reason).  See _quadpy.py for the
algorithm notes.
"""

from libc.math cimport (cos, exp, fabs, isfinite, log, pow, sin, sqrt, tan,
                        INFINITY)
from libc.stdlib cimport free, malloc

cdef double SPLITTER = 134217729.0
cdef double SQRT_SLACK = 1e-12
cdef double DD_DELTA_THRESHOLD = 2.0 ** -24

cdef enum:
    OP_CONST = 0
    OP_X = 1
    OP_NEG = 2
    OP_ADD = 3
    OP_SUB = 4
    OP_MUL = 5
    OP_DIV = 6
    OP_POWI = 7
    OP_POW = 8
    OP_SQRT = 9
    OP_SIN = 10
    OP_COS = 11
    OP_TAN = 12
    OP_EXP = 13
    OP_LOG = 14
    OP_ABS = 15

cdef enum:
    ERR_SQRT_NEGATIVE = 1
    ERR_LOG_NONPOSITIVE = 2
    ERR_DIV_ZERO = 3
    ERR_POW_DOMAIN = 4
    ERR_NONFINITE = 5

cdef enum:
    STATUS_OK = 0
    STATUS_NO_CONVERGENCE = 1
    STATUS_DOMAIN_ERROR = 2


cdef struct EvalResult:
    double value
    int err
    int ref
    double arg


# --- double-double primitives (Dekker/Knuth, no FMA) ---------------------------

cdef inline void _two_sum(double a, double b, double *s, double *e) nogil:
    cdef double ss = a + b
    cdef double bb = ss - a
    s[0] = ss
    e[0] = (a - (ss - bb)) + (b - bb)

cdef inline void _quick_two_sum(double a, double b, double *s, double *e) nogil:
    cdef double ss = a + b
    s[0] = ss
    e[0] = b - (ss - a)

cdef inline void _two_prod(double a, double b, double *p, double *e) nogil:
    cdef double pp = a * b
    cdef double ca = SPLITTER * a
    cdef double ahi = ca - (ca - a)
    cdef double alo = a - ahi
    cdef double cb = SPLITTER * b
    cdef double bhi = cb - (cb - b)
    cdef double blo = b - bhi
    p[0] = pp
    e[0] = ((ahi * bhi - pp) + ahi * blo + alo * bhi) + alo * blo

cdef inline void _dd_add(double ahi, double alo, double bhi, double blo,
                         double *rh, double *rl) nogil:
    cdef double s, e
    _two_sum(ahi, bhi, &s, &e)
    e += alo + blo
    _quick_two_sum(s, e, rh, rl)

cdef inline void _dd_sub(double ahi, double alo, double bhi, double blo,
                         double *rh, double *rl) nogil:
    _dd_add(ahi, alo, -bhi, -blo, rh, rl)

cdef inline void _dd_mul(double ahi, double alo, double bhi, double blo,
                         double *rh, double *rl) nogil:
    cdef double p, e
    _two_prod(ahi, bhi, &p, &e)
    e += ahi * blo + alo * bhi
    _quick_two_sum(p, e, rh, rl)

cdef inline void _dd_div(double ahi, double alo, double bhi, double blo,
                         double *rh, double *rl) nogil:
    cdef double q1 = ahi / bhi
    cdef double thi, tlo, s, e, q2
    _two_prod(q1, bhi, &thi, &tlo)
    _two_sum(ahi, -thi, &s, &e)
    e += alo - tlo - q1 * blo
    q2 = (s + e) / bhi
    _quick_two_sum(q1, q2, rh, rl)

cdef inline void _dd_sqrt(double ahi, double alo, double *rh, double *rl) nogil:
    cdef double q1, thi, tlo, s, e, q2
    if ahi == 0.0:
        rh[0] = 0.0
        rl[0] = 0.0
        return
    q1 = sqrt(ahi)
    _two_prod(q1, q1, &thi, &tlo)
    _two_sum(ahi, -thi, &s, &e)
    e += alo - tlo
    q2 = (s + e) / (2.0 * q1)
    _quick_two_sum(q1, q2, rh, rl)

cdef inline double _powi(double base, int n) nogil:
    cdef bint invert = n < 0
    cdef double r = 1.0
    cdef double a = base
    if invert:
        n = -n
    while n:
        if n & 1:
            r = r * a
        n >>= 1
        if n:
            a = a * a
    if invert:
        return INFINITY if r == 0.0 else 1.0 / r
    return r

cdef inline void _dd_powi(double bh, double bl, int n,
                          double *rh, double *rl) nogil:
    cdef bint invert = n < 0
    cdef double ah = bh
    cdef double al = bl
    cdef double xh = 1.0
    cdef double xl = 0.0
    if invert:
        n = -n
    while n:
        if n & 1:
            _dd_mul(xh, xl, ah, al, &xh, &xl)
        n >>= 1
        if n:
            _dd_mul(ah, al, ah, al, &ah, &al)
    if invert:
        if xh == 0.0:
            rh[0] = INFINITY
            rl[0] = 0.0
        else:
            _dd_div(1.0, 0.0, xh, xl, rh, rl)
    else:
        rh[0] = xh
        rl[0] = xl


# --- tape evaluation --------------------------------------------------------------

cdef EvalResult _eval_tape_c(const int[:] codes, const int[:] aux,
                             const int[:] nrefs, const double[:] consts,
                             const double[:] consts_lo, double *stack,
                             double x) nogil:
    cdef EvalResult res
    cdef Py_ssize_t i, n = codes.shape[0]
    cdef int op, e
    cdef int top = -1
    cdef double a, b, v
    res.err = 0
    res.ref = 0
    res.arg = 0.0
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
                res.err = ERR_DIV_ZERO; res.ref = nrefs[i]; res.arg = a
                res.value = 0.0
                return res
            v = stack[top] / a
        elif op == OP_POWI:
            e = aux[i]
            if a == 0.0 and e < 0:
                res.err = ERR_POW_DOMAIN; res.ref = nrefs[i]; res.arg = a
                res.value = 0.0
                return res
            v = _powi(a, e)
        elif op == OP_POW:
            top -= 1
            b = stack[top]
            if b < 0.0 or (b == 0.0 and a < 0.0):
                res.err = ERR_POW_DOMAIN; res.ref = nrefs[i]; res.arg = b
                res.value = 0.0
                return res
            v = pow(b, a)
        elif op == OP_SQRT:
            if a < 0.0:
                if a < -SQRT_SLACK:
                    res.err = ERR_SQRT_NEGATIVE; res.ref = nrefs[i]; res.arg = a
                    res.value = 0.0
                    return res
                a = 0.0
            v = sqrt(a)
        elif op == OP_SIN:
            v = sin(a)
        elif op == OP_COS:
            v = cos(a)
        elif op == OP_TAN:
            v = tan(a)
        elif op == OP_EXP:
            v = exp(a)
        elif op == OP_LOG:
            if a <= 0.0:
                res.err = ERR_LOG_NONPOSITIVE; res.ref = nrefs[i]; res.arg = a
                res.value = 0.0
                return res
            v = log(a)
        else:
            v = fabs(a)
        if not isfinite(v):
            res.err = ERR_NONFINITE; res.ref = nrefs[i]; res.arg = a
            res.value = 0.0
            return res
        stack[top] = v
    res.value = stack[0]
    return res


cdef EvalResult _eval_tape_dd_c(const int[:] codes, const int[:] aux,
                                const int[:] nrefs, const double[:] consts,
                                const double[:] consts_lo,
                                double *hi, double *lo,
                                double xhi, double xlo) nogil:
    cdef EvalResult res
    cdef Py_ssize_t i, n = codes.shape[0]
    cdef int op, e
    cdef int top = -1
    cdef double ah, al, bh, bl, vh, vl, v, t, corr
    res.err = 0
    res.ref = 0
    res.arg = 0.0
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
            _dd_add(hi[top], lo[top], ah, al, &vh, &vl)
        elif op == OP_SUB:
            top -= 1
            _dd_sub(hi[top], lo[top], ah, al, &vh, &vl)
        elif op == OP_MUL:
            top -= 1
            _dd_mul(hi[top], lo[top], ah, al, &vh, &vl)
        elif op == OP_DIV:
            top -= 1
            if ah == 0.0:
                res.err = ERR_DIV_ZERO; res.ref = nrefs[i]; res.arg = ah
                res.value = 0.0
                return res
            _dd_div(hi[top], lo[top], ah, al, &vh, &vl)
        elif op == OP_POWI:
            e = aux[i]
            if ah == 0.0 and e < 0:
                res.err = ERR_POW_DOMAIN; res.ref = nrefs[i]; res.arg = ah
                res.value = 0.0
                return res
            _dd_powi(ah, al, e, &vh, &vl)
        elif op == OP_POW:
            top -= 1
            bh = hi[top]
            bl = lo[top]
            if bh < 0.0 or (bh == 0.0 and ah < 0.0):
                res.err = ERR_POW_DOMAIN; res.ref = nrefs[i]; res.arg = bh
                res.value = 0.0
                return res
            v = pow(bh, ah)
            if bh > 0.0 and isfinite(v):
                corr = v * (al * log(bh) + ah * bl / bh)
                _two_sum(v, corr, &vh, &vl)
            else:
                vh = v
                vl = 0.0
        elif op == OP_SQRT:
            if ah < 0.0:
                if ah < -SQRT_SLACK:
                    res.err = ERR_SQRT_NEGATIVE; res.ref = nrefs[i]; res.arg = ah
                    res.value = 0.0
                    return res
                ah = 0.0
                al = 0.0
            _dd_sqrt(ah, al, &vh, &vl)
        elif op == OP_SIN:
            _two_sum(sin(ah), cos(ah) * al, &vh, &vl)
        elif op == OP_COS:
            _two_sum(cos(ah), -sin(ah) * al, &vh, &vl)
        elif op == OP_TAN:
            t = tan(ah)
            _two_sum(t, (1.0 + t * t) * al, &vh, &vl)
        elif op == OP_EXP:
            v = exp(ah)
            if not isfinite(v):
                vh = v
                vl = 0.0
            else:
                _two_sum(v, v * al, &vh, &vl)
        elif op == OP_LOG:
            if ah <= 0.0:
                res.err = ERR_LOG_NONPOSITIVE; res.ref = nrefs[i]; res.arg = ah
                res.value = 0.0
                return res
            _two_sum(log(ah), al / ah, &vh, &vl)
        else:  # OP_ABS
            if ah < 0.0:
                vh = -ah
                vl = -al
            else:
                vh = ah
                vl = al
        if not isfinite(vh):
            res.err = ERR_NONFINITE; res.ref = nrefs[i]; res.arg = ah
            res.value = 0.0
            return res
        hi[top] = vh
        lo[top] = vl
    res.value = hi[0] + lo[0]
    return res


cdef EvalResult _eval_point(const int[:] codes, const int[:] aux,
                            const int[:] nrefs, const double[:] consts,
                            const double[:] consts_lo,
                            double *stack, double *ddhi, double *ddlo,
                            double endpoint, double d, double delta,
                            bint from_left) nogil:
    cdef EvalResult res
    cdef double x, xh, xl
    if delta >= DD_DELTA_THRESHOLD:
        x = endpoint + d if from_left else endpoint - d
        res = _eval_tape_c(codes, aux, nrefs, consts, consts_lo, stack, x)
        if res.err == 0:
            return res
    if from_left:
        _two_sum(endpoint, d, &xh, &xl)
    else:
        _two_sum(endpoint, -d, &xh, &xl)
    return _eval_tape_dd_c(codes, aux, nrefs, consts, consts_lo,
                           ddhi, ddlo, xh, xl)


# --- public entry points -------------------------------------------------------------

def eval_tape(codes, aux, nrefs, consts, consts_lo, int max_stack, double x):
    cdef const int[:] c = codes
    cdef const int[:] a = aux
    cdef const int[:] r = nrefs
    cdef const double[:] k = consts
    cdef const double[:] kl = consts_lo
    cdef int size = max_stack if max_stack > 0 else 1
    cdef double *stack = <double *> malloc(size * sizeof(double))
    if stack == NULL:
        raise MemoryError()
    cdef EvalResult res
    try:
        res = _eval_tape_c(c, a, r, k, kl, stack, x)
    finally:
        free(stack)
    return res.value, res.err, res.ref, res.arg


def eval_tape_dd(codes, aux, nrefs, consts, consts_lo, int max_stack,
                 double xhi, double xlo):
    cdef const int[:] c = codes
    cdef const int[:] a = aux
    cdef const int[:] r = nrefs
    cdef const double[:] k = consts
    cdef const double[:] kl = consts_lo
    cdef int size = max_stack if max_stack > 0 else 1
    cdef double *hi = <double *> malloc(size * sizeof(double))
    cdef double *lo = <double *> malloc(size * sizeof(double))
    if hi == NULL or lo == NULL:
        free(hi); free(lo)
        raise MemoryError()
    cdef EvalResult res
    try:
        res = _eval_tape_dd_c(c, a, r, k, kl, hi, lo, xhi, xlo)
    finally:
        free(hi)
        free(lo)
    return res.value, res.err, res.ref, res.arg


def integrate_tape(left_tape, right_tape, double a, double b,
                   double rel_tol, int max_level,
                   starts, counts, deltas, weights):
    lc, la, lr, lk, lkl, lstk = left_tape
    rc, ra, rr_, rk, rkl, rstk = right_tape
    cdef const int[:] c_lc = lc
    cdef const int[:] c_la = la
    cdef const int[:] c_lr = lr
    cdef const double[:] c_lk = lk
    cdef const double[:] c_lkl = lkl
    cdef const int[:] c_rc = rc
    cdef const int[:] c_ra = ra
    cdef const int[:] c_rr = rr_
    cdef const double[:] c_rk = rk
    cdef const double[:] c_rkl = rkl
    cdef const int[:] lstart = starts
    cdef const int[:] lcount = counts
    cdef const double[:] cdelta = deltas
    cdef const double[:] cweight = weights

    cdef int max_stack = lstk if lstk > rstk else rstk
    cdef int size = max_stack if max_stack > 0 else 1
    cdef double *stack = <double *> malloc(size * sizeof(double))
    cdef double *ddhi = <double *> malloc(size * sizeof(double))
    cdef double *ddlo = <double *> malloc(size * sizeof(double))
    if stack == NULL or ddhi == NULL or ddlo == NULL:
        free(stack); free(ddhi); free(ddlo)
        raise MemoryError()

    cdef double hl = 0.5 * (b - a)
    cdef double total = 0.0
    cdef double result = 0.0
    cdef double prev = 0.0
    cdef double est = INFINITY
    cdef double h = 1.0
    cdef double news, delta, w, d
    cdef long evals = 0
    cdef int level, levels
    cdef int err_side = 0
    cdef Py_ssize_t r0, rr
    cdef EvalResult res
    cdef int status = STATUS_NO_CONVERGENCE

    levels = max_level
    if levels > lstart.shape[0] - 1:
        levels = lstart.shape[0] - 1

    try:
        with nogil:
            for level in range(levels + 1):
                if level > 0:
                    h *= 0.5
                news = 0.0
                r0 = lstart[level]
                for rr in range(r0, r0 + lcount[level]):
                    delta = cdelta[rr]
                    w = cweight[rr]
                    d = hl * delta
                    res = _eval_point(c_lc, c_la, c_lr, c_lk, c_lkl,
                                      stack, ddhi, ddlo, a, d, delta, True)
                    evals += 1
                    if res.err:
                        status = STATUS_DOMAIN_ERROR
                        err_side = 0
                        break
                    news += w * res.value
                    if delta < 1.0:
                        res = _eval_point(c_rc, c_ra, c_rr, c_rk, c_rkl,
                                          stack, ddhi, ddlo, b, d, delta, False)
                        evals += 1
                        if res.err:
                            status = STATUS_DOMAIN_ERROR
                            err_side = 1
                            break
                        news += w * res.value
                if status == STATUS_DOMAIN_ERROR:
                    break
                total += news
                result = hl * h * total
                if level >= 2:
                    est = fabs(result - prev)
                    if est <= rel_tol * fabs(result) + 1e-15:
                        status = STATUS_OK
                        break
                prev = result
    finally:
        free(stack)
        free(ddhi)
        free(ddlo)

    if status == STATUS_DOMAIN_ERROR:
        return 0.0, 0.0, evals, status, res.err, res.ref, res.arg, err_side
    return result, est, evals, status, 0, 0, 0.0, 0
