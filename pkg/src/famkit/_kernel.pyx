# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled refinement kernel for box-backend Darboux sums.

Operation-for-operation mirror of famkit._refine_py restricted to
polynomial range oracles; the hot loop (pop worst cell, bisect widest
axis, evaluate children by interval arithmetic) runs without Python
objects.
"""

from libc.math cimport fabs
from libc.stdlib cimport free, malloc, realloc

BACKEND = "cython"


cdef inline double _ipow(double x, long e) nogil:
    cdef double r = 1.0
    cdef long i
    for i in range(e):
        r *= x
    return r


cdef inline void _pow_interval(double lo, double hi, long e, double* out_lo, double* out_hi) nogil:
    cdef double a, b
    if e % 2 == 1 or lo >= 0.0:
        out_lo[0] = _ipow(lo, e)
        out_hi[0] = _ipow(hi, e)
    elif hi <= 0.0:
        out_lo[0] = _ipow(hi, e)
        out_hi[0] = _ipow(lo, e)
    else:
        a = _ipow(lo, e)
        b = _ipow(hi, e)
        out_lo[0] = 0.0
        out_hi[0] = a if a > b else b


cdef void _poly_range(long n_terms, long dim, long* exps, double* coeffs,
                      double* lo, double* hi, double* out_lo, double* out_hi) nogil:
    cdef double rlo = 0.0, rhi = 0.0
    cdef double tlo, thi, plo, phi, a, b, cc, dd, mn, mx
    cdef long t, d, e
    for t in range(n_terms):
        tlo = coeffs[t]
        thi = coeffs[t]
        for d in range(dim):
            e = exps[t * dim + d]
            if e:
                _pow_interval(lo[d], hi[d], e, &plo, &phi)
                a = tlo * plo
                b = tlo * phi
                cc = thi * plo
                dd = thi * phi
                mn = a
                if b < mn: mn = b
                if cc < mn: mn = cc
                if dd < mn: mn = dd
                mx = a
                if b > mx: mx = b
                if cc > mx: mx = cc
                if dd > mx: mx = dd
                tlo = mn
                thi = mx
        rlo += tlo
        rhi += thi
    out_lo[0] = rlo
    out_hi[0] = rhi


def poly_range(exps, coeffs, lo, hi):
    """Interval enclosure of a multivariate polynomial over a box."""
    cdef long n_terms = len(coeffs)
    cdef long dim = len(lo)
    cdef long* c_exps = <long*>malloc(n_terms * dim * sizeof(long))
    cdef double* c_coeffs = <double*>malloc(n_terms * sizeof(double))
    cdef double* c_lo = <double*>malloc(dim * sizeof(double))
    cdef double* c_hi = <double*>malloc(dim * sizeof(double))
    cdef long t, d
    cdef double out_lo = 0.0, out_hi = 0.0
    try:
        for t in range(n_terms):
            c_coeffs[t] = coeffs[t]
            for d in range(dim):
                c_exps[t * dim + d] = exps[t][d]
        for d in range(dim):
            c_lo[d] = lo[d]
            c_hi[d] = hi[d]
        _poly_range(n_terms, dim, c_exps, c_coeffs, c_lo, c_hi, &out_lo, &out_hi)
        return out_lo, out_hi
    finally:
        free(c_exps); free(c_coeffs); free(c_lo); free(c_hi)


cdef struct Heap:
    double* key
    long* cid
    long size
    long cap


cdef inline bint _lex_less(double ka, long ia, double kb, long ib) nogil:
    return ka < kb or (ka == kb and ia < ib)


cdef void heap_push(Heap* h, double key, long cid) nogil:
    cdef long i, parent
    if h.size == h.cap:
        h.cap *= 2
        h.key = <double*>realloc(h.key, h.cap * sizeof(double))
        h.cid = <long*>realloc(h.cid, h.cap * sizeof(long))
    i = h.size
    h.size += 1
    h.key[i] = key
    h.cid[i] = cid
    while i > 0:
        parent = (i - 1) >> 1
        if _lex_less(h.key[parent], h.cid[parent], h.key[i], h.cid[i]):
            break
        h.key[parent], h.key[i] = h.key[i], h.key[parent]
        h.cid[parent], h.cid[i] = h.cid[i], h.cid[parent]
        i = parent


cdef void heap_pop(Heap* h, double* key, long* cid) nogil:
    cdef long i = 0, child
    key[0] = h.key[0]
    cid[0] = h.cid[0]
    h.size -= 1
    h.key[0] = h.key[h.size]
    h.cid[0] = h.cid[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and _lex_less(h.key[child + 1], h.cid[child + 1], h.key[child], h.cid[child]):
            child += 1
        if _lex_less(h.key[i], h.cid[i], h.key[child], h.cid[child]):
            break
        h.key[i], h.key[child] = h.key[child], h.key[i]
        h.cid[i], h.cid[child] = h.cid[child], h.cid[i]
        i = child


cdef double _neumaier(double* values, unsigned char* dead, long n) nogil:
    cdef double s = 0.0, comp = 0.0, t, v
    cdef long i
    for i in range(n):
        if dead[i]:
            continue
        v = values[i]
        t = s + v
        if fabs(s) >= fabs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def refine_poly(exps, coeffs, lo0, hi0, double eps, long max_cells):
    """Adaptive refinement; mirrors famkit._refine_py.refine_poly."""
    cdef long n_terms = len(coeffs)
    cdef long dim = len(lo0)
    cdef long cap = 1024
    cdef long* c_exps = <long*>malloc(n_terms * dim * sizeof(long))
    cdef double* c_coeffs = <double*>malloc(n_terms * sizeof(double))
    cdef double* clo = <double*>malloc(cap * dim * sizeof(double))
    cdef double* chi = <double*>malloc(cap * dim * sizeof(double))
    cdef double* crlo = <double*>malloc(cap * sizeof(double))
    cdef double* crhi = <double*>malloc(cap * sizeof(double))
    cdef double* cvol = <double*>malloc(cap * sizeof(double))
    cdef double* scratch = <double*>malloc(cap * sizeof(double))
    cdef unsigned char* dead = <unsigned char*>malloc(cap)
    cdef Heap heap
    heap.cap = 1024
    heap.size = 0
    heap.key = <double*>malloc(heap.cap * sizeof(double))
    heap.cid = <long*>malloc(heap.cap * sizeof(long))

    cdef long t, d, live, next_id, axis, cid, child
    cdef double vol0, rlo, rhi, gap_est, exact, key, width, w, mid, contrib
    cdef double lower, upper
    cdef bint converged = False
    cdef bint found
    cdef long next_trace = 2
    trace = []

    try:
        for t in range(n_terms):
            c_coeffs[t] = coeffs[t]
            for d in range(dim):
                c_exps[t * dim + d] = exps[t][d]
        for d in range(dim):
            clo[d] = lo0[d]
            chi[d] = hi0[d]
        vol0 = 1.0
        for d in range(dim):
            vol0 *= chi[d] - clo[d]
        _poly_range(n_terms, dim, c_exps, c_coeffs, clo, chi, &rlo, &rhi)
        crlo[0] = rlo
        crhi[0] = rhi
        cvol[0] = vol0
        dead[0] = 0
        next_id = 1
        live = 1
        gap_est = (rhi - rlo) * vol0
        heap_push(&heap, -gap_est, 0)
        trace.append((1, gap_est))

        while True:
            if gap_est < eps:
                for t in range(next_id):
                    scratch[t] = (crhi[t] - crlo[t]) * cvol[t]
                exact = _neumaier(scratch, dead, next_id)
                if exact < eps:
                    converged = True
                    break
                gap_est = exact
                continue
            if live >= max_cells:
                break
            found = False
            while heap.size > 0:
                heap_pop(&heap, &key, &cid)
                if not dead[cid]:
                    found = True
                    break
            if not found:
                break
            if -key <= 0.0:
                for t in range(next_id):
                    scratch[t] = (crhi[t] - crlo[t]) * cvol[t]
                converged = _neumaier(scratch, dead, next_id) < eps
                break
            if next_id + 2 > cap:
                cap *= 2
                clo = <double*>realloc(clo, cap * dim * sizeof(double))
                chi = <double*>realloc(chi, cap * dim * sizeof(double))
                crlo = <double*>realloc(crlo, cap * sizeof(double))
                crhi = <double*>realloc(crhi, cap * sizeof(double))
                cvol = <double*>realloc(cvol, cap * sizeof(double))
                scratch = <double*>realloc(scratch, cap * sizeof(double))
                dead = <unsigned char*>realloc(dead, cap)
            dead[cid] = 1
            live -= 1
            gap_est += key
            axis = 0
            width = chi[cid * dim] - clo[cid * dim]
            for d in range(1, dim):
                w = chi[cid * dim + d] - clo[cid * dim + d]
                if w > width:
                    width = w
                    axis = d
            mid = 0.5 * (clo[cid * dim + axis] + chi[cid * dim + axis])
            for child in range(2):
                for d in range(dim):
                    clo[next_id * dim + d] = clo[cid * dim + d]
                    chi[next_id * dim + d] = chi[cid * dim + d]
                if child == 0:
                    chi[next_id * dim + axis] = mid
                else:
                    clo[next_id * dim + axis] = mid
                vol0 = 1.0
                for d in range(dim):
                    vol0 *= chi[next_id * dim + d] - clo[next_id * dim + d]
                _poly_range(
                    n_terms, dim, c_exps, c_coeffs,
                    clo + next_id * dim, chi + next_id * dim, &rlo, &rhi,
                )
                crlo[next_id] = rlo
                crhi[next_id] = rhi
                cvol[next_id] = vol0
                dead[next_id] = 0
                contrib = (rhi - rlo) * vol0
                heap_push(&heap, -contrib, next_id)
                gap_est += contrib
                next_id += 1
                live += 1
            if live >= next_trace:
                trace.append((live, gap_est))
                next_trace *= 2

        for t in range(next_id):
            scratch[t] = crlo[t] * cvol[t]
        lower = _neumaier(scratch, dead, next_id)
        for t in range(next_id):
            scratch[t] = crhi[t] * cvol[t]
        upper = _neumaier(scratch, dead, next_id)
        for t in range(next_id):
            scratch[t] = (crhi[t] - crlo[t]) * cvol[t]
        exact = _neumaier(scratch, dead, next_id)
        trace.append((live, exact))
        return lower, upper, live, converged, trace
    finally:
        free(c_exps); free(c_coeffs)
        free(clo); free(chi); free(crlo); free(crhi); free(cvol); free(scratch)
        free(dead)
        free(heap.key); free(heap.cid)
