# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the enumeration loops in ``_pykernels``.

Depth-first with explicit heap stacks; output multisets match the numpy
versions exactly.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free
from libc.math cimport fabs

cnp.import_array()

ctypedef long long i64


cdef inline void* _grow(void* buf, Py_ssize_t* cap, Py_ssize_t need, size_t item) except NULL:
    cdef Py_ssize_t c = cap[0]
    if need <= c:
        return buf
    while c < need:
        c *= 2
    cdef void* out = realloc(buf, c * item)
    if out == NULL:
        raise MemoryError()
    cap[0] = c
    return out


def descartes_curvatures(root, i64 T):
    cdef i64[::1] r = np.ascontiguousarray(root, dtype=np.int64)
    cdef Py_ssize_t scap = 1024, ocap = 4096, sp = 0, n = 0
    cdef i64* stack = <i64*> malloc(scap * 5 * sizeof(i64))
    cdef i64* out = <i64*> malloc(ocap * sizeof(i64))
    if stack == NULL or out == NULL:
        free(stack); free(out)
        raise MemoryError()
    cdef i64 q0, q1, q2, q3, s, new, last
    cdef int i
    try:
        for i in range(4):
            if 0 < r[i] <= T:
                out[n] = r[i]; n += 1
        stack[0] = r[0]; stack[1] = r[1]; stack[2] = r[2]; stack[3] = r[3]; stack[4] = -1
        sp = 1
        while sp > 0:
            sp -= 1
            q0 = stack[5 * sp]; q1 = stack[5 * sp + 1]
            q2 = stack[5 * sp + 2]; q3 = stack[5 * sp + 3]
            last = stack[5 * sp + 4]
            s = q0 + q1 + q2 + q3
            for i in range(4):
                if i == last:
                    continue
                if i == 0:
                    new = 2 * s - 3 * q0
                elif i == 1:
                    new = 2 * s - 3 * q1
                elif i == 2:
                    new = 2 * s - 3 * q2
                else:
                    new = 2 * s - 3 * q3
                if new > T:
                    continue
                out = <i64*> _grow(out, &ocap, n + 1, sizeof(i64))
                out[n] = new; n += 1
                stack = <i64*> _grow(stack, &scap, sp + 1, 5 * sizeof(i64))
                stack[5 * sp] = new if i == 0 else q0
                stack[5 * sp + 1] = new if i == 1 else q1
                stack[5 * sp + 2] = new if i == 2 else q2
                stack[5 * sp + 3] = new if i == 3 else q3
                stack[5 * sp + 4] = i
                sp += 1
        res = np.empty(n, dtype=np.int64)
        if n:
            res[:] = <i64[:n]> out
        return res
    finally:
        free(stack)
        free(out)


def descartes_circles(root, i64 T):
    cdef i64[:, ::1] r = np.ascontiguousarray(root, dtype=np.int64)
    cdef Py_ssize_t scap = 1024, ocap = 4096, sp = 0, n = 0, base
    cdef i64* stack = <i64*> malloc(scap * 17 * sizeof(i64))
    cdef i64* out = <i64*> malloc(ocap * 4 * sizeof(i64))
    if stack == NULL or out == NULL:
        free(stack); free(out)
        raise MemoryError()
    cdef i64 q[16]
    cdef i64 s[4]
    cdef i64 new[4]
    cdef i64 last
    cdef int i, j, c
    try:
        for i in range(4):
            if 0 < r[i, 1] <= T:
                for c in range(4):
                    out[4 * n + c] = r[i, c]
                n += 1
        for i in range(4):
            for c in range(4):
                stack[4 * i + c] = r[i, c]
        stack[16] = -1
        sp = 1
        while sp > 0:
            sp -= 1
            base = 17 * sp
            for j in range(16):
                q[j] = stack[base + j]
            last = stack[base + 16]
            for c in range(4):
                s[c] = q[c] + q[4 + c] + q[8 + c] + q[12 + c]
            for i in range(4):
                if i == last:
                    continue
                for c in range(4):
                    new[c] = 2 * s[c] - 3 * q[4 * i + c]
                if new[1] > T:
                    continue
                out = <i64*> _grow(out, &ocap, n + 1, 4 * sizeof(i64))
                for c in range(4):
                    out[4 * n + c] = new[c]
                n += 1
                stack = <i64*> _grow(stack, &scap, sp + 1, 17 * sizeof(i64))
                base = 17 * sp
                for j in range(16):
                    stack[base + j] = q[j]
                for c in range(4):
                    stack[base + 4 * i + c] = new[c]
                stack[base + 16] = i
                sp += 1
        res = np.empty((n, 4), dtype=np.int64)
        if n:
            res.reshape(-1)[:] = <i64[:4 * n]> out
        return res
    finally:
        free(stack)
        free(out)


def hecke_orbit_points(double mu, int depth, int K, double min_size):
    cdef Py_ssize_t scap = 1024, ocap = 4096, sp = 0, n = 0
    cdef double* stack = <double*> malloc(scap * 5 * sizeof(double))
    cdef double* out = <double*> malloc(ocap * sizeof(double))
    if stack == NULL or out == NULL:
        free(stack); free(out)
        raise MemoryError()
    cdef double a, b, c, d, t, cb, cd, diam
    cdef int lev, k, sgn, kk, small
    try:
        out[0] = 0.0
        n = 1
        if depth >= 1:
            stack[0] = 1.0; stack[1] = 0.0; stack[2] = 0.0; stack[3] = 1.0; stack[4] = 0
            sp = 1
        while sp > 0:
            sp -= 1
            a = stack[5 * sp]; b = stack[5 * sp + 1]
            c = stack[5 * sp + 2]; d = stack[5 * sp + 3]
            lev = <int> stack[5 * sp + 4]
            for k in range(1, K + 1):
                small = 1
                for sgn in range(2):
                    kk = k if sgn == 0 else -k
                    t = kk * mu
                    cb = -a + b * t
                    cd = -c + d * t
                    diam = 2.0 / fabs(cd * cd - d * d)
                    out = <double*> _grow(out, &ocap, n + 1, sizeof(double))
                    out[n] = cb / cd
                    n += 1
                    if diam >= min_size:
                        small = 0
                        if lev + 1 < depth:
                            stack = <double*> _grow(stack, &scap, sp + 1, 5 * sizeof(double))
                            stack[5 * sp] = b; stack[5 * sp + 1] = cb
                            stack[5 * sp + 2] = d; stack[5 * sp + 3] = cd
                            stack[5 * sp + 4] = lev + 1
                            sp += 1
                if k >= 2 and small:
                    break
        res = np.empty(n, dtype=np.float64)
        res[:] = <double[:n]> out
        return res
    finally:
        free(stack)
        free(out)
