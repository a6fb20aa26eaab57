# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled polynomial hot kernels.

Same API as mrootgeom._kernels_py (the reference implementation); selected at
import time by mrootgeom.kernels.
"""

import numpy as np

BACKEND = "compiled"

ctypedef long long i64


cdef double _ff(i64 e, i64 k) noexcept:
    # falling factorial e (e-1) ... (e-k+1); zero when k > e
    cdef double out = 1.0
    cdef i64 t
    if k > e:
        return 0.0
    for t in range(k):
        out *= e - t
    return out


cdef double _entry_value(const i64[:, ::1] exps, const double[::1] coeffs,
                         const double[::1] y, const i64[::1] mult) noexcept:
    cdef Py_ssize_t t, v, nterms = exps.shape[0], n = exps.shape[1]
    cdef double total = 0.0, prod
    cdef i64 e, k, r
    for t in range(nterms):
        prod = coeffs[t]
        for v in range(n):
            e = exps[t, v]
            k = mult[v]
            if k > 0:
                prod *= _ff(e, k)
                if prod == 0.0:
                    break
            for r in range(e - k):
                prod *= y[v]
        total += prod
    return total


def poly_eval(exps, coeffs, y):
    """Evaluate the polynomial at a single point."""
    cdef const i64[:, ::1] ev = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] cv = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const i64[::1] mult = np.zeros(ev.shape[1], dtype=np.int64)
    return _entry_value(ev, cv, yv, mult)


def poly_eval_batch(exps, coeffs, ys):
    """Evaluate the polynomial at a batch of points, shape (p, n) -> (p,)."""
    cdef const i64[:, ::1] ev = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] cv = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const double[:, ::1] pv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef const i64[::1] mult = np.zeros(ev.shape[1], dtype=np.int64)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(pv.shape[0]):
        ov[i] = _entry_value(ev, cv, pv[i], mult)
    return out


def poly_derivative_dense(exps, coeffs, y, int order):
    """Dense mixed-partial tensor of the polynomial at y, shape (n,) * order."""
    cdef const i64[:, ::1] ev = np.ascontiguousarray(exps, dtype=np.int64)
    cdef const double[::1] cv = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = ev.shape[1]
    out = np.zeros((n,) * order)
    cdef double[::1] flat = out.reshape(-1)
    mult_arr = np.zeros(n, dtype=np.int64)
    cdef i64[::1] mult = mult_arr
    cdef Py_ssize_t total = flat.shape[0]
    cdef Py_ssize_t entry, rem
    cdef int pos
    cdef i64 axis
    for entry in range(total):
        for pos in range(n):
            mult[pos] = 0
        rem = entry
        for pos in range(order):
            axis = rem % n
            rem //= n
            mult[axis] += 1
        flat[entry] = _entry_value(ev, cv, yv, mult)
    if order == 0:
        return np.asarray(out)
    return out
