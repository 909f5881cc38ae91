# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Fourier series evaluation at arbitrary points and
monotone circle-map inversion.  Contract identical to ``_kernels_py``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, fabs

BACKEND = "compiled"


cdef inline void _eval_point(const double complex[:] coeffs, int half,
                             double y, double* val, double* der) nogil:
    cdef double complex z, p, c, t
    cdef double v, d
    cdef int k
    z = cos(y) + 1j * sin(y)
    p = 1.0 + 0j
    v = coeffs[half].real
    d = 0.0
    for k in range(1, half):
        p = p * z
        c = coeffs[half + k]
        if c.real != 0.0 or c.imag != 0.0:
            t = c * p
            v += 2.0 * t.real
            d -= 2.0 * k * t.imag
    p = p * z
    c = coeffs[0]
    t = c * p.conjugate()
    v += t.real
    d += half * t.imag
    val[0] = v
    der[0] = d


def eval_series(coeffs, y):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cbuf = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ybuf = np.ascontiguousarray(y, dtype=np.float64)
    cdef int n = cbuf.shape[0]
    cdef int half = n // 2
    cdef Py_ssize_t m = ybuf.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double complex[:] cview = cbuf
    cdef double v, d
    cdef Py_ssize_t i
    for i in range(m):
        _eval_point(cview, half, ybuf[i], &v, &d)
        out[i] = v
    return out


def eval_series_and_derivative(coeffs, y):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cbuf = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ybuf = np.ascontiguousarray(y, dtype=np.float64)
    cdef int n = cbuf.shape[0]
    cdef int half = n // 2
    cdef Py_ssize_t m = ybuf.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] val = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] der = np.empty(m, dtype=np.float64)
    cdef double complex[:] cview = cbuf
    cdef double v, d
    cdef Py_ssize_t i
    for i in range(m):
        _eval_point(cview, half, ybuf[i], &v, &d)
        val[i] = v
        der[i] = d
    return val, der


def invert_monotone(coeffs, targets, double bound, double tol, int max_iter):
    """Solve y + f(y) = x per target by safeguarded Newton (bisection fallback)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cbuf = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xbuf = np.ascontiguousarray(targets, dtype=np.float64)
    cdef int n = cbuf.shape[0]
    cdef int half = n // 2
    cdef Py_ssize_t m = xbuf.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double complex[:] cview = cbuf
    cdef double x, y, lo, hi, f, fp, resid, slope, ynew
    cdef Py_ssize_t i
    cdef int it
    cdef bint ok
    for i in range(m):
        x = xbuf[i]
        lo = x - bound
        hi = x + bound
        y = x
        ok = False
        for it in range(max_iter):
            _eval_point(cview, half, y, &f, &fp)
            resid = y + f - x
            if fabs(resid) <= tol:
                ok = True
                break
            if resid < 0.0:
                lo = y
            else:
                hi = y
            slope = 1.0 + fp
            if slope > 0.0:
                ynew = y - resid / slope
            else:
                ynew = 0.5 * (lo + hi)
            if ynew <= lo or ynew >= hi:
                ynew = 0.5 * (lo + hi)
            y = ynew
        if not ok:
            raise RuntimeError("inversion failed")
        out[i] = y
    return out
