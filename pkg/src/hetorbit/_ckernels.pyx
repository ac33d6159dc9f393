# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, fabs, floor, M_PI

cnp.import_array()


def orbit(double x0, double v0, double coef, Py_ssize_t steps, double limit):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.empty(steps + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vs = np.empty(steps + 1)
    cdef double x = x0
    cdef double v = v0
    cdef Py_ssize_t count = 1
    cdef Py_ssize_t k
    xs[0] = x
    vs[0] = v
    for k in range(steps):
        x = x + v
        v = v + coef * sin(x)
        if not fabs(x) <= limit:
            break
        xs[count] = x
        vs[count] = v
        count += 1
    return xs, vs, count


def residual(ext, double amplitude):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.ascontiguousarray(ext, dtype=np.float64)
    cdef Py_ssize_t m = e.shape[0] - 2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m if m > 0 else 0)
    cdef Py_ssize_t i
    for i in range(1, m + 1):
        out[i - 1] = (e[i + 1] - 2.0 * e[i]) + e[i - 1] - amplitude * sin(e[i])
    return out


def action_sum(values, double left, double right, double amplitude):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t m = y.shape[0]
    cdef Py_ssize_t i
    cdef double prev = left
    cdef double cur, d, s, term, total = 0.0, comp = 0.0, t
    cdef double two_pi = 2.0 * M_PI
    # Neumaier compensated summation, left to right
    for i in range(m + 1):
        cur = y[i] if i < m else right
        d = cur - prev
        term = 0.5 * d * d
        if i < m:
            s = sin(0.5 * (cur - two_pi * floor(cur / two_pi + 0.5)))
            term = term + amplitude * (2.0 * s * s)
        t = total + term
        if fabs(total) >= fabs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        prev = cur
    return total + comp
