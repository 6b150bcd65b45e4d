# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_kernels_py`` operation for operation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, tanh, pow, fmin, fmax

cnp.import_array()

cdef enum:
    SIGMA_AFFINE = 0
    SIGMA_SQRT = 1
    JUMP_NONE = 0
    JUMP_CONST = 1
    JUMP_PRODUCT = 2
    G_ZERO = 0
    G_CONST = 1
    G_LINEAR = 2
    C_DONE = 0
    C_ABORTED = 1
    C_STOPPED = 2

DONE, ABORTED, STOPPED = C_DONE, C_ABORTED, C_STOPPED


cdef inline double _g(long kind, double p, double x) noexcept nogil:
    if kind == G_ZERO:
        return 0.0
    if kind == G_CONST:
        return p
    if kind == G_LINEAR:
        return p * x
    return fmin(fmax(x, 0.0), p)


cdef inline double _sigma(long kind, double s0, double s1, double x) noexcept nogil:
    if kind == SIGMA_AFFINE:
        return s0 + s1 * x
    if kind == SIGMA_SQRT:
        return s0 * sqrt(fmin(fabs(x), s1))
    return s0 * (1.0 if x > 0.0 else -1.0)


cdef inline double _alpha(double lo, double hi, double x) noexcept nogil:
    return lo + (hi - lo) * (0.5 * (1.0 + tanh(x)))


cdef inline double _jump(long kind, long gk, double* jp, double x, double z) noexcept nogil:
    cdef double a
    if kind == JUMP_NONE:
        return 0.0
    if kind == JUMP_CONST:
        return jp[0]
    if kind == JUMP_PRODUCT:
        return z * _g(gk, jp[0], x)
    a = _alpha(jp[0], jp[1], x)
    return pow(fabs(z), -(1.0 + a))


cdef inline double _comp(long kind, long gk, double* jp, double x) noexcept nogil:
    cdef double a
    if kind == JUMP_NONE:
        return 0.0
    if kind == JUMP_CONST:
        return jp[0] * jp[1]
    if kind == JUMP_PRODUCT:
        return _g(gk, jp[0], x) * jp[2]
    a = _alpha(jp[0], jp[1], x)
    return 2.0 * (pow(jp[2], -a) - pow(jp[3], -a)) / a


def euler_native(const long[:] kinds, const double[:] params, double x0, const double[:] dt, const double[:] dw,
                 const unsigned char[:] is_atom, const double[:] z, double guard, double big_threshold):
    cdef Py_ssize_t n = dt.shape[0], k, last = n
    cdef int status = C_DONE
    cdef long sk = kinds[0], jk = kinds[1], gk = kinds[2]
    cdef double s0 = params[0], s1 = params[1], b0 = params[2], b1 = params[3]
    cdef double jp[4]
    cdef double x = x0, h, dx
    jp[0] = params[4]; jp[1] = params[5]; jp[2] = params[6]; jp[3] = params[7]
    values_a = np.empty(n + 1)
    pre_a = np.empty(n + 1)
    delta_a = np.zeros(n + 1)
    cdef double[:] values = values_a, pre = pre_a, delta = delta_a
    values[0] = x
    pre[0] = x
    with nogil:
        for k in range(n):
            h = dt[k]
            x = x + _sigma(sk, s0, s1, x) * dw[k] + (b0 + b1 * x) * h - h * _comp(jk, gk, jp, x)
            pre[k + 1] = x
            dx = 0.0
            if is_atom[k]:
                dx = _jump(jk, gk, jp, x, z[k])
                x = x + dx
                delta[k + 1] = dx
            values[k + 1] = x
            if not fabs(x) <= guard:
                status = C_ABORTED
                last = k + 1
                break
            if is_atom[k] and fabs(dx) >= big_threshold:
                status = C_STOPPED
                last = k + 1
                break
    return values_a[: last + 1], pre_a[: last + 1], delta_a[: last + 1], status


def tanaka_terms(const double[:] values, const double[:] pre, const double[:] delta,
                 const unsigned char[:] is_atom, double a):
    cdef Py_ssize_t n = values.shape[0], k
    cdef double sign_int = 0.0, jump_sum = 0.0, left, p, d, sl, sp
    if n < 2:
        return 0.0, 0.0
    with nogil:
        for k in range(1, n):
            left = values[k - 1]
            p = pre[k]
            d = delta[k]
            sl = 1.0 if left - a > 0.0 else -1.0
            sp = 1.0 if p - a > 0.0 else -1.0
            sign_int += sl * (p - left) + sp * d
            if is_atom[k]:
                jump_sum += (fabs(values[k] - a) - fabs(p - a)) - sp * d
    return sign_int, jump_sum
