# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_kernels_py``."""
from libc.math cimport log, log1p, exp, sqrt, fabs, isnan, isinf, M_PI, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double LOG_SCALE = 280.0 * 2.302585092994045684

cdef double _ZETA_M1[62]
cdef double _STIRLING[8]


def _init_tables():
    from su11squeeze._kernels_py import _ZETA_M1 as zt, _STIRLING as st
    cdef int i
    for i in range(62):
        _ZETA_M1[i] = zt[i]
    for i in range(8):
        _STIRLING[i] = st[i]


_init_tables()


cdef double _lgamma_two_plus(double z) nogil:
    cdef double total = z * (1.0 - EULER_GAMMA)
    cdef double zk = -z
    cdef double term
    cdef int i
    for i in range(62):
        zk *= -z
        term = _ZETA_M1[i] * zk / (i + 2)
        total += term
        if fabs(term) < 1e-18 * fabs(total):
            break
    return total


cdef double _log_gamma(double x) nogil:
    cdef double z, prod, y, inv, inv2, series, p
    cdef int i
    if x < 0.5:
        return _lgamma_two_plus(x) - log1p(x) - log(x)
    if x < 1.5:
        z = x - 1.0
        return _lgamma_two_plus(z) - log1p(z)
    if x < 2.5:
        return _lgamma_two_plus(x - 2.0)
    if x < 15.0:
        prod = 1.0
        y = x
        while y >= 2.5:
            y -= 1.0
            prod *= y
        return log(prod) + _lgamma_two_plus(y - 2.0)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for i in range(8):
        series += _STIRLING[i] * p
        p *= inv2
    return (x - 0.5) * log(x) - x + HALF_LOG_2PI + series


def log_gamma(double x):
    if not x > 0.0 or isinf(x):
        raise ValueError("log_gamma requires a finite x > 0, got %r" % (x,))
    return _log_gamma(x)


def log_gamma_array(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(flat)
    cdef Py_ssize_t i
    for i in range(flat.shape[0]):
        if not flat[i] > 0.0 or isinf(flat[i]):
            raise ValueError("log_gamma requires a finite x > 0, got %r" % (flat[i],))
        out[i] = _log_gamma(flat[i])
    return out.reshape(np.shape(x))


cdef double _bessel_i_series_log(double nu, double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 1.0
    cdef double total = 1.0
    cdef int rescales = 0
    cdef long k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if total > 1e280:
            total *= 1e-280
            term *= 1e-280
            rescales += 1
        if term < 1e-17 * total and k > q / (k + nu + 1.0):
            break
        if k > 100000:
            break
    return nu * log(0.5 * x) - _log_gamma(nu + 1.0) + log(total) + rescales * LOG_SCALE


cdef int _bessel_i_asymptotic(double nu, double x, double* out) nogil:
    cdef double mu = 4.0 * nu * nu
    cdef double term = 1.0
    cdef double total = 1.0
    cdef double odd, new
    cdef int k = 0
    while True:
        k += 1
        odd = 2.0 * k - 1.0
        new = -term * (mu - odd * odd) / (8.0 * k * x)
        if new == 0.0:
            out[0] = total
            return 1
        if fabs(new) >= fabs(term):
            return 0
        term = new
        total += term
        if fabs(term) < 1e-17 * fabs(total):
            out[0] = total
            return 1
        if k > 200:
            return 0


cdef double _bessel_i(double nu, double x) nogil:
    cdef double s, log_val
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x >= 30.0 and _bessel_i_asymptotic(nu, x, &s):
        log_val = x - 0.5 * log(2.0 * M_PI * x) + log(s)
        if log_val > 709.78:
            return INFINITY
        if x < 700.0:
            return exp(x) / sqrt(2.0 * M_PI * x) * s
        return exp(log_val)
    log_val = _bessel_i_series_log(nu, x)
    if log_val > 709.78:
        return INFINITY
    return exp(log_val)


def bessel_i(double nu, double x):
    """Return I_nu(x); ``inf`` signals overflow."""
    return _bessel_i(nu, x)


cdef double _bessel_i_ratio(double nu, double x, double tol, long max_iter, double* err) nogil:
    cdef double tiny = 1e-300
    cdef double x2 = x * x
    cdef double f = tiny
    cdef double c = f
    cdef double d = 0.0
    cdef double delta = 0.0
    cdef double a, b
    cdef long j
    if x == 0.0:
        err[0] = 0.0
        return 0.0
    for j in range(1, max_iter + 1):
        if j == 1:
            a = x
            b = 2.0 * nu
        else:
            a = x2
            b = 2.0 * (nu + j - 1)
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if fabs(delta - 1.0) < tol:
            break
    err[0] = fabs(delta - 1.0)
    return f


def bessel_i_ratio(double nu, double x, double tol=1e-15, long max_iter=200000):
    """I_nu(x) / I_{nu-1}(x) by modified Lentz; returns (ratio, est_error)."""
    cdef double err
    cdef double r = _bessel_i_ratio(nu, x, tol, max_iter, &err)
    return r, err


def marching_segments(field):
    """Zero-level marching squares; same edge-id layout as the Python version."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] f = np.ascontiguousarray(field, dtype=np.float64)
    cdef Py_ssize_t n1 = f.shape[0], n2 = f.shape[1]
    cdef Py_ssize_t i, j, ncross, nseg = 0
    cdef double fa, fb, fc, fd
    cdef bint a, b, c, d, centre_in
    cdef long e0, e1, e2, e3
    cdef long crossed[4]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] segs = np.empty((2 * max(n1 - 1, 0) * max(n2 - 1, 0), 2), dtype=np.int64)
    for i in range(n1 - 1):
        for j in range(n2 - 1):
            fa = f[i, j]
            fb = f[i, j + 1]
            fc = f[i + 1, j + 1]
            fd = f[i + 1, j]
            if isnan(fa) or isnan(fb) or isnan(fc) or isnan(fd):
                continue
            a = fa < 0.0
            b = fb < 0.0
            c = fc < 0.0
            d = fd < 0.0
            e0 = 2 * (i * n2 + j)
            e1 = 2 * (i * n2 + j + 1) + 1
            e2 = 2 * ((i + 1) * n2 + j)
            e3 = 2 * (i * n2 + j) + 1
            ncross = 0
            if a != b:
                crossed[ncross] = e0
                ncross += 1
            if b != c:
                crossed[ncross] = e1
                ncross += 1
            if c != d:
                crossed[ncross] = e2
                ncross += 1
            if d != a:
                crossed[ncross] = e3
                ncross += 1
            if ncross == 2:
                segs[nseg, 0] = crossed[0]
                segs[nseg, 1] = crossed[1]
                nseg += 1
            elif ncross == 4:
                centre_in = 0.25 * (fa + fb + fc + fd) < 0.0
                if centre_in == a:
                    segs[nseg, 0] = e0
                    segs[nseg, 1] = e1
                    segs[nseg + 1, 0] = e2
                    segs[nseg + 1, 1] = e3
                else:
                    segs[nseg, 0] = e3
                    segs[nseg, 1] = e0
                    segs[nseg + 1, 0] = e1
                    segs[nseg + 1, 1] = e2
                nseg += 2
    return segs[:nseg].copy()
