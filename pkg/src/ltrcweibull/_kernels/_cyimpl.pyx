# Compiled twin of pyimpl.py; keep the iteration rule and status codes in sync.
from libc.math cimport exp, isfinite

CONVERGED = 0
MAX_ITER = 1
INVALID = 2


cdef inline void _sums(const double[::1] logt, const double[::1] logtau,
                       double alpha, double lmax,
                       double* s0, double* s1, double* s2) noexcept nogil:
    cdef Py_ssize_t i
    cdef double e, l
    cdef double a0 = 0.0, a1 = 0.0, a2 = 0.0
    for i in range(logt.shape[0]):
        l = logt[i]
        e = exp(alpha * (l - lmax))
        a0 += e
        a1 += e * l
        a2 += e * l * l
    for i in range(logtau.shape[0]):
        l = logtau[i]
        e = exp(alpha * (l - lmax))
        a0 -= e
        a1 -= e * l
        a2 -= e * l * l
    s0[0] = a0
    s1[0] = a1
    s2[0] = a2


def w_scaled_sums(const double[::1] logt, const double[::1] logtau,
                  double alpha, double lmax):
    """Scaled exposure power sums (s0, s1, s2) at the given shape."""
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0
    _sums(logt, logtau, alpha, lmax, &s0, &s1, &s2)
    return s0, s1, s2


def fixed_point_alpha(double m, double w1,
                      const double[::1] logt, const double[::1] logtau,
                      double lmax, double init, double tol, int max_iter):
    """Iterate alpha <- m*s0 / (m*s1 - w1*s0); returns (alpha, iterations, status)."""
    cdef double a = init, nxt, denom
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0
    cdef int it
    for it in range(1, max_iter + 1):
        _sums(logt, logtau, a, lmax, &s0, &s1, &s2)
        denom = m * s1 - w1 * s0
        if denom == 0.0 or s0 <= 0.0:
            return a, it, INVALID
        nxt = m * s0 / denom
        if not isfinite(nxt) or nxt <= 0.0:
            return a, it, INVALID
        if -tol <= nxt - a <= tol:
            return nxt, it, CONVERGED
        a = nxt
    return a, max_iter, MAX_ITER
