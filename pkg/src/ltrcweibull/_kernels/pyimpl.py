"""Pure-NumPy implementations of the hot numeric kernels.

These are the reference semantics for the Cython twin in `_cyimpl.pyx`; both
must stay behaviourally identical (same iteration rule, same status codes).
All exposure sums are computed in a scaled form to stay finite for extreme
shape values: with C = alpha * lmax, the true k-th derivative sum is

    sum_i t_i^alpha (log t_i)^k  -  sum_j tau_j^alpha (log tau_j)^k
        = exp(C) * s_k

where s_k is what these functions return and lmax = max(log t_i), which
dominates every truncation time by construction.
"""

import numpy as np

# status codes shared with the compiled kernel
CONVERGED = 0
MAX_ITER = 1
INVALID = 2


def w_scaled_sums(logt, logtau, alpha, lmax):
    """Scaled exposure power sums (s0, s1, s2) at the given shape.

    logt: log lifetimes of all units; logtau: log truncation times of the
    truncated units only (may be empty).
    """
    et = np.exp(alpha * (logt - lmax))
    s0 = float(et.sum())
    s1 = float((et * logt).sum())
    s2 = float((et * logt * logt).sum())
    if logtau.size:
        eu = np.exp(alpha * (logtau - lmax))
        s0 -= float(eu.sum())
        s1 -= float((eu * logtau).sum())
        s2 -= float((eu * logtau * logtau).sum())
    return s0, s1, s2


def fixed_point_alpha(m, w1, logt, logtau, lmax, init, tol, max_iter):
    """Iterate alpha <- m*s0 / (m*s1 - w1*s0) until successive values agree.

    Returns (alpha, iterations, status). The update uses scaled sums, so the
    common exp(alpha*lmax) factor cancels. status INVALID flags a non-finite
    or non-positive iterate; the caller is expected to fall back to a direct
    profile maximization in that case.
    """
    a = float(init)
    for it in range(1, int(max_iter) + 1):
        s0, s1, _ = w_scaled_sums(logt, logtau, a, lmax)
        denom = m * s1 - w1 * s0
        if denom == 0.0 or s0 <= 0.0:
            return a, it, INVALID
        nxt = m * s0 / denom
        if not np.isfinite(nxt) or nxt <= 0.0:
            return a, it, INVALID
        if abs(nxt - a) <= tol:
            return nxt, it, CONVERGED
        a = nxt
    return a, int(max_iter), MAX_ITER
