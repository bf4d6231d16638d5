"""Common-shape Weibull MLE for LTRC competing-risks data.

Both latent failure times are Weibull(alpha, lambda_j) with density
alpha * lambda * x**(alpha - 1) * exp(-lambda * x**alpha). With the shape
shared across causes the scale MLEs have the closed form
lambda_j = m_j / w2(alpha), so fitting reduces to a one-dimensional profile
maximization in alpha. The profile score rearranges into a fixed-point map
h(alpha) whose iteration usually converges in a few dozen steps; a grid plus
bounded-search fallback covers the rest.

All power sums are evaluated as exp(alpha * (log t - log t_max)) so large
shapes cannot overflow.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from . import _kernels
from .errors import ConvergenceError, DegenerateDataError, InvalidParameterError

ALPHA_SCAN_LO = 1e-3
ALPHA_SCAN_HI = 1e3
CERTIFICATE_GRID_SIZE = 512

# Extra fixed-point steps allowed when polishing a fallback solution.
_POLISH_STEPS = 8


@dataclass(frozen=True)
class CommonShapeFit:
    """Result of the common-shape fit.

    unimodality_certified reports whether d(alpha) stayed nonnegative on the
    diagnostic grid; when it is False the estimate is still the best value
    found but uniqueness of the maximum is not guaranteed.
    """

    alpha_hat: float
    lambda1_hat: float
    lambda2_hat: float
    loglik: float
    iterations: int
    converged: bool
    unimodality_certified: bool


class ProfileStats(NamedTuple):
    """w1 plus w2 and its first two alpha-derivatives at one alpha."""

    w1: float
    w2: float
    w2_prime: float
    w2_double_prime: float


def _require_positive(value, name):
    if not value > 0:
        raise InvalidParameterError(f"{name} must be positive, got {value}")


def _exp_saturated(x):
    """exp(x) that saturates to inf instead of raising on overflow."""
    if x > 709.0:
        return math.inf
    return math.exp(x)


def w_functions(dataset, alpha):
    """Evaluate (w1, w2, w2', w2'') at the given shape.

    w1 = sum of log lifetimes over failures; w2(alpha) = sum of t_i**alpha
    minus sum of tau_iL**alpha over truncated units; the derivatives bring
    down log factors termwise.
    """
    _require_positive(alpha, "alpha")
    s0, s1, s2 = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    scale = _exp_saturated(alpha * dataset.log_t_max)
    return ProfileStats(dataset.w1, scale * s0, scale * s1, scale * s2)


def d_alpha(dataset, alpha):
    """Unimodality discriminant d(alpha) = w2 * w2'' - w2'**2.

    Nonnegative d over the positive axis makes the profile log-likelihood
    unimodal.
    """
    _require_positive(alpha, "alpha")
    s0, s1, s2 = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    # The sign is settled by the scaled sums; only the rescale can saturate,
    # which happens for large shapes when log t max is far from zero.
    inner = s0 * s2 - s1 * s1
    if inner == 0.0:
        return 0.0
    double_c = 2.0 * alpha * dataset.log_t_max
    if double_c > 709.0:
        return math.copysign(math.inf, inner)
    return inner * math.exp(double_c)


def log_likelihood(dataset, alpha, lambda1, lambda2):
    """Full common-shape log-likelihood at (alpha, lambda1, lambda2)."""
    _require_positive(alpha, "alpha")
    _require_positive(lambda1, "lambda1")
    _require_positive(lambda2, "lambda2")
    s0, _, _ = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    w2 = _exp_saturated(alpha * dataset.log_t_max) * s0
    return (
        dataset.m * math.log(alpha)
        + dataset.m1 * math.log(lambda1)
        + dataset.m2 * math.log(lambda2)
        + (alpha - 1.0) * dataset.w1
        - (lambda1 + lambda2) * w2
    )


def profile_loglik(dataset, alpha):
    """Profile log-likelihood p(alpha) = m log alpha - m log w2(alpha) + alpha w1.

    Additive constants not involving alpha are dropped. Requires at least one
    observed failure; the joint-fit requirement that both causes appear is
    enforced by solve_alpha, not here.
    """
    _require_positive(alpha, "alpha")
    if dataset.m < 1:
        raise DegenerateDataError("profile log-likelihood needs at least one failure")
    s0, _, _ = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    log_w2 = alpha * dataset.log_t_max + math.log(s0)
    return dataset.m * math.log(alpha) - dataset.m * log_w2 + alpha * dataset.w1


def w_sums_grid(log_t, log_tau, alphas, log_t_max):
    """Vectorized scaled power sums over a grid of shapes.

    Returns (s0, s1, s2) arrays where w2^(k)(alpha) =
    exp(alpha * log_t_max) * s_k. Shared by the certificate scan, the
    fallback maximizer, and the posterior grid sampler.
    """
    a = np.asarray(alphas, dtype=np.float64)[:, None]
    et = np.exp(a * (log_t[None, :] - log_t_max))
    s0 = et.sum(axis=1)
    s1 = (et * log_t).sum(axis=1)
    s2 = (et * log_t * log_t).sum(axis=1)
    if log_tau.size:
        eu = np.exp(a * (log_tau[None, :] - log_t_max))
        s0 -= eu.sum(axis=1)
        s1 -= (eu * log_tau).sum(axis=1)
        s2 -= (eu * log_tau * log_tau).sum(axis=1)
    return s0, s1, s2


def profile_grid_values(dataset, alphas, m=None, w1=None):
    """p(alpha) over a grid, reusing one vectorized sum pass.

    m and w1 default to the dataset totals; passing per-cause values gives
    the separate-shape profiles on the same machinery.
    """
    if m is None:
        m = dataset.m
    if w1 is None:
        w1 = dataset.w1
    alphas = np.asarray(alphas, dtype=np.float64)
    s0, _, _ = w_sums_grid(dataset.log_t, dataset.log_tau_trunc, alphas, dataset.log_t_max)
    log_w2 = alphas * dataset.log_t_max + np.log(s0)
    return m * np.log(alphas) - m * log_w2 + alphas * w1


def certificate_grid(lo=ALPHA_SCAN_LO, hi=ALPHA_SCAN_HI, num=CERTIFICATE_GRID_SIZE):
    """Log-spaced diagnostic grid used for the unimodality scan."""
    return np.geomspace(lo, hi, num)


def _certified_nonnegative(s0, s1, s2):
    # Sign of d(alpha) equals the sign of s0*s2 - s1**2; allow an
    # epsilon-level slack so exact-zero cases survive roundoff.
    disc = s0 * s2 - s1 * s1
    slack = 16.0 * np.finfo(float).eps * (np.abs(s0 * s2) + s1 * s1)
    return bool(np.all(disc >= -slack))


def unimodality_certificate(dataset):
    """Scan d(alpha) for a sign change on the diagnostic grid."""
    s0, s1, s2 = w_sums_grid(
        dataset.log_t, dataset.log_tau_trunc, certificate_grid(), dataset.log_t_max
    )
    return _certified_nonnegative(s0, s1, s2)


def _fixed_point_value(m, w1, log_t, log_tau, log_t_max, alpha):
    """One application of the fixed-point map h."""
    s0, s1, _ = _kernels.w_scaled_sums(log_t, log_tau, alpha, log_t_max)
    denom = m * s1 - w1 * s0
    if denom == 0.0 or s0 <= 0.0:
        return math.nan
    return m * s0 / denom


def _profile_value(m, w1, log_t, log_tau, log_t_max, alpha):
    s0, _, _ = _kernels.w_scaled_sums(log_t, log_tau, alpha, log_t_max)
    if s0 <= 0.0:
        return -math.inf
    return m * math.log(alpha) - m * (alpha * log_t_max + math.log(s0)) + alpha * w1


def _maximize_profile_fallback(m, w1, log_t, log_tau, log_t_max, tol):
    """Grid bracket plus bounded scalar maximization of the profile."""
    alphas = certificate_grid()
    a_col = alphas[:, None]
    et = np.exp(a_col * (log_t[None, :] - log_t_max))
    s0 = et.sum(axis=1)
    if log_tau.size:
        s0 = s0 - np.exp(a_col * (log_tau[None, :] - log_t_max)).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        values = m * np.log(alphas) - m * (alphas * log_t_max + np.log(s0)) + alphas * w1
    values = np.where(np.isfinite(values), values, -np.inf)
    best = int(np.argmax(values))
    if not np.isfinite(values[best]):
        raise ConvergenceError("profile log-likelihood not finite anywhere on the scan grid")
    if best == 0 or best == alphas.size - 1:
        # A boundary argmax means the profile keeps climbing out of the scan
        # range, e.g. when the only failure of a cause sits at the largest
        # observed time; the shape MLE does not exist then.
        raise ConvergenceError(
            f"profile maximized at the scan boundary alpha={alphas[best]:.3g}; "
            "no interior maximum in the search range"
        )
    lo = alphas[best - 1]
    hi = alphas[best + 1]
    result = optimize.minimize_scalar(
        lambda a: -_profile_value(m, w1, log_t, log_tau, log_t_max, a),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": min(tol, 1e-10)},
    )
    return float(result.x)


def _score_and_curvature(m, w1, log_t, log_tau, log_t_max, alpha):
    """Profile score p'(alpha) and curvature p''(alpha) from one kernel pass."""
    s0, s1, s2 = _kernels.w_scaled_sums(log_t, log_tau, alpha, log_t_max)
    if s0 <= 0.0:
        return math.nan, math.nan
    r1 = s1 / s0
    score = m / alpha + w1 - m * r1
    curvature = -m / (alpha * alpha) - m * (s2 / s0 - r1 * r1)
    return score, curvature


def _newton_refine(m, w1, log_t, log_tau, log_t_max, alpha, tol, max_steps):
    """Polish a candidate profile maximizer with Newton steps on the score.

    The fixed-point map h can oscillate with |h'| near or above one at the
    root, where plain iteration stalls no matter how close it starts. Newton
    on the score converges quadratically there, so the fixed-point residual
    |h(alpha) - alpha| drops to machine precision and certifies the answer.
    Returns (alpha, steps_taken, certified); when not certified the iterate
    with the smallest residual seen is returned.
    """
    best_alpha, best_residual = alpha, math.inf
    steps = 0
    while True:
        nxt = _fixed_point_value(m, w1, log_t, log_tau, log_t_max, alpha)
        if math.isfinite(nxt):
            residual = abs(nxt - alpha)
            if residual <= tol:
                return alpha, steps, True
            if residual < best_residual:
                best_alpha, best_residual = alpha, residual
        if steps == max_steps:
            break
        score, curvature = _score_and_curvature(m, w1, log_t, log_tau, log_t_max, alpha)
        if not (math.isfinite(score) and curvature < 0.0):
            break
        candidate = alpha - score / curvature
        if not (candidate > 0.0 and math.isfinite(candidate)):
            break
        steps += 1
        alpha = candidate
    return best_alpha, steps, False


def _solve_alpha_arrays(m, w1, log_t, log_tau, log_t_max, init, tol, max_iter):
    """Shared solver core: returns (alpha_hat, iterations, converged).

    Tries the fixed-point iteration first; on failure falls back to a direct
    profile maximization with a Newton polish, then certifies the result by
    the fixed-point residual.
    """
    alpha, iterations, status = _kernels.fixed_point_alpha(
        float(m), w1, log_t, log_tau, log_t_max, init, tol, max_iter
    )
    if status == _kernels.CONVERGED:
        # Make sure the residual |h(alpha) - alpha| meets the tolerance at
        # the reported point, nudging with extra steps if needed.
        for _ in range(_POLISH_STEPS):
            nxt = _fixed_point_value(m, w1, log_t, log_tau, log_t_max, alpha)
            if not math.isfinite(nxt) or nxt <= 0:
                break
            iterations += 1
            if abs(nxt - alpha) <= tol:
                return nxt, iterations, True
            alpha = nxt
        status = _kernels.MAX_ITER

    trace = f"fixed point stopped at alpha={alpha:.6g} after {iterations} iterations"
    try:
        alpha = _maximize_profile_fallback(m, w1, log_t, log_tau, log_t_max, tol)
    except ConvergenceError as exc:
        raise ConvergenceError(f"{exc} ({trace})") from None
    alpha, steps, converged = _newton_refine(
        m, w1, log_t, log_tau, log_t_max, alpha, tol, _POLISH_STEPS
    )
    iterations += steps
    if not alpha > 0 or not math.isfinite(alpha):
        raise ConvergenceError(f"fallback maximization failed ({trace})")
    return alpha, iterations, converged


def _scale_mles(m1, m2, log_t, log_tau, log_t_max, alpha):
    s0, _, _ = _kernels.w_scaled_sums(log_t, log_tau, alpha, log_t_max)
    inv_w2 = _exp_saturated(-alpha * log_t_max) / s0
    return m1 * inv_w2, m2 * inv_w2


def _fit_common_arrays(m1, m2, w1, log_t, log_tau, log_t_max, init, tol, max_iter):
    """Low-level fit on raw arrays; used by the bootstrap refit loop.

    Returns (alpha, lambda1, lambda2, iterations, converged) without the
    certificate scan or likelihood evaluation.
    """
    m = m1 + m2
    alpha, iterations, converged = _solve_alpha_arrays(
        m, w1, log_t, log_tau, log_t_max, init, tol, max_iter
    )
    lam1, lam2 = _scale_mles(m1, m2, log_t, log_tau, log_t_max, alpha)
    return alpha, lam1, lam2, iterations, converged


def solve_alpha(dataset, init=1.0, tol=1e-8, max_iter=500):
    """Fit the common-shape model by profile fixed-point iteration.

    Starts the map h at `init` and iterates until successive shapes differ by
    at most `tol`. If the iteration stalls or leaves the positive axis, the
    profile is maximized directly on a bracketing grid instead.
    """
    _require_positive(init, "init")
    _require_positive(tol, "tol")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be at least 1, got {max_iter}")
    if dataset.m1 == 0 or dataset.m2 == 0:
        empty = "1" if dataset.m1 == 0 else "2"
        raise DegenerateDataError(
            f"no cause-{empty} failures observed; joint fit needs both causes"
        )
    alpha, iterations, converged = _solve_alpha_arrays(
        dataset.m,
        dataset.w1,
        dataset.log_t,
        dataset.log_tau_trunc,
        dataset.log_t_max,
        init,
        tol,
        max_iter,
    )
    lam1, lam2 = _scale_mles(
        dataset.m1, dataset.m2, dataset.log_t, dataset.log_tau_trunc, dataset.log_t_max, alpha
    )
    if not (0.0 < lam1 < math.inf and 0.0 < lam2 < math.inf):
        raise ConvergenceError(
            f"rate estimates degenerate at alpha={alpha:.6g}; w2 overflowed or vanished"
        )
    return CommonShapeFit(
        alpha_hat=alpha,
        lambda1_hat=lam1,
        lambda2_hat=lam2,
        loglik=log_likelihood(dataset, alpha, lam1, lam2),
        iterations=iterations,
        converged=converged,
        unimodality_certified=unimodality_certificate(dataset),
    )
