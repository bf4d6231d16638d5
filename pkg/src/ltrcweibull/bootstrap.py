"""Parametric bootstrap for the LTRC competing-risks Weibull fits.

Each resample keeps every template unit's (tau_L, tau_R, nu) fixed and draws
fresh latent cause lifetimes at the fitted parameters. Truncated units draw
each latent time conditional on exceeding tau_L by inversion,
T = (tau_L**alpha - log(U)/lambda)**(1/alpha), which conditions the pair on
min(T1, T2) > tau_L because the joint survival factorizes. The observed
record is then the usual minimum-and-censor reduction.

Replicates that lose a cause entirely or fail to converge are dropped and
counted, not redrawn.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng as rng_mod
from .data_model import Dataset
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    InvalidParameterError,
    UnstableBootstrapError,
)
from .intervals import (
    BC_BOOTSTRAP,
    PERCENTILE_BOOTSTRAP,
    ConfidenceInterval,
    normal_upper_quantile,
)
from .mle_common import CommonShapeFit, _fit_common_arrays, _scale_mles, _solve_alpha_arrays
from .mle_separate import SeparateShapeFit

COMMON_PARAM_NAMES = ("alpha", "lambda1", "lambda2")
SEPARATE_PARAM_NAMES = ("alpha1", "lambda1", "alpha2", "lambda2")


@dataclass(frozen=True)
class BootstrapDistribution:
    """Successful bootstrap refits plus bookkeeping.

    estimates has one row per successful replicate, columns in param_names
    order; len(estimates) + failed_replicates == B.
    """

    estimates: np.ndarray
    B: int
    seed: object
    failed_replicates: int
    param_names: tuple = COMMON_PARAM_NAMES

    def __post_init__(self):
        est = np.asarray(self.estimates, dtype=np.float64)
        if est.ndim == 1:
            est = est[:, None]
        est = np.ascontiguousarray(est)
        est.flags.writeable = False
        object.__setattr__(self, "estimates", est)
        if len(est) + self.failed_replicates != self.B:
            raise ValueError("estimate count plus failures must equal B")

    def column(self, param):
        """1-D slice of the estimates for one parameter (index or name)."""
        if isinstance(param, str):
            try:
                param = self.param_names.index(param)
            except ValueError:
                raise InvalidParameterError(
                    f"unknown parameter {param!r}; have {self.param_names}"
                ) from None
        return self.estimates[:, param]


def _latent_minimum(u, alpha1, lambda1, alpha2, lambda2, tau_L, tau_R, nu):
    """Vectorized minimum-of-two-Weibulls draw under the LTRC design."""
    with np.errstate(divide="ignore"):
        neg_log_u = -np.log(u)
    truncated = nu == 0
    base1 = np.where(truncated, tau_L, 0.0) ** alpha1
    base2 = np.where(truncated, tau_L, 0.0) ** alpha2
    t1 = (base1 + neg_log_u[0] / lambda1) ** (1.0 / alpha1)
    t2 = (base2 + neg_log_u[1] / lambda2) ** (1.0 / alpha2)
    t = np.minimum(t1, t2)
    delta = np.where(t1 <= t2, 1, 2)
    censored = t >= tau_R
    t = np.where(censored, tau_R, t)
    delta = np.where(censored, 0, delta)
    # Guard against a conditional draw rounding down onto tau_L itself.
    lowest = np.nextafter(tau_L, np.inf)
    t = np.where(truncated & ~censored, np.maximum(t, lowest), t)
    return t, delta


def _params_tuple(params):
    values = [float(p) for p in params]
    if len(values) == 3:
        alpha, lam1, lam2 = values
        values = [alpha, lam1, alpha, lam2]
    elif len(values) != 4:
        raise InvalidParameterError(
            "params must be (alpha, lambda1, lambda2) or (alpha1, lambda1, alpha2, lambda2)"
        )
    for v in values:
        if not v > 0:
            raise InvalidParameterError(f"bootstrap parameters must be positive, got {v}")
    return values


def resample_dataset(template, params, rng):
    """One parametric resample of the template design.

    params is the common-shape triple (alpha, lambda1, lambda2) or the
    separate-shape 4-vector (alpha1, lambda1, alpha2, lambda2).
    """
    alpha1, lam1, alpha2, lam2 = _params_tuple(params)
    u = rng.random((2, template.n))
    t, delta = _latent_minimum(
        u,
        alpha1,
        lam1,
        alpha2,
        lam2,
        template.tau_L_values,
        template.tau_R_values,
        template.nu_values,
    )
    return Dataset.from_arrays(
        t, template.tau_L_values, template.tau_R_values, delta, template.nu_values,
        validate=False,
    )


def _refit_common(t, delta, log_tau, init, tol, max_iter):
    m1 = int(np.count_nonzero(delta == 1))
    m2 = int(np.count_nonzero(delta == 2))
    if m1 == 0 or m2 == 0:
        raise DegenerateDataError("resample lost a cause")
    log_t = np.log(t)
    w1 = float(log_t[delta != 0].sum())
    alpha, lam1, lam2, _, converged = _fit_common_arrays(
        m1, m2, w1, log_t, log_tau, float(log_t.max()), init, tol, max_iter
    )
    if not converged:
        raise ConvergenceError("bootstrap refit did not converge")
    return alpha, lam1, lam2


def _refit_separate(t, delta, log_tau, init1, init2, tol, max_iter):
    m1 = int(np.count_nonzero(delta == 1))
    m2 = int(np.count_nonzero(delta == 2))
    if m1 == 0 or m2 == 0:
        raise DegenerateDataError("resample lost a cause")
    log_t = np.log(t)
    lmax = float(log_t.max())
    w1_c1 = float(log_t[delta == 1].sum())
    w1_c2 = float(log_t[delta == 2].sum())
    alpha1, _, conv1 = _solve_alpha_arrays(m1, w1_c1, log_t, log_tau, lmax, init1, tol, max_iter)
    alpha2, _, conv2 = _solve_alpha_arrays(m2, w1_c2, log_t, log_tau, lmax, init2, tol, max_iter)
    if not (conv1 and conv2):
        raise ConvergenceError("bootstrap refit did not converge")
    lam1, _ = _scale_mles(m1, m2, log_t, log_tau, lmax, alpha1)
    _, lam2 = _scale_mles(m1, m2, log_t, log_tau, lmax, alpha2)
    return alpha1, lam1, alpha2, lam2


def bootstrap_distribution(dataset, fit, B, seed, tol=1e-8, max_iter=500):
    """Resample-and-refit B times at the fitted parameters.

    Replicate i uses its own RNG stream derived from (seed, i), so the result
    is identical however the replicates are scheduled. Refits start the
    fixed-point iteration at the original shape estimate(s).
    """
    if B < 2:
        raise InvalidParameterError(f"B must be at least 2, got {B}")
    if isinstance(fit, CommonShapeFit):
        if not fit.converged:
            raise InvalidParameterError("bootstrap requires a converged fit")
        separate = False
        draw_params = (fit.alpha_hat, fit.lambda1_hat, fit.alpha_hat, fit.lambda2_hat)
        names = COMMON_PARAM_NAMES
    elif isinstance(fit, SeparateShapeFit):
        if not (fit.converged1 and fit.converged2):
            raise InvalidParameterError("bootstrap requires a converged fit")
        separate = True
        draw_params = (fit.alpha1_hat, fit.lambda1_hat, fit.alpha2_hat, fit.lambda2_hat)
        names = SEPARATE_PARAM_NAMES
    else:
        raise InvalidParameterError(
            f"fit must be a CommonShapeFit or SeparateShapeFit, got {type(fit).__name__}"
        )

    tau_L = dataset.tau_L_values
    tau_R = dataset.tau_R_values
    nu = dataset.nu_values
    log_tau = dataset.log_tau_trunc
    rows = []
    failed = 0
    for i in range(B):
        stream = rng_mod.derive(seed, rng_mod.BOOTSTRAP, i)
        u = stream.random((2, dataset.n))
        t, delta = _latent_minimum(u, *draw_params, tau_L, tau_R, nu)
        try:
            if separate:
                rows.append(
                    _refit_separate(
                        t, delta, log_tau, fit.alpha1_hat, fit.alpha2_hat, tol, max_iter
                    )
                )
            else:
                rows.append(_refit_common(t, delta, log_tau, fit.alpha_hat, tol, max_iter))
        except (DegenerateDataError, ConvergenceError):
            failed += 1
    if failed > B / 2:
        raise UnstableBootstrapError(
            f"{failed} of {B} bootstrap replicates failed; distribution unusable"
        )
    estimates = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    return BootstrapDistribution(
        estimates=estimates, B=B, seed=seed, failed_replicates=failed, param_names=names
    )


def _estimate_column(dist, param):
    if isinstance(dist, BootstrapDistribution):
        est = dist.estimates
        if est.shape[1] == 1 and param is None:
            return est[:, 0]
        if param is None:
            raise InvalidParameterError(
                f"distribution holds {dist.param_names}; pick one with param="
            )
        return dist.column(param)
    values = np.asarray(dist, dtype=np.float64)
    if values.ndim != 1:
        raise InvalidParameterError("expected a 1-D array of per-replicate estimates")
    return values


def bc_interval(dist, original_estimate, level, param=None):
    """Bias-corrected normal-theory bootstrap interval.

    Centered at original_estimate minus the bootstrap bias, with half-width
    z * sqrt(bootstrap variance). The lower bound is not floored at zero;
    use ltrcweibull.intervals.floor_at_zero for display clamping.
    """
    values = _estimate_column(dist, param)
    if values.size < 2:
        raise InvalidParameterError("need at least 2 successful replicates")
    mean = float(values.mean())
    bias = mean - original_estimate
    variance = float(values.var(ddof=1))
    center = original_estimate - bias
    if variance == 0.0:
        return ConfidenceInterval(center, center, level, BC_BOOTSTRAP, degenerate=True)
    half = normal_upper_quantile((1.0 - level) / 2.0) * math.sqrt(variance)
    return ConfidenceInterval(center - half, center + half, level, BC_BOOTSTRAP)


def percentile_interval(dist, level, param=None):
    """Order-statistic bootstrap interval.

    Uses the 1-based order statistics at ranks floor(n * beta / 2) and
    floor(n * (1 - beta / 2)) over the successful replicates, each rank
    clamped into [1, n].
    """
    values = _estimate_column(dist, param)
    if values.size < 2:
        raise InvalidParameterError("need at least 2 successful replicates")
    beta = 1.0 - level
    n = values.size
    # The 1e-9 nudge keeps mathematically integral ranks (e.g. floor(100*0.05))
    # from slipping down a step through floating-point representation error.
    lo_rank = min(max(math.floor(n * beta / 2.0 + 1e-9), 1), n)
    hi_rank = min(max(math.floor(n * (1.0 - beta / 2.0) + 1e-9), 1), n)
    ordered = np.sort(values)
    return ConfidenceInterval(
        float(ordered[lo_rank - 1]), float(ordered[hi_rank - 1]), level, PERCENTILE_BOOTSTRAP
    )
