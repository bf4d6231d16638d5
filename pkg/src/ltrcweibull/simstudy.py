"""Monte Carlo harness for the LTRC competing-risks estimators.

Units are installed in calendar years: truncated units in 1975-1979 (equal
probability per year), the rest in 1980-1983. Latent Weibull lifetimes start
at installation; a truncated unit is redrawn (installation year and both
lifetimes) until its failure falls at or after the 1980 observation boundary,
and everything is censored at 1984. Times are kept in years (scale 1) and
year comparisons use the continuous failure time.

Each replication generates a dataset with an exact truncated count, fits the
MLE, builds both bootstrap intervals, samples the posterior for Bayes
estimates and both credible intervals, and the study aggregates bias, RMSE,
coverage probability (CP) and average length (AL). Four-parameter truth
(separate shapes) switches the harness to a likelihood-ratio-test power run.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import rng as rng_mod
from .bayes import PriorSpec, hpd_interval, sample_posterior, symmetric_interval
from .bootstrap import bc_interval, bootstrap_distribution, percentile_interval
from .data_model import Dataset, Observation
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    InvalidParameterError,
    UnstableBootstrapError,
)
from .intervals import BC_BOOTSTRAP, HPD_CRI, PERCENTILE_BOOTSTRAP, SYMMETRIC_CRI
from .mle_common import solve_alpha
from .mle_separate import lrt_equal_shapes

NOMINAL_LEVELS = (0.90, 0.95)
PARAM_NAMES = ("alpha", "lambda1", "lambda2")
POINT_ESTIMATORS = ("mle", "bayes")
_BOOT_METHODS = (BC_BOOTSTRAP, PERCENTILE_BOOTSTRAP)
_CRI_METHODS = (SYMMETRIC_CRI, HPD_CRI)
_REDRAW_CAP = 1_000_000


@dataclass(frozen=True)
class SimConfig:
    """One simulation cell: sample size, truncation mix, truth, and budgets."""

    n: int
    truncation_fraction: float
    params: tuple
    replications: int = 200
    bootstrap_B: int = 1000
    posterior_N: int = 10_000
    seed: object = 0
    truncation_year: int = 1980
    censor_year: int = 1984
    pre_years: tuple = (1975, 1976, 1977, 1978, 1979)
    post_years: tuple = (1980, 1981, 1982, 1983)
    include_bootstrap: bool = True
    include_bayes: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"n must be at least 1, got {self.n}")
        if not 0.0 <= self.truncation_fraction <= 1.0:
            raise InvalidParameterError("truncation_fraction must lie in [0, 1]")
        params = tuple(float(p) for p in self.params)
        if len(params) not in (3, 4) or any(not p > 0 for p in params):
            raise InvalidParameterError(
                "params must be a positive (alpha, lambda1, lambda2) or "
                "(alpha1, lambda1, alpha2, lambda2)"
            )
        object.__setattr__(self, "params", params)
        if self.replications < 1:
            raise InvalidParameterError("replications must be at least 1")
        if self.bootstrap_B < 2:
            raise InvalidParameterError("bootstrap_B must be at least 2")
        if self.posterior_N < 1:
            raise InvalidParameterError("posterior_N must be at least 1")
        if any(y >= self.truncation_year for y in self.pre_years):
            raise InvalidParameterError("pre_years must precede the truncation year")
        if any(y < self.truncation_year for y in self.post_years):
            raise InvalidParameterError("post_years must not precede the truncation year")

    @property
    def truncated_count(self):
        return int(round(self.n * self.truncation_fraction))

    @property
    def shapes_scales(self):
        """(alpha1, lambda1, alpha2, lambda2) regardless of truth arity."""
        if len(self.params) == 3:
            a, l1, l2 = self.params
            return a, l1, a, l2
        return self.params


@dataclass(frozen=True)
class SimResult:
    """Aggregated operating characteristics of one simulation cell.

    point_bias / point_rmse are keyed by (estimator, param); coverage and
    average_length by (param, method, nominal level).
    """

    config: SimConfig
    point_bias: dict
    point_rmse: dict
    coverage: dict
    average_length: dict
    replications_used: int
    failed_replications: int
    censored_fraction: float
    bootstrap_failures: int
    lrt_rejection_rate: float = None


def _draw_latent_pair(u, alpha1, lambda1, alpha2, lambda2):
    t1 = (-np.log(u[0]) / lambda1) ** (1.0 / alpha1)
    t2 = (-np.log(u[1]) / lambda2) ** (1.0 / alpha2)
    return np.minimum(t1, t2), np.where(t1 <= t2, 1, 2)


def generate_unit(config, truncated, rng):
    """Generate a single unit of the requested truncation status."""
    alpha1, lam1, alpha2, lam2 = config.shapes_scales
    years = config.pre_years if truncated else config.post_years
    for _ in range(_REDRAW_CAP):
        install = int(rng.choice(years))
        lifetime, cause = _draw_latent_pair(
            rng.random((2, 1)), alpha1, lam1, alpha2, lam2
        )
        lifetime, cause = float(lifetime[0]), int(cause[0])
        tau_left = float(config.truncation_year - install) if truncated else 0.0
        if truncated and not install + lifetime > config.truncation_year:
            continue
        tau_right = float(config.censor_year - install)
        if lifetime >= tau_right:
            return Observation(t=tau_right, tau_L=tau_left, tau_R=tau_right, delta=0,
                              nu=0 if truncated else 1)
        return Observation(t=lifetime, tau_L=tau_left, tau_R=tau_right, delta=cause,
                          nu=0 if truncated else 1)
    raise ConvergenceError(
        f"truncation rejection did not accept a unit within {_REDRAW_CAP} redraws"
    )


def _generate_arrays(config, rng):
    """Vectorized dataset generation; truncated block first, then the rest."""
    alpha1, lam1, alpha2, lam2 = config.shapes_scales
    k = config.truncated_count
    n_post = config.n - k

    parts = []
    if k:
        install = rng.choice(np.asarray(config.pre_years), size=k)
        lifetime, cause = _draw_latent_pair(rng.random((2, k)), alpha1, lam1, alpha2, lam2)
        pending = np.flatnonzero(install + lifetime <= config.truncation_year)
        rounds = 0
        while pending.size:
            rounds += 1
            if rounds > _REDRAW_CAP:
                raise ConvergenceError(
                    f"truncation rejection did not finish within {_REDRAW_CAP} redraws"
                )
            install[pending] = rng.choice(np.asarray(config.pre_years), size=pending.size)
            re_life, re_cause = _draw_latent_pair(
                rng.random((2, pending.size)), alpha1, lam1, alpha2, lam2
            )
            lifetime[pending] = re_life
            cause[pending] = re_cause
            pending = pending[install[pending] + re_life <= config.truncation_year]
        parts.append((install, lifetime, cause, np.zeros(k, dtype=np.int64)))
    if n_post:
        install = rng.choice(np.asarray(config.post_years), size=n_post)
        lifetime, cause = _draw_latent_pair(
            rng.random((2, n_post)), alpha1, lam1, alpha2, lam2
        )
        parts.append((install, lifetime, cause, np.ones(n_post, dtype=np.int64)))

    install = np.concatenate([p[0] for p in parts]).astype(np.float64)
    lifetime = np.concatenate([p[1] for p in parts])
    cause = np.concatenate([p[2] for p in parts])
    nu = np.concatenate([p[3] for p in parts])
    tau_left = np.where(nu == 0, config.truncation_year - install, 0.0)
    tau_right = config.censor_year - install
    censored = lifetime >= tau_right
    t = np.where(censored, tau_right, lifetime)
    delta = np.where(censored, 0, cause)
    return Dataset.from_arrays(t, tau_left, tau_right, delta, nu, validate=False)


def _interval_cells(fit_values, dist, levels, maker):
    lo = np.empty((len(PARAM_NAMES), len(levels)))
    hi = np.empty_like(lo)
    for p, name in enumerate(PARAM_NAMES):
        for li, level in enumerate(levels):
            ci = maker(dist, fit_values, name, level)
            lo[p, li] = ci.lower
            hi[p, li] = ci.upper
    return lo, hi


def _run_replication(config, rep):
    """One replication; returns a record dict or None when the fit fails."""
    rng = rng_mod.derive(config.seed, rng_mod.SIMULATION, rep, 0)
    dataset = _generate_arrays(config, rng)
    record = {
        "censored": float(np.mean(dataset.delta_values == 0)),
        "boot_failed": 0,
    }
    try:
        fit = solve_alpha(dataset)
    except (DegenerateDataError, ConvergenceError):
        return None
    if not fit.converged:
        return None
    record["mle"] = np.array([fit.alpha_hat, fit.lambda1_hat, fit.lambda2_hat])

    if config.include_bootstrap:
        try:
            dist = bootstrap_distribution(
                dataset,
                fit,
                config.bootstrap_B,
                rng_mod.subseed(config.seed, rng_mod.SIMULATION, rep, 1),
            )
        except UnstableBootstrapError:
            return None
        record["boot_failed"] = dist.failed_replicates
        original = dict(zip(PARAM_NAMES, record["mle"]))
        lo_bc, hi_bc = _interval_cells(
            None, dist, NOMINAL_LEVELS,
            lambda d, f, name, lvl: bc_interval(d, original[name], lvl, param=name),
        )
        lo_p, hi_p = _interval_cells(
            None, dist, NOMINAL_LEVELS,
            lambda d, f, name, lvl: percentile_interval(d, lvl, param=name),
        )
        record["boot_lo"] = np.stack((lo_bc, lo_p), axis=-1)
        record["boot_hi"] = np.stack((hi_bc, hi_p), axis=-1)

    if config.include_bayes:
        try:
            draws = sample_posterior(
                dataset,
                PriorSpec(),
                config.posterior_N,
                rng_mod.subseed(config.seed, rng_mod.SIMULATION, rep, 2),
            )
        except (DegenerateDataError, ConvergenceError):
            return None
        record["bayes"] = draws.draws.mean(axis=0)
        lo_s = np.empty((len(PARAM_NAMES), len(NOMINAL_LEVELS)))
        hi_s = np.empty_like(lo_s)
        lo_h = np.empty_like(lo_s)
        hi_h = np.empty_like(lo_s)
        for p, name in enumerate(PARAM_NAMES):
            col = draws.column(name)
            for li, level in enumerate(NOMINAL_LEVELS):
                sym = symmetric_interval(col, 1.0 - level)
                hpd = hpd_interval(col, 1.0 - level)
                lo_s[p, li], hi_s[p, li] = sym.lower, sym.upper
                lo_h[p, li], hi_h[p, li] = hpd.lower, hpd.upper
        record["cri_lo"] = np.stack((lo_s, lo_h), axis=-1)
        record["cri_hi"] = np.stack((hi_s, hi_h), axis=-1)
    return record


def _run_lrt_replication(config, rep):
    rng = rng_mod.derive(config.seed, rng_mod.SIMULATION, rep, 0)
    dataset = _generate_arrays(config, rng)
    try:
        return bool(lrt_equal_shapes(dataset).reject)
    except (DegenerateDataError, ConvergenceError):
        return None


def _resolve_threads(threads):
    if threads is None:
        env = os.environ.get("LTRC_THREADS", "").strip()
        if env:
            threads = int(env)
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise InvalidParameterError(f"threads must be at least 1, got {threads}")
    return threads


def _map_replications(worker, config, threads):
    reps = range(config.replications)
    if threads == 1:
        return [worker(config, r) for r in reps]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, config.replications // (threads * 4))
        return list(pool.map(partial(worker, config), reps, chunksize=chunk))


def run_study(config, threads=None):
    """Run every replication of one simulation cell and aggregate.

    Deterministic given config.seed regardless of thread count; failed
    replications are excluded and counted.
    """
    threads = _resolve_threads(threads)
    if len(config.params) == 4:
        outcomes = _map_replications(_run_lrt_replication, config, threads)
        kept = [o for o in outcomes if o is not None]
        if not kept:
            raise DegenerateDataError("every replication failed; no LRT outcomes")
        return SimResult(
            config=config,
            point_bias={},
            point_rmse={},
            coverage={},
            average_length={},
            replications_used=len(kept),
            failed_replications=config.replications - len(kept),
            censored_fraction=math.nan,
            bootstrap_failures=0,
            lrt_rejection_rate=float(np.mean(kept)),
        )

    records = [r for r in _map_replications(_run_replication, config, threads) if r]
    if not records:
        raise DegenerateDataError("every replication failed; nothing to aggregate")
    truth = np.asarray(config.params)

    point_bias = {}
    point_rmse = {}
    for estimator in POINT_ESTIMATORS:
        if estimator == "bayes" and not config.include_bayes:
            continue
        values = np.stack([r[estimator] for r in records])
        err = values - truth
        for p, name in enumerate(PARAM_NAMES):
            point_bias[(estimator, name)] = float(err[:, p].mean())
            point_rmse[(estimator, name)] = float(np.sqrt(np.mean(err[:, p] ** 2)))

    coverage = {}
    average_length = {}
    for key_lo, key_hi, methods, enabled in (
        ("boot_lo", "boot_hi", _BOOT_METHODS, config.include_bootstrap),
        ("cri_lo", "cri_hi", _CRI_METHODS, config.include_bayes),
    ):
        if not enabled:
            continue
        lo = np.stack([r[key_lo] for r in records])  # (reps, param, level, method)
        hi = np.stack([r[key_hi] for r in records])
        inside = (lo <= truth[None, :, None, None]) & (truth[None, :, None, None] <= hi)
        cp = inside.mean(axis=0)
        al = (hi - lo).mean(axis=0)
        for p, name in enumerate(PARAM_NAMES):
            for li, level in enumerate(NOMINAL_LEVELS):
                for mi, method in enumerate(methods):
                    coverage[(name, method, level)] = float(cp[p, li, mi])
                    average_length[(name, method, level)] = float(al[p, li, mi])

    return SimResult(
        config=config,
        point_bias=point_bias,
        point_rmse=point_rmse,
        coverage=coverage,
        average_length=average_length,
        replications_used=len(records),
        failed_replications=config.replications - len(records),
        censored_fraction=float(np.mean([r["censored"] for r in records])),
        bootstrap_failures=int(sum(r["boot_failed"] for r in records)),
    )


def to_rows(result):
    """Flatten a SimResult into `param,trunc,metric,nominal,method,value` rows."""
    trunc = result.config.truncation_fraction
    rows = []
    for (estimator, name), value in sorted(result.point_bias.items()):
        rows.append({"param": name, "trunc": trunc, "metric": "bias",
                     "nominal": "", "method": estimator, "value": value})
    for (estimator, name), value in sorted(result.point_rmse.items()):
        rows.append({"param": name, "trunc": trunc, "metric": "rmse",
                     "nominal": "", "method": estimator, "value": value})
    for (name, method, level), value in sorted(result.coverage.items()):
        rows.append({"param": name, "trunc": trunc, "metric": "cp",
                     "nominal": level, "method": method, "value": value})
    for (name, method, level), value in sorted(result.average_length.items()):
        rows.append({"param": name, "trunc": trunc, "metric": "al",
                     "nominal": level, "method": method, "value": value})
    if not math.isnan(result.censored_fraction):
        rows.append({"param": "", "trunc": trunc, "metric": "censored_fraction",
                     "nominal": "", "method": "", "value": result.censored_fraction})
    if result.lrt_rejection_rate is not None:
        rows.append({"param": "", "trunc": trunc, "metric": "lrt_rejection_rate",
                     "nominal": "", "method": "", "value": result.lrt_rejection_rate})
    return rows
