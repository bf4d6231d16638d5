"""Bayesian inference for the LTRC competing-risks Weibull model.

For a known shape the scales carry a Dirichlet-Gamma (DG) prior: the total
lambda1 + lambda2 is gamma, the proportion lambda1/(lambda1+lambda2) an
independent beta. The posterior is again DG with the data folded in through
the counts and w2(alpha), so estimates, variances, and a trapezoidal joint
credible set are closed-form.

With the shape unknown, its marginal posterior is log-concave whenever the
discriminant d_tilde(alpha) = (b + w2)w2'' - (w2')**2 stays nonnegative and
the power of alpha in the density is at least zero. Draws then come from a
tangent-envelope rejection sampler built with exact derivatives; when the
certificate fails, a grid-inversion fallback is used with a warning. Scales
are completed from their conditional DG / gamma posteriors.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats

from . import _kernels
from . import rng as rng_mod
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    FallbackSamplerWarning,
    InvalidParameterError,
)
from .intervals import HPD_CRI, SYMMETRIC_CRI, ConfidenceInterval
from .mle_common import _exp_saturated, certificate_grid, w_sums_grid

DEFAULT_HYPER = 1e-4

COMMON_DRAW_NAMES = ("alpha", "lambda1", "lambda2")
SEPARATE_DRAW_NAMES = ("alpha1", "lambda1", "alpha2", "lambda2")

_MAX_TANGENTS = 40
_FALLBACK_GRID_SIZE = 4096


def _check_positive(value, name):
    if not value > 0:
        raise InvalidParameterError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class GammaPrior:
    """Gamma(shape, rate) prior with density proportional to x**(shape-1) e**(-rate x)."""

    shape: float = DEFAULT_HYPER
    rate: float = DEFAULT_HYPER

    def __post_init__(self):
        _check_positive(self.shape, "shape")
        _check_positive(self.rate, "rate")


@dataclass(frozen=True)
class DGParams:
    """Dirichlet-Gamma parameters (b, a0, a1, a2).

    lambda1 + lambda2 ~ gamma(a0, rate b) independently of
    lambda1/(lambda1+lambda2) ~ beta(a1, a2).
    """

    b: float = DEFAULT_HYPER
    a0: float = DEFAULT_HYPER
    a1: float = DEFAULT_HYPER
    a2: float = DEFAULT_HYPER

    def __post_init__(self):
        for name in ("b", "a0", "a1", "a2"):
            _check_positive(getattr(self, name), name)


@dataclass(frozen=True)
class PriorSpec:
    """Joint prior: DG on the scales, gamma(shape c, rate d) on the shape."""

    dg: DGParams = field(default_factory=DGParams)
    alpha_prior: GammaPrior = field(default_factory=GammaPrior)


@dataclass(frozen=True)
class SeparatePriorSpec:
    """Independent gamma priors per cause: on alpha_j and on lambda_j."""

    alpha1_prior: GammaPrior = field(default_factory=GammaPrior)
    lambda1_prior: GammaPrior = field(default_factory=GammaPrior)
    alpha2_prior: GammaPrior = field(default_factory=GammaPrior)
    lambda2_prior: GammaPrior = field(default_factory=GammaPrior)


@dataclass(frozen=True)
class PosteriorDraws:
    """Ordered posterior sample; rows are parameter tuples in param_names order."""

    draws: np.ndarray
    seed: object
    N: int
    param_names: tuple = COMMON_DRAW_NAMES

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.draws, dtype=np.float64))
        if arr.ndim != 2 or arr.shape != (self.N, len(self.param_names)):
            raise ValueError("draws must have shape (N, len(param_names))")
        arr.flags.writeable = False
        object.__setattr__(self, "draws", arr)

    def column(self, param):
        if isinstance(param, str):
            try:
                param = self.param_names.index(param)
            except ValueError:
                raise InvalidParameterError(
                    f"unknown parameter {param!r}; have {self.param_names}"
                ) from None
        return self.draws[:, param]


@dataclass(frozen=True)
class CredibleTrapezoid:
    """Joint credible region for (lambda1, lambda2).

    Bounded by the lines lambda1 + lambda2 = A, = B and the rays
    lambda1 = C (lambda1 + lambda2), lambda1 = D (lambda1 + lambda2).
    """

    A: float
    B: float
    C: float
    D: float
    gamma1: float
    gamma2: float
    area: float

    def contains(self, lambda1, lambda2):
        total = np.asarray(lambda1) + np.asarray(lambda2)
        prop = np.asarray(lambda1) / total
        return (self.A <= total) & (total <= self.B) & (self.C <= prop) & (prop <= self.D)


def dg_moments(params):
    """Marginal means and variances (mean1, mean2, var1, var2) of a DG law."""
    b, a0, a1, a2 = params.b, params.a0, params.a1, params.a2
    asum = a1 + a2
    means = []
    variances = []
    for ai in (a1, a2):
        means.append(a0 * ai / (b * asum))
        lead = a0 * ai / (b * b * asum)
        variances.append(lead * ((ai + 1.0) * (a0 + 1.0) / (asum + 1.0) - a0 * ai / asum))
    return means[0], means[1], variances[0], variances[1]


def dg_sample(params, rng, size=None):
    """Draw (lambda1, lambda2) from a DG law.

    Consumes the stream in a fixed order: the gamma total first, then the
    beta proportion. With size=None returns a pair of floats, otherwise a
    pair of arrays.
    """
    total = rng.gamma(params.a0, 1.0 / params.b, size=size)
    prop = rng.beta(params.a1, params.a2, size=size)
    if size is None:
        return float(prop * total), float((1.0 - prop) * total)
    return prop * total, (1.0 - prop) * total


def _w2_value(dataset, alpha):
    s0, _, _ = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    return _exp_saturated(alpha * dataset.log_t_max) * s0


def posterior_dg(dataset, alpha, prior):
    """Conjugate update: DG(b + w2(alpha), a0 + m, a1 + m1, a2 + m2)."""
    _check_positive(alpha, "alpha")
    return DGParams(
        b=prior.b + _w2_value(dataset, alpha),
        a0=prior.a0 + dataset.m,
        a1=prior.a1 + dataset.m1,
        a2=prior.a2 + dataset.m2,
    )


def bayes_known_alpha(dataset, alpha, prior):
    """Squared-error Bayes estimates and posterior variances of the scales.

    Returns (est1, est2, var1, var2); these are exactly the DG moments of
    the conjugate posterior at the given shape.
    """
    return dg_moments(posterior_dg(dataset, alpha, prior))


def credible_trapezoid(dataset, alpha, prior, gamma_total):
    """Joint credible trapezoid for the scales at total tail mass gamma_total.

    The two independent factors get equal tail levels
    gamma1 = gamma2 = 1 - sqrt(1 - gamma_total), and equal-tail quantiles of
    the posterior gamma/beta factors supply the four bounds.
    """
    if not 0.0 < gamma_total < 1.0:
        raise InvalidParameterError(f"gamma_total must be in (0, 1), got {gamma_total}")
    post = posterior_dg(dataset, alpha, prior)
    gamma_each = 1.0 - math.sqrt(1.0 - gamma_total)
    half = gamma_each / 2.0
    total_dist = stats.gamma(a=post.a0, scale=1.0 / post.b)
    prop_dist = stats.beta(post.a1, post.a2)
    a_bound = float(total_dist.ppf(half))
    b_bound = float(total_dist.ppf(1.0 - half))
    c_bound = float(prop_dist.ppf(half))
    d_bound = float(prop_dist.ppf(1.0 - half))
    area = (b_bound**2 - a_bound**2) * (d_bound - c_bound) / 2.0
    return CredibleTrapezoid(
        A=a_bound,
        B=b_bound,
        C=c_bound,
        D=d_bound,
        gamma1=gamma_each,
        gamma2=gamma_each,
        area=area,
    )


def d_tilde_alpha(dataset, alpha, prior_b=DEFAULT_HYPER):
    """Posterior discriminant (prior_b + w2) * w2'' - (w2')**2 at one shape."""
    _check_positive(alpha, "alpha")
    _check_positive(prior_b, "prior_b")
    s0, s1, s2 = _kernels.w_scaled_sums(
        dataset.log_t, dataset.log_tau_trunc, alpha, dataset.log_t_max
    )
    # Settle the sign against the e**(-C) scaled sums before rescaling so a
    # large shape on year-scale data cannot overflow; only the final rescale
    # is allowed to saturate.
    c = alpha * dataset.log_t_max
    if c < -709.0:
        return 0.0
    inner = (prior_b * math.exp(-c) + s0) * s2 - s1 * s1
    if inner == 0.0:
        return 0.0
    if 2.0 * c > 709.0:
        return math.copysign(math.inf, inner)
    return inner * math.exp(2.0 * c)


class _AlphaTarget:
    """Unnormalized log-posterior of one shape parameter.

    f(a) = power_log * log(a) + linear * a - denom_exp * log(b_add + w2(a)),
    covering both the common-shape posterior (power_log = m + c - 1,
    linear = w1 - d, b_add = b0, denom_exp = a0 + m) and each separate-cause
    marginal.
    """

    def __init__(self, log_t, log_tau, log_t_max, power_log, linear, b_add, denom_exp):
        self.log_t = log_t
        self.log_tau = log_tau
        self.log_t_max = log_t_max
        self.power_log = power_log
        self.linear = linear
        self.b_add = b_add
        self.denom_exp = denom_exp
        self.log_b_add = math.log(b_add)

    def value(self, alphas):
        a = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
        s0, _, _ = w_sums_grid(self.log_t, self.log_tau, a, self.log_t_max)
        # w2 > 0 exactly, but s0 can round to <= 0 at tiny shapes when the
        # truncation sums cancel the lifetime sums; the correct limit there
        # is w2 ~ 0 against b_add, i.e. log_s0 -> -inf.
        positive = s0 > 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            log_s0 = np.where(positive, np.log(np.where(positive, s0, 1.0)), -np.inf)
        log_denom = np.logaddexp(self.log_b_add, a * self.log_t_max + log_s0)
        out = self.power_log * np.log(a) + self.linear * a - self.denom_exp * log_denom
        return out if np.ndim(alphas) else float(out[0])

    def grad(self, alphas):
        a = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
        s0, s1, _ = w_sums_grid(self.log_t, self.log_tau, a, self.log_t_max)
        with np.errstate(over="ignore"):
            ratio = s1 / (self.b_add * np.exp(-a * self.log_t_max) + s0)
        out = self.power_log / a + self.linear - self.denom_exp * ratio
        return out if np.ndim(alphas) else float(out[0])

    def hess(self, alpha):
        s0, s1, s2 = _kernels.w_scaled_sums(
            self.log_t, self.log_tau, alpha, self.log_t_max
        )
        try:
            b_scaled = self.b_add * math.exp(-alpha * self.log_t_max)
        except OverflowError:
            b_scaled = math.inf
        curve = -self.power_log / alpha**2
        if math.isinf(b_scaled):
            return curve
        denom = b_scaled + s0
        d_tilde = b_scaled * s2 + (s0 * s2 - s1 * s1)
        return curve - self.denom_exp * d_tilde / (denom * denom)

    def certificate(self):
        """Lemma-style log-concavity check on the diagnostic grid."""
        if self.power_log < -1e-12:
            return False
        grid = certificate_grid()
        s0, s1, s2 = w_sums_grid(self.log_t, self.log_tau, grid, self.log_t_max)
        with np.errstate(over="ignore", invalid="ignore"):
            b_scaled = self.b_add * np.exp(-grid * self.log_t_max)
            disc = s0 * s2 - s1 * s1
            finite = np.isfinite(b_scaled)
            d_tilde = np.where(
                finite,
                b_scaled * s2 + disc,
                np.where(s2 > 0, np.inf, np.where(s2 < 0, -np.inf, disc)),
            )
            slack = 16.0 * np.finfo(float).eps * (
                np.where(finite, np.abs(b_scaled * s2), 0.0) + np.abs(s0 * s2) + s1 * s1
            )
        return bool(np.all(d_tilde >= -slack))


def _common_alpha_target(dataset, prior):
    dg = prior.dg
    ap = prior.alpha_prior
    return _AlphaTarget(
        dataset.log_t,
        dataset.log_tau_trunc,
        dataset.log_t_max,
        power_log=dataset.m + ap.shape - 1.0,
        linear=dataset.w1 - ap.rate,
        b_add=dg.b,
        denom_exp=dg.a0 + dataset.m,
    )


def _separate_alpha_target(dataset, cause, alpha_prior, lambda_prior):
    if cause == 1:
        m_j, w_star = dataset.m1, dataset.w1_cause1
    else:
        m_j, w_star = dataset.m2, dataset.w1_cause2
    return _AlphaTarget(
        dataset.log_t,
        dataset.log_tau_trunc,
        dataset.log_t_max,
        power_log=m_j + alpha_prior.shape - 1.0,
        linear=w_star - alpha_prior.rate,
        b_add=lambda_prior.rate,
        denom_exp=m_j + lambda_prior.shape,
    )


def log_posterior_alpha(dataset, prior, alpha):
    """Unnormalized log posterior of the common shape under a PriorSpec."""
    _check_positive(alpha, "alpha")
    return _common_alpha_target(dataset, prior).value(alpha)


def _scan_for_mode(target):
    lo, hi = 1e-3, 1e3
    for _ in range(4):
        grid = np.geomspace(lo, hi, 512)
        with np.errstate(invalid="ignore"):
            values = target.value(grid)
        values = np.where(np.isfinite(values), values, -np.inf)
        best = int(np.argmax(values))
        if not np.isfinite(values[best]):
            raise ConvergenceError("posterior mode search found no finite density value")
        if best == 0:
            lo /= 10.0
        elif best == grid.size - 1:
            hi *= 10.0
        else:
            return grid[best - 1], grid[best], grid[best + 1]
    raise ConvergenceError("posterior mode search ran off the expanded grid")


def _find_mode(target):
    lo, mid, hi = _scan_for_mode(target)
    neg = lambda a: -target.value(a)
    try:
        result = optimize.minimize_scalar(
            neg, bracket=(lo, mid, hi), method="golden", options={"xtol": 1e-11}
        )
        mode = float(result.x)
    except Exception:
        mode = math.nan
    if not (math.isfinite(mode) and mode > 0):
        result = optimize.minimize_scalar(
            neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-11}
        )
        mode = float(result.x)
    if not (math.isfinite(mode) and mode > 0 and math.isfinite(target.value(mode))):
        raise ConvergenceError("posterior mode search failed to converge")
    return mode


class _TangentEnvelope:
    """Piecewise-exponential upper envelope of a concave log-density.

    Built from tangent lines with exact slopes, so the hull genuinely
    majorizes the target; segment masses are kept in log scale and sampling
    inverts the per-segment truncated exponentials.
    """

    def __init__(self, target, points, offset):
        self.target = target
        self.offset = offset
        self._build(np.asarray(sorted(points), dtype=np.float64))

    def _build(self, xs):
        fs = self.target.value(xs) - self.offset
        slopes = self.target.grad(xs)
        keep = np.isfinite(fs) & np.isfinite(slopes)
        xs, fs, slopes = xs[keep], fs[keep], slopes[keep]
        # Concavity means slopes must strictly decrease left to right; drop
        # points that violate it numerically (duplicates, flat spots).
        order = np.argsort(xs)
        xs, fs, slopes = xs[order], fs[order], slopes[order]
        kx, kf, ks = [], [], []
        for x, f, s in zip(xs, fs, slopes):
            while kx and s >= ks[-1] - 1e-13 * (abs(s) + abs(ks[-1]) + 1.0):
                kx.pop(), kf.pop(), ks.pop()
            kx.append(x), kf.append(f), ks.append(s)
        if len(kx) < 2 or ks[-1] >= 0:
            raise ConvergenceError("could not build a proper tangent envelope")
        self.xs = np.array(kx)
        self.fs = np.array(kf)
        self.slopes = np.array(ks)
        inter = np.diff(self.fs - self.slopes * self.xs) / -np.diff(self.slopes)
        self.breaks = np.clip(inter, self.xs[:-1], self.xs[1:])
        left = np.concatenate(([0.0], self.breaks))
        right = np.concatenate((self.breaks, [np.inf]))
        value_left = self.fs + self.slopes * (left - self.xs)
        log_mass = np.empty_like(self.xs)
        for i, (lo, hi, v, s) in enumerate(zip(left, right, value_left, self.slopes)):
            if math.isinf(hi):
                log_mass[i] = v - math.log(-s)
                continue
            width = hi - lo
            grow = s * width
            if abs(grow) < 1e-12:
                log_mass[i] = v + math.log(width)
            elif s > 0:
                log_mass[i] = v + grow + math.log1p(-math.exp(-grow)) - math.log(s)
            else:
                log_mass[i] = v + math.log1p(-math.exp(grow)) - math.log(-s)
        self.left = left
        total = np.logaddexp.reduce(log_mass)
        probs = np.exp(log_mass - total)
        self.cum = np.cumsum(probs)
        self.cum[-1] = 1.0

    def density_log(self, x):
        idx = np.searchsorted(self.breaks, x, side="right")
        return self.fs[idx] + self.slopes[idx] * (x - self.xs[idx])

    def sample(self, n, rng):
        """Draw n candidates plus their acceptance uniforms (3 per draw)."""
        u = rng.random((3, n))
        idx = np.searchsorted(self.cum, u[0], side="right")
        idx = np.minimum(idx, self.xs.size - 1)
        lo = self.left[idx]
        slope = self.slopes[idx]
        x = np.empty(n)
        last = idx == self.xs.size - 1
        with np.errstate(divide="ignore", over="ignore"):
            # Unbounded rightmost segment: exponential tail inversion.
            x[last] = lo[last] + np.log1p(-u[1][last]) / slope[last]
            fin = ~last
            width = self.breaks[np.minimum(idx, self.breaks.size - 1)] - lo
            grow = slope * width
            tiny = fin & (np.abs(grow) < 1e-12)
            pos = fin & (grow >= 1e-12)
            negm = fin & (grow <= -1e-12)
            x[tiny] = lo[tiny] + u[1][tiny] * width[tiny]
            x[pos] = (
                lo[pos]
                + width[pos]
                + np.log(u[1][pos] + (1.0 - u[1][pos]) * np.exp(-grow[pos])) / slope[pos]
            )
            x[negm] = lo[negm] + np.log1p(u[1][negm] * np.expm1(grow[negm])) / slope[negm]
        x = np.maximum(x, np.nextafter(0.0, 1.0))
        return x, u[2]


def _envelope_points(target, mode):
    hess = target.hess(mode)
    if math.isfinite(hess) and hess < 0:
        sigma = 1.0 / math.sqrt(-hess)
    else:
        sigma = 0.1 * mode
    sigma = min(sigma, 50.0 * mode)
    points = [mode + k * sigma for k in (-3.0, -1.5, -0.5, 0.5, 1.5, 3.0)]
    points = [p if p > 0 else mode * 2.0**-i for i, p in enumerate(points, start=2)]
    right = max(points)
    for _ in range(200):
        if target.grad(right) < 0:
            break
        right = mode + 2.0 * (right - mode) + sigma
    else:
        raise ConvergenceError("could not find a decreasing right tail for the envelope")
    points.append(right)
    return points


def _rejection_draws(target, n, rng):
    mode = _find_mode(target)
    offset = target.value(mode)
    envelope = _TangentEnvelope(target, _envelope_points(target, mode), offset)
    draws = np.empty(n)
    got = 0
    attempts = 0
    budget = 1000 * n + 1_000_000
    while got < n:
        want = n - got
        chunk = min(max(1024, int(1.25 * want) + 16), 65536)
        x, u_acc = envelope.sample(chunk, rng)
        log_f = target.value(x) - offset
        accept = np.log(u_acc) <= log_f - envelope.density_log(x)
        taken = x[accept][:want]
        draws[got : got + taken.size] = taken
        got += taken.size
        attempts += chunk
        if attempts > budget:
            raise ConvergenceError("rejection sampler stalled; acceptance rate too low")
        if got < n and envelope.xs.size < _MAX_TANGENTS:
            rejected = x[~accept]
            if rejected.size:
                candidate = float(rejected[0])
                if np.min(np.abs(envelope.xs - candidate)) > 1e-10 * (1.0 + candidate):
                    envelope = _TangentEnvelope(
                        target, np.append(envelope.xs, candidate), offset
                    )
    return draws


def _grid_inversion_draws(target, n, rng):
    lo, mid, hi = _scan_for_mode(target)
    peak = target.value(mid)
    # Expand until the density is negligible at both ends of the bracket.
    lo_v, hi_v = lo, hi
    for _ in range(60):
        if target.value(lo_v) < peak - 46.0:
            break
        lo_v /= 2.0
    for _ in range(60):
        if target.value(hi_v) < peak - 46.0:
            break
        hi_v *= 2.0
    grid = np.geomspace(lo_v, hi_v, _FALLBACK_GRID_SIZE)
    log_density = target.value(grid)
    weights = np.exp(log_density - log_density.max())
    cell = 0.5 * (weights[1:] + weights[:-1]) * np.diff(grid)
    cdf = np.concatenate(([0.0], np.cumsum(cell)))
    cdf /= cdf[-1]
    return np.interp(rng.random(n), cdf, grid)


def _sample_alpha_any(target, n, rng, label):
    if target.certificate():
        return _rejection_draws(target, n, rng)
    warnings.warn(
        f"log-concavity certificate failed for {label}; "
        "falling back to grid-inversion sampling",
        FallbackSamplerWarning,
        stacklevel=3,
    )
    return _grid_inversion_draws(target, n, rng)


def _w2_array(dataset, alphas):
    s0, _, _ = w_sums_grid(dataset.log_t, dataset.log_tau_trunc, alphas, dataset.log_t_max)
    return np.exp(alphas * dataset.log_t_max) * s0


def sample_posterior(dataset, prior=None, N=10_000, seed=0):
    """Draw N posterior copies of (alpha, lambda1, lambda2).

    Shapes come first from the marginal posterior of alpha, then each scale
    pair from the conditional DG posterior at that shape. Deterministic for
    a given seed.
    """
    if prior is None:
        prior = PriorSpec()
    if N < 1:
        raise InvalidParameterError(f"N must be at least 1, got {N}")
    if dataset.m1 == 0 or dataset.m2 == 0:
        raise DegenerateDataError("posterior sampling needs failures from both causes")
    stream = rng_mod.derive(seed, rng_mod.POSTERIOR)
    alphas = _sample_alpha_any(
        _common_alpha_target(dataset, prior), N, stream, "the shape posterior"
    )
    dg = prior.dg
    rates = dg.b + _w2_array(dataset, alphas)
    totals = stream.standard_gamma(dg.a0 + dataset.m, size=N) / rates
    props = stream.beta(dg.a1 + dataset.m1, dg.a2 + dataset.m2, size=N)
    draws = np.column_stack((alphas, props * totals, (1.0 - props) * totals))
    return PosteriorDraws(draws=draws, seed=seed, N=N, param_names=COMMON_DRAW_NAMES)


def sample_posterior_separate(dataset, prior=None, N=10_000, seed=0):
    """Draw N posterior copies of (alpha1, lambda1, alpha2, lambda2).

    The posterior factorizes across causes; cause 1 is sampled completely
    before cause 2 on the same derived stream.
    """
    if prior is None:
        prior = SeparatePriorSpec()
    if N < 1:
        raise InvalidParameterError(f"N must be at least 1, got {N}")
    if dataset.m1 == 0 or dataset.m2 == 0:
        raise DegenerateDataError("posterior sampling needs failures from both causes")
    stream = rng_mod.derive(seed, rng_mod.POSTERIOR_SEPARATE)
    columns = []
    for cause, a_prior, l_prior in (
        (1, prior.alpha1_prior, prior.lambda1_prior),
        (2, prior.alpha2_prior, prior.lambda2_prior),
    ):
        target = _separate_alpha_target(dataset, cause, a_prior, l_prior)
        alphas = _sample_alpha_any(target, N, stream, f"the cause-{cause} shape posterior")
        m_j = dataset.m1 if cause == 1 else dataset.m2
        rates = l_prior.rate + _w2_array(dataset, alphas)
        lambdas = stream.standard_gamma(m_j + l_prior.shape, size=N) / rates
        columns.extend((alphas, lambdas))
    draws = np.column_stack(columns)
    return PosteriorDraws(draws=draws, seed=seed, N=N, param_names=SEPARATE_DRAW_NAMES)


def bayes_estimates_mc(draws, g):
    """Monte Carlo estimate and posterior variance of g over the draws.

    The variance uses the biased 1/N divisor. g is called per draw with the
    tuple unpacked (three arguments for common-shape draws, four for
    separate-shape draws).
    """
    if draws.N < 2:
        raise InvalidParameterError("need at least 2 draws")
    values = np.array([float(g(*row)) for row in draws.draws])
    estimate = float(values.mean())
    variance = float(np.mean((values - estimate) ** 2))
    return estimate, variance


def hpd_interval(samples, two_beta):
    """Highest-posterior-density interval from an ordered sample.

    With K = floor(N * two_beta), the candidates are the windows spanning
    N - K consecutive order statistics starting at ranks 1..K; the shortest
    wins, ties going to the leftmost.
    """
    if not 0.0 < two_beta < 1.0:
        raise InvalidParameterError(f"two_beta must be in (0, 1), got {two_beta}")
    values = np.sort(np.asarray(samples, dtype=np.float64))
    n = values.size
    k = math.floor(n * two_beta + 1e-9)
    if k < 1 or n - k - 1 < 0:
        raise InvalidParameterError(
            f"sample of size {n} too small for an HPD interval at two_beta={two_beta}"
        )
    lowers = values[:k]
    uppers = values[n - k - 1 : n - 1]
    j = int(np.argmin(uppers - lowers))
    return ConfidenceInterval(
        float(lowers[j]), float(uppers[j]), 1.0 - two_beta, HPD_CRI
    )


def symmetric_interval(samples, two_beta):
    """Equal-tail credible interval from sample quantiles.

    Uses the order statistics at ranks max(1, floor(N * beta)) and
    floor(N * (1 - beta)) with beta = two_beta / 2; this convention never
    beats the HPD interval on length.
    """
    if not 0.0 < two_beta < 1.0:
        raise InvalidParameterError(f"two_beta must be in (0, 1), got {two_beta}")
    values = np.sort(np.asarray(samples, dtype=np.float64))
    n = values.size
    if n < 2:
        raise InvalidParameterError("need at least 2 samples")
    beta = two_beta / 2.0
    lo_rank = max(1, math.floor(n * beta + 1e-9))
    hi_rank = max(lo_rank, math.floor(n * (1.0 - beta) + 1e-9))
    return ConfidenceInterval(
        float(values[lo_rank - 1]), float(values[hi_rank - 1]), 1.0 - two_beta, SYMMETRIC_CRI
    )
