"""Interval value type and the internal standard-normal quantile."""

import math
from dataclasses import dataclass

# method labels used across bootstrap and posterior intervals
BC_BOOTSTRAP = "bc_bootstrap"
PERCENTILE_BOOTSTRAP = "percentile_bootstrap"
SYMMETRIC_CRI = "symmetric_cri"
HPD_CRI = "hpd_cri"


@dataclass(frozen=True)
class ConfidenceInterval:
    """A two-sided interval estimate at a given confidence/credibility level.

    `degenerate` marks intervals collapsed to a point by zero sampling
    variance; callers are warned separately when that happens.
    """

    lower: float
    upper: float
    level: float
    method: str
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0,1), got {self.level}")
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, value):
        return self.lower <= value <= self.upper


def floor_at_zero(interval):
    """Display clamp for parameters known to be positive.

    Bias-corrected bootstrap bounds can go negative; this returns the same
    interval with bounds clipped below at zero.
    """
    return ConfidenceInterval(
        max(interval.lower, 0.0),
        max(interval.upper, 0.0),
        interval.level,
        interval.method,
        interval.degenerate,
    )


# Rational approximation coefficients for the inverse normal CDF
# (central region and tails), refined by one Halley step below.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_quantile(p):
    """Inverse standard-normal CDF, accurate to well below 1e-8 absolute."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0,1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    # One Halley step against the exact CDF via erfc. The residual F(x) - p
    # is formed in whichever tail is small so it never cancels; for p >= 0.5
    # the subtraction 1 - p is exact.
    try:
        if p < 0.5:
            e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
        else:
            e = (1.0 - p) - 0.5 * math.erfc(x / math.sqrt(2.0))
        u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    except OverflowError:
        return x
    return x - u / (1.0 + x * u / 2.0)


def normal_upper_quantile(beta):
    """Upper beta-point of the standard normal: z with P(Z > z) = beta."""
    return normal_quantile(1.0 - beta)
