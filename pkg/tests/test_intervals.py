import dataclasses
import math

import numpy as np
import pytest
from scipy import special, stats

from ltrcweibull.intervals import (
    BC_BOOTSTRAP,
    ConfidenceInterval,
    floor_at_zero,
    normal_quantile,
    normal_upper_quantile,
)


class TestNormalQuantile:
    def test_matches_scipy_across_range(self):
        probs = np.concatenate([
            np.array([1e-300, 1e-16, 1e-10, 1e-5]),
            np.linspace(0.001, 0.999, 199),
            1.0 - np.array([1e-5, 1e-10, 1e-16]),
        ])
        for p in probs:
            expected = float(special.ndtri(p))
            assert normal_quantile(float(p)) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_median(self):
        assert normal_quantile(0.5) == 0.0

    def test_symmetry(self):
        for p in (0.01, 0.1, 0.3):
            assert normal_quantile(p) == pytest.approx(-normal_quantile(1.0 - p), abs=1e-13)

    def test_upper_quantile(self):
        assert normal_upper_quantile(0.05) == pytest.approx(
            float(stats.norm.ppf(0.95)), rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.3, math.nan])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            normal_quantile(bad)


class TestConfidenceInterval:
    def test_width_and_contains(self):
        ci = ConfidenceInterval(1.0, 3.0, level=0.9, method=BC_BOOTSTRAP)
        assert ci.width == pytest.approx(2.0)
        assert ci.contains(1.0) and ci.contains(3.0) and ci.contains(2.0)
        assert not ci.contains(0.999)
        assert not ci.contains(3.001)

    def test_frozen(self):
        ci = ConfidenceInterval(1.0, 3.0, level=0.9, method=BC_BOOTSTRAP)
        with pytest.raises(dataclasses.FrozenInstanceError):
            ci.lower = 0.0

    def test_floor_at_zero(self):
        ci = ConfidenceInterval(-2.0, 3.0, level=0.9, method=BC_BOOTSTRAP)
        floored = floor_at_zero(ci)
        assert (floored.lower, floored.upper) == (0.0, 3.0)
        assert floored.level == ci.level and floored.method == ci.method

    def test_floor_no_op_when_positive(self):
        ci = ConfidenceInterval(0.5, 3.0, level=0.9, method=BC_BOOTSTRAP)
        assert floor_at_zero(ci) == ci
