import numpy as np

from ltrcweibull import rng as rng_mod


class TestDerive:
    def test_same_path_same_stream(self):
        a = rng_mod.derive(42, 1, 5).random(8)
        b = rng_mod.derive(42, 1, 5).random(8)
        np.testing.assert_array_equal(a, b)

    def test_different_paths_differ(self):
        a = rng_mod.derive(42, 1, 5).random(8)
        b = rng_mod.derive(42, 1, 6).random(8)
        assert not np.array_equal(a, b)

    def test_different_seeds_differ(self):
        a = rng_mod.derive(1, 2).random(8)
        b = rng_mod.derive(2, 2).random(8)
        assert not np.array_equal(a, b)

    def test_tuple_seed(self):
        a = rng_mod.derive((3, 4), 1).random(4)
        b = rng_mod.derive(rng_mod.subseed(3, 4), 1).random(4)
        np.testing.assert_array_equal(a, b)


class TestSubseed:
    def test_flattens(self):
        assert rng_mod.subseed(1, 2, 3) == (1, 2, 3)
        assert rng_mod.subseed((1, 2), 3) == (1, 2, 3)
        assert rng_mod.subseed(rng_mod.subseed(9, 1), 2, 0) == (9, 1, 2, 0)

    def test_composed_seeds_are_deterministic_and_distinct(self):
        base = rng_mod.subseed(7, 3)
        a = rng_mod.derive(base, 1, 4).random(5)
        b = rng_mod.derive(base, 1, 4).random(5)
        c = rng_mod.derive(base, 1, 5).random(5)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)


class TestStreamLabels:
    def test_distinct(self):
        labels = {
            rng_mod.BOOTSTRAP,
            rng_mod.POSTERIOR,
            rng_mod.POSTERIOR_SEPARATE,
            rng_mod.SIMULATION,
        }
        assert len(labels) == 4
