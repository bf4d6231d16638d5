"""Deterministic random-stream derivation.

Every stochastic entry point takes a seed (an int, or a tuple of ints when a
caller embeds one component inside another) and derives named child streams
from it, so results are independent of execution order and thread schedule.
"""

import numpy as np

# top-level stream labels; replicate/chain indices are appended after these
BOOTSTRAP = 1
POSTERIOR = 2
POSTERIOR_SEPARATE = 3
SIMULATION = 4


def derive(seed, *path):
    """Generator for the child stream identified by `path` under `seed`."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.PCG64(ss))


def subseed(seed, *path):
    """Composite seed for handing a named sub-stream to another component.

    Flattens so that subseed(subseed(s, a), b) == subseed(s, a, b).
    """
    if isinstance(seed, (tuple, list)):
        return tuple(seed) + tuple(int(p) for p in path)
    return (int(seed),) + tuple(int(p) for p in path)
