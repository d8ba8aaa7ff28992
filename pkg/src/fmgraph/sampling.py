"""Seeded random fuzzy measures.

Each measure is drawn by visiting the nonempty proper subsets in a random
order and sampling every value uniformly between the largest value already
fixed below it and the smallest value already fixed above it.  The result is
exactly monotone by construction.  The distribution is *not* uniform over the
order polytope.

Batch item ``k`` uses the seed ``seed ^ splitmix64(k)``, so items can be
generated independently and in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from fmgraph.lattice import FuzzyMeasure

_MASK64 = (1 << 64) - 1
MAX_RANDOM_N = 10


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 output function."""
    z = (int(x) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, k: int) -> int:
    """Seed of batch item ``k``."""
    return (int(seed) & _MASK64) ^ splitmix64(k)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    seed: int
    count: int = 1

    def __post_init__(self):
        if not 2 <= self.n <= MAX_RANDOM_N:
            raise ValueError(f"n must lie in [2, {MAX_RANDOM_N}], got {self.n}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)


@lru_cache(maxsize=None)
def _neighbourhoods(n: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    masks = np.arange(1 << n)
    below, above = [], []
    for a in range(1 << n):
        below.append(masks[((masks & a) == masks) & (masks != a)])
        above.append(masks[((masks & a) == a) & (masks != a)])
    return below, above


def _draw(n: int, rng: np.random.Generator) -> np.ndarray:
    size = 1 << n
    vals = np.zeros(size)
    vals[-1] = 1.0
    fixed = np.zeros(size, dtype=bool)
    fixed[0] = fixed[-1] = True
    below, above = _neighbourhoods(n)
    for a in rng.permutation(np.arange(1, size - 1)):
        lo_idx = below[a][fixed[below[a]]]
        hi_idx = above[a][fixed[above[a]]]
        lo = vals[lo_idx].max()
        hi = vals[hi_idx].min()
        vals[a] = lo + (hi - lo) * rng.random()
        fixed[a] = True
    return vals


def random_measure(config: GeneratorConfig) -> FuzzyMeasure:
    """One measure drawn from ``config.seed`` (``config.count`` is ignored)."""
    rng = np.random.default_rng(config.seed)
    return FuzzyMeasure(_draw(config.n, rng), tol=0.0)


def random_batch(config: GeneratorConfig) -> list[FuzzyMeasure]:
    """``config.count`` measures; item ``k`` comes from ``derive_seed(seed, k)``."""
    return [
        random_measure(GeneratorConfig(config.n, derive_seed(config.seed, k)))
        for k in range(config.count)
    ]
