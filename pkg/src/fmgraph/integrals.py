"""Choquet, Sugeno and pan integrals.

Each integral has an ordered form, which sorts the input once, and a basis
form, which enumerates all ``2**n`` subsets without sorting.  The two are
used as mutual checks; the ordered form is the production path.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from fmgraph.lattice import FuzzyMeasure, _as_measure


def _input(x, n: int, unit: bool) -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size != n:
        raise ValueError(f"input has {arr.size} components, measure has {n} criteria")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input components must be finite")
    if np.any(arr < 0):
        raise ValueError("input components must be nonnegative")
    if unit and np.any(arr > 1):
        raise ValueError("input components must lie in [0, 1]")
    return arr


def _ordered(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending values and the masks ``{(i), ..., (n)}`` of the upper sets.

    Ties are broken by criterion index (stable sort).
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    bits = (1 << order)[::-1]
    upper = np.cumsum(bits)[::-1]
    return xs, upper


def choquet(mu: FuzzyMeasure, x) -> float:
    """Discrete Choquet integral, ``sum (x_(i) - x_(i-1)) mu({(i),...,(n)})``."""
    mu = _as_measure(mu)
    xs, upper = _ordered(_input(x, mu.n, unit=False))
    inc = np.diff(xs, prepend=0.0)
    return float(np.dot(inc, mu.values[upper]))


def sugeno(mu: FuzzyMeasure, x) -> float:
    """Discrete Sugeno integral, ``max_i min(x_(i), mu({(i),...,(n)}))``."""
    mu = _as_measure(mu)
    xs, upper = _ordered(_input(x, mu.n, unit=True))
    return float(np.max(np.minimum(xs, mu.values[upper])))


def pan(mu: FuzzyMeasure, x) -> float:
    """Max-product (pan) integral, ``max_i x_(i) * mu({(i),...,(n)})``."""
    mu = _as_measure(mu)
    xs, upper = _ordered(_input(x, mu.n, unit=True))
    return float(np.max(xs * mu.values[upper]))


@lru_cache(maxsize=None)
def _membership(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


def _subset_min(x: np.ndarray) -> np.ndarray:
    # min over A of x; +inf for the empty set
    inside = _membership(x.size)
    return np.where(inside, x[None, :], np.inf).min(axis=1)


def _subset_max_complement(x: np.ndarray) -> np.ndarray:
    # max over N \ A of x; 0 when the complement is empty
    inside = _membership(x.size)
    return np.where(inside, -np.inf, x[None, :]).max(axis=1).clip(min=0.0)


def choquet_basis(mu: FuzzyMeasure, x) -> float:
    """Choquet integral as ``sum_A mu(A) * max(0, min_A x - max_{N\\A} x)``."""
    mu = _as_measure(mu)
    arr = _input(x, mu.n, unit=False)
    lo = _subset_min(arr)
    hi = _subset_max_complement(arr)
    basis = np.maximum(0.0, lo[1:] - hi[1:])
    return float(np.dot(mu.values[1:], basis))


def sugeno_basis(mu: FuzzyMeasure, x) -> float:
    """Sugeno integral as ``max_A min(mu(A), min_A x)``."""
    mu = _as_measure(mu)
    arr = _input(x, mu.n, unit=True)
    return float(np.max(np.minimum(mu.values[1:], _subset_min(arr)[1:])))


def pan_basis(mu: FuzzyMeasure, x) -> float:
    """Pan integral as ``max_A mu(A) * min_A x``."""
    mu = _as_measure(mu)
    arr = _input(x, mu.n, unit=True)
    return float(np.max(mu.values[1:] * _subset_min(arr)[1:]))


INTEGRALS = {"choquet": choquet, "sugeno": sugeno, "pan": pan}
BASIS_INTEGRALS = {"choquet": choquet_basis, "sugeno": sugeno_basis, "pan": pan_basis}


def choquet_coefficients(x, n: int) -> np.ndarray:
    """Weights ``w`` with ``choquet(mu, x) == w @ mu.values`` for every ``mu``."""
    xs, upper = _ordered(_input(x, n, unit=False))
    w = np.zeros(1 << n)
    np.add.at(w, upper, np.diff(xs, prepend=0.0))
    return w
