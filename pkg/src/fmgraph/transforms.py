"""Linear transforms and interaction indices of a capacity.

All transforms return :class:`IndexVector` objects wrapping a dense
:class:`~fmgraph.lattice.SetFunction` over the same universe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from fmgraph.exceptions import ValidationError
from fmgraph.lattice import (
    DEFAULT_TOL,
    FuzzyMeasure,
    SetFunction,
    _as_measure,
    cardinalities,
    covering_edges,
)

INDEX_KINDS = ("mobius", "shapley_comprehensive", "nonadditivity", "nonmodularity")


@dataclass(frozen=True)
class IndexVector:
    """A named index attached to every subset."""

    kind: str
    values: SetFunction

    def __post_init__(self):
        if self.kind not in INDEX_KINDS:
            raise ValueError(f"unknown index kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.values.n

    def __getitem__(self, key) -> float:
        return self.values[key]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values.values, dtype=dtype)


@dataclass(frozen=True)
class MeasureSummary:
    entropy: float
    orness: float
    level_means: tuple[float, ...]
    flags: dict | None = None


def _fast_mobius(v: np.ndarray, n: int) -> np.ndarray:
    out = np.array(v, dtype=float)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return out


def _fast_zeta(v: np.ndarray, n: int) -> np.ndarray:
    out = np.array(v, dtype=float)
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return out


def mobius(mu) -> IndexVector:
    """Möbius representation ``m(A) = sum_{C <= A} (-1)**|A \\ C| mu(C)``.

    Computed with the in-place butterfly, one pass per criterion.
    """
    sf = mu if isinstance(mu, SetFunction) else _as_measure(mu)
    return IndexVector("mobius", SetFunction(_fast_mobius(sf.values, sf.n)))


def zeta(m, tol: float = DEFAULT_TOL) -> FuzzyMeasure:
    """Inverse of :func:`mobius`: ``mu(A) = sum_{C <= A} m(C)``.

    Raises:
        ValidationError: The image is not a fuzzy measure.
    """
    if isinstance(m, IndexVector):
        if m.kind != "mobius":
            raise ValueError(f"zeta expects a Möbius vector, got {m.kind!r}")
        sf = m.values
    elif isinstance(m, SetFunction):
        sf = m
    else:
        sf = SetFunction(m)
    return FuzzyMeasure(_fast_zeta(sf.values, sf.n), tol=tol)


def zeta_set_function(m) -> SetFunction:
    """Zeta transform without the fuzzy-measure check."""
    sf = m.values if isinstance(m, IndexVector) else (m if isinstance(m, SetFunction) else SetFunction(m))
    return SetFunction(_fast_zeta(sf.values, sf.n))


@lru_cache(maxsize=None)
def _comprehensive_plan(n: int):
    # for each A: subsets B of N \ A and their weights 1/((n-a+1) C(n-a, |B|))
    masks = np.arange(1 << n)
    card = cardinalities(n)
    plan = []
    for a in range(1 << n):
        b = masks[(masks & a) == 0]
        rest = n - int(card[a])
        w = np.array([1.0 / ((rest + 1) * math.comb(rest, int(k))) for k in card[b]])
        plan.append((b, w))
    return plan


def shapley_comprehensive(mu) -> IndexVector:
    """Comprehensive importance of every coalition.

    ``k(A) = sum_{B <= N \\ A} [mu(A | B) - mu(B)] / ((n-|A|+1) * C(n-|A|, |B|))``.
    On singletons this is the Shapley value.
    """
    mu = _as_measure(mu)
    v = mu.values
    out = np.empty_like(v)
    for a, (b, w) in enumerate(_comprehensive_plan(mu.n)):
        out[a] = math.fsum((w * (v[a | b] - v[b])).tolist())
    return IndexVector("shapley_comprehensive", SetFunction(out))


def shapley_values(mu) -> np.ndarray:
    """Shapley value of each criterion, in criterion order."""
    mu = _as_measure(mu)
    k = shapley_comprehensive(mu).values.values
    return np.array([k[1 << i] for i in range(mu.n)])


@lru_cache(maxsize=None)
def _proper_submasks(n: int) -> list[np.ndarray]:
    out = []
    for a in range(1 << n):
        subs = []
        s = (a - 1) & a
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & a
        out.append(np.array(subs[:-1] if a == 0 else subs, dtype=np.int64))
    return out


def nonadditivity_index(mu) -> IndexVector:
    """``n(A) = mu(A) - sum_{C < A} mu(C) / (2**(|A|-1) - 1)`` for ``|A| >= 2``.

    Singletons and the empty set get 0.  Each entry is an exactly rounded sum.
    """
    mu = _as_measure(mu)
    v = mu.values
    card = cardinalities(mu.n)
    subs = _proper_submasks(mu.n)
    out = np.zeros_like(v)
    for a in range(v.size):
        if card[a] < 2:
            continue
        denom = 2.0 ** (int(card[a]) - 1) - 1.0
        out[a] = math.fsum([v[a]] + (-v[subs[a]] / denom).tolist())
    return IndexVector("nonadditivity", SetFunction(out))


def nonmodularity_index(mu) -> IndexVector:
    """``d(A) = mu(A) - mean over i in A of [mu({i}) + mu(A \\ {i})]``."""
    mu = _as_measure(mu)
    v = mu.values
    out = np.zeros_like(v)
    for a in range(1, v.size):
        elems = [1 << i for i in range(mu.n) if a >> i & 1]
        k = len(elems)
        terms = [v[a]]
        for bit in elems:
            terms.append(-v[bit] / k)
            terms.append(-v[a ^ bit] / k)
        out[a] = math.fsum(terms)
    return IndexVector("nonmodularity", SetFunction(out))


def level_means(mu) -> np.ndarray:
    """Mean of ``mu`` over each cardinality level ``0..n``."""
    sf = mu if isinstance(mu, SetFunction) else _as_measure(mu)
    card = cardinalities(sf.n)
    return np.array([sf.values[card == s].mean() for s in range(sf.n + 1)])


def orness(mu) -> float:
    """Orness as the average of the interior level means.

    Equal to ``(E[C(x)] - E[min x]) / (E[max x] - E[min x])`` for i.i.d.
    uniform inputs; 0 for the min measure, 1 for the max measure.
    """
    mu = _as_measure(mu)
    m = level_means(mu)
    return float(math.fsum(m[1:-1].tolist()) / (mu.n - 1))


def entropy(mu, tol: float = DEFAULT_TOL) -> float:
    """Permutation-weighted entropy of marginal contributions (natural log).

    ``H = sum_i sum_{A <= N\\{i}} (n-|A|-1)! |A|! / n! * h(mu(A+i) - mu(A))``
    with ``h(x) = -x ln x``.  Ranges over ``[0, ln n]``.

    Raises:
        ValidationError: A marginal is negative beyond ``tol``.
    """
    mu = _as_measure(mu)
    n = mu.n
    lower, upper, _ = covering_edges(n)
    delta = mu.values[upper] - mu.values[lower]
    if np.any(delta < -tol):
        raise ValidationError("negative marginal contribution in entropy")
    delta = np.clip(delta, 0.0, None)
    s = cardinalities(n)[lower]
    gamma = np.array([math.factorial(n - k - 1) * math.factorial(k) / math.factorial(n) for k in range(n)])[s]
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(delta > 0, -delta * np.log(np.where(delta > 0, delta, 1.0)), 0.0)
    return float(math.fsum((gamma * h).tolist()))


def summarize(mu) -> MeasureSummary:
    """Entropy, orness and level means (no family flags)."""
    mu = _as_measure(mu)
    return MeasureSummary(entropy(mu), orness(mu), tuple(level_means(mu).tolist()))


def index_vector(mu, kind: str) -> IndexVector:
    """Dispatch on an index name from :data:`INDEX_KINDS`."""
    funcs = {
        "mobius": mobius,
        "shapley_comprehensive": shapley_comprehensive,
        "nonadditivity": nonadditivity_index,
        "nonmodularity": nonmodularity_index,
    }
    try:
        return funcs[kind](mu)
    except KeyError:
        raise ValueError(f"unknown index kind {kind!r}; expected one of {INDEX_KINDS}") from None
