"""Checkers and constructors for special families of capacities.

Covers k-additive, k-tolerant/intolerant, k-maxitive/minitive,
k-interactive and p-symmetric measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from fmgraph.exceptions import AmbiguityError, InfeasibleConstructionError
from fmgraph.lattice import (
    DEFAULT_TOL,
    FuzzyMeasure,
    SetFunction,
    _as_measure,
    cardinalities,
    covering_edges,
    members,
)
from fmgraph.transforms import mobius


@dataclass(frozen=True)
class PartitionEncoding:
    """Indifference blocks and the per-subset count vectors ``b_S``.

    ``vectors[S, i] = |S & blocks[i]|``.
    """

    blocks: tuple[int, ...]
    vectors: np.ndarray

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def coefficient_count(self) -> int:
        """Number of free values a measure with this basis needs."""
        return math.prod(len(members(b)) + 1 for b in self.blocks)


@dataclass(frozen=True)
class FamilyReport:
    additivity_order: int
    maxitive_order: int
    minitive_order: int
    tolerant_order: Optional[int]
    intolerant_order: Optional[int]
    interactive: Optional[tuple[int, float]]
    symmetry_p: int
    basis: tuple[int, ...]


def additivity_order(mu, tol: float = DEFAULT_TOL) -> int:
    """Largest cardinality carrying Möbius mass above ``tol`` (at least 1)."""
    m = mobius(_as_measure(mu)).values.values
    card = cardinalities(len(m).bit_length() - 1)
    heavy = card[np.abs(m) > tol]
    return max(1, int(heavy.max())) if heavy.size else 1


def is_k_additive(mu, k: int, tol: float = DEFAULT_TOL) -> bool:
    return additivity_order(mu, tol) == k


def _check_k(k: int, lo: int, hi: int) -> None:
    if not lo <= k <= hi:
        raise ValueError(f"k must lie in [{lo}, {hi}], got {k}")


def is_k_tolerant(mu, k: int, tol: float = DEFAULT_TOL) -> bool:
    """``mu(A) = 1`` whenever ``|A| >= k`` and some ``|B| = k-1`` has ``mu(B) != 1``."""
    mu = _as_measure(mu)
    _check_k(k, 1, mu.n)
    card = cardinalities(mu.n)
    v = mu.values
    return bool(np.all(v[card >= k] >= 1 - tol) and np.any(v[card == k - 1] < 1 - tol))


def is_k_intolerant(mu, k: int, tol: float = DEFAULT_TOL) -> bool:
    """``mu(A) = 0`` whenever ``|A| <= n-k`` and some ``|B| = n-k+1`` has ``mu(B) != 0``."""
    mu = _as_measure(mu)
    _check_k(k, 1, mu.n)
    card = cardinalities(mu.n)
    v = mu.values
    return bool(np.all(v[card <= mu.n - k] <= tol) and np.any(v[card == mu.n - k + 1] > tol))


def tolerant_order(mu, tol: float = DEFAULT_TOL) -> Optional[int]:
    mu = _as_measure(mu)
    return next((k for k in range(1, mu.n + 1) if is_k_tolerant(mu, k, tol)), None)


def intolerant_order(mu, tol: float = DEFAULT_TOL) -> Optional[int]:
    mu = _as_measure(mu)
    return next((k for k in range(1, mu.n + 1) if is_k_intolerant(mu, k, tol)), None)


def _best_lower_cover(mu: SetFunction) -> np.ndarray:
    # max over proper subsets == max over subsets of size |A| - 1 (monotone)
    lower, upper, _ = covering_edges(mu.n)
    out = np.full(len(mu), -np.inf)
    np.maximum.at(out, upper, mu.values[lower])
    return out


def _best_upper_cover(mu: SetFunction) -> np.ndarray:
    lower, upper, _ = covering_edges(mu.n)
    out = np.full(len(mu), np.inf)
    np.minimum.at(out, lower, mu.values[upper])
    return out


def is_k_maxitive(mu, k: int, tol: float = DEFAULT_TOL) -> bool:
    """``mu(A)`` equals the max over its proper subsets for every ``|A| >= k+1``."""
    mu = _as_measure(mu)
    _check_k(k, 1, mu.n - 1)
    card = cardinalities(mu.n)
    sel = card >= k + 1
    return bool(np.all(np.abs(mu.values[sel] - _best_lower_cover(mu)[sel]) <= tol))


def is_k_minitive(mu, k: int, tol: float = DEFAULT_TOL) -> bool:
    """``mu(A)`` equals the min over its proper supersets for every ``|A| <= n-k-1``."""
    mu = _as_measure(mu)
    _check_k(k, 1, mu.n - 1)
    card = cardinalities(mu.n)
    sel = card <= mu.n - k - 1
    return bool(np.all(np.abs(mu.values[sel] - _best_upper_cover(mu)[sel]) <= tol))


def maxitive_order(mu, tol: float = DEFAULT_TOL) -> int:
    """Smallest ``k`` in ``1..n-1`` with ``mu`` k-maxitive; ``n`` when none is.

    ``n`` is the vacuous case: every measure is n-maxitive.
    """
    mu = _as_measure(mu)
    return next((k for k in range(1, mu.n) if is_k_maxitive(mu, k, tol)), mu.n)


def minitive_order(mu, tol: float = DEFAULT_TOL) -> int:
    """Smallest ``k`` in ``1..n-1`` with ``mu`` k-minitive; ``n`` when none is."""
    mu = _as_measure(mu)
    return next((k for k in range(1, mu.n) if is_k_minitive(mu, k, tol)), mu.n)


def make_k_interactive(lower, k: int, K: float, tol: float = DEFAULT_TOL) -> FuzzyMeasure:
    """Complete a capacity given on levels ``0..k`` as a k-interactive measure.

    Levels above ``k`` are set to ``K + (a-k-1)/(n-k-1) * (1-K)`` where
    ``a = |A|``; entries of ``lower`` above level ``k`` are ignored.

    Args:
        lower: Table of length ``2**n`` (or a SetFunction); only levels
            ``<= k`` are read.
        k: Last freely specified level, ``0 <= k <= n-2``.
        K: Common value of every ``(k+1)``-subset, in ``[0, 1]``.

    Raises:
        InfeasibleConstructionError: A level-``k`` value exceeds ``K``.
        ValidationError: The lower part itself is not monotone.
    """
    vals = np.array(lower.values if isinstance(lower, SetFunction) else lower, dtype=float).ravel()
    n = vals.size.bit_length() - 1
    if vals.size != 1 << n:
        raise ValueError("table length must be a power of two")
    _check_k(k, 0, n - 2)
    if not 0.0 <= K <= 1.0:
        raise ValueError(f"K must lie in [0, 1], got {K}")
    card = cardinalities(n)
    top = vals[card == k]
    if np.any(top > K + tol):
        raise InfeasibleConstructionError(f"level-{k} values reach {top.max():.6g}, above K = {K:.6g}")
    span = n - k - 1
    for a in range(k + 1, n + 1):
        vals[card == a] = K + (a - k - 1) / span * (1 - K)
    return FuzzyMeasure(vals, tol=tol)


def is_k_interactive(mu, k: int, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Return ``K`` when levels above ``k`` follow the k-interactive formula, else None."""
    mu = _as_measure(mu)
    _check_k(k, 0, mu.n - 2)
    card = cardinalities(mu.n)
    v = mu.values
    first = v[card == k + 1]
    K = float(first.mean())
    span = mu.n - k - 1
    for a in range(k + 1, mu.n + 1):
        target = K + (a - k - 1) / span * (1 - K)
        if np.any(np.abs(v[card == a] - target) > tol):
            return None
    return K


def _exchangeable(v: np.ndarray, n: int, i: int, j: int, tol: float) -> bool:
    bi, bj = 1 << i, 1 << j
    masks = np.arange(1 << n)
    c = masks[(masks & (bi | bj)) == 0]
    return bool(np.all(np.abs(v[c | bi] - v[c | bj]) <= tol))


def encode_partition(blocks, n: int) -> PartitionEncoding:
    blocks = tuple(int(b) for b in blocks)
    union = 0
    for b in blocks:
        if b & union:
            raise ValueError("blocks must be pairwise disjoint")
        union |= b
    if union != (1 << n) - 1:
        raise ValueError("blocks must cover every criterion")
    masks = np.arange(1 << n)
    vectors = np.zeros((1 << n, len(blocks)), dtype=np.int64)
    for col, b in enumerate(blocks):
        common = masks & b
        for i in range(n):
            vectors[:, col] += (common >> i) & 1
    vectors.flags.writeable = False
    return PartitionEncoding(blocks, vectors)


def depends_only_on_counts(mu, enc: PartitionEncoding, tol: float = DEFAULT_TOL) -> bool:
    """True when ``mu(S)`` is a function of ``b_S`` alone (within ``tol``)."""
    v = _as_measure(mu).values
    groups: dict[tuple, list[float]] = {}
    for s, key in enumerate(map(tuple, enc.vectors.tolist())):
        groups.setdefault(key, []).append(v[s])
    return all(max(g) - min(g) <= tol for g in groups.values())


def _conflict(ex: np.ndarray, x: int, y: int) -> tuple[int, int, int]:
    # shortest exchange path x -> y, then the first vertex not exchangeable with x
    prev = {x: None}
    queue = [x]
    while queue and y not in prev:
        nxt = []
        for u in queue:
            for w in np.nonzero(ex[u])[0].tolist():
                if w not in prev:
                    prev[w] = u
                    nxt.append(w)
        queue = nxt
    path = [y]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()
    t = next(t for t in range(2, len(path)) if not ex[x, path[t]])
    return x, path[t - 1], path[t]


def indifference_partition(mu, tol: float = DEFAULT_TOL) -> PartitionEncoding:
    """Coarsest partition of ``N`` into subsets of indifference.

    Criteria ``i`` and ``j`` are merged when swapping them never changes the
    measure; blocks are the resulting classes, ordered by smallest member.

    Raises:
        AmbiguityError: Pairwise exchangeability is not transitive within
            ``tol``, or the recovered blocks fail the full definition.
    """
    mu = _as_measure(mu)
    n = mu.n
    v = mu.values
    ex = np.zeros((n, n), dtype=bool)
    for i in range(n):
        ex[i, i] = True
        for j in range(i + 1, n):
            ex[i, j] = ex[j, i] = _exchangeable(v, n, i, j, tol)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if ex[i, j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    classes: dict[int, int] = {}
    for i in range(n):
        classes[find(i)] = classes.get(find(i), 0) | (1 << i)
    blocks = sorted(classes.values(), key=lambda b: (b & -b))

    for b in blocks:
        elems = [e - 1 for e in members(b)]
        for x in elems:
            for y in elems:
                if x < y and not ex[x, y]:
                    raise AmbiguityError(
                        "pairwise exchangeability is not transitive for criteria %d, %d, %d"
                        % tuple(c + 1 for c in _conflict(ex, x, y)),
                        tuple(c + 1 for c in _conflict(ex, x, y)),
                    )

    enc = encode_partition(blocks, n)
    if not depends_only_on_counts(mu, enc, tol):
        raise AmbiguityError("recovered blocks do not determine the measure by cardinalities")
    return enc


def family_report(mu, tol: float = DEFAULT_TOL) -> FamilyReport:
    mu = _as_measure(mu)
    interactive = None
    for k in range(0, mu.n - 1):
        K = is_k_interactive(mu, k, tol)
        if K is not None:
            interactive = (k, K)
            break
    try:
        enc = indifference_partition(mu, tol)
        p, basis = enc.p, enc.blocks
    except AmbiguityError:
        p, basis = mu.n, tuple(1 << i for i in range(mu.n))
    return FamilyReport(
        additivity_order=additivity_order(mu, tol),
        maxitive_order=maxitive_order(mu, tol),
        minitive_order=minitive_order(mu, tol),
        tolerant_order=tolerant_order(mu, tol),
        intolerant_order=intolerant_order(mu, tol),
        interactive=interactive,
        symmetry_p=p,
        basis=basis,
    )


__all__ = [
    "FamilyReport",
    "PartitionEncoding",
    "additivity_order",
    "depends_only_on_counts",
    "encode_partition",
    "family_report",
    "indifference_partition",
    "intolerant_order",
    "is_k_additive",
    "is_k_interactive",
    "is_k_intolerant",
    "is_k_maxitive",
    "is_k_minitive",
    "is_k_tolerant",
    "make_k_interactive",
    "maxitive_order",
    "minitive_order",
    "tolerant_order",
]
