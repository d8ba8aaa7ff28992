"""Subset bitmasks, the set-function value types and elementary predicates.

Subsets of ``N = {1, ..., n}`` are encoded as integer bitmasks: bit ``i - 1``
is set when criterion ``i`` belongs to the subset.  A set function is stored
as a dense table of ``2**n`` floats indexed by that mask, so ``values[0]`` is
the value of the empty set and ``values[-1]`` the value of ``N``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from fmgraph.exceptions import CapacityError, ValidationError

DEFAULT_TOL = 1e-9
MIN_N = 2
MAX_N = 12
MAX_CHAIN_N = 8

SubsetLike = Union[int, Iterable[int]]


# ---------------------------------------------------------------------------
# bitmask helpers
# ---------------------------------------------------------------------------


def popcount(mask: int) -> int:
    return int(mask).bit_count()


def mask_of(criteria: Iterable[int]) -> int:
    """Bitmask of a collection of 1-based criterion indices."""
    mask = 0
    for i in criteria:
        i = int(i)
        if i < 1:
            raise ValueError(f"criteria are numbered from 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def members(mask: int) -> tuple[int, ...]:
    """1-based criteria contained in ``mask``, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def subset_label(mask: int, mode: str = "canonical") -> str:
    """Human-readable subset name.

    ``canonical`` gives ``{1,3}``; ``figure`` follows the lattice-figure
    convention: ``Empty set``, ``1`` for singletons and ``c(1, 3)`` otherwise.
    """
    elems = members(mask)
    if mode == "canonical":
        return "{" + ",".join(str(i) for i in elems) + "}"
    if mode == "figure":
        if not elems:
            return "Empty set"
        if len(elems) == 1:
            return str(elems[0])
        return "c(" + ", ".join(str(i) for i in elems) + ")"
    raise ValueError(f"unknown label mode {mode!r}")


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=None)
def cardinalities(n: int) -> np.ndarray:
    """``|A|`` for every mask ``A`` of an ``n``-element universe."""
    masks = np.arange(1 << n)
    card = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        card += (masks >> i) & 1
    return _readonly(card)


@lru_cache(maxsize=None)
def covering_edges(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All covering pairs ``(A, A | {i})`` of the Boolean lattice.

    Returns ``(lower, upper, criterion)`` arrays of length ``n * 2**(n-1)``,
    ordered by criterion, then by lower mask.  ``criterion`` is 1-based.
    """
    masks = np.arange(1 << n)
    lower, upper, crit = [], [], []
    for i in range(n):
        bit = 1 << i
        lo = masks[(masks & bit) == 0]
        lower.append(lo)
        upper.append(lo | bit)
        crit.append(np.full(lo.size, i + 1))
    return (
        _readonly(np.concatenate(lower)),
        _readonly(np.concatenate(upper)),
        _readonly(np.concatenate(crit)),
    )


@lru_cache(maxsize=None)
def disjoint_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Every ordered pair ``(A, B)`` with ``A & B == 0`` (``3**n`` pairs)."""
    masks = np.arange(1 << n)
    a_list, b_list = [], []
    for a in range(1 << n):
        bs = masks[(masks & a) == 0]
        a_list.append(np.full(bs.size, a))
        b_list.append(bs)
    return _readonly(np.concatenate(a_list)), _readonly(np.concatenate(b_list))


def _check_n(n: int) -> int:
    n = int(n)
    if not MIN_N <= n <= MAX_N:
        raise CapacityError(f"universe size must lie in [{MIN_N}, {MAX_N}], got {n}")
    return n


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


class SetFunction:
    """A real-valued function on the power set of ``{1, ..., n}``.

    Values are copied on construction and the backing array is read-only,
    so instances can be shared freely.

    Args:
        values: Dense table of length ``2**n`` in ascending bitmask order.
    """

    __slots__ = ("_values", "_n")

    def __init__(self, values: Sequence[float] | np.ndarray):
        arr = np.array(values, dtype=float).ravel()
        size = arr.size
        if size < 1 or size & (size - 1):
            raise ValueError(f"table length must be a power of two, got {size}")
        n = _check_n(size.bit_length() - 1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("set-function values must be finite")
        self._n = n
        self._values = _readonly(arr)

    @property
    def n(self) -> int:
        return self._n

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def full(self) -> int:
        return full_mask(self._n)

    def _index(self, key: SubsetLike) -> int:
        if isinstance(key, (int, np.integer)):
            idx = int(key)
        else:
            idx = mask_of(key)
        if not 0 <= idx <= self.full:
            raise IndexError(f"subset {key!r} outside a universe of size {self._n}")
        return idx

    def __getitem__(self, key: SubsetLike) -> float:
        return float(self._values[self._index(key)])

    def __len__(self) -> int:
        return self._values.size

    def __iter__(self) -> Iterator[float]:
        return iter(self._values.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._values, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._values, other._values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self._n}, values={np.array2string(self._values, precision=4)})"

    def items(self) -> Iterator[tuple[int, float]]:
        """Iterate ``(mask, value)`` pairs."""
        return zip(range(len(self)), self._values.tolist())


class FuzzyMeasure(SetFunction):
    """A normalized monotone set function (capacity).

    Boundary values within ``tol`` of 0 and 1 are snapped exactly, then the
    table is validated unless ``validate=False``.

    Raises:
        ValidationError: When validation is requested and fails.
    """

    __slots__ = ()

    def __init__(self, values, tol: float = DEFAULT_TOL, validate: bool = True):
        arr = np.array(values, dtype=float).ravel()
        if arr.size >= 2:
            if abs(arr[0]) <= tol:
                arr[0] = 0.0
            if abs(arr[-1] - 1.0) <= tol:
                arr[-1] = 1.0
        super().__init__(arr)
        if validate:
            report = validate_set_function(self, tol)
            if not report.ok:
                raise ValidationError(report.describe(), report)

    @classmethod
    def from_subsets(cls, n: int, mapping: dict, **kwargs) -> "FuzzyMeasure":
        """Build from ``{subset: value}``; unspecified subsets are 0, ``N`` is 1.

        Subsets may be given as masks or as iterables of 1-based criteria.
        """
        n = _check_n(n)
        vals = np.zeros(1 << n)
        vals[-1] = 1.0
        for key, v in mapping.items():
            idx = key if isinstance(key, (int, np.integer)) else mask_of(key)
            vals[int(idx)] = float(v)
        return cls(vals, **kwargs)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_set_function`.

    ``boundary_violations`` holds ``(mask, value, expected)`` triples and
    ``edge_violations`` holds ``(lower_mask, criterion, deficit)`` triples,
    where ``deficit = mu(A) - mu(A | {i}) > tol``.
    """

    boundary_violations: list = field(default_factory=list)
    edge_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.boundary_violations and not self.edge_violations

    def describe(self, limit: int = 5) -> str:
        if self.ok:
            return "valid fuzzy measure"
        parts = []
        for mask, value, expected in self.boundary_violations:
            parts.append(f"boundary {subset_label(mask)} = {value:.6g}, expected {expected:g}")
        for lower, crit, deficit in self.edge_violations[:limit]:
            parts.append(f"edge {subset_label(lower)} -> +{crit} decreases by {deficit:.6g}")
        extra = len(self.edge_violations) - limit
        if extra > 0:
            parts.append(f"... and {extra} more edge violations")
        return "invalid fuzzy measure: " + "; ".join(parts)


def validate_set_function(sf: SetFunction, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check boundary and monotonicity conditions over the covering edges.

    Monotonicity over covering edges implies it for all nested pairs by
    transitivity.  Never raises; inspect ``report.ok``.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    v = sf.values
    boundary = []
    if abs(v[0]) > tol:
        boundary.append((0, float(v[0]), 0.0))
    if abs(v[-1] - 1.0) > tol:
        boundary.append((sf.full, float(v[-1]), 1.0))
    lower, upper, crit = covering_edges(sf.n)
    heights = v[upper] - v[lower]
    bad = np.nonzero(heights < -tol)[0]
    edges = [(int(lower[k]), int(crit[k]), float(-heights[k])) for k in bad]
    return ValidationReport(boundary, edges)


validate = validate_set_function


def _as_measure(mu) -> FuzzyMeasure:
    if isinstance(mu, FuzzyMeasure):
        return mu
    if isinstance(mu, SetFunction):
        return FuzzyMeasure(mu.values)
    return FuzzyMeasure(mu)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def dual(mu: FuzzyMeasure) -> FuzzyMeasure:
    """``dual(A) = mu(N) - mu(N \\ A)``.

    The complement of mask ``A`` is ``full ^ A``, i.e. the reversed table.
    """
    mu = _as_measure(mu)
    v = mu.values
    return FuzzyMeasure(v[-1] - v[::-1])


def marginal(mu: SetFunction, a: SubsetLike, i: int) -> float:
    """Marginal contribution ``mu(A | {i}) - mu(A)`` of criterion ``i``."""
    idx = mu._index(a)
    if not 1 <= i <= mu.n:
        raise ValueError(f"criterion {i} outside 1..{mu.n}")
    bit = 1 << (i - 1)
    if idx & bit:
        raise ValueError(f"criterion {i} already belongs to {subset_label(idx)}")
    return float(mu.values[idx | bit] - mu.values[idx])


def edge_heights(mu: SetFunction) -> np.ndarray:
    """Marginal contributions along :func:`covering_edges`, same order."""
    lower, upper, _ = covering_edges(mu.n)
    return mu.values[upper] - mu.values[lower]


def is_symmetric(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    card = cardinalities(mu.n)
    for s in range(mu.n + 1):
        level = mu.values[card == s]
        if level.max() - level.min() > tol:
            return False
    return True


def _disjoint_gap(mu: SetFunction) -> np.ndarray:
    a, b = disjoint_pairs(mu.n)
    v = mu.values
    return v[a | b] - v[a] - v[b]


def is_additive(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(np.abs(_disjoint_gap(mu)) <= tol))


def is_superadditive(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(_disjoint_gap(mu) >= -tol))


def is_subadditive(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(_disjoint_gap(mu) <= tol))


@lru_cache(maxsize=None)
def _square_terms(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    # (A, A+i, A+j, A+i+j) for all i < j and A avoiding both
    masks = np.arange(1 << n)
    base, with_i, with_j, with_ij = [], [], [], []
    for i, j in itertools.combinations(range(n), 2):
        bi, bj = 1 << i, 1 << j
        a = masks[(masks & (bi | bj)) == 0]
        base.append(a)
        with_i.append(a | bi)
        with_j.append(a | bj)
        with_ij.append(a | bi | bj)
    return tuple(_readonly(np.concatenate(x)) for x in (base, with_i, with_j, with_ij))


def modularity_gaps(mu: SetFunction) -> np.ndarray:
    """``mu(A+i+j) + mu(A) - mu(A+i) - mu(A+j)`` over all local squares."""
    a, ai, aj, aij = _square_terms(mu.n)
    v = mu.values
    return v[aij] + v[a] - v[ai] - v[aj]


def is_supermodular(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(modularity_gaps(mu) >= -tol))


def is_submodular(mu: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(modularity_gaps(mu) <= tol))


# ---------------------------------------------------------------------------
# canonical measures
# ---------------------------------------------------------------------------


def min_measure(n: int) -> FuzzyMeasure:
    n = _check_n(n)
    vals = np.zeros(1 << n)
    vals[-1] = 1.0
    return FuzzyMeasure(vals)


def max_measure(n: int) -> FuzzyMeasure:
    n = _check_n(n)
    vals = np.ones(1 << n)
    vals[0] = 0.0
    return FuzzyMeasure(vals)


def additive_from_weights(weights: Sequence[float], tol: float = DEFAULT_TOL) -> FuzzyMeasure:
    """Additive measure ``mu(A) = sum of w_i over A``.

    Raises:
        ValueError: Negative weights or a sum differing from 1 by more than ``tol``.
    """
    w = np.asarray(weights, dtype=float).ravel()
    n = _check_n(w.size)
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    total = math.fsum(w.tolist())
    if abs(total - 1.0) > tol:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    masks = np.arange(1 << n)
    vals = np.zeros(1 << n)
    for i in range(n):
        vals += np.where((masks >> i) & 1, w[i], 0.0)
    return FuzzyMeasure(vals, tol=tol)


def uniform_additive(n: int) -> FuzzyMeasure:
    n = _check_n(n)
    return FuzzyMeasure(cardinalities(n) / n)


def maximal_chains(n: int) -> Iterator[tuple[int, ...]]:
    """Yield every maximal chain ``0 = A_0 < A_1 < ... < A_n = N`` once.

    Chains are produced in lexicographic order of the inducing permutation.

    Raises:
        CapacityError: ``n`` above the enumeration limit.
    """
    n = int(n)
    if n > MAX_CHAIN_N:
        raise CapacityError(f"chain enumeration limited to n <= {MAX_CHAIN_N} ({math.factorial(n)} chains requested)")
    if n < 1:
        raise ValueError("n must be positive")
    for perm in itertools.permutations(range(n)):
        chain = [0]
        for i in perm:
            chain.append(chain[-1] | (1 << i))
        yield tuple(chain)
