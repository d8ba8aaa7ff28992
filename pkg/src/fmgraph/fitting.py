"""Least-absolute-deviation identification of a capacity from scored alternatives.

The model minimizes the total deviation between the Choquet integral of each
alternative and its desired overall evaluation, subject to the boundary and
monotonicity conditions.  A second solve breaks ties among deviation-optimal
capacities by minimizing the sum of all capacity values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from fmgraph.exceptions import FuzzyMeasureError, InfeasibleConstructionError
from fmgraph.integrals import choquet, choquet_coefficients
from fmgraph.lattice import DEFAULT_TOL, FuzzyMeasure, covering_edges, mask_of
from fmgraph.lp import LinearProgram, LpStatus, solve

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """``m`` alternatives scored on ``n`` criteria, with desired evaluations."""

    scores: np.ndarray
    desired: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        scores = np.atleast_2d(np.asarray(self.scores, dtype=float))
        desired = np.asarray(self.desired, dtype=float).ravel()
        if scores.shape[0] != desired.size:
            raise ValueError(f"{scores.shape[0]} score rows but {desired.size} desired values")
        labels = tuple(self.labels) or tuple(str(i + 1) for i in range(desired.size))
        if len(labels) != desired.size:
            raise ValueError("one label per alternative required")
        scores.flags.writeable = False
        desired.flags.writeable = False
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "desired", desired)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.scores.shape[1]

    @property
    def m(self) -> int:
        return self.scores.shape[0]

    def prefix(self, t: int) -> "Dataset":
        if not 1 <= t <= self.m:
            raise ValueError(f"prefix length must lie in [1, {self.m}], got {t}")
        return Dataset(self.scores[:t], self.desired[:t], self.labels[:t])


@dataclass(frozen=True)
class Normalization:
    """Affine map ``(v - offset) / scale`` applied to scores and evaluations."""

    offset: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("normalization scale must be positive")

    def apply(self, values) -> np.ndarray:
        return (np.asarray(values, dtype=float) - self.offset) / self.scale

    def invert(self, values) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.scale + self.offset

    def describe(self) -> str:
        return f"v -> (v - {self.offset:g}) / {self.scale:g}"


@dataclass(frozen=True)
class PreferenceRow:
    """Extra linear row over capacity values: ``sum coef[A] * mu(A) rel rhs``.

    Keys of ``coefficients`` are subset masks or iterables of criteria.
    """

    coefficients: dict
    relation: str
    rhs: float


@dataclass(frozen=True)
class FitResult:
    measure: FuzzyMeasure
    objective: float
    residuals: np.ndarray
    normalization: Normalization
    lp_objective: float = 0.0


@dataclass(frozen=True)
class FitTrace:
    rounds: tuple[FitResult, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.rounds)

    def __getitem__(self, t: int) -> FitResult:
        return self.rounds[t]

    def __iter__(self):
        return iter(self.rounds)


def default_normalization(dataset: Dataset) -> Normalization:
    """Global min/max of the partial scores, shared by scores and evaluations."""
    if dataset.m == 0:
        raise ValueError("empty dataset")
    lo = float(dataset.scores.min())
    hi = float(dataset.scores.max())
    if hi - lo <= 0:
        raise ValueError("partial scores have zero range")
    return Normalization(lo, hi - lo)


def _normalized(dataset: Dataset, norm: Normalization) -> tuple[np.ndarray, np.ndarray]:
    if dataset.m == 0:
        raise ValueError("empty dataset")
    x = norm.apply(dataset.scores)
    slack = 1e-12
    if np.any(x < -slack) or np.any(x > 1 + slack):
        raise ValueError("normalized partial scores must lie in [0, 1]")
    return np.clip(x, 0.0, 1.0), norm.apply(dataset.desired)


def build_lad_lp(dataset: Dataset, norm: Normalization, preferences: Sequence[PreferenceRow] = ()) -> LinearProgram:
    """Assemble the deviation-minimizing LP.

    Variables: ``mu(A)`` for the ``2**n - 2`` nonempty proper subsets (variable
    ``mask - 1``), then ``d+_t, d-_t`` for each alternative ``t``.  Rows: one
    ``>=`` per covering edge (``mu(empty) = 0`` and ``mu(N) = 1`` substituted),
    one equality per alternative, then any preference rows.
    """
    x, y = _normalized(dataset, norm)
    n, m = dataset.n, dataset.m
    full = (1 << n) - 1
    nmu = full - 1
    nv = nmu + 2 * m

    def var(mask: int) -> int:
        return mask - 1

    objective = np.zeros(nv)
    objective[nmu:] = 1.0
    upper = np.full(nv, np.inf)
    upper[:nmu] = 1.0
    lp = LinearProgram(objective, lower=np.zeros(nv), upper=upper)

    lower_m, upper_m, _ = covering_edges(n)
    for lo, hi in zip(lower_m.tolist(), upper_m.tolist()):
        row = np.zeros(nv)
        rhs = 0.0
        if hi == full:
            rhs -= 1.0
        else:
            row[var(hi)] += 1.0
        if lo != 0:
            row[var(lo)] -= 1.0
        lp.add_row(row, ">=", rhs)

    for t in range(m):
        w = choquet_coefficients(x[t], n)
        row = np.zeros(nv)
        row[:nmu] = w[1:full]
        row[nmu + 2 * t] = -1.0
        row[nmu + 2 * t + 1] = 1.0
        lp.add_row(row, "=", y[t] - w[full])

    for pref in preferences:
        row = np.zeros(nv)
        rhs = float(pref.rhs)
        for key, coef in pref.coefficients.items():
            mask = int(key) if isinstance(key, (int, np.integer)) else mask_of(key)
            if mask == full:
                rhs -= coef
            elif mask != 0:
                row[var(mask)] += coef
        lp.add_row(row, pref.relation, rhs)
    return lp


def fit(
    dataset: Dataset,
    norm: Optional[Normalization] = None,
    preferences: Sequence[PreferenceRow] = (),
    tol: float = DEFAULT_TOL,
) -> FitResult:
    """Fit a capacity by least absolute deviation with minimal-measure tie-break.

    Stage 1 finds the optimal total deviation ``z*``.  Stage 2 caps the total
    deviation at ``z*`` (``z* + tol`` if round-off makes that infeasible) and
    minimizes the sum of capacity values.
    """
    norm = norm or default_normalization(dataset)
    lp = build_lad_lp(dataset, norm, preferences)
    n, m = dataset.n, dataset.m
    nmu = (1 << n) - 2

    first = solve(lp, tol)
    if first.status is not LpStatus.OPTIMAL:
        if preferences:
            raise InfeasibleConstructionError(f"preference rows leave the deviation LP {first.status.value.lower()}")
        raise FuzzyMeasureError(f"internal error: deviation LP returned {first.status.value}")
    z_star = first.objective

    budget = np.zeros(lp.num_vars)
    budget[nmu:] = 1.0
    tie = None
    for slack in (0.0, tol):
        second = LinearProgram(np.r_[np.ones(nmu), np.zeros(2 * m)], list(lp.rows), lp.lower, lp.upper)
        second.add_row(budget, "<=", z_star + slack)
        tie = solve(second, tol)
        if tie.status is LpStatus.OPTIMAL:
            break
    if tie.status is not LpStatus.OPTIMAL:
        log.warning("tie-break LP returned %s; keeping the stage-1 vertex", tie.status.value)
        tie = first

    vals = np.empty(nmu + 2)
    vals[0], vals[-1] = 0.0, 1.0
    vals[1:-1] = np.clip(tie.x[:nmu], 0.0, 1.0)
    measure = FuzzyMeasure(vals, tol=tol)

    x, y = _normalized(dataset, norm)
    residuals = np.array([choquet(measure, xi) for xi in x]) - y
    return FitResult(measure, float(np.abs(residuals).sum()), residuals, norm, float(z_star))


def fit_incremental(
    dataset: Dataset,
    norm: Optional[Normalization] = None,
    preferences: Sequence[PreferenceRow] = (),
    tol: float = DEFAULT_TOL,
) -> FitTrace:
    """Round ``t`` fits alternatives ``1..t``; one round per alternative."""
    if dataset.m == 0:
        raise ValueError("empty dataset")
    norm = norm or default_normalization(dataset)
    rounds = []
    for t in range(1, dataset.m + 1):
        rounds.append(fit(dataset.prefix(t), norm, preferences, tol))
        log.info("round %d: objective %.3g", t, rounds[-1].objective)
    return FitTrace(tuple(rounds))
