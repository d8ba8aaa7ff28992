"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Small, dependency-free LP solver sized for capacity fitting (a few hundred
rows and columns at most).  Problems are stated as

    minimize    c @ x
    subject to  a_i @ x  (<= | = | >=)  b_i
                lower <= x <= upper

Finite upper bounds become explicit ``<=`` rows; there is no bounded-variable
simplex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from fmgraph.exceptions import SolverError

LP_TOL = 1e-9
RELATIONS = ("<=", "=", ">=")


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LinearProgram:
    """A minimization problem over ``len(objective)`` variables.

    Rows are ``(coefficients, relation, rhs)`` triples.  Bounds default to
    ``[0, +inf)``; pass ``-np.inf`` / ``np.inf`` for free directions.
    """

    objective: np.ndarray
    rows: list = field(default_factory=list)
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        nv = self.objective.size
        self.lower = np.zeros(nv) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.full(nv, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()

    @property
    def num_vars(self) -> int:
        return self.objective.size

    def add_row(self, coefficients, relation: str, rhs: float) -> None:
        self.rows.append((np.asarray(coefficients, dtype=float).ravel(), relation, float(rhs)))

    def matrix(self) -> tuple[np.ndarray, list[str], np.ndarray]:
        """Constraint matrix, relations and right-hand sides."""
        if not self.rows:
            return np.zeros((0, self.num_vars)), [], np.zeros(0)
        a = np.vstack([r[0] for r in self.rows])
        return a, [r[1] for r in self.rows], np.array([r[2] for r in self.rows])

    def check(self) -> None:
        """Raise ValueError on any dimension or content mismatch."""
        nv = self.num_vars
        if self.lower.size != nv or self.upper.size != nv:
            raise ValueError("bound vectors must match the variable count")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound above upper bound")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective coefficients must be finite")
        for k, (coef, rel, rhs) in enumerate(self.rows):
            if coef.size != nv:
                raise ValueError(f"row {k} has {coef.size} coefficients, expected {nv}")
            if rel not in RELATIONS:
                raise ValueError(f"row {k} has unknown relation {rel!r}")
            if not np.isfinite(rhs) or not np.all(np.isfinite(coef)):
                raise ValueError(f"row {k} has non-finite entries")


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: np.ndarray | None
    objective: float | None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Unbounded(Exception):
    pass


class _Tableau:
    """Rows ``T[:, :-1] y = T[:, -1]`` plus a reduced-cost row ``z``."""

    def __init__(self, table: np.ndarray, basis: list[int], tol: float, cap: int):
        self.t = table
        self.basis = basis
        self.tol = tol
        self.cap = cap
        self.iterations = 0
        self.z = np.zeros(table.shape[1])

    def set_costs(self, costs: np.ndarray) -> None:
        z = np.zeros(self.t.shape[1])
        z[: costs.size] = costs
        for i, b in enumerate(self.basis):
            if z[b] != 0.0:
                z -= z[b] * self.t[i]
        self.z = z

    def pivot(self, r: int, j: int) -> None:
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        self.z -= self.z[j] * t[r]
        self.basis[r] = j

    def run(self, allowed: np.ndarray) -> None:
        tol = self.tol
        while True:
            candidates = np.nonzero(allowed & (self.z[:-1] < -tol))[0]
            if candidates.size == 0:
                return
            j = int(candidates[0])
            col = self.t[:, j]
            rows = np.nonzero(col > tol)[0]
            if rows.size == 0:
                raise _Unbounded
            ratios = self.t[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + tol]
            r = int(min(tied, key=lambda i: self.basis[i]))
            self.pivot(r, j)
            self.iterations += 1
            if self.iterations > self.cap:
                raise SolverError(f"simplex exceeded {self.cap} iterations")


def solve(lp: LinearProgram, tol: float = LP_TOL) -> LpSolution:
    """Solve ``lp`` with the two-phase simplex method.

    Raises:
        ValueError: Malformed program.
        SolverError: Iteration cap ``50 * (rows + cols)`` exceeded, or an
            optimal point fails the post-hoc feasibility check.
    """
    lp.check()
    nv = lp.num_vars
    a_orig, rels, b_orig = lp.matrix()

    # x = shift + transform @ y with y >= 0
    cols = []
    shift = np.zeros(nv)
    bound_rows = []
    for j in range(nv):
        lo, hi = lp.lower[j], lp.upper[j]
        e = np.zeros(nv)
        e[j] = 1.0
        if np.isfinite(lo):
            shift[j] = lo
            cols.append(e)
            if np.isfinite(hi):
                bound_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            shift[j] = hi
            cols.append(-e)
        else:
            cols.append(e)
            cols.append(-e)
    transform = np.column_stack(cols) if cols else np.zeros((nv, 0))
    ny = transform.shape[1]

    a = a_orig @ transform if a_orig.size else np.zeros((0, ny))
    b = b_orig - (a_orig @ shift if a_orig.size else 0.0)
    rels = list(rels)
    extra = []
    for k, width in bound_rows:
        row = np.zeros(ny)
        row[k] = 1.0
        extra.append(row)
        b = np.append(b, width)
        rels.append("<=")
    if extra:
        a = np.vstack([a, np.vstack(extra)]) if a.size else np.vstack(extra)
    m = len(rels)
    a = a.reshape(m, ny)

    # flip rows to nonnegative rhs
    for i in range(m):
        if b[i] < 0:
            a[i] = -a[i]
            b[i] = -b[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]

    n_slack = sum(r != "=" for r in rels)
    n_art = sum(r != "<=" for r in rels)
    width = ny + n_slack + n_art
    table = np.zeros((m, width + 1))
    table[:, :ny] = a
    table[:, -1] = b
    basis = []
    s = ny
    art = ny + n_slack
    art_cols = []
    for i, rel in enumerate(rels):
        if rel == "<=":
            table[i, s] = 1.0
            basis.append(s)
            s += 1
        elif rel == ">=":
            table[i, s] = -1.0
            s += 1
            table[i, art] = 1.0
            basis.append(art)
            art_cols.append(art)
            art += 1
        else:
            table[i, art] = 1.0
            basis.append(art)
            art_cols.append(art)
            art += 1

    cap = 50 * (m + width)
    tab = _Tableau(table, basis, tol, cap)
    is_art = np.zeros(width, dtype=bool)
    is_art[art_cols] = True

    if n_art:
        tab.set_costs(is_art.astype(float))
        try:
            tab.run(np.ones(width, dtype=bool))
        except _Unbounded:  # pragma: no cover - phase I is bounded below by 0
            raise SolverError("phase I reported unboundedness")
        infeasibility = -tab.z[-1]
        if infeasibility > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution(LpStatus.INFEASIBLE, None, None, tab.iterations)
        # pivot leftover zero-level artificials out, dropping redundant rows
        keep = []
        for i in range(tab.t.shape[0]):
            if not is_art[tab.basis[i]]:
                keep.append(i)
                continue
            nz = np.nonzero((np.abs(tab.t[i, :width]) > tol) & ~is_art)[0]
            if nz.size:
                tab.pivot(i, int(nz[0]))
                keep.append(i)
        tab.t = tab.t[keep]
        tab.basis = [tab.basis[i] for i in keep]

    costs = np.zeros(width)
    costs[:ny] = lp.objective @ transform
    tab.set_costs(costs)
    try:
        tab.run(~is_art)
    except _Unbounded:
        return LpSolution(LpStatus.UNBOUNDED, None, None, tab.iterations)

    y = np.zeros(width)
    for i, bvar in enumerate(tab.basis):
        y[bvar] = tab.t[i, -1]
    x = shift + transform @ y[:ny]
    _verify(lp, x, tol)
    return LpSolution(LpStatus.OPTIMAL, x, float(lp.objective @ x), tab.iterations)


def _verify(lp: LinearProgram, x: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    for k, (coef, rel, rhs) in enumerate(lp.rows):
        lhs = float(coef @ x)
        slack = tol * max(scale, abs(rhs)) * max(1.0, float(np.abs(coef).max(initial=0.0)))
        bad = (
            (rel == "<=" and lhs > rhs + slack)
            or (rel == ">=" and lhs < rhs - slack)
            or (rel == "=" and abs(lhs - rhs) > slack)
        )
        if bad:
            raise SolverError(f"optimal point violates row {k}: {lhs!r} {rel} {rhs!r}")
    if np.any(x < lp.lower - tol * scale) or np.any(x > lp.upper + tol * scale):
        raise SolverError("optimal point violates variable bounds")
