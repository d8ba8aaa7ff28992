"""Comparison analytics: feature matrices, clustering and Monte Carlo summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from fmgraph import families, lattice, transforms
from fmgraph.fitting import Dataset, Normalization, default_normalization
from fmgraph.integrals import choquet, pan, sugeno
from fmgraph.lattice import FuzzyMeasure, _as_measure, subset_label
from fmgraph.sampling import GeneratorConfig, random_batch

SUBSET_FEATURES = ("mu", "mobius", "nonadditivity", "nonmodularity", "shapley_comprehensive")
MEASURE_FEATURES = ("entropy", "orness")
_ALIASES = {
    "m": "mobius",
    "n": "nonadditivity",
    "d": "nonmodularity",
    "k": "shapley_comprehensive",
    "shapley": "shapley_comprehensive",
    "value": "mu",
}


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows of named features.

    ``standardized[j]`` is True when column ``j`` has been z-scored;
    ``constant[j]`` marks columns left unscaled because they have zero spread.
    """

    row_ids: tuple[str, ...]
    columns: tuple[str, ...]
    data: np.ndarray
    standardized: tuple[bool, ...] = ()
    constant: tuple[bool, ...] = ()

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim != 2 or data.shape != (len(self.row_ids), len(self.columns)):
            raise ValueError("data shape must be (rows, columns)")
        if not np.all(np.isfinite(data)):
            raise ValueError("feature matrix has missing or infinite cells")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        ncol = len(self.columns)
        if not self.standardized:
            object.__setattr__(self, "standardized", (False,) * ncol)
        if not self.constant:
            object.__setattr__(self, "constant", (False,) * ncol)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def standardize(self) -> "FeatureMatrix":
        """Z-score every non-constant column (population standard deviation)."""
        data = self.data.copy()
        std_flags, const_flags = [], []
        for j in range(data.shape[1]):
            col = data[:, j]
            sd = col.std()
            if sd <= 1e-15 * max(1.0, np.abs(col).max()):
                std_flags.append(False)
                const_flags.append(True)
                continue
            data[:, j] = (col - col.mean()) / sd
            std_flags.append(True)
            const_flags.append(False)
        return FeatureMatrix(self.row_ids, self.columns, data, tuple(std_flags), tuple(const_flags))


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge history.

    Leaves are ``0..n_leaves-1``; merge ``k`` creates cluster ``n_leaves + k``.
    """

    n_leaves: int
    merges: tuple[Merge, ...]
    leaf_order: tuple[int, ...]

    def members(self, cluster: int) -> frozenset:
        if cluster < self.n_leaves:
            return frozenset([cluster])
        m = self.merges[cluster - self.n_leaves]
        return self.members(m.left) | self.members(m.right)

    def structure(self, labels: Optional[Sequence] = None) -> list[tuple[frozenset, float]]:
        """Merges as ``(set of leaf labels, height)``, independent of cluster numbering."""
        labels = list(range(self.n_leaves)) if labels is None else list(labels)
        out = []
        for k in range(len(self.merges)):
            leaves = self.members(self.n_leaves + k)
            out.append((frozenset(labels[i] for i in leaves), self.merges[k].height))
        return out

    def linkage_matrix(self) -> np.ndarray:
        """SciPy-style ``(n-1, 4)`` linkage array."""
        return np.array([[m.left, m.right, m.height, m.size] for m in self.merges], dtype=float)


def _canonical_feature(name: str) -> str:
    return _ALIASES.get(name, name)


def subset_features(mu, features: Sequence[str] = ("mu", "nonadditivity"), label_mode: str = "canonical") -> FeatureMatrix:
    """One row per subset (ascending mask), one column per requested index.

    Raises:
        ValueError: Unknown feature name.
    """
    mu = _as_measure(mu)
    cols = []
    names = []
    for raw in features:
        name = _canonical_feature(raw)
        if name == "mu":
            cols.append(mu.values)
        elif name in transforms.INDEX_KINDS:
            cols.append(transforms.index_vector(mu, name).values.values)
        else:
            raise ValueError(f"unknown subset feature {raw!r}; expected one of {SUBSET_FEATURES}")
        names.append(name)
    rows = tuple(subset_label(a, label_mode) for a in range(len(mu)))
    return FeatureMatrix(rows, tuple(names), np.column_stack(cols))


def measure_features(
    measures: Sequence[FuzzyMeasure],
    features: Sequence[str] = ("entropy", "orness"),
    names: Optional[Sequence[str]] = None,
) -> FeatureMatrix:
    """One row per measure.

    ``features`` may name ``entropy`` and ``orness``, or be ``("values",)`` for
    one column per subset (the raw capacity table).
    """
    if not measures:
        raise ValueError("no measures given")
    names = tuple(names) if names is not None else tuple(f"mu{i + 1}" for i in range(len(measures)))
    if list(features) == ["values"]:
        n = measures[0].n
        cols = tuple(subset_label(a) for a in range(1 << n))
        return FeatureMatrix(names, cols, np.vstack([m.values for m in measures]))
    funcs = {"entropy": transforms.entropy, "orness": transforms.orness}
    for f in features:
        if f not in funcs:
            raise ValueError(f"unknown measure feature {f!r}; expected one of {MEASURE_FEATURES} or 'values'")
    data = np.array([[funcs[f](m) for f in features] for m in measures])
    return FeatureMatrix(names, tuple(features), data)


def hierarchical_cluster(fm: FeatureMatrix, standardize: bool = True) -> Dendrogram:
    """Average-linkage agglomerative clustering with Euclidean distance.

    Columns are z-scored first unless ``standardize=False``.  Among equally
    distant pairs the one whose clusters have the smallest leading row index
    merges first.

    Raises:
        ValueError: Fewer than two rows.
    """
    nrow = fm.shape[0]
    if nrow < 2:
        raise ValueError("clustering needs at least two rows")
    x = (fm.standardize() if standardize else fm).data
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))

    # slots stay sorted by the smallest leaf they contain
    ids = list(range(nrow))
    sizes = [1] * nrow
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    merges = []
    children: dict[int, tuple[int, int]] = {}
    for step in range(nrow - 1):
        flat = int(np.argmin(d))
        i, j = divmod(flat, d.shape[0])
        if i > j:
            i, j = j, i
        height = float(d[i, j])
        new_id = nrow + step
        size = sizes[i] + sizes[j]
        merges.append(Merge(ids[i], ids[j], height, size))
        children[new_id] = (ids[i], ids[j])
        row = (sizes[i] * d[i] + sizes[j] * d[j]) / size
        d[i, :] = row
        d[:, i] = row
        d[i, i] = np.inf
        d = np.delete(np.delete(d, j, axis=0), j, axis=1)
        ids[i] = new_id
        sizes[i] = size
        del ids[j], sizes[j]

    order: list[int] = []
    stack = [ids[0]]
    while stack:
        c = stack.pop()
        if c < nrow:
            order.append(c)
        else:
            left, right = children[c]
            stack.append(right)
            stack.append(left)
    return Dendrogram(nrow, tuple(merges), tuple(order))


def measure_summary(mu, tol: float = lattice.DEFAULT_TOL) -> transforms.MeasureSummary:
    """Entropy, orness, level means and boolean family flags."""
    mu = _as_measure(mu)
    flags = {
        "additive": lattice.is_additive(mu, tol),
        "symmetric": lattice.is_symmetric(mu, tol),
        "superadditive": lattice.is_superadditive(mu, tol),
        "subadditive": lattice.is_subadditive(mu, tol),
        "supermodular": lattice.is_supermodular(mu, tol),
        "submodular": lattice.is_submodular(mu, tol),
        "additivity_order": families.additivity_order(mu, tol),
        "maxitive_order": families.maxitive_order(mu, tol),
        "minitive_order": families.minitive_order(mu, tol),
    }
    return transforms.MeasureSummary(
        transforms.entropy(mu, tol), transforms.orness(mu), tuple(transforms.level_means(mu).tolist()), flags
    )


@dataclass(frozen=True)
class IntegralComparison:
    """Per-sample ``(choquet, sugeno, pan)`` values for one input vector."""

    x: tuple[float, ...]
    values: np.ndarray
    medians: tuple[float, float, float]
    frac_choquet_ge_sugeno: float
    frac_sugeno_ge_pan: float

    columns = ("choquet", "sugeno", "pan")


def integral_comparison(x, config: GeneratorConfig) -> IntegralComparison:
    """Evaluate all three integrals of ``x`` over ``config.count`` random measures."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != config.n:
        raise ValueError(f"x has {x.size} components, config has n = {config.n}")
    measures = random_batch(config)
    vals = np.array([[choquet(m, x), sugeno(m, x), pan(m, x)] for m in measures])
    med = np.median(vals, axis=0)
    return IntegralComparison(
        tuple(x.tolist()),
        vals,
        (float(med[0]), float(med[1]), float(med[2])),
        float(np.mean(vals[:, 0] >= vals[:, 1])),
        float(np.mean(vals[:, 1] >= vals[:, 2])),
    )


@dataclass(frozen=True)
class AlternativeProfile:
    """Choquet values of each alternative (columns) under each sampled measure (rows)."""

    labels: tuple[str, ...]
    values: np.ndarray
    medians: np.ndarray


def alternatives_choquet_profile(
    dataset: Dataset | np.ndarray,
    config: GeneratorConfig,
    norm: Optional[Normalization] = None,
) -> AlternativeProfile:
    """Choquet integral of every alternative under ``config.count`` random measures.

    A :class:`Dataset` is normalized first (default normalization unless
    ``norm`` is given); a bare array is taken as already normalized.
    """
    if isinstance(dataset, Dataset):
        norm = norm or default_normalization(dataset)
        x = norm.apply(dataset.scores)
        labels = dataset.labels
    else:
        x = np.atleast_2d(np.asarray(dataset, dtype=float))
        labels = tuple(str(i + 1) for i in range(x.shape[0]))
    if x.shape[1] != config.n:
        raise ValueError(f"alternatives have {x.shape[1]} criteria, config has n = {config.n}")
    measures = random_batch(config)
    vals = np.array([[choquet(m, xi) for xi in x] for m in measures])
    return AlternativeProfile(tuple(labels), vals, np.median(vals, axis=0))
