"""Discrete fuzzy measures: transforms, indices, integrals, LAD fitting and lattice graphs."""

from fmgraph.exceptions import (
    AmbiguityError,
    CapacityError,
    FormatError,
    FuzzyMeasureError,
    InfeasibleConstructionError,
    SolverError,
    ValidationError,
)
from fmgraph.lattice import (
    FuzzyMeasure,
    SetFunction,
    ValidationReport,
    additive_from_weights,
    dual,
    max_measure,
    min_measure,
    uniform_additive,
    validate,
)
from fmgraph.transforms import (
    entropy,
    mobius,
    nonadditivity_index,
    nonmodularity_index,
    orness,
    shapley_comprehensive,
    shapley_values,
    zeta,
)
from fmgraph.integrals import choquet, pan, sugeno
from fmgraph.sampling import GeneratorConfig, random_batch, random_measure
from fmgraph.fitting import Dataset, Normalization, fit, fit_incremental

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "CapacityError",
    "Dataset",
    "FormatError",
    "FuzzyMeasure",
    "FuzzyMeasureError",
    "GeneratorConfig",
    "InfeasibleConstructionError",
    "Normalization",
    "SetFunction",
    "SolverError",
    "ValidationError",
    "ValidationReport",
    "additive_from_weights",
    "choquet",
    "dual",
    "entropy",
    "fit",
    "fit_incremental",
    "max_measure",
    "min_measure",
    "mobius",
    "nonadditivity_index",
    "nonmodularity_index",
    "orness",
    "pan",
    "random_batch",
    "random_measure",
    "shapley_comprehensive",
    "shapley_values",
    "sugeno",
    "uniform_additive",
    "validate",
    "zeta",
]
