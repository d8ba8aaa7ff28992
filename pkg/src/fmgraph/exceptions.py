"""Exception hierarchy shared by every fmgraph module."""


class FuzzyMeasureError(Exception):
    """Base class for all domain errors raised by fmgraph."""


class ValidationError(FuzzyMeasureError):
    """A set function fails the boundary or monotonicity conditions.

    The offending :class:`~fmgraph.lattice.ValidationReport` is attached as
    ``report`` when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CapacityError(FuzzyMeasureError):
    """A request exceeds the sizes this library enumerates densely."""


class InfeasibleConstructionError(FuzzyMeasureError):
    """A constructor was given inputs that admit no valid measure."""


class AmbiguityError(FuzzyMeasureError):
    """Tolerance-based equivalence broke transitivity."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class SolverError(FuzzyMeasureError):
    """The LP solver failed to reach a verdict (iteration cap, bad pivot)."""


class FormatError(FuzzyMeasureError):
    """An input file could not be parsed."""

    def __init__(self, message, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.line = line
        self.field = field
