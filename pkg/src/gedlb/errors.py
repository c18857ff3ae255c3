"""Shared exception types."""


class GedlbError(Exception):
    """Base class for all package errors."""


class BadParams(GedlbError, ValueError):
    """Constructor or operation parameters out of range."""


class InconsistentEdit(GedlbError, ValueError):
    """Edit set deletes a missing edge or adds an existing one."""


class InfeasibleMix(GedlbError, ValueError):
    """Requested add/delete split cannot be drawn from the graph."""


class TooLarge(GedlbError, ValueError):
    """Instance exceeds the exact-search budget."""


class ConstructionInvalid(GedlbError, RuntimeError):
    """A generated graph failed its structural validation."""


class DimensionMismatch(GedlbError, ValueError):
    """Operands have incompatible shapes."""


class NoConvergence(GedlbError, RuntimeError):
    """An eigensolver failed to converge."""


class AmbiguousClustering(GedlbError, RuntimeError):
    """Eigenvalue grouping tolerance cannot separate clusters."""


class SolverFailure(GedlbError, RuntimeError):
    """Conic solve ended in a state with no usable solution."""


class NumericalBreakdown(GedlbError, RuntimeError):
    """A factorization or iteration produced non-finite values."""


class NotContracting(GedlbError, RuntimeError):
    """Fixed-point iteration failed to contract."""


class NotUniform(GedlbError, ValueError):
    """Projector diagonals are not uniform; construction precondition failed."""


class ParseError(GedlbError, ValueError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyDataset(GedlbError, ValueError):
    """A dataset directory yielded no graphs."""
