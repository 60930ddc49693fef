"""Exception types shared by all holopoisson modules."""


class HoloPoissonError(Exception):
    """Base class for all library errors."""


class ChartError(HoloPoissonError):
    """Chart mismatch, unknown variable, or wrong chart kind."""


class DegreeError(HoloPoissonError):
    """Operand has the wrong (bi)degree for an operation."""


class ShapeError(HoloPoissonError):
    """Matrix / tensor shape mismatch."""


class StructureError(HoloPoissonError):
    """A structural precondition fails (Jacobi, flatness, torsion, ...)."""


class SingularError(HoloPoissonError):
    """A matrix that must be invertible is degenerate."""


class TruncationError(HoloPoissonError):
    """The requested truncation is incompatible with the differential."""


class ParseError(HoloPoissonError):
    """Malformed polynomial literal or input document."""
