"""Exception hierarchy shared by the engine, the parser and the CLI."""


class G2CalcError(Exception):
    """Base class for every error raised by g2calc."""


class DimensionMismatch(G2CalcError, ValueError):
    """Operands live on charts of different dimension."""


class LimitError(G2CalcError, ValueError):
    """A polynomial exceeds the supported degree or variable count."""


class DegreeError(G2CalcError, ValueError):
    """A form has the wrong degree for the requested operation."""


class NotClosed(G2CalcError, ValueError):
    """A primitive was requested for a form whose exterior derivative is nonzero."""


class InverseError(G2CalcError, ValueError):
    """A map has no inverse, or the supplied inverse fails certification."""


class NotRochesterian(G2CalcError, ValueError):
    """d(alpha) has a nonzero component outside the image of X -> X _| phi.

    ``residual`` holds that component (the 14-dimensional part) when it is
    available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NondegeneracyError(G2CalcError, ValueError):
    """The distinguished form fails its nondegeneracy check."""


class MetricError(G2CalcError, ValueError):
    """The metric cannot be recovered at the requested point."""


class UnsupportedStructure(G2CalcError, ValueError):
    """The operation needs a closed or constant-coefficient structure."""


class IdentityViolation(G2CalcError, AssertionError):
    """A postcondition that should hold identically was found to fail."""
