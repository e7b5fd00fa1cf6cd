"""Exception hierarchy shared by all modules.

Every operational failure raises a subclass of :class:`FracCauchyError`,
so callers (and the CLI) can distinguish numeric failures from bad input.
"""


class FracCauchyError(Exception):
    """Base class for all library errors."""


class OrderDomainError(FracCauchyError):
    """A fractional order lies outside the admissible range of the operation."""


class GridMismatchError(FracCauchyError):
    """Two grid-indexed objects do not share the same time grid."""


class CapabilityError(FracCauchyError):
    """The input cannot supply what the operation needs (e.g. derivatives)."""


class BlowupError(FracCauchyError):
    """A non-finite value appeared at an interior node."""


class DomainError(FracCauchyError):
    """An argument lies outside the analyticity or transform domain."""


class LocalityError(FracCauchyError):
    """A local Taylor series failed to truncate (vector not in the root lineal)."""


class ContourError(FracCauchyError):
    """An eigenvalue sits too close to the integration contour."""


class InversionError(FracCauchyError):
    """The Laplace inversion contour is unreliable (characteristic zero nearby)."""


class FlavorError(FracCauchyError):
    """The problem flavor or order does not match the requested route."""


class PreconditionError(FracCauchyError):
    """A stated hypothesis of the solution route is violated."""


class StepSolveError(FracCauchyError):
    """A time-stepping linear solve failed; message carries the step index."""


class SchemaError(FracCauchyError):
    """A problem file violates the input schema.

    ``pointer`` is a JSON-pointer-style path to the offending entry.
    """

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")
