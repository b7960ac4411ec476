"""Exception hierarchy shared across famkit modules."""


class FamkitError(Exception):
    """Base class for all famkit errors."""


class InputError(FamkitError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class NotInAlgebraError(InputError):
    """A set was used where an algebra element is required."""


class GroundMismatchError(InputError):
    """Operands live over different ground sets."""


class CapExceededError(InputError):
    """A documented desk-scale cap (ground size, atom count, solver size) was hit."""


class DegenerateFamError(InputError):
    """The operation requires positive total measure."""


class BlockedCellError(FamkitError):
    """Approximation cannot place a point: a positive-measure cell is fully avoided."""

    def __init__(self, cell, message=None):
        self.cell = cell
        super().__init__(message or f"every point of positive-measure cell {cell} is excluded")


class BoundsError(InputError):
    """A requested value lies outside the admissible extension bounds."""
