"""Exceptions raised by the meanking package."""


class MeanKingError(Exception):
    """Base class for every error the package raises on purpose."""


class InvalidDimensionError(MeanKingError, ValueError):
    """Dimension is not an odd prime (confined to d=p != 2)."""


class ModularDivisionError(MeanKingError, ZeroDivisionError):
    """Division by the zero residue."""


class DimensionMismatchError(MeanKingError, ValueError):
    pass


class NotNormalizedError(MeanKingError, ValueError):
    pass


class IncompleteBasisError(MeanKingError, ValueError):
    pass


class IdenticalLinesError(MeanKingError, ValueError):
    """Two identical lines have no single shared point."""


class InvalidLabelError(MeanKingError, ValueError):
    """Malformed basis label, line label or residue from another dimension."""
