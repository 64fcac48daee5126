"""Exception types shared across the package."""


class InputError(ValueError):
    """Rejected input: non-finite coordinates, malformed point data."""


class GeneralPositionError(InputError):
    """Input violates general position (duplicate y key, collinear triple)."""


class SeparationError(ValueError):
    """Chain pair handed to a merge is not vertically separated."""


class ChainError(ValueError):
    """Chain operation misuse: side mismatch, vertex not on chain."""


class EmptyTreeError(LookupError):
    """Search on an empty tree."""
