"""Exception types raised across the package."""


class RankLabError(Exception):
    """Base class for all errors raised by mrdlab."""


class ContextMismatchError(RankLabError, ValueError):
    """Operands live in different fields, or vectors have different lengths."""


class DomainError(RankLabError, ValueError):
    """An integer parameter is outside the range where the quantity is defined."""


class EnumerationTooLarge(RankLabError):
    """An exhaustive enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int) -> None:
        super().__init__(f"{what}: {size} items exceeds cap {cap}")
        self.size = size
        self.cap = cap


class InvalidGeneratorError(RankLabError, ValueError):
    """Gabidulin generator coordinates are linearly dependent over GF(q)."""


class UnsupportedError(RankLabError):
    """Parameters outside what the implementation supports."""
