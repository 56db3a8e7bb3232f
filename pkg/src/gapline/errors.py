"""Exception types shared across the package."""


class CapExceeded(ValueError):
    """An enumeration or shift cap would be exceeded; retry with smaller d or k."""


class ToleranceUnachievable(ArithmeticError):
    """Requested tolerance cannot be certified; carries the best bound reached."""

    def __init__(self, message, best_bound=None):
        super().__init__(message)
        self.best_bound = best_bound


class WindowRangeError(ValueError):
    """Primality queried outside the coverage of a PrimeWindow."""
