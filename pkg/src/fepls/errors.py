"""Error types shared across the package."""


class GridMismatchError(ValueError):
    """Operands live on different grids."""


class DegenerateDirectionError(ValueError):
    """A direction with (numerically) zero norm cannot be normalized."""


class InsufficientDataError(ValueError):
    """Not enough observations for the requested computation."""


class NumericalError(ArithmeticError):
    """A numerical routine (factorization, regression) failed to produce a result."""
