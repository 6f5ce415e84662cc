"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid user input: bad model parameters, inconsistent run options."""


class NumericalAssertionError(ArithmeticError):
    """A numerical invariant (Hermiticity, normalization, ...) was violated."""
