"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A config document or parameter set violates its constraints."""


class ValidationError(ValueError):
    """An input object fails a structural precondition."""


class CorpusFormatError(ValueError):
    """A corpus file line cannot be parsed or validated."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleRatesError(ValueError):
    """Requested marginal rates cannot form a nonnegative contingency table."""


class DegenerateFitError(ValueError):
    """Discriminant fitting failed because class means coincide."""


class RoundClosedError(RuntimeError):
    """A verdict arrived for a round that already closed."""
