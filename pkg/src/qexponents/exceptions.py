"""Exception hierarchy shared by all modules."""


class QExponentsError(Exception):
    """Base class for all errors raised by :mod:`qexponents`."""


class ValidationError(QExponentsError, ValueError):
    """An operator, state or distribution failed an input check."""


class NotHermitianError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class DegenerateSupportError(QExponentsError, ArithmeticError):
    """A trace that must be strictly positive underflowed to zero or below."""


class DimensionGuardError(QExponentsError, MemoryError):
    """A tensor-power space would exceed the configured dimension guard."""

    def __init__(self, required: int, limit: int):
        self.required = required
        self.limit = limit
        super().__init__(
            f"required dimension {required} exceeds the memory guard of {limit}"
        )


class InputFormatError(QExponentsError, ValueError):
    """A JSON operator, pair or channel document is malformed."""
