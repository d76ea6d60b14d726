"""Exception hierarchy shared by all modules."""


class ModelError(Exception):
    """Base class for every error raised by netduopoly."""


class ValidationError(ModelError, ValueError):
    """Input failed a model invariant."""


class RowSumError(ValidationError):
    pass


class DiagonalError(ValidationError):
    pass


class NegativeWeightError(ValidationError):
    pass


class SizeError(ValidationError):
    pass


class BoundsError(ModelError):
    """Consumption left [-1/2, 1/2]."""


class CapacityError(ValidationError):
    pass


class SolveError(ModelError):
    pass


class RegimeError(ModelError):
    pass


class ParseError(ModelError, ValueError):
    pass


class SelfCheckError(ModelError):
    def __init__(self, quantity, expected, got):
        self.quantity = quantity
        self.expected = expected
        self.got = got
        super().__init__(f"{quantity}: expected {expected!r}, got {got!r}")
