"""Exception hierarchy shared by all modules."""


class ToricError(Exception):
    """Base class for every error raised by this package."""


class DimensionTooLow(ToricError):
    pass


class NotUnimodular(ToricError):
    pass


class NotInCatalog(ToricError):
    pass


class WrongPointCount(ToricError):
    pass


class NotSquare(ToricError):
    pass


class NotSeparated(ToricError):
    pass


class CannotFill(ToricError):
    pass


class Infeasible(ToricError):
    """No lifting exists.  ``witness`` holds a Farkas combination proving it."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFound(ToricError):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class WidthMismatch(ToricError):
    pass


class LiftingFailed(ToricError):
    pass


class NotCovered(ToricError):
    pass


class AssemblyFailed(ToricError):
    pass


class InvalidReport(ToricError):
    pass


class MalformedCertificate(ToricError):
    pass
