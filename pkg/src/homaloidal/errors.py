"""Exception and warning types shared across the package."""


class HomaloidalError(Exception):
    """Base class for all package errors."""


class MissingVariable(HomaloidalError, KeyError):
    """An evaluation point does not assign every variable of a polynomial."""

    def __str__(self):
        return Exception.__str__(self)


class ParseError(HomaloidalError, ValueError):
    pass


class IndexOutOfRange(HomaloidalError, IndexError):
    pass


class DisconnectedGraph(HomaloidalError, ValueError):
    pass


class InvalidGraph(HomaloidalError, ValueError):
    pass


class DomainError(HomaloidalError, ValueError):
    pass


class VerificationFailed(HomaloidalError):
    pass


class SingularPencil(HomaloidalError, ValueError):
    pass


class SingularAfterRetries(HomaloidalError):
    pass


class BadShift(HomaloidalError, ValueError):
    pass


class SizeOverflow(HomaloidalError):
    pass


class DegreeTooHigh(HomaloidalError, ValueError):
    pass


class VariableCollision(HomaloidalError, ValueError):
    pass


class NotSymmetric(HomaloidalError, ValueError):
    pass


class RankDeficiencyWarning(UserWarning):
    """The quadratic's coefficient matrix has rank below n + 1."""
