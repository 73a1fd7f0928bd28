class QIForgeError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(QIForgeError):
    pass


class OutOfWindow(QIForgeError, KeyError):
    """An element was looked up outside the finite window that was computed."""

    def __str__(self):
        return Exception.__str__(self)


class SpecError(QIForgeError, ValueError):
    """A group, map or chain specification could not be parsed or is invalid."""
