"""Exception hierarchy shared by all qbessel modules."""


class QBesselError(Exception):
    """Base class for all qbessel errors."""


class DomainError(QBesselError):
    """An argument lies outside the domain of the requested operation."""


class InvalidOrder(QBesselError):
    """The order makes the defining series ill-defined (denominator pole)."""


class OrderOutOfRange(QBesselError):
    """The order violates a range restriction (e.g. nu <= -1 for zeros)."""


class InvalidDenominator(QBesselError):
    """A lower series parameter annihilates a denominator factor before the
    series terminates."""


class Divergent(QBesselError):
    """Series terms failed to decay within the term budget."""


class TruncationBudgetExceeded(QBesselError):
    """The tail bound was not met before max_terms was reached."""


class NonFinite(QBesselError):
    """A function handle returned a non-finite value on an evaluation node."""


class BracketingFailed(QBesselError):
    """The sign-change scan exhausted its budget before locating all
    requested zeros."""


class NotAZero(QBesselError):
    """A value supplied as a zero fails the residual check."""


class IntegerOrder(QBesselError):
    """The operation requires a non-integral order."""
