"""Exception hierarchy.

Every validation failure carries the name of the violated invariant in
``invariant`` (the class name), and the message starts with it, so CLI users
and callers can tell ``NotResolution`` from ``NotPSD`` without parsing text.
"""


class SequensError(Exception):
    """Base class for all library errors."""

    @property
    def invariant(self):
        return type(self).__name__

    def __str__(self):
        msg = str(self.args[0]) if self.args else ""
        return f"{self.invariant}: {msg}" if msg else self.invariant


class ValidationError(SequensError, ValueError):
    """An input failed one of the domain invariants."""


class ParseError(SequensError, ValueError):
    """A serialized document is malformed.

    ``path`` locates the offending field (e.g. ``entries[2].matrix``).
    """

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DimensionMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class DidNotConverge(SequensError, ArithmeticError):
    pass


class NotEffect(ValidationError):
    pass


class NotPartialState(ValidationError):
    pass


class NotState(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class ConditionOnNull(ValidationError, ZeroDivisionError):
    pass


class NotResolution(ValidationError):
    pass


class DuplicateLabel(ValidationError):
    pass


class EmptyObservable(ValidationError):
    pass


class MissingOutcomeValues(ValidationError):
    pass


class FunctionDomainError(ValidationError):
    pass


class WeightError(ValidationError):
    pass


class OutcomeMismatch(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class NotStochastic(ValidationError):
    pass


class NotNObservable(ValidationError):
    pass


class DegenerateComplement(ValidationError):
    pass


class UnknownTheorem(SequensError, KeyError):
    pass
