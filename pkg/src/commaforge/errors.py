"""Exception hierarchy shared by every commaforge module."""

from __future__ import annotations


class CommaForgeError(Exception):
    """Base class for all engine errors."""


class UnknownObject(CommaForgeError, KeyError):
    pass


class UnknownArrow(CommaForgeError, KeyError):
    pass


class NotComposable(CommaForgeError):
    pass


class EndpointMismatch(CommaForgeError):
    pass


class NotAPartialOrder(CommaForgeError):
    pass


class InvalidFactor(CommaForgeError):
    pass


class BoundaryMismatch(CommaForgeError):
    pass


class SizeBudgetExceeded(CommaForgeError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: size {size} exceeds budget {budget}")
        self.what = what
        self.size = size
        self.budget = budget


class MalformedLabel(CommaForgeError):
    pass


class NotCommutative(CommaForgeError):
    pass


class CaseShapeMismatch(CommaForgeError):
    pass


class UndefinedAction(CommaForgeError):
    pass


class NoBaseLimit(CommaForgeError):
    pass


class CertificationFailed(CommaForgeError):
    """A construction that must be certified failed its own check."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class DSLError(CommaForgeError):
    """Problem in a ``.cat`` document; ``span`` locates it when known."""

    def __init__(self, message: str, span=None):
        where = f"{span.line}:{span.column}: " if span is not None else ""
        super().__init__(where + message)
        self.span = span


class DSLSyntaxError(DSLError):
    pass


class UnknownReference(DSLError):
    pass


class ValidationFailure(DSLError):
    """A parsed entity broke a law; ``law`` and ``witnesses`` come from the report."""

    def __init__(self, law: str, witnesses: tuple = (), span=None, entity: str = ""):
        what = f"{entity}: " if entity else ""
        super().__init__(f"{what}{law} violated by {witnesses}", span)
        self.law = law
        self.witnesses = witnesses
