"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GarlandError(Exception):
    """Base class for all errors raised by :mod:`garland`."""


class MalformedSimplexError(GarlandError, ValueError):
    pass


class NotASimplexError(GarlandError, KeyError):
    pass


class StarConditionError(GarlandError, ValueError):
    """Some simplex is not a face of a top-dimensional simplex."""


class DegreeError(GarlandError, ValueError):
    pass


class ActionError(GarlandError, ValueError):
    """A vertex permutation does not map simplices to simplices."""


class DaggerViolation(GarlandError, ValueError):
    """A group action fails star separation; ``witness`` says where."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class BudgetError(GarlandError, RuntimeError):
    """A computation would exceed its configured size budget."""


class EmptySpectrumError(GarlandError, ValueError):
    pass


class MalformedFlagError(GarlandError, ValueError):
    pass


class MissingTypeMapError(GarlandError, ValueError):
    pass
