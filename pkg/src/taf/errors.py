"""Exception hierarchy shared by every module of the package."""


class TafError(Exception):
    """Base class for all errors raised by :mod:`taf`."""


class InvalidProfile(TafError, ValueError):
    pass


class NotRepresentable(TafError, ValueError):
    pass


class NotGapPoint(TafError, ValueError):
    pass


class NotTailEquivalent(TafError, ValueError):
    pass


class DegenerateSystem(TafError, ArithmeticError):
    pass


class SizeMismatch(TafError, ValueError):
    pass


class PrimeNotInfinite(TafError, ValueError):
    pass


class WrongShape(TafError, ValueError):
    pass


class InvalidScaling(TafError, ValueError):
    pass


class LevelTooSmall(TafError, ValueError):
    pass


class NotInvertible(TafError, ZeroDivisionError):
    pass


class LevelOrder(TafError, ValueError):
    pass


class ParseError(TafError, ValueError):
    pass


class UnknownCommand(TafError, ValueError):
    pass
