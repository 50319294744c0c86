"""Exception hierarchy.

Everything raised on purpose derives from :class:`WildSeriesError`; the CLI maps
:class:`ParseError` and :class:`InvalidDescriptor` to exit code 2 and the rest
to exit code 1.
"""
from __future__ import annotations


class WildSeriesError(Exception):
    pass


# coefficient rings
class InvalidDescriptor(WildSeriesError, ValueError):
    pass


class ZeroInversion(WildSeriesError, ZeroDivisionError):
    pass


class UnsupportedField(WildSeriesError, TypeError):
    pass


class FieldMismatch(WildSeriesError, TypeError):
    pass


class PrecisionLoss(WildSeriesError, ArithmeticError):
    """A decision needed a nonzero test on a value only known to be 0 mod t^M."""


# series
class EmptyInput(WildSeriesError, ValueError):
    pass


class PrecisionTooSmall(WildSeriesError, ValueError):
    pass


class NotAFixedPoint(WildSeriesError, ValueError):
    pass


class CompositionDomain(WildSeriesError, ValueError):
    pass


class NonUnitConstantTerm(WildSeriesError, ZeroDivisionError):
    pass


class NotInvertible(WildSeriesError, ValueError):
    pass


# index
class IdentitySeries(WildSeriesError, ValueError):
    pass


class InsufficientPrecision(WildSeriesError, ValueError):
    pass


class NotMultiple(WildSeriesError, ValueError):
    pass


class PartsMismatch(WildSeriesError, ValueError):
    pass


class CharTwo(WildSeriesError, ValueError):
    pass


# dynamics
class NotTangentToIdentity(WildSeriesError, ValueError):
    pass


class OutOfRange(WildSeriesError, ValueError):
    pass


class ObstructedTerm(WildSeriesError, ValueError):
    pass


class NoQthRoot(WildSeriesError, ValueError):
    def __init__(self, msg: str, extension_degree: int | None = None):
        super().__init__(msg)
        self.extension_degree = extension_degree


class NotFiniteOrder(WildSeriesError, ValueError):
    pass


# ultrametric
class NotIntegral(WildSeriesError, ValueError):
    pass


class EmptyRange(WildSeriesError, ValueError):
    pass


class NotDivisible(WildSeriesError, ValueError):
    pass


class ZeroDivisor(WildSeriesError, ZeroDivisionError):
    pass


# verify
class BadParameters(WildSeriesError, ValueError):
    pass


class CharDividesN(WildSeriesError, ValueError):
    pass


class ZeroSlope(WildSeriesError, ValueError):
    pass


# cli
class ParseError(WildSeriesError, ValueError):
    def __init__(self, msg: str, position: int | None = None):
        if position is not None:
            msg = f"{msg} (at position {position})"
        super().__init__(msg)
        self.position = position
