"""Exception hierarchy shared by every module of the package."""


class CharPError(Exception):
    """Base class for all errors raised by charp_nbg."""


class DivisionByZero(CharPError, ZeroDivisionError):
    """Inversion of an exact zero."""


class FieldMismatch(CharPError, ValueError):
    """Operands live in different fields or towers."""


class PrecisionExhausted(CharPError, ArithmeticError):
    """A result depends on coefficients beyond the known precision window."""


class DegenerateInput(CharPError, ValueError):
    """Input violates the hypotheses of the requested construction."""


class NotIrreducible(DegenerateInput):
    """A supplied modulus is reducible over the relevant field."""


class NotAGenerator(CharPError, ValueError):
    """The element does not generate the extension."""


class InconsistentValuation(CharPError, ArithmeticError):
    """Two valuation procedures disagree (signals a precision bug)."""


class NotInL(CharPError, ArithmeticError):
    """A value computed in the closure E does not lie in the image of L."""


class DimensionMismatch(CharPError, ArithmeticError):
    """A linear-algebra result has an unexpected dimension."""


class SearchExhausted(CharPError, RuntimeError):
    """A deterministic search ran out of candidates."""


class WrongDegree(CharPError, ValueError):
    """The extension degree does not satisfy the test's hypothesis."""
