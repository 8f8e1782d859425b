"""Exception types raised across the package."""


class SummaError(Exception):
    """Base class for every error raised by summa."""


class DivisionByZero(SummaError, ZeroDivisionError):
    pass


class NotPrime(SummaError, ValueError):
    pass


class BudgetExceeded(SummaError):
    pass


class DenominatorVanishesAtZero(SummaError, ValueError):
    pass


class ConstantTermNotOne(SummaError, ValueError):
    pass


class NonMonotoneExponents(SummaError, ValueError):
    pass


class RecurrenceSingular(SummaError, ValueError):
    pass


class UnknownFixture(SummaError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SeriesSyntaxError(SummaError, SyntaxError):
    """Raised by the expression parser.

    ``position`` is the character offset of the offending token and
    ``expected`` the set of token kinds that would have been accepted.
    """

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.expected = frozenset(expected)


class QuadratureFailure(SummaError):
    pass


class NoClosedForm(SummaError, ValueError):
    pass


class UnknownBase(SummaError, ValueError):
    pass


class NorlundDenominatorZero(SummaError, ValueError):
    pass


class NotRegular(SummaError, ValueError):
    pass


class DecompositionUnverified(SummaError, ValueError):
    pass
