"""Exception types raised across the package."""


class KGFFError(Exception):
    """Base class for every error raised by kgff."""


class ZeroInverse(KGFFError, ZeroDivisionError):
    pass


class BothZero(KGFFError, ValueError):
    pass


class ZeroPolynomial(KGFFError, ValueError):
    pass


class ZeroVector(KGFFError, ValueError):
    pass


class PrecisionExhausted(KGFFError, ValueError):
    """A product needs more known coefficients than the series carries."""


class InsufficientPrecision(KGFFError, ValueError):
    """The matrix precision cannot decide the requested inequality exactly."""


class OutOfRange(KGFFError, IndexError):
    pass


class NonPositiveInput(KGFFError, ValueError):
    pass


class BudgetExceeded(KGFFError, RuntimeError):
    """An enumeration would visit more cells than the configured budget."""


class EmptyInput(KGFFError, ValueError):
    pass
