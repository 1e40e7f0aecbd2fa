"""Exception types shared across the package."""


class WhittleKFError(Exception):
    """Base class for domain errors raised by this package."""


class InvalidArgument(WhittleKFError, ValueError):
    pass


class ResourceLimitError(WhittleKFError, RuntimeError):
    """A configured size cap (tree depth, enumeration count, overflow) was hit."""


class SingularityError(WhittleKFError, ZeroDivisionError):
    pass


class ConditioningError(WhittleKFError, ArithmeticError):
    """A quotient's denominator is too close to zero to trust."""


class ClassificationInconclusive(WhittleKFError):
    """No periodic threshold word was found within the search budget."""


class ContractViolation(WhittleKFError):
    """A policy returned an action set of the wrong shape."""
