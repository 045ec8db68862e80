"""Exception types raised across the package."""


class SubcritError(Exception):
    """Base class for all package errors."""


class CompositionAtNonzeroConstant(SubcritError, ValueError):
    pass


class Disconnected(SubcritError, ValueError):
    pass


class MissingWeights(SubcritError, ValueError):
    pass


class UnknownClass(SubcritError, KeyError):
    pass


class ParameterOutOfRange(SubcritError, ValueError):
    pass


class SingularSystem(SubcritError, ArithmeticError):
    pass


class NoBracket(SubcritError, ArithmeticError):
    pass


class OrderTooSmall(SubcritError, ValueError):
    pass


class InfeasibleSize(SubcritError, ValueError):
    pass


class NonPositiveWeight(SubcritError, ValueError):
    pass


class DomainTooSmall(SubcritError, ValueError):
    pass


class EmptySample(SubcritError, ValueError):
    pass


class SamplerRunaway(SubcritError, RuntimeError):
    """Raised when a recursive sampler exceeds its frame budget (bug trap)."""
