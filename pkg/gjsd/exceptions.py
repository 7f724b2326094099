"""
gjsd.exceptions
===============

This module contains the exception and warning classes raised by the rest of the project.

Errors derive from :class:`GJSDError` and also from the closest builtin exception, so callers
may catch either ``ValueError``/``ArithmeticError`` or the package-specific class.
"""


class GJSDError(Exception):
    """Base class for every error raised by the package"""


class DomainError(GJSDError, ValueError):
    """An argument lies outside the domain of the operation"""


class PositiveDefiniteError(DomainError):
    """A matrix which must be symmetric positive-definite is not"""


class DominanceError(DomainError):
    """A mean fails the sampled dominance precondition of an operation"""


class DegenerateInputError(GJSDError, ValueError):
    """Inputs make the requested quantity undefined (for instance two identical densities)"""


class SpecParseError(GJSDError, ValueError):
    """A density, mean or problem description could not be parsed"""


class GradientInversionError(GJSDError, ArithmeticError):
    """The inverse gradient map of a log-normalizer could not be evaluated"""


class OracleError(GJSDError, ArithmeticError):
    """Base class for numerical integration failures

    Args:
        message: Human readable description
        partial: Partial :class:`~gjsd.structures.IntegralEstimate` at the time of failure
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExceededError(OracleError):
    """The integrator ran out of nodes before reaching the requested tolerance"""


class NonFiniteIntegrandError(OracleError):
    """The integrand returned a non-finite value

    Args:
        message: Human readable description
        node: Abscissa where the integrand was not finite
        value: Offending integrand value
        partial: Partial estimate accumulated over the finite nodes
    """

    def __init__(self, message: str, node=None, value=None, partial=None):
        super().__init__(message, partial)
        self.node = node
        self.value = value


class DivergentNormalizerError(OracleError):
    """The normalizer of an M-mixture is infinite or failed to converge"""


class ConvexityWarning(UserWarning):
    """A generator failed the sampled convexity check"""


class ConcavityWarning(UserWarning):
    """A sampled objective which should be concave has a positive second difference"""


class SingularHessianWarning(UserWarning):
    """A sampled Hessian is numerically singular"""


class DegenerateSeedingWarning(UserWarning):
    """k-means++ seeding found every remaining point at zero divergence"""


__author__ = 'GeneralizedJSD developers'
