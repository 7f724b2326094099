"""
gjsd.utils
==========

This module contains utility functions used by the rest of the project.
"""

import math

import numpy as np

from .exceptions import DomainError, PositiveDefiniteError

_ASYMMETRY_TOLERANCE = 1e-8


def check_alpha(alpha: float, open_interval: bool = False, name: str = 'alpha') -> float:
    """Validates a skew parameter

    Args:
        alpha: Skew parameter
        open_interval (optional): Reject the endpoints 0 and 1
        name (optional): Parameter name used in the error message

    Returns:
        The parameter as a float

    Raises:
        DomainError: If the parameter is outside [0, 1] (or (0, 1))
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < 0.0 or alpha > 1.0:
        raise DomainError('%s must lie in [0, 1], got %r' % (name, alpha))
    if open_interval and alpha in (0.0, 1.0):
        raise DomainError('%s must lie in (0, 1), got %r' % (name, alpha))
    return alpha


def check_positive(value: float, name: str, floor: float = 0.0) -> float:
    """Validates a strictly positive scalar

    Args:
        value: Scalar to check
        name: Parameter name used in the error message
        floor (optional): Values less or equal than this floor are rejected

    Returns:
        The value as a float
    """
    value = float(value)
    if not math.isfinite(value) or value <= floor:
        raise DomainError('%s must be greater than %g, got %r' % (name, floor, value))
    return value


def lerp(a, b, alpha: float):
    """Linear interpolation ``(1 - alpha) a + alpha b`` of scalars or arrays

    Args:
        a: Start point
        b: End point
        alpha: Interpolation weight

    Returns:
        Interpolated value, exactly ``a`` for alpha 0 and ``b`` for alpha 1
    """
    if alpha == 0.0:
        return a
    if alpha == 1.0:
        return b
    return (1.0 - alpha) * np.asarray(a, dtype=float) + alpha * np.asarray(b, dtype=float)


def symmetrized(matrix, name: str = 'matrix') -> np.ndarray:
    """Returns ``(M + M^T) / 2`` after checking that M is symmetric up to 1e-8

    Args:
        matrix: Square matrix-like object
        name (optional): Parameter name used in the error message

    Returns:
        Symmetric float matrix
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PositiveDefiniteError('%s must be a square matrix, got shape %s' % (name, matrix.shape))
    if not np.all(np.isfinite(matrix)):
        raise PositiveDefiniteError('%s has non-finite entries' % name)
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > _ASYMMETRY_TOLERANCE * scale:
        raise PositiveDefiniteError('%s is not symmetric' % name)
    return 0.5 * (matrix + matrix.T)


def capitalized(name: str) -> str:
    """Returns a capitalized version of an identifier, with dashes and underscores as spaces

    Args:
        name: Identifier such as ``quasi-arithmetic``

    Returns:
        Capitalized version such as ``Quasi arithmetic``
    """
    name = name.replace('-', ' ').replace('_', ' ')
    return '%s%s' % (name[0].upper(), name[1:].lower())


__author__ = 'GeneralizedJSD developers'
