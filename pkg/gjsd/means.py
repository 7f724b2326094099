"""
gjsd.means
==========

This module contains the weighted bivariate means ``M_alpha(x, y)`` on the positive reals used to
build statistical M-mixtures.

Every mean satisfies ``M_0(x, y) = x``, ``M_1(x, y) = y`` and the in-betweenness property
``min(x, y) <= M_alpha(x, y) <= max(x, y)``. Besides the plain evaluation, means provide
``log_evaluate`` which works on log-arguments so that density tails which underflow to zero do
not need to be clamped.

Attributes:
    MEANS_LIST (tuple): Parameter-free mean classes
    MEANS_DICT (dict): Dictionary which maps mean identifiers to their classes
    DEFAULT_FLOOR (float): Floor applied to zero arguments by means without a log form
"""

from abc import ABCMeta, abstractmethod

import numpy as np

from .exceptions import DomainError
from .utils import check_alpha

DEFAULT_FLOOR = 1e-300

_POWER_GEOMETRIC_THRESHOLD = 1e-6
_DOMINANCE_SLACK = 1e-12


class WeightedMean(metaclass=ABCMeta):
    """Abstract base class for weighted bivariate means

    Subclasses implement ``_evaluate`` on validated arguments with ``alpha`` strictly inside
    (0, 1). Arguments may be numpy arrays; ``alpha`` is always a scalar.
    """

    @classmethod
    @abstractmethod
    def identifier(cls) -> str:
        """Mean unique identifier

        Returns:
            Unique identifier
        """
        pass

    @abstractmethod
    def _evaluate(self, x, y, alpha: float):
        pass

    def _log_evaluate(self, log_x, log_y, alpha: float):
        floor = np.log(DEFAULT_FLOOR)
        x = np.exp(np.maximum(log_x, floor))
        y = np.exp(np.maximum(log_y, floor))
        return np.log(self._evaluate(x, y, alpha))

    def evaluate(self, x, y, alpha: float):
        """Evaluates the weighted mean

        Args:
            x: Positive real (or array of positive reals)
            y: Positive real (or array of positive reals)
            alpha: Weight in [0, 1]

        Returns:
            ``M_alpha(x, y)`` clipped to ``[min(x, y), max(x, y)]`` to absorb rounding

        Raises:
            DomainError: If alpha is outside [0, 1] or some argument is not positive
        """
        alpha = check_alpha(alpha)
        x_arr = np.asarray(x, dtype=float)
        y_arr = np.asarray(y, dtype=float)
        if np.any(~(x_arr > 0)) or np.any(~(y_arr > 0)):
            raise DomainError('weighted means are defined on positive reals only')
        if alpha == 0.0:
            result = np.broadcast_to(x_arr, np.broadcast(x_arr, y_arr).shape).astype(float)
        elif alpha == 1.0:
            result = np.broadcast_to(y_arr, np.broadcast(x_arr, y_arr).shape).astype(float)
        else:
            with np.errstate(over='ignore', under='ignore', divide='ignore'):
                result = self._evaluate(x_arr, y_arr, alpha)
            result = np.clip(result, np.minimum(x_arr, y_arr), np.maximum(x_arr, y_arr))
        if result.ndim == 0:
            return float(result)
        return result

    def log_evaluate(self, log_x, log_y, alpha: float):
        """Evaluates ``log M_alpha(exp(log_x), exp(log_y))``

        Arguments equal to ``-inf`` stand for zero densities. No domain validation is made on the
        arguments because this is the hot path of every M-mixture evaluation.

        Args:
            log_x: Logarithm of the first argument
            log_y: Logarithm of the second argument
            alpha: Weight in [0, 1]

        Returns:
            Logarithm of the weighted mean
        """
        log_x = np.asarray(log_x, dtype=float)
        log_y = np.asarray(log_y, dtype=float)
        if alpha == 0.0:
            return log_x + np.zeros_like(log_y)
        if alpha == 1.0:
            return log_y + np.zeros_like(log_x)
        with np.errstate(over='ignore', under='ignore', divide='ignore', invalid='ignore'):
            return self._log_evaluate(log_x, log_y, alpha)

    def __call__(self, x, y, alpha: float):
        return self.evaluate(x, y, alpha)

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self), tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return '%s()' % self.__class__.__name__

    def __str__(self):
        return self.identifier()


class ArithmeticMean(WeightedMean):
    """Weighted arithmetic mean ``(1 - alpha) x + alpha y``"""

    @classmethod
    def identifier(cls):
        return 'arithmetic'

    def _evaluate(self, x, y, alpha):
        return (1.0 - alpha) * x + alpha * y

    def _log_evaluate(self, log_x, log_y, alpha):
        return np.logaddexp(np.log1p(-alpha) + log_x, np.log(alpha) + log_y)


class GeometricMean(WeightedMean):
    """Weighted geometric mean ``x^(1 - alpha) y^alpha``"""

    @classmethod
    def identifier(cls):
        return 'geometric'

    def _evaluate(self, x, y, alpha):
        return np.exp((1.0 - alpha) * np.log(x) + alpha * np.log(y))

    def _log_evaluate(self, log_x, log_y, alpha):
        return (1.0 - alpha) * log_x + alpha * log_y


class HarmonicMean(WeightedMean):
    """Weighted harmonic mean ``x y / ((1 - alpha) y + alpha x)``"""

    @classmethod
    def identifier(cls):
        return 'harmonic'

    def _evaluate(self, x, y, alpha):
        return x * y / ((1.0 - alpha) * y + alpha * x)

    def _log_evaluate(self, log_x, log_y, alpha):
        return -np.logaddexp(np.log1p(-alpha) - log_x, np.log(alpha) - log_y)


class PowerMean(WeightedMean):
    """Weighted power mean ``((1 - alpha) x^p + alpha y^p)^(1/p)``

    Exponents with ``|p| < 1e-6`` are routed to the geometric mean, which is the limit of the
    power means at ``p = 0``.

    Args:
        p: Nonzero real exponent
    """

    @classmethod
    def identifier(cls):
        return 'power'

    def __init__(self, p: float):
        p = float(p)
        if not np.isfinite(p) or p == 0.0:
            raise DomainError('the power mean exponent must be a nonzero finite real, got %r' % p)
        self.p = p

    def _evaluate(self, x, y, alpha):
        return np.exp(self._log_evaluate(np.log(x), np.log(y), alpha))

    def _log_evaluate(self, log_x, log_y, alpha):
        if abs(self.p) < _POWER_GEOMETRIC_THRESHOLD:
            return (1.0 - alpha) * log_x + alpha * log_y
        return np.logaddexp(np.log1p(-alpha) + self.p * log_x, np.log(alpha) + self.p * log_y) / self.p

    def __repr__(self):
        return 'PowerMean(p=%r)' % self.p

    def __str__(self):
        return 'power(%g)' % self.p


class QuasiArithmeticMean(WeightedMean):
    """Weighted quasi-arithmetic mean ``h^-1((1 - alpha) h(x) + alpha h(y))``

    Args:
        h: Strictly monotone continuous generator, vectorized over numpy arrays
        h_inv: Inverse of the generator
        name (optional): Label used in reports
    """

    @classmethod
    def identifier(cls):
        return 'quasi-arithmetic'

    def __init__(self, h, h_inv, name: str = None):
        self.h = h
        self.h_inv = h_inv
        self.name = name or getattr(h, '__name__', 'h')

    def _evaluate(self, x, y, alpha):
        return np.asarray(self.h_inv((1.0 - alpha) * self.h(x) + alpha * self.h(y)), dtype=float)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return 'QuasiArithmeticMean(name=%r)' % self.name

    def __str__(self):
        return 'quasi-arithmetic(%s)' % self.name


MEANS_LIST = (
    ArithmeticMean,
    GeometricMean,
    HarmonicMean,
)

MEANS_DICT = {mean.identifier(): mean for mean in MEANS_LIST}


def mean_from_identifier(name: str, p: float = None) -> WeightedMean:
    """Builds a mean from its identifier

    Args:
        name: One of ``arithmetic``, ``geometric``, ``harmonic`` or ``power``
        p (optional): Exponent, required by the power mean

    Returns:
        Mean instance
    """
    name = name.lower()
    if name == PowerMean.identifier():
        if p is None:
            raise DomainError('the power mean requires an exponent')
        return PowerMean(p)
    if name not in MEANS_DICT:
        raise DomainError('unknown mean %r, expected one of %s' % (
            name, ', '.join(list(MEANS_DICT) + [PowerMean.identifier()])))
    return MEANS_DICT[name]()


def evaluate(mean: WeightedMean, x, y, alpha: float):
    """Evaluates ``M_alpha(x, y)``

    Args:
        mean: Weighted mean
        x: Positive real
        y: Positive real
        alpha: Weight in [0, 1]

    Returns:
        The weighted mean of x and y
    """
    return mean.evaluate(x, y, alpha)


def default_grid():
    """Default sampling lattice for :func:`dominates`

    Returns:
        tuple(ndarray, ndarray, ndarray): Log-spaced x and y values in [1e-3, 1e3] and alphas
        in {0, 0.05, ..., 1}
    """
    values = np.logspace(-3, 3, 25)
    return values, values.copy(), np.linspace(0.0, 1.0, 21)


def dominates(mean_a: WeightedMean, mean_b: WeightedMean, grid=None) -> bool:
    """Checks on a finite lattice whether ``mean_a >= mean_b``

    This is a sampled necessary condition for dominance, not a proof.

    Args:
        mean_a: Candidate dominating mean
        mean_b: Candidate dominated mean
        grid (optional): Tuple ``(xs, ys, alphas)`` of positive abscissas and weights,
            :func:`default_grid` when omitted

    Returns:
        True if ``M_a(x, y) >= M_b(x, y) - 1e-12`` at every lattice point
    """
    xs, ys, alphas = default_grid() if grid is None else grid
    x, y = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    for alpha in alphas:
        a = mean_a.evaluate(x, y, alpha)
        b = mean_b.evaluate(x, y, alpha)
        if np.any(a < b - _DOMINANCE_SLACK * np.maximum(1.0, np.abs(b))):
            return False
    return True


__author__ = 'GeneralizedJSD developers'
