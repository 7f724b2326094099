"""
gjsd.structures
===============

This module contains the data structures shared by the numerical integration oracle and every
divergence: support descriptors, integral estimates, measured values and the abstract density.

A density is evaluated in log space through ``log_eval``, which takes a numpy array of points
(shape ``(n,)`` in dimension one or on finite alphabets, ``(n, d)`` otherwise) and returns
``-inf`` outside of the support.

Attributes:
    SUPPORTS_LIST (tuple): List of available support descriptors
    DENSITIES_LIST (tuple): List of the basic densities shipped by this module
    DENSITIES_DICT (dict): Dictionary which maps family identifiers to basic densities
    POISSON_TAIL_MASS (float): Probability mass dropped when truncating a Poisson distribution
"""

import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln

from .exceptions import DomainError
from .utils import check_positive

POISSON_TAIL_MASS = 1e-17


class Support(metaclass=ABCMeta):
    """Abstract base class for support descriptors

    Supports are immutable value objects. Besides describing the set where a density is
    positive, they carry the hints (center, scale, breakpoints) used by the quadrature maps.
    """

    dim = 1

    @classmethod
    @abstractmethod
    def identifier(cls) -> str:
        """Support unique identifier

        Returns:
            Unique identifier
        """
        pass

    @abstractmethod
    def union(self, other):
        """Smallest support of this kind containing both supports

        Args:
            other: Another support

        Returns:
            Support: Support containing both
        """
        pass

    def _key(self):
        return tuple(sorted(self.__dict__.items()))

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self), self._key()))

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__,
                           ', '.join('%s=%r' % item for item in self._key()))


class RealLine(Support):
    """The whole space ``R^dim`` with the Lebesgue measure

    Args:
        dim (optional): Dimension
        center (optional): Location hint for the tail substitution
        scale (optional): Scale hint for the tail substitution
    """

    @classmethod
    def identifier(cls):
        return 'real-line'

    def __init__(self, dim: int = 1, center: float = 0.0, scale: float = 1.0):
        if int(dim) < 1:
            raise DomainError('dimension must be a positive integer, got %r' % dim)
        self.dim = int(dim)
        self.center = float(center)
        self.scale = check_positive(scale, 'scale')

    def union(self, other):
        if isinstance(other, FiniteAlphabet) or other.dim != self.dim:
            raise DomainError('cannot merge %r with %r' % (self, other))
        if isinstance(other, RealLine):
            return RealLine(self.dim, 0.5 * (self.center + other.center),
                            math.sqrt(self.scale * other.scale))
        return RealLine(self.dim, self.center, self.scale)


class PositiveHalfLine(Support):
    """The half line ``(0, inf)`` with the Lebesgue measure

    Args:
        scale (optional): Scale hint for the tail substitution
    """

    @classmethod
    def identifier(cls):
        return 'positive-half-line'

    def __init__(self, scale: float = 1.0):
        self.scale = check_positive(scale, 'scale')

    def union(self, other):
        if isinstance(other, PositiveHalfLine):
            return PositiveHalfLine(math.sqrt(self.scale * other.scale))
        if isinstance(other, Interval) and other.low >= 0.0:
            return PositiveHalfLine(self.scale)
        if isinstance(other, RealLine):
            return other.union(self)
        raise DomainError('cannot merge %r with %r' % (self, other))


class FiniteAlphabet(Support):
    """The alphabet ``{0, ..., size - 1}`` with the counting measure

    Args:
        size: Alphabet size
    """

    @classmethod
    def identifier(cls):
        return 'finite-alphabet'

    def __init__(self, size: int):
        if int(size) < 1:
            raise DomainError('alphabet size must be a positive integer, got %r' % size)
        self.size = int(size)

    def union(self, other):
        if not isinstance(other, FiniteAlphabet):
            raise DomainError('cannot merge %r with %r' % (self, other))
        return FiniteAlphabet(max(self.size, other.size))


class Interval(Support):
    """The compact interval ``[low, high]`` with the Lebesgue measure

    Args:
        low: Lower bound
        high: Upper bound
        breakpoints (optional): Interior points where the integrand may be discontinuous
    """

    @classmethod
    def identifier(cls):
        return 'interval'

    def __init__(self, low: float, high: float, breakpoints=()):
        low, high = float(low), float(high)
        if not (math.isfinite(low) and math.isfinite(high) and low < high):
            raise DomainError('invalid interval [%r, %r]' % (low, high))
        self.low = low
        self.high = high
        self.breakpoints = tuple(sorted({float(b) for b in breakpoints if low < b < high}))

    def union(self, other):
        if isinstance(other, Interval):
            points = set(self.breakpoints) | set(other.breakpoints)
            points |= {self.low, self.high, other.low, other.high}
            return Interval(min(self.low, other.low), max(self.high, other.high), points)
        if isinstance(other, (RealLine, PositiveHalfLine)):
            return other.union(self)
        raise DomainError('cannot merge %r with %r' % (self, other))

    def partition(self):
        """Initial partition of the interval at its breakpoints

        Returns:
            list: Consecutive ``(a, b)`` pairs covering the interval
        """
        points = (self.low,) + self.breakpoints + (self.high,)
        return list(zip(points[:-1], points[1:]))


SUPPORTS_LIST = (
    RealLine,
    PositiveHalfLine,
    FiniteAlphabet,
    Interval,
)


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of a numerical integration

    Attributes:
        value: Estimated integral
        abs_error: Nonnegative error estimate (standard error for Monte Carlo)
        nodes_used: Number of integrand evaluations
        method: ``quadrature``, ``monte-carlo`` or ``sum``
    """

    value: float
    abs_error: float
    nodes_used: int
    method: str = 'quadrature'

    def __post_init__(self):
        if not self.abs_error >= 0.0:
            raise DomainError('abs_error must be nonnegative, got %r' % self.abs_error)

    def __float__(self):
        return float(self.value)


class Measured(float):
    """A float carrying the absolute error of the computation which produced it

    Arithmetic on measured values returns plain floats, so combinators propagate errors
    explicitly through :func:`error_of`.

    Args:
        value: Value
        abs_error (optional): Nonnegative absolute error
        method (optional): ``closed-form`` or ``oracle``
    """

    def __new__(cls, value: float, abs_error: float = 0.0, method: str = 'closed-form'):
        instance = super().__new__(cls, value)
        instance.abs_error = abs(float(abs_error))
        instance.method = method
        return instance

    def __repr__(self):
        return 'Measured(%r, abs_error=%r, method=%r)' % (float(self), self.abs_error, self.method)


class InfiniteDivergence(Measured):
    """Sentinel for a divergence equal to ``+inf``

    Args:
        partial (optional): The integral estimate accumulated before the divergence was detected
    """

    def __new__(cls, partial: IntegralEstimate = None):
        instance = super().__new__(cls, math.inf, 0.0, 'oracle')
        instance.partial = partial
        return instance

    def __repr__(self):
        return 'InfiniteDivergence(partial=%r)' % (self.partial,)


def error_of(value) -> float:
    """Absolute error attached to a value

    Args:
        value: Plain number, :class:`Measured` or :class:`IntegralEstimate`

    Returns:
        The attached error, 0 for plain numbers
    """
    return float(getattr(value, 'abs_error', 0.0))


class Density(metaclass=ABCMeta):
    """Abstract base class for probability densities

    Subclasses implement ``log_eval`` and the ``support`` property. Sampling is optional and only
    needed when the density is used as a Monte Carlo proposal.
    """

    @classmethod
    @abstractmethod
    def family(cls) -> str:
        """Family identifier used in JSON descriptors

        Returns:
            Family identifier
        """
        pass

    @property
    @abstractmethod
    def support(self) -> Support:
        """Support descriptor"""
        pass

    @abstractmethod
    def log_eval(self, x):
        """Vectorized log-density

        Args:
            x: Points, shape ``(n,)`` for one-dimensional supports or ``(n, d)``

        Returns:
            ndarray: Log-density values, ``-inf`` outside of the support
        """
        pass

    @property
    def dim(self) -> int:
        return self.support.dim

    def eval(self, x):
        """Vectorized density

        Args:
            x: Points

        Returns:
            ndarray: Density values
        """
        with np.errstate(under='ignore'):
            return np.exp(self.log_eval(x))

    def __call__(self, x):
        return self.eval(x)

    def sample(self, n: int, rng: np.random.Generator):
        """Draws samples from the density

        Args:
            n: Sample count
            rng: Random generator

        Returns:
            ndarray: Samples with the same layout accepted by :meth:`log_eval`
        """
        raise NotImplementedError('%s does not support sampling' % self.__class__.__name__)

    def proposal(self):
        """Density used as default Monte Carlo proposal when integrating against this one"""
        return self

    def mixture_normalizer(self, other, mean, alpha: float):
        """Closed-form M-mixture normalizer and mixture density, when known

        Args:
            other: Second density
            mean: Weighted mean
            alpha: Skew

        Returns:
            tuple(float, Density) or None: ``(Z, normalized mixture)`` or None when unknown
        """
        return None

    def closed_kl(self, other):
        """Closed-form ``KL(self : other)``, when known

        Args:
            other: Second density

        Returns:
            float or None: The divergence or None when no closed form applies
        """
        return None

    def to_json(self) -> dict:
        """JSON descriptor of the density

        Returns:
            dict: Descriptor with a ``family`` key
        """
        raise NotImplementedError('%s has no JSON descriptor' % self.__class__.__name__)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        try:
            return self.to_json() == other.to_json()
        except NotImplementedError:
            return False

    def __hash__(self):
        return id(self)

    def __repr__(self):
        try:
            return '%s(%s)' % (self.__class__.__name__, self.to_json())
        except NotImplementedError:
            return '%s()' % self.__class__.__name__


class Categorical(Density):
    """Categorical distribution on a finite alphabet

    Args:
        probs: Nonnegative cell masses summing to one (within 1e-9, then renormalized)
    """

    @classmethod
    def family(cls):
        return 'categorical'

    def __init__(self, probs):
        probs = np.asarray(probs, dtype=float).ravel()
        if probs.size == 0 or np.any(~np.isfinite(probs)) or np.any(probs < 0.0):
            raise DomainError('categorical masses must be finite and nonnegative')
        total = probs.sum()
        if abs(total - 1.0) > 1e-9:
            raise DomainError('categorical masses must sum to one, got %r' % total)
        self.probs = probs / total
        with np.errstate(divide='ignore'):
            self._log_probs = np.log(self.probs)

    @property
    def support(self):
        return FiniteAlphabet(self.probs.size)

    def log_eval(self, x):
        x = np.asarray(x)
        index = np.asarray(x, dtype=int)
        inside = (index >= 0) & (index < self.probs.size) & (index == x)
        result = np.full(index.shape, -np.inf)
        result[inside] = self._log_probs[index[inside]]
        return result

    def sample(self, n, rng):
        return rng.choice(self.probs.size, size=n, p=self.probs)

    def to_json(self):
        return {'family': self.family(), 'probs': self.probs.tolist()}


class Uniform(Density):
    """Uniform distribution on ``[low, high]``

    Args:
        low: Lower bound
        high: Upper bound
    """

    @classmethod
    def family(cls):
        return 'uniform'

    def __init__(self, low: float, high: float):
        self._support = Interval(low, high)
        self.low = self._support.low
        self.high = self._support.high

    @property
    def support(self):
        return self._support

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.low) & (x <= self.high)
        return np.where(inside, -math.log(self.high - self.low), -np.inf)

    def sample(self, n, rng):
        return rng.uniform(self.low, self.high, size=n)

    def to_json(self):
        return {'family': self.family(), 'low': self.low, 'high': self.high}


class Exponential(Density):
    """Exponential distribution ``rate * exp(-rate * x)`` on the positive half line

    Args:
        rate: Positive rate
    """

    @classmethod
    def family(cls):
        return 'exponential'

    def __init__(self, rate: float):
        self.rate = check_positive(rate, 'rate')

    @property
    def support(self):
        return PositiveHalfLine(1.0 / self.rate)

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0.0, math.log(self.rate) - self.rate * x, -np.inf)

    def sample(self, n, rng):
        return rng.exponential(1.0 / self.rate, size=n)

    def to_json(self):
        return {'family': self.family(), 'rate': self.rate}


class Poisson(Density):
    """Poisson distribution on the counting measure

    The support is truncated to the alphabet beyond which the tail mass is below
    ``POISSON_TAIL_MASS``.

    Args:
        lam: Positive intensity
    """

    @classmethod
    def family(cls):
        return 'poisson'

    def __init__(self, lam: float):
        self.lam = check_positive(lam, 'lam')
        self._size = int(stats.poisson.isf(POISSON_TAIL_MASS, self.lam)) + 2

    @property
    def support(self):
        return FiniteAlphabet(self._size)

    def log_eval(self, x):
        x = np.asarray(x)
        k = np.asarray(x, dtype=float)
        inside = (k >= 0) & (k == np.floor(k))
        safe = np.where(inside, k, 0.0)
        return np.where(inside, safe * math.log(self.lam) - self.lam - gammaln(safe + 1.0), -np.inf)

    def sample(self, n, rng):
        return rng.poisson(self.lam, size=n)

    def to_json(self):
        return {'family': self.family(), 'lam': self.lam}


DENSITIES_LIST = (
    Categorical,
    Uniform,
    Exponential,
    Poisson,
)

DENSITIES_DICT = {density.family(): density for density in DENSITIES_LIST}


__author__ = 'GeneralizedJSD developers'
