"""
gjsd.wmixture
=============

This module contains mixture families with prescribed components (w-mixtures)
``m_theta = (1 - sum theta_i) p_0 + sum theta_i p_i``.

The negentropy ``F(theta) = -h(m_theta)`` is a convex generator computed by the oracle. The
Kullback-Leibler divergence between members is the Bregman divergence of F and the
Jensen-Shannon divergence is the Jensen divergence of F at the midpoint. F has no closed gradient
in general: it is differentiated numerically with Richardson-extrapolated central differences.

Attributes:
    DOMAIN_MARGIN (float): Distance to the simplex boundary required by negentropy evaluations
"""

import logging
import math
import threading

import numpy as np
from scipy.special import logsumexp

from .divergences import entropy
from .exceptions import DomainError
from .oracle import DEFAULT_CONFIG, OracleConfig
from .structures import Categorical, Density, FiniteAlphabet, Interval, Measured, PositiveHalfLine

_LOGGER = logging.getLogger(__name__)

DOMAIN_MARGIN = 1e-9

_GRADIENT_STEP = 1e-5
_GRAM_FLOOR = 1e-10
_GRID_SIZE = 401


class WMixtureFamily:
    """Mixture family with fixed linearly independent components

    Linear independence of the components is the caller's responsibility, see
    :func:`check_independence`.

    Args:
        components: Normalized densities ``p_0, ..., p_D`` sharing the sample space
    """

    def __init__(self, components):
        components = list(components)
        if len(components) < 2:
            raise DomainError('a w-mixture family needs at least two components')
        support = components[0].support
        for component in components[1:]:
            support = support.union(component.support)
        self.components = components
        self.support = support
        self._cache = {}
        self._lock = threading.Lock()

    @property
    def order(self) -> int:
        """Number D of free weights"""
        return len(self.components) - 1

    def weights(self, theta, margin: float = 0.0) -> np.ndarray:
        """Full weight vector ``(1 - sum theta, theta_1, ..., theta_D)``

        Args:
            theta: Free weights
            margin (optional): Required distance to the simplex boundary

        Raises:
            DomainError: If theta is outside of the (shrunk) simplex
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
        if theta.size != self.order or not np.all(np.isfinite(theta)):
            raise DomainError('expected %d finite weights, got %s' % (self.order, theta.tolist()))
        rest = 1.0 - theta.sum()
        if np.any(theta < margin) or rest < margin:
            raise DomainError('theta=%s is outside of the mixture domain (margin %g)'
                              % (theta.tolist(), margin))
        return np.concatenate([[rest], theta])

    def cached(self, key, compute):
        """Returns the cached value of key, computing and storing it on a miss"""
        value = self._cache.get(key)
        if value is None:
            value = compute()
            with self._lock:
                value = self._cache.setdefault(key, value)
        return value

    def __repr__(self):
        return 'WMixtureFamily(%s)' % ', '.join(repr(component) for component in self.components)


class WMixtureDensity(Density):
    """Member ``m_theta`` of a w-mixture family

    Args:
        fam: Mixture family
        theta: Free weights on the closed simplex
    """

    @classmethod
    def family(cls):
        return 'w-mixture'

    def __init__(self, fam: WMixtureFamily, theta):
        self.fam = fam
        self.weights = fam.weights(theta)
        self.theta = self.weights[1:].copy()

    @property
    def support(self):
        return self.fam.support

    def log_eval(self, x):
        logs = np.stack([component.log_eval(x) for component in self.fam.components])
        with np.errstate(divide='ignore', invalid='ignore'):
            return logsumexp(logs, axis=0, b=self.weights.reshape((-1,) + (1,) * (logs.ndim - 1)))

    def sample(self, n, rng):
        counts = rng.multinomial(n, self.weights)
        draws = [component.sample(count, rng)
                 for component, count in zip(self.fam.components, counts) if count > 0]
        samples = np.concatenate(draws)
        return samples[rng.permutation(n)]

    def to_json(self):
        return {'family': self.family(), 'theta': self.theta.tolist(),
                'components': [component.to_json() for component in self.fam.components]}


def mixture_density(fam: WMixtureFamily, theta) -> WMixtureDensity:
    """Mixture ``(1 - sum theta_i) p_0 + sum theta_i p_i``

    Args:
        fam: Mixture family
        theta: Free weights, nonnegative with sum at most one

    Returns:
        The mixture density
    """
    return WMixtureDensity(fam, theta)


def negentropy(fam: WMixtureFamily, theta, cfg: OracleConfig = None) -> Measured:
    """Negentropy ``F(theta) = -h(m_theta)`` computed by the oracle

    Values are cached per family, parameter and configuration.

    Args:
        fam: Mixture family
        theta: Free weights at least ``DOMAIN_MARGIN`` inside the simplex
        cfg (optional): Oracle configuration

    Returns:
        The negentropy with its error
    """
    cfg = cfg or DEFAULT_CONFIG
    weights = fam.weights(theta, DOMAIN_MARGIN)

    def compute():
        value = entropy(WMixtureDensity(fam, weights[1:]), cfg)
        return Measured(-float(value), value.abs_error, 'oracle')

    return fam.cached((weights[1:].tobytes(), cfg), compute)


def _central_difference(fam, theta, index, step, cfg):
    shift = np.zeros(theta.size)
    shift[index] = step
    forward = negentropy(fam, theta + shift, cfg)
    backward = negentropy(fam, theta - shift, cfg)
    return (float(forward) - float(backward)) / (2.0 * step), \
        (forward.abs_error + backward.abs_error) / (2.0 * step)


def negentropy_gradient(fam: WMixtureFamily, theta, cfg: OracleConfig = None,
                        step: float = _GRADIENT_STEP):
    """Gradient of the negentropy by Richardson-extrapolated central differences

    The step shrinks near the simplex boundary so that every evaluation stays in the domain.

    Args:
        fam: Mixture family
        theta: Free weights
        cfg (optional): Oracle configuration
        step (optional): Largest difference step

    Returns:
        tuple(ndarray, float): Gradient and a bound on the error propagated from the oracle
    """
    weights = fam.weights(theta, DOMAIN_MARGIN)
    theta = weights[1:]
    gradient = np.empty(theta.size)
    error = 0.0
    for index in range(theta.size):
        room = min(theta[index], weights[0]) - DOMAIN_MARGIN
        if room <= 0.0:
            raise DomainError('theta=%s is too close to the simplex boundary to differentiate'
                              % theta.tolist())
        h = min(step, 0.5 * room)
        coarse, coarse_error = _central_difference(fam, theta, index, h, cfg)
        fine, fine_error = _central_difference(fam, theta, index, 0.5 * h, cfg)
        gradient[index] = (4.0 * fine - coarse) / 3.0
        error = max(error, (4.0 * fine_error + coarse_error) / 3.0)
    _LOGGER.debug('negentropy gradient at %s: %s', theta.tolist(), gradient.tolist())
    return gradient, error


def wmix_kl(fam: WMixtureFamily, theta1, theta2, cfg: OracleConfig = None) -> Measured:
    """Kullback-Leibler divergence between members as the Bregman divergence of the negentropy

    Args:
        fam: Mixture family
        theta1: First free weights
        theta2: Second free weights
        cfg (optional): Oracle configuration

    Returns:
        ``KL(m_theta1 : m_theta2)`` with its propagated error
    """
    theta1 = fam.weights(theta1, DOMAIN_MARGIN)[1:]
    theta2 = fam.weights(theta2, DOMAIN_MARGIN)[1:]
    if np.array_equal(theta1, theta2):
        return Measured(0.0, 0.0, 'oracle')
    first = negentropy(fam, theta1, cfg)
    second = negentropy(fam, theta2, cfg)
    gradient, gradient_error = negentropy_gradient(fam, theta2, cfg)
    delta = theta1 - theta2
    value = float(first) - float(second) - float(delta @ gradient)
    abs_error = first.abs_error + second.abs_error + gradient_error * float(np.abs(delta).sum())
    return Measured(max(value, 0.0), abs_error, 'oracle')


def wmix_jsd(fam: WMixtureFamily, theta1, theta2, cfg: OracleConfig = None) -> Measured:
    """Jensen-Shannon divergence between members as the Jensen divergence of the negentropy

    ``F(theta1) / 2 + F(theta2) / 2 - F((theta1 + theta2) / 2)``

    Args:
        fam: Mixture family
        theta1: First free weights
        theta2: Second free weights
        cfg (optional): Oracle configuration

    Returns:
        The divergence with its propagated error
    """
    theta1 = fam.weights(theta1, DOMAIN_MARGIN)[1:]
    theta2 = fam.weights(theta2, DOMAIN_MARGIN)[1:]
    if np.array_equal(theta1, theta2):
        return Measured(0.0, 0.0, 'oracle')
    first = negentropy(fam, theta1, cfg)
    second = negentropy(fam, theta2, cfg)
    middle = negentropy(fam, 0.5 * (theta1 + theta2), cfg)
    value = 0.5 * float(first) + 0.5 * float(second) - float(middle)
    abs_error = 0.5 * first.abs_error + 0.5 * second.abs_error + middle.abs_error
    return Measured(max(value, 0.0), abs_error, 'oracle')


def bregman_centroid_right(fam: WMixtureFamily, thetas, weights=None) -> np.ndarray:
    """Right-sided Bregman centroid, the weighted center of mass of the parameters

    Args:
        fam: Mixture family
        thetas: Free weight vectors
        weights (optional): Nonnegative point weights, uniform when omitted

    Returns:
        ndarray: The centroid
    """
    thetas = np.array([fam.weights(theta, DOMAIN_MARGIN)[1:] for theta in thetas])
    if weights is None:
        weights = np.full(len(thetas), 1.0 / len(thetas))
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.size != len(thetas) or np.any(weights < 0.0) or weights.sum() <= 0.0:
        raise DomainError('one nonnegative weight per parameter is required')
    return (weights / weights.sum()) @ thetas


def categorical_family(order: int) -> WMixtureFamily:
    """Categorical distributions on ``{0, ..., D}`` as the mixture family of the Dirac masses

    Args:
        order: Number D of free weights

    Returns:
        The family
    """
    if order < 1:
        raise DomainError('the categorical family needs at least one free weight')
    return WMixtureFamily([Categorical(np.eye(order + 1)[index]) for index in range(order + 1)])


def _sample_grid(support) -> np.ndarray:
    if isinstance(support, FiniteAlphabet):
        return np.arange(support.size, dtype=float)
    if isinstance(support, Interval):
        return np.linspace(support.low, support.high, _GRID_SIZE)
    if support.dim != 1:
        raise DomainError('independence checks are limited to one-dimensional supports')
    if isinstance(support, PositiveHalfLine):
        return np.linspace(0.0, 20.0 * support.scale, _GRID_SIZE)
    return np.linspace(support.center - 10.0 * support.scale, support.center + 10.0 * support.scale,
                       _GRID_SIZE)


def check_independence(fam: WMixtureFamily) -> bool:
    """Heuristic linear independence check of the components

    The components are evaluated on a sample grid of the common support, normalized, and the
    smallest eigenvalue of their Gram matrix is compared against 1e-10.

    Args:
        fam: Mixture family

    Returns:
        True if the Gram matrix is numerically nonsingular
    """
    grid = _sample_grid(fam.support)
    values = np.stack([component.eval(grid) for component in fam.components])
    norms = np.linalg.norm(values, axis=1)
    if np.any(norms == 0.0):
        return False
    values /= norms[:, None]
    smallest = float(np.linalg.eigvalsh(values @ values.T)[0])
    _LOGGER.debug('component Gram matrix smallest eigenvalue %.3g', smallest)
    return math.isfinite(smallest) and smallest > _GRAM_FLOOR


__author__ = 'GeneralizedJSD developers'
