"""
gjsd.solvers
============

This module contains the centroid solvers used by the centroid step of Lloyd's k-means.

A solver receives the parameter vectors of a cluster and their weights and returns the center
minimizing the weighted sum of divergences from the points to the center.

Attributes:
    SOLVERS_LIST (tuple): List of available solvers
    SOLVERS_DICT (dict): Dictionary which maps identifiers to solvers
"""

import logging
import math
from abc import ABCMeta, abstractmethod
from time import time

import numpy as np
from scipy.optimize import minimize

from .exceptions import DomainError, GJSDError
from .expfam import ExpFamSpec, jensen_skew
from .utils import capitalized, check_alpha

_LOGGER = logging.getLogger(__name__)

_SOLVER_REPR_TEMPLATE = '''Solver : %s
Family : %s
Alpha  : %s
'''

_CCCP_TOLERANCE = 1e-10


def _normalized_weights(count: int, weights) -> np.ndarray:
    if weights is None:
        return np.full(count, 1.0 / count)
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.size != count or np.any(weights < 0.0) or not weights.sum() > 0.0:
        raise DomainError('one nonnegative weight per point is required')
    return weights / weights.sum()


def jensen_objective(spec: ExpFamSpec, thetas, weights, theta, alpha: float) -> float:
    """Weighted sum of skew Jensen divergences ``sum w_i J_F^a(theta_i : theta)``"""
    return sum(w * jensen_skew(spec, point, theta, alpha).value for w, point in zip(weights, thetas))


def jensen_centroid_cccp(spec: ExpFamSpec, thetas, weights=None, alpha: float = 0.5,
                         iters: int = 100) -> np.ndarray:
    """Skew Jensen centroid by the convex-concave procedure

    Iterates ``theta <- (grad F)^-1(sum w_i grad F((1 - a) theta_i + a theta))`` from the weighted
    arithmetic mean. The objective of every iterate is tracked and the best iterate is returned.

    Args:
        spec: Exponential family
        thetas: Natural parameters
        weights (optional): Nonnegative weights, uniform when omitted
        alpha (optional): Skew in (0, 1)
        iters (optional): Maximum number of iterations

    Returns:
        ndarray: The centroid

    Raises:
        GradientInversionError: If the gradient cannot be inverted at some iterate
    """
    alpha = check_alpha(alpha, open_interval=True)
    thetas = np.array([spec.check(theta) for theta in thetas])
    weights = _normalized_weights(len(thetas), weights)
    current = weights @ thetas
    if len(thetas) == 1:
        return current
    best = current
    best_value = jensen_objective(spec, thetas, weights, current, alpha)
    for iteration in range(iters):
        eta = np.sum([w * spec.grad_F((1.0 - alpha) * point + alpha * current)
                      for w, point in zip(weights, thetas)], axis=0)
        following = spec.check(spec.grad_F_inverse(eta), 'iterate')
        step = float(np.max(np.abs(following - current)))
        current = following
        value = jensen_objective(spec, thetas, weights, current, alpha)
        _LOGGER.debug('cccp iteration %d: objective %.17g, step %.3g', iteration + 1, value, step)
        if value <= best_value:
            best, best_value = current, value
        if step < _CCCP_TOLERANCE:
            break
    return best


class CentroidSolver(metaclass=ABCMeta):
    """Abstract base class for centroid solvers

    Args:
        spec (optional): Exponential family of the parameters
        alpha (optional): Skew of Jensen-type divergences
        divergence (optional): Pointwise divergence ``D(point, center)``, needed by numeric solvers
    """

    @classmethod
    @abstractmethod
    def identifier(cls) -> str:
        """Solver unique identifier

        Returns:
            Unique identifier
        """
        pass

    @abstractmethod
    def _centroid(self, points: np.ndarray, weights: np.ndarray) -> np.ndarray:
        pass

    def __init__(self, spec: ExpFamSpec = None, alpha: float = 0.5, divergence=None):
        self.spec = spec
        self.alpha = alpha
        self.divergence = divergence
        self._time = 0.0

    def __str__(self):
        return _SOLVER_REPR_TEMPLATE % (
            capitalized(self.identifier()),
            self.spec.identifier() if self.spec is not None else 'raw',
            self.alpha,
        )

    def centroid(self, points, weights=None) -> np.ndarray:
        """Computes the centroid of a cluster

        Args:
            points: Array of shape ``(n, p)`` of parameter vectors
            weights (optional): Nonnegative weights, uniform when omitted

        Returns:
            ndarray: The center
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[0] == 0:
            raise DomainError('cannot compute the centroid of an empty cluster')
        start = time()
        center = self._centroid(points, _normalized_weights(points.shape[0], weights))
        self._time += time() - start
        return center

    @property
    def time(self) -> float:
        """Time used by the centroid computations in seconds"""
        return self._time


class RightBregmanSolver(CentroidSolver):
    """Right-sided Bregman centroid, the weighted center of mass

    It is exact for every Bregman divergence ``B_F(point : center)``, the squared Euclidean
    distance included, and needs no evaluation of F.
    """

    @classmethod
    def identifier(cls):
        return 'right-bregman'

    def _centroid(self, points, weights):
        return weights @ points


class JensenCCCPSolver(CentroidSolver):
    """Skew Jensen centroid by the convex-concave procedure"""

    iters = 100

    @classmethod
    def identifier(cls):
        return 'jensen-cccp'

    def _centroid(self, points, weights):
        if self.spec is None:
            raise DomainError('the %s solver requires an exponential family' % self.identifier())
        return jensen_centroid_cccp(self.spec, points, weights, self.alpha, self.iters)


class NumericSolver(CentroidSolver):
    """Derivative-free minimization of the weighted divergence sum from the center of mass

    Centers outside of the divergence domain are given an infinite objective.
    """

    @classmethod
    def identifier(cls):
        return 'numeric'

    def _centroid(self, points, weights):
        if self.divergence is None:
            raise DomainError('the %s solver requires a divergence' % self.identifier())
        start = weights @ points
        if points.shape[0] == 1:
            return start

        def cost(center):
            try:
                return sum(w * self.divergence(point, center) for w, point in zip(weights, points))
            except (GJSDError, ValueError, ArithmeticError):
                return math.inf

        result = minimize(cost, start, method='Nelder-Mead',
                          options={'xatol': 1e-10, 'fatol': 1e-14, 'maxiter': 2000 * start.size})
        _LOGGER.debug('numeric centroid: %s after %d evaluations', result.message, result.nfev)
        return result.x if result.fun <= cost(start) else start


SOLVERS_LIST = (
    RightBregmanSolver,
    JensenCCCPSolver,
    NumericSolver,
)

SOLVERS_DICT = {solver.identifier(): solver for solver in SOLVERS_LIST}


__author__ = 'GeneralizedJSD developers'
