"""
gjsd.expfam
===========

This module contains the exponential family engine: Bregman and Jensen divergences between natural
parameters, the closed-form geometric Jensen-Shannon divergences, and the multivariate Gaussian
machinery in its three coordinate charts.

Parameters of an :class:`ExpFamSpec` are flat numpy vectors. Multivariate Gaussian natural
parameters ``(theta_v, theta_M)`` are flattened as ``theta_v`` followed by the row-major entries
of ``theta_M``, so the compound inner product ``theta_v . theta_v' + tr(theta_M'^T theta_M)`` is
the plain dot product of the flat vectors.

All Gaussian linear algebra goes through Cholesky factorizations (``scipy.linalg.cho_factor``);
determinants are computed from the log-diagonal of the factor.

Attributes:
    CHARTS (tuple): Multivariate Gaussian coordinate charts
    SPECS_DICT (dict): Dictionary which maps identifiers to exponential family classes
"""

import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import brentq

from .exceptions import DomainError, GradientInversionError, PositiveDefiniteError, SpecParseError
from .means import GeometricMean
from .structures import Density, Exponential, Poisson, RealLine
from .utils import check_alpha, check_positive, lerp, symmetrized

CHARTS = ('ordinary', 'natural', 'expectation')

_PIVOT_FLOOR = 1e-12
_LOG_2PI = math.log(2.0 * math.pi)
_FD_STEP = 1e-5
_BRACKET_STEPS = 200


def _cholesky(matrix: np.ndarray, name: str):
    """Lower Cholesky factor of a symmetric matrix with a relative pivot floor"""
    try:
        factor, lower = cho_factor(matrix, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as error:
        raise PositiveDefiniteError('%s is not positive-definite' % name) from error
    pivots = np.diag(factor) ** 2
    scale = max(float(np.max(np.abs(np.diag(matrix)))), np.finfo(float).tiny)
    if np.min(pivots) <= _PIVOT_FLOOR * scale:
        raise PositiveDefiniteError('%s is numerically singular (pivot %.3g)' % (name, np.min(pivots)))
    return factor, lower


def _log_det(factor) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(factor[0]))))


def _inverse(factor) -> np.ndarray:
    inverse = cho_solve(factor, np.eye(factor[0].shape[0]))
    return 0.5 * (inverse + inverse.T)


class MvnParam:
    """A multivariate Gaussian in one of the ordinary, natural or expectation charts

    Use the :meth:`ordinary`, :meth:`natural` and :meth:`expectation` constructors, which validate
    the chart invariants: ``Sigma`` and ``theta_M`` positive-definite, ``-(eta_M + eta_v eta_v^T)``
    positive-definite.

    Args:
        chart: Chart name
        vector: ``mu``, ``theta_v`` or ``eta_v``
        matrix: ``Sigma``, ``theta_M`` or ``eta_M``
    """

    def __init__(self, chart: str, vector, matrix):
        if chart not in CHARTS:
            raise DomainError('unknown chart %r, expected one of %s' % (chart, ', '.join(CHARTS)))
        vector = np.atleast_1d(np.asarray(vector, dtype=float)).ravel()
        matrix = symmetrized(matrix, '%s matrix' % chart)
        if matrix.shape != (vector.size, vector.size) or not np.all(np.isfinite(vector)):
            raise DomainError('inconsistent %s parameter: vector of size %d, matrix of shape %s'
                              % (chart, vector.size, matrix.shape))
        self.chart = chart
        self.vector = vector
        self.matrix = matrix
        if chart == 'ordinary':
            self._factor = _cholesky(matrix, 'Sigma')
        elif chart == 'natural':
            self._factor = _cholesky(matrix, 'theta_M')
        else:
            self._factor = _cholesky(-(matrix + np.outer(vector, vector)), '-(eta_M + eta_v eta_v^T)')

    @classmethod
    def ordinary(cls, mu, sigma):
        return cls('ordinary', mu, sigma)

    @classmethod
    def natural(cls, theta_v, theta_m):
        return cls('natural', theta_v, theta_m)

    @classmethod
    def expectation(cls, eta_v, eta_m):
        return cls('expectation', eta_v, eta_m)

    @property
    def dim(self) -> int:
        return self.vector.size

    def to(self, chart: str):
        """Converts to another chart

        Args:
            chart: Target chart

        Returns:
            MvnParam: Same Gaussian in the target chart
        """
        return mvn_convert(self, chart)

    @property
    def mu(self) -> np.ndarray:
        return self.to('ordinary').vector

    @property
    def sigma(self) -> np.ndarray:
        return self.to('ordinary').matrix

    def allclose(self, other, rtol: float = 1e-10, atol: float = 1e-12) -> bool:
        other = other.to(self.chart)
        return (np.allclose(self.vector, other.vector, rtol=rtol, atol=atol)
                and np.allclose(self.matrix, other.matrix, rtol=rtol, atol=atol))

    def __eq__(self, other):
        return (isinstance(other, MvnParam) and self.chart == other.chart
                and np.array_equal(self.vector, other.vector) and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.chart, self.vector.tobytes(), self.matrix.tobytes()))

    def __repr__(self):
        return 'MvnParam(%s, %s, %s)' % (self.chart, self.vector.tolist(), self.matrix.tolist())


def mvn_convert(p: MvnParam, target_chart: str) -> MvnParam:
    """Converts a multivariate Gaussian between the ordinary, natural and expectation charts

    Args:
        p: Gaussian
        target_chart: ``ordinary``, ``natural`` or ``expectation``

    Returns:
        The Gaussian in the target chart
    """
    if target_chart not in CHARTS:
        raise DomainError('unknown chart %r' % target_chart)
    if p.chart == target_chart:
        return p
    if p.chart == 'ordinary':
        mu, sigma = p.vector, p.matrix
    elif p.chart == 'natural':
        sigma = 0.5 * _inverse(p._factor)
        mu = sigma @ p.vector
    else:
        mu = p.vector
        sigma = -(p.matrix + np.outer(mu, mu))

    if target_chart == 'ordinary':
        return MvnParam.ordinary(mu, sigma)
    if target_chart == 'natural':
        precision = _inverse(_cholesky(symmetrized(sigma, 'Sigma'), 'Sigma'))
        return MvnParam.natural(precision @ mu, 0.5 * precision)
    return MvnParam.expectation(mu, -sigma - np.outer(mu, mu))


def mvn_log_normalizer(p: MvnParam) -> float:
    """Log-normalizer evaluated with the formula of the chart of p

    ``F_lambda = (mu^T Sigma^-1 mu + log|Sigma| + d log 2 pi) / 2``,
    ``F_theta = (d log pi - log|theta_M| + theta_v^T theta_M^-1 theta_v / 2) / 2`` and ``F_eta`` is
    ``F_lambda`` at ``Sigma = -eta_M - eta_v eta_v^T``.

    Args:
        p: Gaussian

    Returns:
        The log-normalizer
    """
    d = p.dim
    if p.chart == 'natural':
        solved = cho_solve(p._factor, p.vector)
        return 0.5 * (d * math.log(math.pi) - _log_det(p._factor) + 0.5 * float(p.vector @ solved))
    mu = p.vector
    factor = p._factor
    return 0.5 * (float(mu @ cho_solve(factor, mu)) + _log_det(factor) + d * _LOG_2PI)


def mvn_dual(p: MvnParam) -> float:
    """Convex conjugate ``F*(eta) = -(log|Sigma| + d (1 + log 2 pi)) / 2``, the negative entropy"""
    ordinary = p.to('ordinary')
    return -0.5 * (_log_det(ordinary._factor) + ordinary.dim * (1.0 + _LOG_2PI))


def mvn_entropy(p: MvnParam) -> float:
    """Differential entropy ``log|2 pi e Sigma| / 2``"""
    return -mvn_dual(p)


def mvn_inner(p1: MvnParam, p2: MvnParam) -> float:
    """Compound inner product ``v1 . v2 + tr(M2^T M1)`` of the chart coordinates"""
    return float(p1.vector @ p2.vector + np.trace(p2.matrix.T @ p1.matrix))


def canonical_divergence(p1: MvnParam, p2: MvnParam) -> float:
    """Canonical divergence ``F(theta1) + F*(eta2) - <theta1, eta2>``, equal to ``B_F(theta1:theta2)``

    Args:
        p1: First Gaussian, read in the natural chart
        p2: Second Gaussian, read in the expectation chart

    Returns:
        The divergence
    """
    theta1 = p1.to('natural')
    eta2 = p2.to('expectation')
    return mvn_log_normalizer(theta1) + mvn_dual(eta2) - mvn_inner(theta1, eta2)


def mahalanobis(precision, x1, x2, squared: bool = False) -> float:
    """Mahalanobis distance ``sqrt((x1 - x2)^T Q (x1 - x2))``

    Args:
        precision: Positive-definite matrix Q
        x1: First point
        x2: Second point
        squared (optional): Return the squared distance

    Returns:
        The distance
    """
    precision = symmetrized(precision, 'Q')
    _cholesky(precision, 'Q')
    delta = np.atleast_1d(np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float))
    value = max(float(delta @ precision @ delta), 0.0)
    return value if squared else math.sqrt(value)


def mvn_kl(p1: MvnParam, p2: MvnParam) -> float:
    """Kullback-Leibler divergence between Gaussians

    ``(tr(Sigma2^-1 Sigma1) + dmu^T Sigma2^-1 dmu + log(|Sigma2| / |Sigma1|) - d) / 2``

    Args:
        p1: First Gaussian
        p2: Second Gaussian

    Returns:
        The divergence
    """
    first = p1.to('ordinary')
    second = p2.to('ordinary')
    if first.dim != second.dim:
        raise DomainError('dimension mismatch: %d and %d' % (first.dim, second.dim))
    delta = first.vector - second.vector
    trace = float(np.trace(cho_solve(second._factor, first.matrix)))
    quadratic = float(delta @ cho_solve(second._factor, delta))
    value = 0.5 * (trace + quadratic + _log_det(second._factor) - _log_det(first._factor) - first.dim)
    return max(value, 0.0)


def g_mixture_param(p1: MvnParam, p2: MvnParam, alpha: float) -> MvnParam:
    """Normalized geometric mixture of two Gaussians

    ``Sigma_a = ((1 - a) Sigma1^-1 + a Sigma2^-1)^-1`` is the matrix harmonic barycenter and
    ``mu_a = Sigma_a ((1 - a) Sigma1^-1 mu1 + a Sigma2^-1 mu2)``, the natural chart interpolation.

    Args:
        p1: First Gaussian
        p2: Second Gaussian
        alpha: Skew in [0, 1]

    Returns:
        The mixture in the ordinary chart
    """
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        return p1.to('ordinary')
    if alpha == 1.0:
        return p2.to('ordinary')
    theta1 = p1.to('natural')
    theta2 = p2.to('natural')
    return MvnParam.natural(lerp(theta1.vector, theta2.vector, alpha),
                            lerp(theta1.matrix, theta2.matrix, alpha)).to('ordinary')


def mvn_to_json(p: MvnParam) -> dict:
    """JSON descriptor ``{"chart": ..., <vector>: [...], <matrix>: [[...]]}``"""
    keys = _JSON_KEYS[p.chart]
    return {'chart': p.chart, keys[0]: p.vector.tolist(), keys[1]: p.matrix.tolist()}


def mvn_from_json(data: dict) -> MvnParam:
    """Parses a JSON descriptor produced by :func:`mvn_to_json`

    Raises:
        SpecParseError: If the descriptor is malformed
    """
    chart = data.get('chart', 'ordinary')
    if chart not in _JSON_KEYS:
        raise SpecParseError('unknown Gaussian chart %r' % chart)
    vector_key, matrix_key = _JSON_KEYS[chart]
    try:
        return MvnParam(chart, data[vector_key], data[matrix_key])
    except KeyError as error:
        raise SpecParseError('Gaussian descriptor misses the %s field' % error) from error


_JSON_KEYS = {
    'ordinary': ('mu', 'sigma'),
    'natural': ('theta_v', 'theta_m'),
    'expectation': ('eta_v', 'eta_m'),
}


class MvnDensity(Density):
    """Multivariate Gaussian density

    One-dimensional densities take points of shape ``(n,)``, the others ``(n, d)``.

    Args:
        param: Gaussian in any chart
    """

    @classmethod
    def family(cls):
        return 'mvn'

    def __init__(self, param: MvnParam):
        self.param = param.to('ordinary')
        self.mu = self.param.vector
        self.sigma = self.param.matrix
        self._factor = self.param._factor
        self._lower = np.tril(self._factor[0])
        self._log_norm = 0.5 * (_log_det(self._factor) + self.mu.size * _LOG_2PI)

    @classmethod
    def from_moments(cls, mu, sigma):
        return cls(MvnParam.ordinary(mu, sigma))

    @property
    def support(self):
        if self.mu.size == 1:
            return RealLine(1, float(self.mu[0]), math.sqrt(float(self.sigma[0, 0])))
        return RealLine(self.mu.size, 0.0, 1.0)

    def log_eval(self, x):
        x = np.asarray(x, dtype=float)
        d = self.mu.size
        points = x.reshape(-1, d)
        centered = points - self.mu
        solved = cho_solve(self._factor, centered.T)
        quadratic = np.einsum('ij,ji->i', centered, solved)
        result = -0.5 * quadratic - self._log_norm
        if d == 1 and not (x.ndim >= 2 and x.shape[-1] == 1):
            return result.reshape(x.shape)
        return result.reshape(x.shape[:-1])

    def sample(self, n, rng):
        d = self.mu.size
        samples = self.mu + rng.standard_normal((n, d)) @ self._lower.T
        return samples[:, 0] if d == 1 else samples

    def mixture_normalizer(self, other, mean, alpha):
        if isinstance(other, MvnDensity) and isinstance(mean, GeometricMean) \
                and other.mu.size == self.mu.size:
            gap = _mvn_spec(self.mu.size).jensen_gap(self.param, other.param, alpha)
            return math.exp(-gap), MvnDensity(g_mixture_param(self.param, other.param, alpha))
        return None

    def closed_kl(self, other):
        if isinstance(other, MvnDensity) and other.mu.size == self.mu.size:
            return mvn_kl(self.param, other.param)
        return None

    def to_json(self):
        data = mvn_to_json(self.param)
        data['family'] = self.family()
        return data


def mvn_density(p: MvnParam) -> MvnDensity:
    """Density of a Gaussian parameter"""
    return MvnDensity(p)


@dataclass(frozen=True)
class JensenGap:
    """Skew Jensen divergence ``(1 - a) F(theta1) + a F(theta2) - F((1 - a) theta1 + a theta2)``

    Attributes:
        value: Gap value
        alpha: Skew
    """

    value: float
    alpha: float

    def __float__(self):
        return float(self.value)


class ExpFamSpec(metaclass=ABCMeta):
    """Abstract base class for exponential families ``exp(<theta, t(x)> - F(theta)) k(x)``

    Subclasses implement the log-normalizer F, its gradient, the natural domain test and the
    density factory. The gradient inverse defaults to bracketed root finding for one-dimensional
    parameters and the Hessian to central differences of the gradient.
    """

    dim_param = 1
    domain_bounds = (-math.inf, math.inf)

    @classmethod
    @abstractmethod
    def identifier(cls) -> str:
        """Family unique identifier

        Returns:
            Unique identifier
        """
        pass

    @abstractmethod
    def F(self, theta) -> float:
        """Log-normalizer (cumulant function)"""
        pass

    @abstractmethod
    def grad_F(self, theta) -> np.ndarray:
        """Gradient of the log-normalizer, the expectation parameter"""
        pass

    @abstractmethod
    def domain_check(self, theta) -> bool:
        """Natural parameter space membership"""
        pass

    @abstractmethod
    def density_factory(self, theta) -> Density:
        """Density of a natural parameter"""
        pass

    def inner(self, theta1, theta2) -> float:
        return float(np.dot(np.ravel(theta1), np.ravel(theta2)))

    def check(self, theta, name: str = 'theta') -> np.ndarray:
        """Returns theta as a flat float vector after checking domain membership

        Raises:
            DomainError: If theta is outside of the natural parameter space
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float)).ravel()
        if theta.size != self.dim_param or not np.all(np.isfinite(theta)) or not self.domain_check(theta):
            raise DomainError('%s=%s is outside of the %s natural parameter space'
                              % (name, theta.tolist(), self.identifier()))
        return theta

    def grad_F_inverse(self, eta) -> np.ndarray:
        """Natural parameter of an expectation parameter

        Raises:
            GradientInversionError: If the bracketing root search fails
        """
        if self.dim_param != 1:
            raise GradientInversionError('no gradient inverse for %s' % self.identifier())
        target = float(np.ravel(eta)[0])
        low, high = self.domain_bounds

        def residual(value):
            return float(self.grad_F(np.array([value]))[0]) - target

        a = b = 1.0 if low < 1.0 < high else 0.5 * (low + high)
        step = 1.0
        for _ in range(_BRACKET_STEPS):
            if residual(a) <= 0.0:
                break
            a = a - step if math.isinf(low) else low + 0.5 * (a - low)
            step *= 2.0
        else:
            raise GradientInversionError('cannot bracket eta=%r from below' % target)
        step = 1.0
        for _ in range(_BRACKET_STEPS):
            if residual(b) >= 0.0:
                break
            b = b + step if math.isinf(high) else high - 0.5 * (high - b)
            step *= 2.0
        else:
            raise GradientInversionError('cannot bracket eta=%r from above' % target)
        if a == b:
            return np.array([a])
        try:
            root = brentq(residual, a, b, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=500)
        except (ValueError, RuntimeError) as error:
            raise GradientInversionError('root search failed for eta=%r: %s' % (target, error)) from error
        return np.array([root])

    def hessian(self, theta) -> np.ndarray:
        """Hessian of the log-normalizer by central differences of the gradient"""
        theta = np.asarray(theta, dtype=float).ravel()
        size = theta.size
        result = np.empty((size, size))
        for index in range(size):
            step = _FD_STEP * max(1.0, abs(theta[index]))
            shift = np.zeros(size)
            shift[index] = step
            result[:, index] = (self.grad_F(theta + shift) - self.grad_F(theta - shift)) / (2.0 * step)
        return 0.5 * (result + result.T)

    def __repr__(self):
        return '%s()' % self.__class__.__name__


class MvnSpec(ExpFamSpec):
    """Multivariate Gaussians on flat natural parameters ``(theta_v, vec(theta_M))``

    Args:
        dim: Dimension of the sample space
    """

    @classmethod
    def identifier(cls):
        return 'mvn'

    def __init__(self, dim: int):
        self.dim = int(dim)
        if self.dim < 1:
            raise DomainError('dimension must be positive, got %r' % dim)
        self.dim_param = self.dim + self.dim * self.dim

    def split(self, theta):
        theta = np.asarray(theta, dtype=float).ravel()
        vector = theta[:self.dim]
        matrix = theta[self.dim:].reshape(self.dim, self.dim)
        return vector, 0.5 * (matrix + matrix.T)

    def flatten(self, p: MvnParam) -> np.ndarray:
        """Flat natural parameter of a Gaussian"""
        natural = p.to('natural')
        if natural.dim != self.dim:
            raise DomainError('expected a %d-dimensional Gaussian' % self.dim)
        return np.concatenate([natural.vector, natural.matrix.ravel()])

    def unflatten(self, theta) -> MvnParam:
        """Gaussian of a flat natural parameter"""
        vector, matrix = self.split(theta)
        return MvnParam.natural(vector, matrix)

    def _as_flat(self, theta):
        if isinstance(theta, MvnParam):
            return self.flatten(theta)
        return np.asarray(theta, dtype=float).ravel()

    def F(self, theta):
        vector, matrix = self.split(self._as_flat(theta))
        factor = _cholesky(matrix, 'theta_M')
        solved = cho_solve(factor, vector)
        return 0.5 * (self.dim * math.log(math.pi) - _log_det(factor) + 0.5 * float(vector @ solved))

    def grad_F(self, theta):
        vector, matrix = self.split(self._as_flat(theta))
        inverse = _inverse(_cholesky(matrix, 'theta_M'))
        mu = 0.5 * inverse @ vector
        return np.concatenate([mu, (-0.5 * inverse - np.outer(mu, mu)).ravel()])

    def grad_F_inverse(self, eta):
        eta = np.asarray(eta, dtype=float).ravel()
        vector = eta[:self.dim]
        matrix = eta[self.dim:].reshape(self.dim, self.dim)
        try:
            param = MvnParam.expectation(vector, matrix)
        except PositiveDefiniteError as error:
            raise GradientInversionError('eta is outside of the expectation space: %s' % error) from error
        return self.flatten(param)

    def inner(self, theta1, theta2):
        vector1, matrix1 = self.split(self._as_flat(theta1))
        vector2, matrix2 = self.split(self._as_flat(theta2))
        return float(vector1 @ vector2 + np.trace(matrix2.T @ matrix1))

    def domain_check(self, theta):
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != self.dim_param:
            return False
        try:
            _cholesky(self.split(theta)[1], 'theta_M')
        except PositiveDefiniteError:
            return False
        return True

    def density_factory(self, theta):
        return MvnDensity(self.unflatten(self._as_flat(theta)))

    def jensen_gap(self, p1: MvnParam, p2: MvnParam, alpha: float) -> float:
        return float(jensen_skew(self, self.flatten(p1), self.flatten(p2), alpha).value)

    def __repr__(self):
        return 'MvnSpec(dim=%d)' % self.dim


_MVN_SPECS = {}


def _mvn_spec(dim: int) -> MvnSpec:
    if dim not in _MVN_SPECS:
        _MVN_SPECS[dim] = MvnSpec(dim)
    return _MVN_SPECS[dim]


class GaussianSpec(MvnSpec):
    """Univariate Gaussians on ``theta = (mu / sigma^2, 1 / (2 sigma^2))`` with analytic Hessian"""

    @classmethod
    def identifier(cls):
        return 'gaussian'

    def __init__(self):
        super().__init__(1)

    @staticmethod
    def from_moments(mu: float, sigma: float) -> np.ndarray:
        sigma = check_positive(sigma, 'sigma')
        return np.array([mu / sigma ** 2, 0.5 / sigma ** 2])

    def hessian(self, theta):
        theta1, theta2 = np.asarray(theta, dtype=float).ravel()
        return np.array([
            [0.5 / theta2, -0.5 * theta1 / theta2 ** 2],
            [-0.5 * theta1 / theta2 ** 2, 0.5 * theta1 ** 2 / theta2 ** 3 + 0.5 / theta2 ** 2],
        ])

    def __repr__(self):
        return 'GaussianSpec()'


class FixedVarianceGaussianSpec(ExpFamSpec):
    """Gaussians of fixed standard deviation on ``theta = mu / sigma^2``

    ``F(theta) = sigma^2 theta^2 / 2 + log(2 pi sigma^2) / 2`` with carrier ``exp(-x^2 / (2 sigma^2))``.

    Args:
        sigma (optional): Standard deviation
    """

    @classmethod
    def identifier(cls):
        return 'fixed-variance-gaussian'

    def __init__(self, sigma: float = 1.0):
        self.sigma = check_positive(sigma, 'sigma')

    def F(self, theta):
        theta = float(np.ravel(theta)[0])
        return 0.5 * self.sigma ** 2 * theta ** 2 + 0.5 * math.log(2.0 * math.pi * self.sigma ** 2)

    def grad_F(self, theta):
        return self.sigma ** 2 * np.atleast_1d(np.asarray(theta, dtype=float)).ravel()

    def hessian(self, theta):
        return np.array([[self.sigma ** 2]])

    def domain_check(self, theta):
        return bool(np.all(np.isfinite(theta)))

    def density_factory(self, theta):
        mu = self.sigma ** 2 * float(np.ravel(theta)[0])
        return MvnDensity.from_moments([mu], [[self.sigma ** 2]])

    def __repr__(self):
        return 'FixedVarianceGaussianSpec(sigma=%r)' % self.sigma


class ExponentialSpec(ExpFamSpec):
    """Exponential distributions on ``theta = rate``, ``t(x) = -x`` and ``F = -log theta``"""

    domain_bounds = (0.0, math.inf)

    @classmethod
    def identifier(cls):
        return 'exponential'

    def F(self, theta):
        return -math.log(float(np.ravel(theta)[0]))

    def grad_F(self, theta):
        return -1.0 / np.atleast_1d(np.asarray(theta, dtype=float)).ravel()

    def hessian(self, theta):
        return np.array([[1.0 / float(np.ravel(theta)[0]) ** 2]])

    def domain_check(self, theta):
        return bool(np.all(np.asarray(theta) > 0.0))

    def density_factory(self, theta):
        return Exponential(float(np.ravel(theta)[0]))


class PoissonSpec(ExpFamSpec):
    """Poisson distributions on the counting measure, ``theta = log lambda`` and ``F = exp(theta)``"""

    @classmethod
    def identifier(cls):
        return 'poisson'

    def F(self, theta):
        return math.exp(float(np.ravel(theta)[0]))

    def grad_F(self, theta):
        return np.exp(np.atleast_1d(np.asarray(theta, dtype=float)).ravel())

    def hessian(self, theta):
        return np.array([[math.exp(float(np.ravel(theta)[0]))]])

    def domain_check(self, theta):
        return bool(np.all(np.isfinite(theta)))

    def density_factory(self, theta):
        return Poisson(math.exp(float(np.ravel(theta)[0])))


SPECS_DICT = {spec.identifier(): spec for spec in (
    MvnSpec,
    GaussianSpec,
    FixedVarianceGaussianSpec,
    ExponentialSpec,
    PoissonSpec,
)}


def _flat(spec: ExpFamSpec, theta, name: str) -> np.ndarray:
    if isinstance(theta, MvnParam):
        if not isinstance(spec, MvnSpec):
            raise DomainError('Gaussian parameters require a Gaussian family')
        theta = spec.flatten(theta)
    return spec.check(theta, name)


def bregman(spec: ExpFamSpec, theta1, theta2) -> float:
    """Bregman divergence ``F(theta1) - F(theta2) - <theta1 - theta2, grad F(theta2)>``

    It equals ``KL(p_theta2 : p_theta1)``.

    Args:
        spec: Exponential family
        theta1: First natural parameter
        theta2: Second natural parameter

    Returns:
        The divergence
    """
    theta1 = _flat(spec, theta1, 'theta1')
    theta2 = _flat(spec, theta2, 'theta2')
    if np.array_equal(theta1, theta2):
        return 0.0
    value = spec.F(theta1) - spec.F(theta2) - spec.inner(theta1 - theta2, spec.grad_F(theta2))
    return max(float(value), 0.0)


def jensen_skew(spec: ExpFamSpec, theta1, theta2, alpha: float) -> JensenGap:
    """Skew Jensen divergence ``(1 - a) F(theta1) + a F(theta2) - F((1 - a) theta1 + a theta2)``

    Args:
        spec: Exponential family
        theta1: First natural parameter
        theta2: Second natural parameter
        alpha: Skew in [0, 1]

    Returns:
        The Jensen gap
    """
    alpha = check_alpha(alpha)
    theta1 = _flat(spec, theta1, 'theta1')
    theta2 = _flat(spec, theta2, 'theta2')
    if alpha in (0.0, 1.0) or np.array_equal(theta1, theta2):
        return JensenGap(0.0, alpha)
    middle = lerp(theta1, theta2, alpha)
    value = (1.0 - alpha) * spec.F(theta1) + alpha * spec.F(theta2) - spec.F(middle)
    return JensenGap(max(float(value), 0.0), alpha)


def skew_jeffreys_bregman(spec: ExpFamSpec, theta1, theta2, alpha: float) -> float:
    """Skew Jeffreys-Bregman divergence ``(1 - a) B_F(theta1:theta2) + a B_F(theta2:theta1)``"""
    alpha = check_alpha(alpha)
    return (1.0 - alpha) * bregman(spec, theta1, theta2) + alpha * bregman(spec, theta2, theta1)


def g_jsd(spec: ExpFamSpec, theta1, theta2, alpha: float) -> float:
    """Closed-form geometric Jensen-Shannon divergence between members of a family

    ``(1 - a) B_F(theta_a : theta1) + a B_F(theta_a : theta2)`` with ``theta_a`` the interpolated
    natural parameter, which is the natural parameter of the normalized geometric mixture.

    Args:
        spec: Exponential family
        theta1: First natural parameter
        theta2: Second natural parameter
        alpha: Skew in (0, 1)

    Returns:
        The divergence
    """
    alpha = check_alpha(alpha, open_interval=True)
    theta1 = _flat(spec, theta1, 'theta1')
    theta2 = _flat(spec, theta2, 'theta2')
    middle = lerp(theta1, theta2, alpha)
    return (1.0 - alpha) * bregman(spec, middle, theta1) + alpha * bregman(spec, middle, theta2)


def g_jsd_dual(spec: ExpFamSpec, theta1, theta2, alpha: float) -> float:
    """Closed-form geometric Jensen-Shannon divergence of the reverse KL, the skew Jensen divergence"""
    alpha = check_alpha(alpha, open_interval=True)
    return float(jensen_skew(spec, theta1, theta2, alpha).value)


def z_geometric(spec: ExpFamSpec, theta1, theta2, alpha: float) -> float:
    """Normalizer ``exp(-J_F^a(theta1:theta2))`` of the geometric mixture"""
    return math.exp(-jensen_skew(spec, theta1, theta2, alpha).value)


def z_geometric_multi(spec: ExpFamSpec, thetas, weights, route: str = 'jensen') -> float:
    """Normalizer of the weighted geometric mixture of several members of a family

    The ``jensen`` route computes ``exp(F(theta_bar) - sum w_i F(theta_i))``. The
    ``density-at-zero`` route computes ``prod p(0; theta_i)^w_i / p(0; theta_bar)``, valid when
    ``t(0) = 0`` and the carrier is one at zero, which only the Gaussian families satisfy here.

    Args:
        spec: Exponential family
        thetas: Natural parameters
        weights: Weights on the simplex
        route (optional): ``jensen`` or ``density-at-zero``

    Returns:
        The normalizer
    """
    thetas = [_flat(spec, theta, 'theta') for theta in thetas]
    weights = np.asarray(weights, dtype=float).ravel()
    if len(thetas) == 0 or weights.size != len(thetas):
        raise DomainError('one weight per parameter is required')
    if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > 1e-12:
        raise DomainError('weights must lie on the simplex')
    average = np.sum([w * theta for w, theta in zip(weights, thetas)], axis=0)
    if route == 'jensen':
        gap = sum(w * spec.F(theta) for w, theta in zip(weights, thetas)) - spec.F(average)
        return math.exp(-gap)
    if route == 'density-at-zero':
        if not isinstance(spec, MvnSpec):
            raise DomainError('the density-at-zero route requires t(0) = 0 and a unit carrier')
        origin = np.zeros((1, spec.dim)) if spec.dim > 1 else np.zeros(1)
        log_value = sum(w * float(spec.density_factory(theta).log_eval(origin)[0])
                        for w, theta in zip(weights, thetas))
        log_value -= float(spec.density_factory(average).log_eval(origin)[0])
        return math.exp(log_value)
    raise DomainError('unknown route %r' % route)


def gradient_check(spec: ExpFamSpec, theta, step: float = _FD_STEP) -> float:
    """Maximum relative error of ``grad_F`` against central differences of F

    Args:
        spec: Exponential family
        theta: Natural parameter
        step (optional): Relative finite difference step

    Returns:
        ``max |fd - grad| / max(1, |grad|)``
    """
    theta = _flat(spec, theta, 'theta')
    gradient = spec.grad_F(theta)
    numeric = np.empty_like(gradient)
    for index in range(theta.size):
        h = step * max(1.0, abs(theta[index]))
        shift = np.zeros(theta.size)
        shift[index] = h
        numeric[index] = (spec.F(theta + shift) - spec.F(theta - shift)) / (2.0 * h)
    return float(np.max(np.abs(numeric - gradient) / np.maximum(1.0, np.abs(gradient))))


__author__ = 'GeneralizedJSD developers'
