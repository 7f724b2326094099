"""
gjsd.cauchy
===========

This module contains the Cauchy scale and location-scale families: closed-form Kullback-Leibler
divergence, entropies, harmonic mixtures and the harmonic Jensen-Shannon divergence.

The Cauchy densities are closed under the weighted harmonic mean: ``H_a(p_g1(x), p_g2(x))`` is
``Z`` times the Cauchy density of scale ``s = sqrt(g1 g2 (g1 g2)_a / (g2 g1)_a)`` where
``(g1 g2)_a = (1 - a) g1 + a g2``. At ``a = 1/2`` the scale is the geometric mean of the scales.

Attributes:
    MIN_SCALE (float): Smallest accepted scale
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, SpecParseError
from .means import HarmonicMean
from .structures import Density, RealLine
from .utils import check_alpha

MIN_SCALE = 1e-12


def _check_scale(gamma) -> float:
    gamma = float(gamma)
    if not (math.isfinite(gamma) and gamma >= MIN_SCALE):
        raise DomainError('Cauchy scale must be a finite real >= %g, got %r' % (MIN_SCALE, gamma))
    return gamma


@dataclass(frozen=True)
class CauchyScale:
    """Member of the Cauchy scale family ``g / (pi (x^2 + g^2))``

    Attributes:
        gamma: Positive scale
    """

    gamma: float

    def __post_init__(self):
        object.__setattr__(self, 'gamma', _check_scale(self.gamma))

    @property
    def location(self) -> float:
        return 0.0


@dataclass(frozen=True)
class CauchyLocationScale:
    """Member of the Cauchy location-scale family

    Attributes:
        location: Real location
        gamma: Positive scale
    """

    location: float
    gamma: float

    def __post_init__(self):
        location = float(self.location)
        if not math.isfinite(location):
            raise DomainError('Cauchy location must be finite, got %r' % self.location)
        object.__setattr__(self, 'location', location)
        object.__setattr__(self, 'gamma', _check_scale(self.gamma))


def _params(g):
    """Location and scale of a Cauchy member, a density or a bare scale"""
    if isinstance(g, (CauchyScale, CauchyLocationScale, CauchyDensity)):
        return g.location, g.gamma
    return 0.0, _check_scale(g)


def _scale(g) -> float:
    location, gamma = _params(g)
    if location != 0.0:
        raise DomainError('a scale family member is required, got location %r' % location)
    return gamma


class CauchyDensity(Density):
    """Cauchy density ``g / (pi ((x - l)^2 + g^2))``

    Args:
        location: Real location
        gamma: Positive scale
    """

    @classmethod
    def family(cls):
        return 'cauchy'

    def __init__(self, location: float, gamma: float):
        member = CauchyLocationScale(location, gamma)
        self.location = member.location
        self.gamma = member.gamma
        self._log_norm = math.log(math.pi * self.gamma)

    @property
    def support(self):
        return RealLine(1, self.location, self.gamma)

    def log_eval(self, x):
        z = (np.asarray(x, dtype=float) - self.location) / self.gamma
        return -self._log_norm - np.log1p(z * z)

    def sample(self, n, rng):
        return self.location + self.gamma * rng.standard_cauchy(n)

    def closed_kl(self, other):
        if isinstance(other, CauchyDensity):
            return cauchy_ls_kl(self, other)
        return None

    def mixture_normalizer(self, other, mean, alpha):
        if isinstance(other, CauchyDensity) and isinstance(mean, HarmonicMean) \
                and other.location == self.location:
            scale, z = _harmonic_scale(self.gamma, other.gamma, alpha)
            return z, CauchyDensity(self.location, scale)
        return None

    def to_json(self):
        return cauchy_to_json(self)


def cauchy_density(g) -> CauchyDensity:
    """Density of a scale or location-scale Cauchy member"""
    location, gamma = _params(g)
    return CauchyDensity(location, gamma)


def cauchy_to_json(g) -> dict:
    """JSON descriptor, ``{"family": "cauchy", "gamma": ...}`` for scale members"""
    location, gamma = _params(g)
    if location == 0.0:
        return {'family': 'cauchy', 'gamma': gamma}
    return {'family': 'cauchy_ls', 'l': location, 'gamma': gamma}


def cauchy_from_json(data: dict) -> CauchyDensity:
    """Parses a Cauchy JSON descriptor

    Raises:
        SpecParseError: If the descriptor is malformed
    """
    family = data.get('family')
    try:
        if family == 'cauchy':
            return CauchyDensity(0.0, data['gamma'])
        if family == 'cauchy_ls':
            return CauchyDensity(data['l'], data['gamma'])
    except KeyError as error:
        raise SpecParseError('Cauchy descriptor misses the %s field' % error) from error
    raise SpecParseError('not a Cauchy descriptor: %r' % family)


def cauchy_kl(g1, g2) -> float:
    """Kullback-Leibler divergence between Cauchy scale members

    ``2 log(A(g1, g2) / G(g1, g2))`` with A and G the arithmetic and geometric means, which is
    symmetric and scale-invariant.

    Args:
        g1: First scale
        g2: Second scale

    Returns:
        The divergence
    """
    gamma1 = _scale(g1)
    gamma2 = _scale(g2)
    return max(math.log((gamma1 + gamma2) ** 2 / (4.0 * gamma1 * gamma2)), 0.0)


def cauchy_ls_kl(p1, p2) -> float:
    """Kullback-Leibler divergence ``log(((g1 + g2)^2 + (l1 - l2)^2) / (4 g1 g2))``

    Args:
        p1: First location-scale member
        p2: Second location-scale member

    Returns:
        The divergence
    """
    location1, gamma1 = _params(p1)
    location2, gamma2 = _params(p2)
    numerator = (gamma1 + gamma2) ** 2 + (location1 - location2) ** 2
    return max(math.log(numerator / (4.0 * gamma1 * gamma2)), 0.0)


def cauchy_entropy(g) -> float:
    """Differential entropy ``log(4 pi g)``"""
    return math.log(4.0 * math.pi * _params(g)[1])


def cauchy_cross_entropy(g1, g2) -> float:
    """Cross-entropy ``log(pi ((g1 + g2)^2 + (l1 - l2)^2) / g2)``"""
    location1, gamma1 = _params(g1)
    location2, gamma2 = _params(g2)
    return math.log(math.pi * ((gamma1 + gamma2) ** 2 + (location1 - location2) ** 2) / gamma2)


def cauchy_h2(g) -> float:
    """Quadratic entropy integral ``int p^2 = 1 / (2 pi g)``"""
    return 1.0 / (2.0 * math.pi * _params(g)[1])


def _harmonic_scale(gamma1: float, gamma2: float, alpha: float):
    alpha = check_alpha(alpha)
    if alpha == 0.0 or gamma1 == gamma2:
        return gamma1, 1.0
    if alpha == 1.0:
        return gamma2, 1.0
    forward = (1.0 - alpha) * gamma1 + alpha * gamma2
    backward = (1.0 - alpha) * gamma2 + alpha * gamma1
    scale = math.sqrt(gamma1 * gamma2 * forward / backward)
    return scale, math.sqrt(gamma1 * gamma2 / (forward * backward))


def harmonic_mixture(g1, g2, alpha: float):
    """Normalized harmonic mixture of two Cauchy scale members

    Args:
        g1: First scale
        g2: Second scale
        alpha: Skew in [0, 1]

    Returns:
        tuple(CauchyScale, float): Mixture member and normalizer
        ``Z = sqrt(g1 g2 / ((g1 g2)_a (g2 g1)_a))``
    """
    scale, z = _harmonic_scale(_scale(g1), _scale(g2), alpha)
    return CauchyScale(scale), z


def harmonic_jsd(g1, g2, alpha: float = 0.5) -> float:
    """Harmonic Jensen-Shannon divergence between Cauchy scale members

    ``(1 - a) KL(p_g1 : p_s) + a KL(p_g2 : p_s)`` with ``p_s`` the normalized harmonic mixture.

    Args:
        g1: First scale
        g2: Second scale
        alpha (optional): Skew in [0, 1]

    Returns:
        The divergence
    """
    alpha = check_alpha(alpha)
    gamma1 = _scale(g1)
    gamma2 = _scale(g2)
    mixture, _ = harmonic_mixture(gamma1, gamma2, alpha)
    return (1.0 - alpha) * cauchy_kl(gamma1, mixture) + alpha * cauchy_kl(gamma2, mixture)


def harmonic_jsd_lerp(g1, g2, alpha: float = 0.5) -> float:
    """Jensen-Shannon symmetrization of the Cauchy KL around the interpolated scale

    ``(1 - a) KL(p_g1 : p_m) + a KL(p_g2 : p_m)`` with ``m = (1 - a) g1 + a g2``; at ``a = 1/2``
    it is ``log((3 g1 + g2)(3 g2 + g1) / (8 sqrt(g1 g2) (g1 + g2)))``.

    Args:
        g1: First scale
        g2: Second scale
        alpha (optional): Skew in [0, 1]

    Returns:
        The divergence
    """
    alpha = check_alpha(alpha)
    gamma1 = _scale(g1)
    gamma2 = _scale(g2)
    if alpha == 0.5:
        value = math.log((3.0 * gamma1 + gamma2) * (3.0 * gamma2 + gamma1)
                         / (8.0 * math.sqrt(gamma1 * gamma2) * (gamma1 + gamma2)))
        return max(value, 0.0)
    middle = (1.0 - alpha) * gamma1 + alpha * gamma2
    return (1.0 - alpha) * cauchy_kl(gamma1, middle) + alpha * cauchy_kl(gamma2, middle)


__author__ = 'GeneralizedJSD developers'
