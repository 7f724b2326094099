"""
gjsd.divergences
================

This module contains the statistical distances between densities and the symmetrization
combinators built on top of weighted means: f-divergences, Kullback-Leibler and its
symmetrizations, M-mixtures, M-Jensen-Shannon divergences, N-Jeffreys divergences, (M, N)
Jensen-Shannon divergences, K-divergences, Bhattacharyya, Hellinger and alpha divergences, and the
Chernoff information.

Oracle backed values are returned as :class:`gjsd.structures.Measured` floats carrying their
absolute error. Combinators take the base divergence as a :class:`DivergenceFunctional` value, so
closed-form and oracle backends are interchangeable.

Attributes:
    GENERATORS_DICT (dict): Dictionary which maps identifiers to the shipped f-generators
    DIVERGENCES_DICT (dict): Dictionary which maps identifiers to the shipped divergence functionals
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import rel_entr, xlogy

from .exceptions import (BudgetExceededError, ConcavityWarning, ConvexityWarning,
                         DegenerateInputError, DivergentNormalizerError, DominanceError,
                         DomainError, NonFiniteIntegrandError)
from .means import ArithmeticMean, GeometricMean, WeightedMean, dominates
from .oracle import DEFAULT_CONFIG, OracleConfig, integrate, log_ratio_integrand
from .structures import Density, InfiniteDivergence, IntegralEstimate, Measured, error_of
from .utils import check_alpha, lerp

_LOGGER = logging.getLogger(__name__)

_CHERNOFF_EPSILON = 1e-6
_DEGENERATE_LEVEL = 1e-14
_RATIO_EXPONENT_CAP = 700.0


class FGenerator:
    """Generator of a Csiszar f-divergence ``I_f(p:q) = integral of p f(q / p)``

    The boundary values are needed where one density vanishes: the term is ``p f(0)`` where
    ``q = 0`` and ``q f'(inf)`` where ``p = 0``, with ``f'(inf) = lim f(u) / u``.

    Args:
        f: Vectorized convex function on ``[0, inf)`` with ``f(1) = 0``
        name (optional): Identifier
        f_prime (optional): Derivative, used for diagnostics only
        f_zero (optional): ``lim f(u)`` at zero, ``f(0)`` when omitted
        f_infinity (optional): ``lim f(u) / u`` at infinity, ``+inf`` when omitted

    Raises:
        DomainError: If ``f(1) != 0``
    """

    def __init__(self, f, name: str = None, f_prime=None, f_zero: float = None,
                 f_infinity: float = None):
        self.f = f
        self.name = name or getattr(f, '__name__', 'f')
        self.f_prime = f_prime
        at_one = float(np.asarray(f(np.array([1.0])), dtype=float)[0])
        if abs(at_one) > 1e-14:
            raise DomainError('generator %s does not vanish at 1 (f(1) = %r)' % (self.name, at_one))
        if f_zero is None:
            with np.errstate(divide='ignore', invalid='ignore'):
                f_zero = float(np.asarray(f(np.array([0.0])), dtype=float)[0])
        self.f_zero = float(f_zero)
        self.f_infinity = math.inf if f_infinity is None else float(f_infinity)
        self._convexity_checked = False
        self._conjugate_of = None

    def __call__(self, u):
        return np.asarray(self.f(np.asarray(u, dtype=float)), dtype=float)

    def check_convexity(self, grid=None) -> bool:
        """Spot-checks the midpoint convexity inequality on a grid

        A :class:`gjsd.exceptions.ConvexityWarning` is issued when the check fails.

        Args:
            grid (optional): Positive abscissas, 61 log-spaced points in [1e-3, 1e3] by default

        Returns:
            True if the midpoint inequality holds within 1e-12 on every pair of grid points
        """
        u = np.logspace(-3, 3, 61) if grid is None else np.asarray(grid, dtype=float)
        a, b = np.meshgrid(u, u)
        with np.errstate(all='ignore'):
            chord = 0.5 * (self(a) + self(b))
            middle = self(0.5 * (a + b))
        slack = 1e-12 * np.maximum(1.0, np.abs(chord))
        convex = bool(np.all(~(middle > chord + slack)))
        self._convexity_checked = True
        if not convex:
            warnings.warn('generator %s fails the midpoint convexity check' % self.name,
                          ConvexityWarning, stacklevel=2)
        return convex

    def __repr__(self):
        return 'FGenerator(%s)' % self.name


def _kl_f(u):
    with np.errstate(divide='ignore'):
        return -np.log(u)


def _reverse_kl_f(u):
    return xlogy(u, u)


def _jeffreys_f(u):
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(u == 1.0, 0.0, (u - 1.0) * np.log(u))


def _js_f(u):
    return 0.5 * (xlogy(u, u) - xlogy(u + 1.0, 0.5 * (u + 1.0)))


def _hellinger_f(u):
    return (np.sqrt(u) - 1.0) ** 2


def _tv_f(u):
    return 0.5 * np.abs(u - 1.0)


def _chi2_f(u):
    return (u - 1.0) ** 2


F_KL = FGenerator(_kl_f, 'kl', f_prime=lambda u: -1.0 / u, f_zero=math.inf, f_infinity=0.0)
F_REVERSE_KL = FGenerator(_reverse_kl_f, 'reverse-kl', f_prime=lambda u: np.log(u) + 1.0,
                          f_zero=0.0, f_infinity=math.inf)
F_JEFFREYS = FGenerator(_jeffreys_f, 'jeffreys', f_zero=math.inf, f_infinity=math.inf)
F_JS = FGenerator(_js_f, 'js', f_zero=0.5 * math.log(2.0), f_infinity=0.5 * math.log(2.0))
F_HELLINGER = FGenerator(_hellinger_f, 'hellinger', f_zero=1.0, f_infinity=1.0)
F_TV = FGenerator(_tv_f, 'tv', f_zero=0.5, f_infinity=0.5)
F_CHI2 = FGenerator(_chi2_f, 'chi2', f_prime=lambda u: 2.0 * (u - 1.0), f_zero=1.0,
                    f_infinity=math.inf)

GENERATORS_DICT = {generator.name: generator for generator in (
    F_KL, F_REVERSE_KL, F_JEFFREYS, F_JS, F_HELLINGER, F_TV, F_CHI2)}


def conjugate_generator(f: FGenerator) -> FGenerator:
    """Conjugate generator ``u f(1 / u)``, which swaps the arguments of the f-divergence

    Args:
        f: Generator

    Returns:
        Generator of ``I_f(q:p)``
    """
    if f._conjugate_of is not None:
        return f._conjugate_of

    def conjugate(u):
        u = np.asarray(u, dtype=float)
        safe = np.where(u > 0.0, u, 1.0)
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(u > 0.0, safe * f(1.0 / safe), f.f_infinity)

    result = FGenerator(conjugate, '%s*' % f.name, f_zero=f.f_infinity, f_infinity=f.f_zero)
    result._conjugate_of = f
    return result


def js_skew_generator(f: FGenerator, alpha: float) -> FGenerator:
    """Generator of the skew JS-symmetrization ``(1 - a) I_f(p:m) + a I_f(q:m)``

    The mixture is ``m = (1 - a) p + a q``. The second term is ``u f(a + (1 - a) / u)``, with the
    factor u which makes the generator integrate against p.

    Args:
        f: Generator
        alpha: Skew in (0, 1)

    Returns:
        Generator of the skew JS-symmetrization of ``I_f``
    """
    alpha = check_alpha(alpha, open_interval=True)

    def skew(u):
        u = np.asarray(u, dtype=float)
        safe = np.where(u > 0.0, u, 1.0)
        with np.errstate(divide='ignore', invalid='ignore'):
            inner = (1.0 - alpha) * f(alpha * u + 1.0 - alpha)
            outer = alpha * safe * f(alpha + (1.0 - alpha) / safe)
        return np.where(u > 0.0, inner + outer, f_zero)

    f_zero = (1.0 - alpha) * (float(f(np.array([1.0 - alpha]))[0]) + alpha * f.f_infinity)
    f_infinity = alpha * (1.0 - alpha) * f.f_infinity + alpha * float(f(np.array([alpha]))[0])
    return FGenerator(skew, 'js-%s-%g' % (f.name, alpha), f_zero=f_zero, f_infinity=f_infinity)


def j_skew_generator(f: FGenerator, alpha: float) -> FGenerator:
    """Generator ``(1 - a) f + a f*`` of the skew J-symmetrization ``(1 - a) I_f(p:q) + a I_f(q:p)``

    Args:
        f: Generator
        alpha: Skew in [0, 1]

    Returns:
        Generator of the skew J-symmetrization
    """
    alpha = check_alpha(alpha)
    conjugate = conjugate_generator(f)

    def skew(u):
        return (1.0 - alpha) * f(u) + alpha * conjugate(u)

    return FGenerator(skew, 'j-%s-%g' % (f.name, alpha),
                      f_zero=(1.0 - alpha) * f.f_zero + alpha * f.f_infinity,
                      f_infinity=(1.0 - alpha) * f.f_infinity + alpha * f.f_zero)


class MMixture(Density):
    """Normalized alpha-weighted M-mixture ``M_a(p(x), q(x)) / Z``

    The normalizer comes from a closed form when the densities provide one, is exactly one for the
    arithmetic mean, and is integrated by the oracle otherwise.

    Args:
        base_p: First density
        base_q: Second density
        mean: Weighted mean
        alpha: Skew in [0, 1]
        cfg (optional): Oracle configuration
        normalizer (optional): Known normalizer, skips its computation

    Raises:
        DivergentNormalizerError: If the normalizer integral does not converge
    """

    @classmethod
    def family(cls):
        return 'm-mixture'

    def __init__(self, base_p: Density, base_q: Density, mean: WeightedMean, alpha: float,
                 cfg: OracleConfig = None, normalizer: IntegralEstimate = None):
        self.base_p = base_p
        self.base_q = base_q
        self.mean = mean
        self.alpha = check_alpha(alpha)
        self.cfg = cfg or DEFAULT_CONFIG
        self.closed = None
        self._support = base_p.support.union(base_q.support)

        exact = IntegralEstimate(1.0, 0.0, 0, 'closed-form')
        if self.alpha == 0.0 or base_p == base_q:
            self.closed, self.Z = base_p, exact
        elif self.alpha == 1.0:
            self.closed, self.Z = base_q, exact
        elif normalizer is not None:
            self.Z = normalizer
        elif isinstance(mean, ArithmeticMean):
            self.Z = exact
        else:
            closed = base_p.mixture_normalizer(base_q, mean, self.alpha)
            if closed is not None:
                value, self.closed = closed
                self.Z = IntegralEstimate(float(value), 0.0, 0, 'closed-form')
            else:
                self.Z = self._integrate_normalizer()
        self._log_z = math.log(self.Z.value)

    def _integrate_normalizer(self) -> IntegralEstimate:
        def unnormalized(x):
            return np.exp(self.mean.log_evaluate(self.base_p.log_eval(x), self.base_q.log_eval(x),
                                                 self.alpha))

        try:
            estimate = integrate(unnormalized, self._support, self.cfg, proposal=self.proposal())
        except (BudgetExceededError, NonFiniteIntegrandError) as error:
            raise DivergentNormalizerError('the %s mixture normalizer does not converge: %s'
                                           % (self.mean, error), partial=error.partial) from error
        if not (math.isfinite(estimate.value) and estimate.value > 0.0):
            raise DivergentNormalizerError('invalid %s mixture normalizer %r' % (self.mean, estimate.value),
                                           partial=estimate)
        _LOGGER.debug('%s mixture normalizer %.17g (error %.3g)', self.mean, estimate.value,
                      estimate.abs_error)
        return estimate

    @property
    def support(self):
        if self.closed is not None:
            return self.closed.support
        return self._support

    @property
    def log_normalizer_error(self) -> float:
        return self.Z.abs_error / self.Z.value

    def log_eval(self, x):
        if self.closed is not None:
            return self.closed.log_eval(x)
        return self.mean.log_evaluate(self.base_p.log_eval(x), self.base_q.log_eval(x),
                                      self.alpha) - self._log_z

    def sample(self, n, rng):
        if self.closed is not None:
            return self.closed.sample(n, rng)
        return super().sample(n, rng)

    def proposal(self):
        if self.closed is not None:
            return self.closed.proposal()
        return self.base_p.proposal() if self.alpha <= 0.5 else self.base_q.proposal()

    def closed_kl(self, other):
        if self.closed is not None:
            return _unwrap(self.closed).closed_kl(_unwrap(other))
        return None

    def to_json(self):
        return {'family': self.family(), 'mean': str(self.mean), 'alpha': self.alpha,
                'p': self.base_p.to_json(), 'q': self.base_q.to_json()}


def _unwrap(density: Density) -> Density:
    while isinstance(density, MMixture) and density.closed is not None:
        density = density.closed
    return density


def _normalizer_error(density: Density) -> float:
    return getattr(density, 'log_normalizer_error', 0.0)


class DivergenceFunctional:
    """A statistical distance ``D(p:q)`` between densities

    Args:
        name: Identifier
        apply: Callable ``(p, q, cfg) -> float``
        closed_form (optional): Whether apply evaluates a closed form
    """

    def __init__(self, name: str, apply, closed_form: bool = False):
        self.name = name
        self.apply = apply
        self.closed_form = closed_form
        self._reverse_of = None

    def __call__(self, p: Density, q: Density, cfg: OracleConfig = None):
        return self.apply(p, q, cfg)

    def __repr__(self):
        return 'DivergenceFunctional(%s)' % self.name


def kl(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Kullback-Leibler divergence ``integral of p log(p / q)`` computed by the oracle

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The divergence with its error, or an :class:`gjsd.structures.InfiniteDivergence`
    """
    cfg = cfg or DEFAULT_CONFIG
    if p is q or p == q:
        return Measured(0.0, 0.0, 'oracle')

    def integrand(x):
        log_p = p.log_eval(x)
        return log_ratio_integrand(log_p, log_p, q.log_eval(x), cfg)

    try:
        estimate = integrate(integrand, p.support, cfg, proposal=p.proposal())
    except NonFiniteIntegrandError as error:
        if error.value is not None and error.value > 0.0:
            return InfiniteDivergence(error.partial)
        raise
    if estimate.value > cfg.kl_infinite_threshold:
        return InfiniteDivergence(estimate)
    abs_error = estimate.abs_error + _normalizer_error(p) + _normalizer_error(q)
    return Measured(estimate.value, abs_error, 'oracle')


def closed_or_oracle_kl(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Kullback-Leibler divergence from a closed form when the densities provide one

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration used as fallback

    Returns:
        The divergence
    """
    if p is q or p == q:
        return Measured(0.0)
    value = _unwrap(p).closed_kl(_unwrap(q))
    if value is not None:
        return Measured(value)
    return kl(p, q, cfg)


def reverse_kl(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Reverse Kullback-Leibler divergence ``KL(q:p)``"""
    return kl(q, p, cfg)


def entropy(p: Density, cfg: OracleConfig = None) -> Measured:
    """Differential (or Shannon) entropy ``-integral of p log p``

    Args:
        p: Density
        cfg (optional): Oracle configuration

    Returns:
        The entropy with its error
    """
    cfg = cfg or DEFAULT_CONFIG

    def integrand(x):
        log_p = p.log_eval(x)
        return log_ratio_integrand(log_p, 0.0, log_p, cfg)

    estimate = integrate(integrand, p.support, cfg, proposal=p.proposal())
    return Measured(estimate.value, estimate.abs_error + _normalizer_error(p), 'oracle')


def cross_entropy(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Cross-entropy ``-integral of p log q``

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The cross-entropy with its error, ``+inf`` when q vanishes where p does not
    """
    cfg = cfg or DEFAULT_CONFIG

    def integrand(x):
        return log_ratio_integrand(p.log_eval(x), 0.0, q.log_eval(x), cfg)

    try:
        estimate = integrate(integrand, p.support, cfg, proposal=p.proposal())
    except NonFiniteIntegrandError as error:
        if error.value is not None and error.value > 0.0:
            return InfiniteDivergence(error.partial)
        raise
    return Measured(estimate.value,
                    estimate.abs_error + _normalizer_error(p) + _normalizer_error(q), 'oracle')


def _boundary_term(log_weight, limit: float):
    weight = np.exp(log_weight)
    if limit == 0.0:
        return np.zeros_like(weight)
    return np.where(weight > 0.0, weight * limit, 0.0)


def f_divergence(f: FGenerator, p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Csiszar f-divergence ``integral of p f(q / p)``

    Args:
        f: Generator
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The divergence with its error
    """
    cfg = cfg or DEFAULT_CONFIG
    if not f._convexity_checked:
        f.check_convexity()

    def integrand(x):
        log_p = np.asarray(p.log_eval(x), dtype=float)
        log_q = np.asarray(q.log_eval(x), dtype=float)
        result = np.zeros(log_p.shape)
        p_zero = np.isneginf(log_p)
        q_zero = np.isneginf(log_q)
        both = p_zero & q_zero
        only_q = p_zero & ~q_zero
        only_p = q_zero & ~p_zero
        regular = ~(p_zero | q_zero)
        with np.errstate(over='ignore', under='ignore', invalid='ignore'):
            if np.any(only_q):
                result[only_q] = _boundary_term(log_q[only_q], f.f_infinity)
            if np.any(only_p):
                result[only_p] = _boundary_term(log_p[only_p], f.f_zero)
            if np.any(regular):
                delta = log_q[regular] - log_p[regular]
                capped = np.minimum(delta, _RATIO_EXPONENT_CAP)
                u = np.exp(capped)
                values = f(u)
                result[regular] = np.where(delta > _RATIO_EXPONENT_CAP,
                                           np.exp(log_q[regular]) * values / u,
                                           np.exp(log_p[regular]) * values)
        result[both] = 0.0
        return result

    try:
        estimate = integrate(integrand, p.support.union(q.support), cfg, proposal=p.proposal())
    except NonFiniteIntegrandError as error:
        if error.value is not None and error.value > 0.0:
            return InfiniteDivergence(error.partial)
        raise
    return Measured(estimate.value,
                    estimate.abs_error + _normalizer_error(p) + _normalizer_error(q), 'oracle')


def m_mixture(p: Density, q: Density, mean: WeightedMean, alpha: float,
              cfg: OracleConfig = None) -> MMixture:
    """Builds the normalized alpha-weighted M-mixture of two densities

    Args:
        p: First density
        q: Second density
        mean: Weighted mean
        alpha: Skew in [0, 1]
        cfg (optional): Oracle configuration

    Returns:
        The mixture, equal to p for alpha 0 and to q for alpha 1
    """
    return MMixture(p, q, mean, alpha, cfg)


def likelihood_ratio_family(p: Density, q: Density, lam: float, cfg: OracleConfig = None) -> MMixture:
    """Member of the likelihood ratio exponential family ``p^(1-lam) q^lam / Z`` between p and q

    Args:
        p: First density
        q: Second density
        lam: Natural parameter in [0, 1]
        cfg (optional): Oracle configuration

    Returns:
        The normalized geometric mixture
    """
    return MMixture(p, q, GeometricMean(), lam, cfg)


def _combine(mean: WeightedMean, beta: float, a: float, b: float) -> float:
    """``N_beta(a, b)`` on nonnegative extended reals, with ``H(0, b) = G(0, b) = 0``"""
    a = max(float(a), 0.0)
    b = max(float(b), 0.0)
    with np.errstate(divide='ignore'):
        result = mean.log_evaluate(np.log(a), np.log(b), beta)
    return float(np.exp(result))


def js_symmetrization(divergence: DivergenceFunctional, mean: WeightedMean, alpha: float,
                      p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Skew M-Jensen-Shannon symmetrization ``(1 - a) D(p:m) + a D(q:m)`` with m the M-mixture

    By the limit convention, alpha 0 yields 0 and alpha 1 yields ``D(p:q)``.

    Args:
        divergence: Base divergence D
        mean: Weighted mean of the mixture
        alpha: Skew in [0, 1]
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The symmetrized divergence
    """
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        return Measured(0.0)
    if alpha == 1.0:
        return divergence(p, q, cfg)
    mixture = m_mixture(p, q, mean, alpha, cfg)
    first = divergence(p, mixture, cfg)
    second = divergence(q, mixture, cfg)
    value = (1.0 - alpha) * first + alpha * second
    error = (1.0 - alpha) * error_of(first) + alpha * error_of(second)
    return Measured(value, error, _method(first, second))


def _method(*values) -> str:
    if any(getattr(value, 'method', 'closed-form') == 'oracle' for value in values):
        return 'oracle'
    return 'closed-form'


def j_symmetrization(divergence: DivergenceFunctional, alpha: float, p: Density, q: Density,
                     cfg: OracleConfig = None) -> Measured:
    """Skew J-symmetrization ``(1 - a) D(p:q) + a D(q:p)``

    Args:
        divergence: Base divergence D
        alpha: Skew in [0, 1]
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The symmetrized divergence
    """
    alpha = check_alpha(alpha)
    forward = divergence(p, q, cfg)
    backward = divergence(q, p, cfg)
    return Measured(lerp(forward, backward, alpha),
                    (1.0 - alpha) * error_of(forward) + alpha * error_of(backward),
                    _method(forward, backward))


def n_jeffreys(divergence: DivergenceFunctional, mean_n: WeightedMean, beta: float,
               p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Skew N-Jeffreys divergence ``N_b(D(p:q), D(q:p))``

    A harmonic (or geometric) N with a zero argument yields zero.

    Args:
        divergence: Base divergence D
        mean_n: Weighted mean combining both orientations
        beta: Skew in [0, 1]
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The N-Jeffreys divergence
    """
    beta = check_alpha(beta, name='beta')
    forward = divergence(p, q, cfg)
    backward = divergence(q, p, cfg)
    return Measured(_combine(mean_n, beta, forward, backward),
                    max(error_of(forward), error_of(backward)), _method(forward, backward))


def mn_js(divergence: DivergenceFunctional, mean_m: WeightedMean, alpha: float,
          mean_n: WeightedMean, beta: float, p: Density, q: Density,
          cfg: OracleConfig = None) -> Measured:
    """Skew (M, N)-Jensen-Shannon divergence ``N_b(D(p:m), D(q:m))`` with m the M-mixture

    Args:
        divergence: Base divergence D
        mean_m: Weighted mean of the mixture
        alpha: Mixture skew in (0, 1)
        mean_n: Weighted mean combining both terms
        beta: Combination skew in [0, 1]
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The (M, N)-JS divergence
    """
    alpha = check_alpha(alpha, open_interval=True)
    beta = check_alpha(beta, name='beta')
    mixture = m_mixture(p, q, mean_m, alpha, cfg)
    first = divergence(p, mixture, cfg)
    second = divergence(q, mixture, cfg)
    return Measured(_combine(mean_n, beta, first, second),
                    max(error_of(first), error_of(second)), _method(first, second))


def jeffreys(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Jeffreys divergence ``KL(p:q) + KL(q:p)``"""
    forward = KL(p, q, cfg)
    backward = KL(q, p, cfg)
    return Measured(forward + backward, error_of(forward) + error_of(backward),
                    _method(forward, backward))


def resistor_average(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Resistor average distance ``2 KL(p:q) KL(q:p) / J(p:q)``, the harmonic KL symmetrization

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The resistor average, 0 when one orientation vanishes
    """
    forward = KL(p, q, cfg)
    backward = KL(q, p, cfg)
    error = 2.0 * max(error_of(forward), error_of(backward))
    if forward <= 0.0 or backward <= 0.0:
        value = 0.0
    elif math.isinf(forward) or math.isinf(backward):
        # 2ab / (a + b) tends to 2 min(a, b)
        value = 2.0 * min(forward, backward)
    else:
        value = 2.0 * forward * backward / (forward + backward)
    return Measured(value, error, _method(forward, backward))


def jsd(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Classical Jensen-Shannon divergence, bounded by ``log 2``"""
    return js_symmetrization(KL, ArithmeticMean(), 0.5, p, q, cfg)


def k_divergence(p: Density, q: Density, alpha: float, cfg: OracleConfig = None) -> Measured:
    """Skew K-divergence ``KL(p : (1 - a) p + a q)``

    Args:
        p: First density
        q: Second density
        alpha: Skew in (0, 1]
        cfg (optional): Oracle configuration

    Returns:
        The K-divergence, equal to ``KL(p:q)`` for alpha 1
    """
    alpha = check_alpha(alpha)
    if alpha == 0.0:
        raise DomainError('the K-divergence skew must lie in (0, 1]')
    return KL(p, m_mixture(p, q, ArithmeticMean(), alpha, cfg), cfg)


def generalized_k_divergence(divergence: DivergenceFunctional, mean: WeightedMean, alpha: float,
                             p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Generalized K-divergence ``D(p : m)`` with m the M-mixture"""
    return divergence(p, m_mixture(p, q, mean, alpha, cfg), cfg)


def _geometric_integral(p: Density, q: Density, alpha: float, cfg: OracleConfig,
                        reverse: bool = False) -> IntegralEstimate:
    weight = alpha if reverse else 1.0 - alpha

    def integrand(x):
        log_p = p.log_eval(x)
        log_q = q.log_eval(x)
        with np.errstate(invalid='ignore', under='ignore'):
            log_values = weight * log_p + (1.0 - weight) * log_q
        return np.exp(np.where(np.isnan(log_values), -np.inf, log_values))

    return integrate(integrand, p.support.union(q.support), cfg, proposal=p.proposal())


def bhattacharyya(p: Density, q: Density, alpha: float = 0.5, cfg: OracleConfig = None,
                  reverse: bool = False) -> Measured:
    """Skew Bhattacharyya distance ``-log integral of p^(1-a) q^a``

    Args:
        p: First density
        q: Second density
        alpha: Skew in (0, 1)
        cfg (optional): Oracle configuration
        reverse (optional): Use the ``p^a q^(1-a)`` convention instead

    Returns:
        The distance with its error
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = check_alpha(alpha, open_interval=True)
    if p is q or p == q:
        return Measured(0.0, 0.0, 'oracle')
    estimate = _geometric_integral(p, q, alpha, cfg, reverse)
    if not estimate.value > 0.0:
        return InfiniteDivergence(estimate)
    return Measured(-math.log(estimate.value), estimate.abs_error / estimate.value, 'oracle')


def mean_difference(mean_a: WeightedMean, mean_b: WeightedMean, alpha: float, p: Density,
                    q: Density, cfg: OracleConfig = None) -> Measured:
    """Integral of the difference of two weighted means ``integral of (A_a(p, q) - B_a(p, q))``

    Nonnegative when the first mean dominates the second.

    Args:
        mean_a: Dominating mean
        mean_b: Dominated mean
        alpha: Skew in [0, 1]
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The integral with its error
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = check_alpha(alpha)

    def integrand(x):
        log_p = p.log_eval(x)
        log_q = q.log_eval(x)
        upper = np.exp(mean_a.log_evaluate(log_p, log_q, alpha))
        lower = np.exp(mean_b.log_evaluate(log_p, log_q, alpha))
        return np.nan_to_num(upper - lower, nan=0.0)

    estimate = integrate(integrand, p.support.union(q.support), cfg, proposal=p.proposal())
    return Measured(estimate.value, estimate.abs_error, 'oracle')


def hellinger(p: Density, q: Density, cfg: OracleConfig = None) -> Measured:
    """Hellinger distance ``sqrt(integral of (A - G))`` with the means at one half

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The distance, in [0, 1]
    """
    squared = mean_difference(ArithmeticMean(), GeometricMean(), 0.5, p, q, cfg)
    value = math.sqrt(max(float(squared), 0.0))
    error = error_of(squared) / (2.0 * value) if value > 0.0 else math.sqrt(error_of(squared))
    return Measured(value, error, 'oracle')


def alpha_divergence(p: Density, q: Density, alpha: float, cfg: OracleConfig = None) -> Measured:
    """Alpha-divergence ``integral of (a p + (1 - a) q - p^a q^(1-a))``

    It is the integral of ``A_a(q, p) - G_a(q, p)``.

    Args:
        p: First density
        q: Second density
        alpha: Skew in (0, 1)
        cfg (optional): Oracle configuration

    Returns:
        The divergence with its error
    """
    alpha = check_alpha(alpha, open_interval=True)
    return mean_difference(ArithmeticMean(), GeometricMean(), alpha, q, p, cfg)


@dataclass(frozen=True)
class ChernoffResult:
    """Chernoff information and its optimal skew

    Attributes:
        alpha_star: Maximizer of the skew Bhattacharyya distance
        value: Chernoff information
        kl_to_p: ``KL(p_a* : p)`` with ``p_a*`` the geometric mixture at the optimum
        kl_to_q: ``KL(p_a* : q)``
    """

    alpha_star: float
    value: float
    kl_to_p: float
    kl_to_q: float

    @property
    def gap(self) -> float:
        return abs(self.kl_to_p - self.kl_to_q)

    def __iter__(self):
        return iter((self.alpha_star, self.value))


def _geometric_moments(p: Density, q: Density, alpha: float, cfg: OracleConfig):
    """Normalizer of the geometric mixture and the mean of ``log(q / p)`` under it"""
    normalizer = _geometric_integral(p, q, alpha, cfg)

    def integrand(x):
        log_p = p.log_eval(x)
        log_q = q.log_eval(x)
        with np.errstate(invalid='ignore', under='ignore'):
            log_weight = (1.0 - alpha) * log_p + alpha * log_q
        log_weight = np.where(np.isnan(log_weight), -np.inf, log_weight)
        return log_ratio_integrand(log_weight, log_q, log_p, cfg)

    moment = integrate(integrand, p.support.union(q.support), cfg, proposal=p.proposal())
    return normalizer, moment.value / normalizer.value


def chernoff_information(p: Density, q: Density, cfg: OracleConfig = None) -> ChernoffResult:
    """Chernoff information ``max over a of B_a(p:q)``

    The strictly concave skew Bhattacharyya distance is maximized by bounded Brent search on
    ``[1e-6, 1 - 1e-6]``. When the optimality condition ``KL(p_a : p) = KL(p_a : q)`` is not met
    within ``cfg.eq_tol``, the optimum is polished by root finding on that condition.

    Args:
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The optimal skew, the information and both KL divergences at the optimum

    Raises:
        DegenerateInputError: If the distance is below 1e-14 across the bracket
    """
    cfg = cfg or DEFAULT_CONFIG
    low, high = _CHERNOFF_EPSILON, 1.0 - _CHERNOFF_EPSILON
    if p is q or p == q:
        raise DegenerateInputError('the Chernoff information of identical densities is degenerate')

    def distance(alpha):
        return float(bhattacharyya(p, q, alpha, cfg))

    scan = [distance(alpha) for alpha in np.linspace(low, high, 9)]
    if max(scan) < _DEGENERATE_LEVEL:
        raise DegenerateInputError('the Bhattacharyya distance vanishes across the bracket')

    result = minimize_scalar(lambda alpha: -distance(alpha), bounds=(low, high), method='bounded',
                             options={'xatol': 1e-10})
    alpha_star = float(result.x)
    normalizer, moment = _geometric_moments(p, q, alpha_star, cfg)
    _LOGGER.debug('chernoff brent optimum %.12g after %d evaluations, gap %.3g', alpha_star,
                  result.nfev, abs(moment))

    if abs(moment) > cfg.eq_tol:
        def condition(alpha):
            return _geometric_moments(p, q, alpha, cfg)[1]

        try:
            alpha_star = brentq(condition, low, high, xtol=1e-14)
        except ValueError:
            _LOGGER.warning('optimality condition has no sign change in the bracket')
        else:
            normalizer, moment = _geometric_moments(p, q, alpha_star, cfg)
            _LOGGER.debug('chernoff optimum polished to %.12g, gap %.3g', alpha_star, abs(moment))

    step = 1e-3
    if low + step < alpha_star < high - step:
        curvature = distance(alpha_star - step) + distance(alpha_star + step) - 2.0 * distance(alpha_star)
        if curvature > 1e-12:
            warnings.warn('the skew Bhattacharyya distance is not concave around %g (second '
                          'difference %.3g), the oracle may be too noisy' % (alpha_star, curvature),
                          ConcavityWarning, stacklevel=2)

    value = -math.log(normalizer.value)
    return ChernoffResult(alpha_star, value, alpha_star * moment + value,
                          -(1.0 - alpha_star) * moment + value)


def m_jsd_upper_bound(mean: WeightedMean, alpha: float, p: Density, q: Density,
                      cfg: OracleConfig = None) -> float:
    """Upper bound ``log(Z / (1 - a))`` of the M-JSD for means dominating the arithmetic mean

    The bound holds for skews in ``[1/2, 1)``: below one half the KL term against the second
    density may exceed it.

    Args:
        mean: Weighted mean of the mixture
        alpha: Skew in (0, 1)
        p: First density
        q: Second density
        cfg (optional): Oracle configuration

    Returns:
        The bound

    Raises:
        DominanceError: If the mean does not dominate the arithmetic mean on the sampled grid
    """
    alpha = check_alpha(alpha, open_interval=True)
    if not dominates(mean, ArithmeticMean()):
        raise DominanceError('%s does not dominate the arithmetic mean' % mean)
    mixture = m_mixture(p, q, mean, alpha, cfg)
    return math.log(mixture.Z.value) - math.log1p(-alpha)


def reverse(divergence: DivergenceFunctional) -> DivergenceFunctional:
    """Reverse divergence ``D*(p:q) = D(q:p)``; reversing twice gives back D

    Args:
        divergence: Divergence

    Returns:
        The reverse divergence
    """
    if divergence._reverse_of is not None:
        return divergence._reverse_of

    def apply(p, q, cfg=None):
        return divergence(q, p, cfg)

    result = DivergenceFunctional('%s*' % divergence.name, apply, divergence.closed_form)
    result._reverse_of = divergence
    return result


def categorical_kl(p, q) -> float:
    """Exact Kullback-Leibler divergence between categorical mass vectors

    Args:
        p: First mass vector
        q: Second mass vector

    Returns:
        The divergence, ``+inf`` when q vanishes where p does not
    """
    return float(math.fsum(rel_entr(np.asarray(p, dtype=float), np.asarray(q, dtype=float))))


def categorical_jsd(p, q, alpha: float = 0.5) -> float:
    """Exact skew Jensen-Shannon divergence between categorical mass vectors

    Args:
        p: First mass vector
        q: Second mass vector
        alpha (optional): Skew in [0, 1]

    Returns:
        The divergence
    """
    alpha = check_alpha(alpha)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    mixture = (1.0 - alpha) * p + alpha * q
    return (1.0 - alpha) * categorical_kl(p, mixture) + alpha * categorical_kl(q, mixture)


KL = DivergenceFunctional('kl', closed_or_oracle_kl)
KL_ORACLE = DivergenceFunctional('kl-oracle', kl)
REVERSE_KL = reverse(KL)

DIVERGENCES_DICT = {divergence.name: divergence for divergence in (
    KL,
    KL_ORACLE,
    REVERSE_KL,
    DivergenceFunctional('jeffreys', jeffreys),
    DivergenceFunctional('resistor', resistor_average),
    DivergenceFunctional('jsd', jsd),
    DivergenceFunctional('bhattacharyya', lambda p, q, cfg=None: bhattacharyya(p, q, 0.5, cfg)),
    DivergenceFunctional('hellinger', hellinger),
)}


__author__ = 'GeneralizedJSD developers'
