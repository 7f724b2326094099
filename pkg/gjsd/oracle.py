"""
gjsd.oracle
===========

This module contains the numerical integration oracle used as ground truth for every closed form
of the project.

One dimensional integrals are computed by adaptive 15-point Gauss-Kronrod quadrature with the
QUADPACK error estimate, always refining the subinterval with the largest error. Improper
integrals are mapped to bounded ones instead of being truncated: ``x = c + s t / (1 - t^2)`` maps
``(-1, 1)`` onto the real line and ``x = s t / (1 - t)`` maps ``[0, 1)`` onto the positive half line.
Finite alphabets are summed exactly. Integrals in dimension two or more are estimated by
importance sampling with a caller supplied proposal; samples are drawn in chunks, each chunk from
its own child of ``SeedSequence(seed)``, so the estimate only depends on the configuration.

Integrands must be vectorized: they receive a numpy array of points with the layout accepted by
:meth:`gjsd.structures.Density.log_eval`.

Attributes:
    DEFAULT_CONFIG (OracleConfig): Configuration used when ``cfg`` is None
"""

import heapq
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import BudgetExceededError, DomainError, NonFiniteIntegrandError
from .structures import (Density, FiniteAlphabet, IntegralEstimate, Interval, PositiveHalfLine,
                         RealLine, Support)

_LOGGER = logging.getLogger(__name__)

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])

_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])

_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# abscissas on [-1, 1] in the order -x0 ... -x6, 0, x6 ... x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS = np.zeros(15)
_GAUSS[[1, 3, 5, 9, 11, 13]] = np.concatenate([_WG[:3], _WG[2::-1]])
_GAUSS[7] = _WG[3]

_EPS = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny
_INITIAL_PIECES = 16


@dataclass(frozen=True)
class OracleConfig:
    """Tolerances and budgets of the oracle

    Attributes:
        abs_tol: Absolute tolerance of the adaptive quadrature
        rel_tol: Relative tolerance, used when it is looser than ``abs_tol``
        max_nodes: Maximum number of integrand evaluations of the quadrature
        mc_samples: Monte Carlo sample count
        mc_chunk: Monte Carlo samples drawn per random stream
        seed: Seed of the Monte Carlo streams
        density_floor: Densities below this value contribute nothing to log-ratio integrands
        eq_tol: Tolerance of the optimality checks (Chernoff information)
        kl_infinite_threshold: Integrals above this value are reported as infinite divergences
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_nodes: int = 300000
    mc_samples: int = 200000
    mc_chunk: int = 16384
    seed: int = 0
    density_floor: float = 1e-300
    eq_tol: float = 1e-6
    kl_infinite_threshold: float = 1e300

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError('abs_tol must be positive, got %r' % self.abs_tol)
        if self.max_nodes < 15 or self.mc_samples < 2 or self.mc_chunk < 1:
            raise DomainError('oracle budgets are too small')

    def replace(self, **changes):
        """Returns a copy of the configuration with some fields changed"""
        return replace(self, **changes)

    @property
    def log_floor(self) -> float:
        return math.log(self.density_floor)


DEFAULT_CONFIG = OracleConfig()


def _map_for(support: Support):
    """Variable substitution ``x = phi(t)`` and the initial partition in t"""
    if isinstance(support, RealLine):
        center, scale = support.center, support.scale

        def phi(t):
            s = 1.0 - t * t
            return center + scale * t / s, scale * (1.0 + t * t) / (s * s)

        edges = np.linspace(-1.0, 1.0, _INITIAL_PIECES + 1)
    elif isinstance(support, PositiveHalfLine):
        scale = support.scale

        def phi(t):
            s = 1.0 - t
            return scale * t / s, scale / (s * s)

        edges = np.linspace(0.0, 1.0, _INITIAL_PIECES // 2 + 1)
    elif isinstance(support, Interval):
        def phi(t):
            return t, np.ones_like(t)

        edges = None
    else:
        raise DomainError('no quadrature map for %r' % support)
    if edges is None:
        pieces = support.partition()
    else:
        pieces = list(zip(edges[:-1], edges[1:]))
    return phi, pieces


def _kronrod(integrand, phi, a: float, b: float):
    """15-point Gauss-Kronrod rule on [a, b] with the QUADPACK error estimate"""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = center + half * _NODES
    x, jacobian = phi(t)
    with np.errstate(over='ignore', invalid='ignore'):
        values = np.asarray(integrand(x), dtype=float) * jacobian
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        return None, (float(x[bad]), float(values[bad]))

    result_kronrod = np.dot(_KRONROD, values)
    result_gauss = np.dot(_GAUSS, values)
    mean = 0.5 * result_kronrod
    result_abs = np.dot(_KRONROD, np.abs(values)) * abs(half)
    result_asc = np.dot(_KRONROD, np.abs(values - mean)) * abs(half)
    abs_error = abs((result_kronrod - result_gauss) * half)
    if result_asc != 0.0 and abs_error != 0.0:
        abs_error = result_asc * min(1.0, (200.0 * abs_error / result_asc) ** 1.5)
    if result_abs > _UFLOW / (50.0 * _EPS):
        abs_error = max(50.0 * _EPS * result_abs, abs_error)
    return (float(result_kronrod * half), float(abs_error)), None


def _adaptive(integrand, support: Support, cfg: OracleConfig) -> IntegralEstimate:
    phi, pieces = _map_for(support)

    heap = []
    finished_value = 0.0
    finished_error = 0.0
    nodes = 0

    def partial():
        value = finished_value + sum(item[3] for item in heap)
        error = finished_error + sum(-item[0] for item in heap)
        return IntegralEstimate(value, error, nodes)

    def evaluate(a, b):
        nonlocal nodes
        result, failure = _kronrod(integrand, phi, a, b)
        nodes += 15
        if failure is not None:
            raise NonFiniteIntegrandError(
                'integrand is not finite at x=%r (value %r)' % failure,
                node=failure[0], value=failure[1], partial=partial())
        return result

    total_value = 0.0
    total_error = 0.0
    for a, b in pieces:
        value, error = evaluate(a, b)
        heapq.heappush(heap, (-error, a, b, value))
        total_value += value
        total_error += error

    while heap:
        if total_error <= max(cfg.abs_tol, cfg.rel_tol * abs(total_value)):
            break
        if nodes + 30 > cfg.max_nodes:
            raise BudgetExceededError(
                'quadrature budget of %d nodes exceeded with error %.3g' % (cfg.max_nodes, total_error),
                partial=partial())
        error, a, b, value = heapq.heappop(heap)
        middle = 0.5 * (a + b)
        if not (a < middle < b) or (b - a) < 8.0 * _EPS * max(abs(a), abs(b), 1.0):
            # interval exhausted by rounding
            finished_value += value
            finished_error += -error
            continue
        total_value -= value
        total_error += error
        for left, right in ((a, middle), (middle, b)):
            child_value, child_error = evaluate(left, right)
            heapq.heappush(heap, (-child_error, left, right, child_value))
            total_value += child_value
            total_error += child_error
        total_error = max(total_error, 0.0)

    value = finished_value + math.fsum(item[3] for item in heap)
    error = finished_error + math.fsum(-item[0] for item in heap)
    _LOGGER.debug('quadrature on %r: value %.17g, error %.3g, %d nodes', support, value, error, nodes)
    return IntegralEstimate(value, error, nodes, 'quadrature')


def _alphabet_sum(integrand, support: FiniteAlphabet) -> IntegralEstimate:
    points = np.arange(support.size)
    with np.errstate(over='ignore', invalid='ignore'):
        values = np.asarray(integrand(points), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        finite = values[np.isfinite(values)]
        raise NonFiniteIntegrandError(
            'integrand is not finite at symbol %d (value %r)' % (bad, values[bad]),
            node=bad, value=float(values[bad]),
            partial=IntegralEstimate(math.fsum(finite), 0.0, support.size, 'sum'))
    value = math.fsum(values)
    error = 2.0 * _EPS * math.fsum(np.abs(values))
    return IntegralEstimate(value, error, support.size, 'sum')


def _monte_carlo(integrand, proposal: Density, cfg: OracleConfig, weighted: bool) -> IntegralEstimate:
    chunks = -(-cfg.mc_samples // cfg.mc_chunk)
    streams = np.random.SeedSequence(cfg.seed).spawn(chunks)
    total = 0.0
    total_sq = 0.0
    count = 0
    for index, stream in enumerate(streams):
        size = min(cfg.mc_chunk, cfg.mc_samples - index * cfg.mc_chunk)
        rng = np.random.default_rng(stream)
        x = proposal.sample(size, rng)
        with np.errstate(over='ignore', invalid='ignore', under='ignore'):
            values = np.asarray(integrand(x), dtype=float)
            if weighted:
                values = values * np.exp(-proposal.log_eval(x))
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            partial = IntegralEstimate(total / max(count, 1), math.inf, count, 'monte-carlo')
            raise NonFiniteIntegrandError(
                'integrand is not finite at a Monte Carlo sample (value %r)' % values[bad],
                node=np.asarray(x[bad]).tolist(), value=float(values[bad]), partial=partial)
        total += math.fsum(values)
        total_sq += math.fsum(values * values)
        count += size
    mean = total / count
    variance = max(total_sq / count - mean * mean, 0.0) * count / (count - 1)
    error = math.sqrt(variance / count)
    _LOGGER.debug('monte carlo with %d samples: value %.17g, standard error %.3g', count, mean, error)
    return IntegralEstimate(mean, error, count, 'monte-carlo')


def integrate(f, support: Support, cfg: OracleConfig = None, proposal: Density = None) -> IntegralEstimate:
    """Integrates a pointwise function over a support

    Args:
        f: Vectorized integrand
        support: Integration domain
        cfg (optional): Oracle configuration, ``DEFAULT_CONFIG`` when omitted
        proposal (optional): Importance sampling density, required in dimension two or more

    Returns:
        Integral estimate; for Monte Carlo the error is the standard error of the mean

    Raises:
        BudgetExceededError: If the quadrature does not converge within ``cfg.max_nodes``
        NonFiniteIntegrandError: If the integrand is not finite at some node
    """
    cfg = cfg or DEFAULT_CONFIG
    if isinstance(support, FiniteAlphabet):
        return _alphabet_sum(f, support)
    if support.dim >= 2:
        if proposal is None:
            raise DomainError('Monte Carlo integration in dimension %d requires a proposal density'
                              % support.dim)
        return _monte_carlo(f, proposal, cfg, weighted=True)
    return _adaptive(f, support, cfg)


def expectation(p: Density, f, cfg: OracleConfig = None) -> IntegralEstimate:
    """Computes ``E_p[f] = integral of p f``

    Points where p vanishes contribute nothing even when f is not finite there. In dimension two
    or more, the samples are drawn from p itself.

    Args:
        p: Density
        f: Vectorized function
        cfg (optional): Oracle configuration

    Returns:
        Integral estimate
    """
    cfg = cfg or DEFAULT_CONFIG
    if p.dim >= 2 and not isinstance(p.support, FiniteAlphabet):
        return _monte_carlo(f, p, cfg, weighted=False)

    def integrand(x):
        log_p = p.log_eval(x)
        positive = log_p > cfg.log_floor
        result = np.zeros(np.shape(log_p))
        if np.any(positive):
            values = np.asarray(f(x), dtype=float)
            values = np.broadcast_to(values, np.shape(log_p))
            result[positive] = np.exp(log_p[positive]) * values[positive]
        return result

    return integrate(integrand, p.support, cfg)


def log_ratio_integrand(log_weight, log_p, log_q, cfg: OracleConfig = None):
    """Pointwise ``w log(p / q)`` from log values with the ``0 log 0 = 0`` convention

    Weights below the density floor contribute zero. A positive weight against a vanishing q
    yields ``+inf``.

    Args:
        log_weight: Log of the weight (usually ``log_p``)
        log_p: Log of the numerator
        log_q: Log of the denominator
        cfg (optional): Oracle configuration

    Returns:
        ndarray: Integrand values
    """
    cfg = cfg or DEFAULT_CONFIG
    log_weight = np.asarray(log_weight, dtype=float)
    log_p = np.broadcast_to(np.asarray(log_p, dtype=float), log_weight.shape)
    log_q = np.broadcast_to(np.asarray(log_q, dtype=float), log_weight.shape)
    result = np.zeros(log_weight.shape)
    active = log_weight > cfg.log_floor
    with np.errstate(invalid='ignore', over='ignore', under='ignore'):
        result[active] = np.exp(log_weight[active]) * (log_p[active] - log_q[active])
    return result


__author__ = 'GeneralizedJSD developers'
