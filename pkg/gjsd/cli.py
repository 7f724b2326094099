"""
gjsd.cli
========

This module contains the command-line interface: evaluation of divergences, verification of the
closed forms against the oracle, Chernoff information, clustering and the table of reference
numbers.

Densities are given with the ``family:params`` mini-grammar (``cauchy:0.3``, ``cauchy:1,0.3``,
``normal:0,1``, ``exponential:2``, ``poisson:3.5``, ``uniform:0,1``, ``categorical:0.2,0.8``,
``mvn:@file.json``), as inline JSON descriptors or as paths to JSON files.

Exit codes are 0 on success, 1 on a failed verification, 2 on usage or parse errors and 3 on
numerical failures. Errors are written to stderr as ``{"error": ..., "message": ...}``.

Attributes:
    COMMANDS_DICT (dict): Dictionary which maps command names to their functions
    SUITES_DICT (dict): Dictionary which maps verification suite names to their functions
    DIVERGENCE_CHOICES (tuple): Divergences accepted by the ``div`` command
"""

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cauchy import CauchyDensity, cauchy_from_json, harmonic_jsd, harmonic_jsd_lerp, harmonic_mixture
from .clustering import PARAM_DIVERGENCES_DICT, ClusterProblem, kmeans
from .divergences import (DIVERGENCES_DICT, GENERATORS_DICT, KL, KL_ORACLE, REVERSE_KL, MMixture,
                          alpha_divergence, bhattacharyya, categorical_jsd, chernoff_information,
                          f_divergence, j_symmetrization, js_symmetrization, jsd, k_divergence,
                          mn_js, n_jeffreys)
from .exceptions import DomainError, GJSDError, SpecParseError
from .expfam import (ExponentialSpec, FixedVarianceGaussianSpec, GaussianSpec, MvnDensity, MvnParam,
                     MvnSpec, PoissonSpec, g_jsd, g_jsd_dual, g_mixture_param, jensen_skew, mvn_from_json,
                     z_geometric)
from .formats import FORMAT_DEFAULT, FORMAT_DICT
from .means import ArithmeticMean, GeometricMean, HarmonicMean, MEANS_DICT, PowerMean, mean_from_identifier
from .oracle import DEFAULT_CONFIG, OracleConfig, integrate
from .solvers import SOLVERS_DICT
from .structures import Categorical, Exponential, Measured, Poisson, Uniform, error_of
from .wmixture import WMixtureFamily, categorical_family, mixture_density, wmix_jsd

_LOGGER = logging.getLogger(__name__)

_VERIFY_ALPHAS = (0.1, 0.25, 0.5, 0.75, 0.9)
_QUADRATURE_TOLERANCE = 1e-7
_CATEGORICAL_TOLERANCE = 1e-12
_WMIX_TOLERANCE = 1e-5

DIVERGENCE_CHOICES = (
    'kl', 'kl*', 'kl-oracle', 'jeffreys', 'resistor', 'jsd', 'hellinger', 'bhattacharyya',
    'js', 'gjs', 'gjs*', 'j', 'n-jeffreys', 'f', 'alpha', 'k',
)


@dataclass
class CliConfig:
    """Validated command-line configuration

    Attributes:
        command: Command name
        densities: Parsed densities
        divergence: Divergence name of the ``div`` command
        base: Base divergence of the symmetrizations
        mean_m: Mixture mean
        mean_n: Combination mean, None for the plain JS symmetrization
        alpha: Mixture skew
        beta: Combination skew
        generator: f-divergence generator name
        suite: Verification suite name
        dim: Dimension of the Gaussian verification suite
        cases: Number of random verification cases
        input_path: Clustering problem file
        k: Number of clusters
        solver: Centroid solver name, None for the divergence default
        cluster_divergence: Divergence name of the clustering problem, None for the family default
        max_iters: Maximum number of Lloyd iterations
        oracle: Oracle configuration
        output: Output path, None for stdout
        output_format: Output format name
        verbose: Debug logging
    """

    command: str
    densities: list = field(default_factory=list)
    divergence: str = 'kl'
    base: str = 'kl'
    mean_m: object = None
    mean_n: object = None
    alpha: float = 0.5
    beta: float = 0.5
    generator: str = 'kl'
    suite: str = 'all'
    dim: int = 1
    cases: int = 20
    input_path: str = None
    k: int = None
    solver: str = None
    cluster_divergence: str = None
    max_iters: int = 100
    oracle: OracleConfig = DEFAULT_CONFIG
    output: str = None
    output_format: str = FORMAT_DEFAULT
    verbose: bool = False

    @property
    def seed(self) -> int:
        return self.oracle.seed

    @classmethod
    def from_args(cls, args: argparse.Namespace):
        """Validates parsed arguments before any computation

        Raises:
            SpecParseError: On malformed densities, means or flags
        """
        try:
            oracle = DEFAULT_CONFIG.replace(abs_tol=args.tol, mc_samples=args.mc_samples, seed=args.seed,
                                            max_nodes=args.max_nodes)
        except (DomainError, TypeError) as error:
            raise SpecParseError('invalid oracle flags: %s' % error) from error
        config = cls(args.command, oracle=oracle, output=args.output, output_format=args.output_format,
                     verbose=args.verbose)
        if args.command in ('div', 'chernoff'):
            config.densities = [parse_density(text) for text in args.densities]
        if args.command == 'div':
            config.divergence = args.divergence
            config.base = args.base
            config.generator = args.generator
            config.mean_m = _parse_mean(args.mean_m, args.m_power)
            config.mean_n = _parse_mean(args.mean_n, args.n_power) if args.mean_n else None
            config.alpha = _parse_skew(args.alpha, 'alpha')
            config.beta = _parse_skew(args.beta, 'beta')
        elif args.command == 'verify':
            config.suite = args.suite
            config.dim = args.dim
            config.cases = args.cases
            if config.dim < 1 or config.cases < 1:
                raise SpecParseError('--dim and --cases must be positive')
        elif args.command == 'cluster':
            config.input_path = args.input
            config.k = args.k
            config.solver = args.solver
            config.cluster_divergence = args.cluster_divergence
            config.alpha = _parse_skew(args.alpha, 'alpha')
            config.max_iters = args.max_iters
        return config


def _parse_skew(value: float, name: str) -> float:
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise SpecParseError('--%s must lie in [0, 1], got %r' % (name, value))
    return float(value)


def _parse_mean(name: str, power: float):
    try:
        return mean_from_identifier(name, power)
    except DomainError as error:
        raise SpecParseError(str(error)) from error


def _numbers(text: str, family: str) -> list:
    try:
        return [float(value) for value in text.split(',')]
    except ValueError as error:
        raise SpecParseError('invalid %s parameters %r' % (family, text)) from error


def _load_json(path: str) -> dict:
    try:
        with open(path, 'r') as stream:
            return json.load(stream)
    except (OSError, ValueError) as error:
        raise SpecParseError('cannot read %s: %s' % (path, error)) from error


def density_from_json(data: dict):
    """Builds a density from its JSON descriptor

    Raises:
        SpecParseError: If the descriptor is malformed
    """
    if not isinstance(data, dict):
        raise SpecParseError('a density descriptor must be a JSON object')
    family = data.get('family', 'mvn' if 'chart' in data else None)
    try:
        if family == 'mvn':
            return MvnDensity(mvn_from_json(data))
        if family in ('cauchy', 'cauchy_ls'):
            return cauchy_from_json(data)
        if family == 'normal':
            return MvnDensity.from_moments([data['mu']], [[data['sigma'] ** 2]])
        if family == 'exponential':
            return Exponential(data['rate'])
        if family == 'poisson':
            return Poisson(data['lam'])
        if family == 'uniform':
            return Uniform(data['low'], data['high'])
        if family == 'categorical':
            return Categorical(data['probs'])
    except KeyError as error:
        raise SpecParseError('%s descriptor misses the %s field' % (family, error)) from error
    except DomainError as error:
        raise SpecParseError('invalid %s descriptor: %s' % (family, error)) from error
    raise SpecParseError('unknown density family %r' % family)


def parse_density(text: str):
    """Parses a density from the mini-grammar, an inline JSON descriptor or a JSON file

    Args:
        text: Density specification

    Returns:
        Density: The density

    Raises:
        SpecParseError: If the specification is malformed
    """
    text = text.strip()
    if text.startswith('{'):
        try:
            return density_from_json(json.loads(text))
        except ValueError as error:
            if isinstance(error, SpecParseError):
                raise
            raise SpecParseError('invalid inline JSON: %s' % error) from error
    if text.startswith('@'):
        return density_from_json(_load_json(text[1:]))
    if ':' not in text:
        if os.path.isfile(text):
            return density_from_json(_load_json(text))
        raise SpecParseError('expected family:params, got %r' % text)
    family, params = text.split(':', 1)
    family = family.lower()
    if params.startswith('@'):
        data = _load_json(params[1:])
        data.setdefault('family', family)
        return density_from_json(data)
    values = _numbers(params, family)
    try:
        if family == 'cauchy' and len(values) in (1, 2):
            return CauchyDensity(0.0, values[0]) if len(values) == 1 else CauchyDensity(*values)
        if family in ('normal', 'gaussian') and len(values) == 2:
            return MvnDensity.from_moments([values[0]], [[values[1] ** 2]])
        if family == 'exponential' and len(values) == 1:
            return Exponential(values[0])
        if family == 'poisson' and len(values) == 1:
            return Poisson(values[0])
        if family == 'uniform' and len(values) == 2:
            return Uniform(*values)
        if family == 'categorical':
            return Categorical(values)
    except DomainError as error:
        raise SpecParseError('invalid %s parameters: %s' % (family, error)) from error
    raise SpecParseError('cannot parse density %r' % text)


def _measured_report(name: str, value) -> dict:
    method = getattr(value, 'method', 'closed-form')
    return {
        'divergence': name,
        'value': float(value),
        'method': 'oracle' if method == 'oracle' else 'closed_form',
        'tolerance': error_of(value),
    }


def cmd_div(config: CliConfig) -> dict:
    """Evaluates a divergence between two densities

    Args:
        config: Configuration with two densities

    Returns:
        Report ``{divergence, value, method, tolerance}``
    """
    if len(config.densities) != 2:
        raise SpecParseError('div expects exactly two densities')
    p, q = config.densities
    cfg = config.oracle
    name = config.divergence
    base = DIVERGENCES_DICT[config.base]
    alpha = config.alpha
    if name in DIVERGENCES_DICT and name != 'bhattacharyya':
        value = DIVERGENCES_DICT[name](p, q, cfg)
    elif name == 'bhattacharyya':
        value = bhattacharyya(p, q, alpha, cfg)
    elif name in ('js', 'gjs', 'gjs*'):
        mean_m = config.mean_m if name == 'js' else GeometricMean()
        if name != 'js':
            base = KL if name == 'gjs' else REVERSE_KL
        if config.mean_n is None:
            value = js_symmetrization(base, mean_m, alpha, p, q, cfg)
        else:
            value = mn_js(base, mean_m, alpha, config.mean_n, config.beta, p, q, cfg)
    elif name == 'j':
        value = j_symmetrization(base, alpha, p, q, cfg)
    elif name == 'n-jeffreys':
        value = n_jeffreys(base, config.mean_n or ArithmeticMean(), config.beta, p, q, cfg)
    elif name == 'f':
        value = f_divergence(GENERATORS_DICT[config.generator], p, q, cfg)
    elif name == 'alpha':
        value = alpha_divergence(p, q, alpha, cfg)
    else:
        value = k_divergence(p, q, alpha, cfg)
    _LOGGER.info('%s(%r : %r) = %.17g', name, p, q, float(value))
    return _measured_report(name, value)


def cmd_chernoff(config: CliConfig) -> dict:
    """Chernoff information between two densities

    Returns:
        Report ``{alpha_star, value, kl_equalization_gap}``
    """
    if len(config.densities) != 2:
        raise SpecParseError('chernoff expects exactly two densities')
    result = chernoff_information(config.densities[0], config.densities[1], config.oracle)
    return {'alpha_star': result.alpha_star, 'value': result.value, 'kl_equalization_gap': result.gap}


def _case(suite: str, label: str, closed: float, oracle, tolerance: float) -> dict:
    difference = abs(float(closed) - float(oracle))
    bound = max(tolerance, 3.0 * error_of(oracle))
    return {'suite': suite, 'case': label, 'closed': float(closed), 'oracle': float(oracle),
            'abs_diff': difference, 'tolerance': bound, 'pass': bool(difference <= bound)}


def oracle_mixture(p, q, mean, alpha: float, cfg: OracleConfig) -> MMixture:
    """M-mixture whose normalizer is integrated by the oracle even when a closed form exists"""

    def unnormalized(x):
        return np.exp(mean.log_evaluate(p.log_eval(x), q.log_eval(x), alpha))

    estimate = integrate(unnormalized, p.support.union(q.support), cfg, proposal=p.proposal())
    return MMixture(p, q, mean, alpha, cfg, normalizer=estimate)


def _oracle_js(p, q, mean, alpha: float, cfg: OracleConfig):
    mixture = oracle_mixture(p, q, mean, alpha, cfg)
    first = KL_ORACLE(p, mixture, cfg)
    second = KL_ORACLE(q, mixture, cfg)
    return (1.0 - alpha) * float(first) + alpha * float(second), \
        (1.0 - alpha) * error_of(first) + alpha * error_of(second) + mixture.log_normalizer_error


def _random_gaussian(rng, dim: int) -> MvnParam:
    factor = rng.normal(0.0, 0.5, size=(dim, dim))
    return MvnParam.ordinary(rng.normal(0.0, 1.0, size=dim), factor @ factor.T + 0.5 * np.eye(dim))


def verify_gjs_mvn(config: CliConfig) -> list:
    """Closed-form geometric JSD of Gaussians against the oracle"""
    rng = np.random.default_rng(config.seed)
    spec = MvnSpec(config.dim)
    tolerance = _QUADRATURE_TOLERANCE if config.dim == 1 else 1e-9
    cases = []
    for index in range(config.cases):
        first, second = _random_gaussian(rng, config.dim), _random_gaussian(rng, config.dim)
        alpha = _VERIFY_ALPHAS[index % len(_VERIFY_ALPHAS)]
        closed = g_jsd(spec, first, second, alpha)
        value, error = _oracle_js(MvnDensity(first), MvnDensity(second), GeometricMean(), alpha, config.oracle)
        cases.append(_case('gjs-mvn', 'pair %d alpha %g' % (index, alpha), closed,
                           Measured(value, error, 'oracle'), tolerance))
    return cases


def verify_hjs_cauchy(config: CliConfig) -> list:
    """Harmonic mixtures and harmonic JSD of Cauchy scales against the oracle"""
    rng = np.random.default_rng(config.seed)
    cases = []
    for index in range(config.cases):
        gamma1, gamma2 = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=2))
        alpha = _VERIFY_ALPHAS[index % len(_VERIFY_ALPHAS)]
        p, q = CauchyDensity(0.0, gamma1), CauchyDensity(0.0, gamma2)
        label = 'scales %.6g %.6g alpha %g' % (gamma1, gamma2, alpha)
        mixture = oracle_mixture(p, q, HarmonicMean(), alpha, config.oracle)
        cases.append(_case('hjs-cauchy', 'Z ' + label, harmonic_mixture(gamma1, gamma2, alpha)[1],
                           Measured(mixture.Z.value, mixture.Z.abs_error, 'oracle'), _QUADRATURE_TOLERANCE))
        value, error = _oracle_js(p, q, HarmonicMean(), alpha, config.oracle)
        cases.append(_case('hjs-cauchy', 'JS ' + label, harmonic_jsd(gamma1, gamma2, alpha),
                           Measured(value, error, 'oracle'), _QUADRATURE_TOLERANCE))
    return cases


def verify_bhat_jensen(config: CliConfig) -> list:
    """Skew Bhattacharyya distances against skew Jensen divergences of log-normalizers"""
    rng = np.random.default_rng(config.seed)
    cases = []
    for spec in (GaussianSpec(), FixedVarianceGaussianSpec(1.0)):
        for index in range(config.cases):
            if isinstance(spec, GaussianSpec):
                theta1 = spec.from_moments(rng.normal(), rng.uniform(0.5, 2.0))
                theta2 = spec.from_moments(rng.normal(), rng.uniform(0.5, 2.0))
            else:
                theta1, theta2 = rng.normal(0.0, 2.0, size=(2, 1))
            alpha = _VERIFY_ALPHAS[index % len(_VERIFY_ALPHAS)]
            closed = jensen_skew(spec, theta1, theta2, alpha).value
            oracle = bhattacharyya(spec.density_factory(theta1), spec.density_factory(theta2), alpha,
                                   config.oracle)
            cases.append(_case('bhat-jensen', '%s pair %d alpha %g' % (spec.identifier(), index, alpha),
                               closed, oracle, _QUADRATURE_TOLERANCE))
    return cases


def verify_wmix_jsd(config: CliConfig) -> list:
    """Jensen divergence of the negentropy against direct Jensen-Shannon divergences"""
    rng = np.random.default_rng(config.seed)
    cases = []
    family = categorical_family(3)
    for index in range(config.cases):
        first, second = rng.dirichlet(np.full(4, 4.0), size=2)
        closed = wmix_jsd(family, first[1:], second[1:], config.oracle)
        cases.append(_case('wmix-jsd', 'categorical %d' % index, closed, categorical_jsd(first, second),
                           _CATEGORICAL_TOLERANCE))
    gaussians = WMixtureFamily([MvnDensity.from_moments([-2.0], [[1.0]]),
                                MvnDensity.from_moments([2.0], [[1.0]])])
    for index in range(config.cases):
        theta1, theta2 = rng.uniform(0.1, 0.9, size=2)
        closed = wmix_jsd(gaussians, [theta1], [theta2], config.oracle)
        oracle = jsd(mixture_density(gaussians, [theta1]), mixture_density(gaussians, [theta2]), config.oracle)
        cases.append(_case('wmix-jsd', 'gaussian components %d' % index, closed, oracle, _WMIX_TOLERANCE))
    return cases


SUITES_DICT = {
    'gjs-mvn': verify_gjs_mvn,
    'hjs-cauchy': verify_hjs_cauchy,
    'bhat-jensen': verify_bhat_jensen,
    'wmix-jsd': verify_wmix_jsd,
}


def cmd_verify(config: CliConfig) -> dict:
    """Runs closed-form against oracle verification suites

    Returns:
        Report ``{suite, cases, pass}``
    """
    names = list(SUITES_DICT) if config.suite == 'all' else [config.suite]
    cases = []
    for name in names:
        suite_cases = SUITES_DICT[name](config)
        failed = sum(1 for case in suite_cases if not case['pass'])
        _LOGGER.info('suite %s: %d cases, %d failed', name, len(suite_cases), failed)
        cases.extend(suite_cases)
    return {'suite': config.suite, 'cases': cases, 'pass': all(case['pass'] for case in cases)}


def _row(quantity: str, value, expected, tolerance: float) -> dict:
    value = np.asarray(value, dtype=float)
    expected = np.asarray(expected, dtype=float)
    difference = float(np.max(np.abs(value - expected)))
    return {'quantity': quantity, 'value': value.tolist(), 'expected': expected.tolist(),
            'abs_diff': difference, 'pass': bool(difference <= tolerance)}


def cmd_paper_table(config: CliConfig) -> dict:
    """Reproduces the reference worked numbers

    Rows cover the Gaussian chart conversions, the geometric JSD and its dual, the Cauchy
    harmonic JSD values and the closed mixture normalizers against the oracle.

    Returns:
        Report ``{rows, pass}``
    """
    cfg = config.oracle
    spec = MvnSpec(2)
    first = MvnParam.ordinary([0.0, 0.0], np.eye(2))
    second = MvnParam.ordinary([1.0, 2.0], [[1.0, -1.0], [-1.0, 2.0]])
    natural = second.to('natural')
    expectation = second.to('expectation')
    middle = g_mixture_param(first, second, 0.5)
    rows = [
        _row('theta_v of the second Gaussian', natural.vector, [4.0, 3.0], 1e-12),
        _row('theta_M of the second Gaussian', natural.matrix, [[1.0, 0.5], [0.5, 0.5]], 1e-12),
        _row('eta_v of the second Gaussian', expectation.vector, [1.0, 2.0], 1e-12),
        _row('eta_M of the second Gaussian', expectation.matrix, [[-2.0, -1.0], [-1.0, -6.0]], 1e-12),
        _row('mu of the geometric mixture', middle.mu, [1.0, 1.0], 1e-12),
        _row('Sigma of the geometric mixture', middle.sigma, [[0.8, -0.4], [-0.4, 1.2]], 1e-12),
        _row('eta_M of the geometric mixture', middle.to('expectation').matrix,
             [[-1.8, -0.6], [-0.6, -2.2]], 1e-12),
        _row('geometric JSD of the Gaussians', g_jsd(spec, first, second, 0.5), 1.26343, 1e-4),
        _row('dual geometric JSD of the Gaussians', g_jsd_dual(spec, first, second, 0.5), 0.86157, 1e-4),
        _row('harmonic JSD of Cauchy 0.1, 0.5 (interpolated scale)', harmonic_jsd_lerp(0.1, 0.5), 0.176, 1e-3),
        _row('harmonic JSD of Cauchy 0.2, 0.8 (interpolated scale)', harmonic_jsd_lerp(0.2, 0.8), 0.129, 1e-3),
        _row('harmonic JSD of Cauchy 0.1, 0.5 (exact mixture)', harmonic_jsd(0.1, 0.5), 0.15771, 1e-4),
        _row('harmonic JSD of Cauchy 0.2, 0.8 (exact mixture)', harmonic_jsd(0.2, 0.8), 0.11778, 1e-4),
    ]

    normal1 = MvnDensity.from_moments([0.0], [[1.0]])
    normal2 = MvnDensity.from_moments([1.0], [[4.0]])
    cauchy1, cauchy2 = CauchyDensity(0.0, 0.1), CauchyDensity(0.0, 0.5)
    gaussian = GaussianSpec()
    normalizers = (
        ('Z arithmetic (normals)', 1.0, oracle_mixture(normal1, normal2, ArithmeticMean(), 0.5, cfg)),
        ('Z geometric (normals)',
         z_geometric(gaussian, gaussian.from_moments(0.0, 1.0), gaussian.from_moments(1.0, 2.0), 0.5),
         oracle_mixture(normal1, normal2, GeometricMean(), 0.5, cfg)),
        ('Z harmonic (Cauchy scales)', harmonic_mixture(0.1, 0.5, 0.5)[1],
         oracle_mixture(cauchy1, cauchy2, HarmonicMean(), 0.5, cfg)),
    )
    for quantity, closed, mixture in normalizers:
        rows.append(_row(quantity, closed, mixture.Z.value, _QUADRATURE_TOLERANCE))
    return {'rows': rows, 'pass': all(row['pass'] for row in rows)}


_FAMILY_SPECS = {
    'raw': lambda size: None,
    'cauchy': lambda size: None,
    'gaussian': lambda size: GaussianSpec(),
    'exponential': lambda size: ExponentialSpec(),
    'poisson': lambda size: PoissonSpec(),
    'mvn': lambda size: MvnSpec(int(round((math.sqrt(1.0 + 4.0 * size) - 1.0) / 2.0))),
}

_DEFAULT_DIVERGENCES = {'raw': 'squared-euclidean', 'cauchy': 'cauchy-kl'}


def _natural_points(family: str, chart: str, spec, rows: np.ndarray) -> np.ndarray:
    if chart == 'natural' or family in ('raw', 'cauchy', 'exponential'):
        return rows
    if family == 'gaussian':
        return np.array([spec.from_moments(mu, sigma) for mu, sigma in rows])
    if family == 'poisson':
        return np.log(rows)
    if family == 'mvn':
        dim = spec.dim
        return np.array([spec.flatten(MvnParam.ordinary(row[:dim], row[dim:].reshape(dim, dim)))
                         for row in rows])
    raise SpecParseError('unsupported chart %r for %s points' % (chart, family))


def load_problem(path: str) -> dict:
    """Reads a clustering problem from a CSV or JSON file

    A CSV file starts with a header row of ``key=value`` cells naming the ``family`` and the
    ``chart`` of the parameter rows that follow. A JSON file holds an object with ``family``,
    ``chart``, ``points`` and optionally ``k``, ``divergence`` and ``alpha``.

    Returns:
        dict: Problem fields
    """
    if path.lower().endswith('.json'):
        data = _load_json(path)
        if not isinstance(data, dict) or 'points' not in data:
            raise SpecParseError('%s is not a clustering problem' % path)
        return data
    try:
        with open(path, 'r', newline='') as stream:
            reader = csv.reader(stream)
            header = next(reader)
            rows = [[float(cell) for cell in row] for row in reader if row]
    except (OSError, StopIteration, ValueError) as error:
        raise SpecParseError('cannot read %s: %s' % (path, error)) from error
    data = {}
    for cell in header:
        key, separator, value = cell.strip().partition('=')
        if not separator:
            raise SpecParseError('header cells must be key=value, got %r' % cell)
        data[key.strip()] = value.strip()
    data['points'] = rows
    return data


def cmd_cluster(config: CliConfig) -> dict:
    """Runs k-means++ seeded Lloyd clustering of parameter vectors

    Returns:
        ClusterResult JSON with the family and divergence names
    """
    data = load_problem(config.input_path)
    family = data.get('family', 'raw')
    chart = data.get('chart', 'natural')
    if family not in _FAMILY_SPECS:
        raise SpecParseError('unknown family %r, expected one of %s' % (family, ', '.join(_FAMILY_SPECS)))
    rows = np.asarray(data['points'], dtype=float)
    if rows.ndim == 1:
        rows = rows[:, None]
    if rows.ndim != 2 or rows.size == 0:
        raise SpecParseError('the problem has no points')
    spec = _FAMILY_SPECS[family](rows.shape[1])
    points = _natural_points(family, chart, spec, rows)
    name = config.cluster_divergence or data.get('divergence') or _DEFAULT_DIVERGENCES.get(family, 'bregman')
    if name not in PARAM_DIVERGENCES_DICT:
        raise SpecParseError('unknown divergence %r' % name)
    if spec is None and name in ('bregman', 'jensen', 'g-jsd'):
        raise SpecParseError('the %s divergence requires an exponential family' % name)
    alpha = float(data.get('alpha', config.alpha))
    k = config.k if config.k is not None else data.get('k')
    if k is None:
        raise SpecParseError('the number of clusters is missing, use --k')
    divergence = PARAM_DIVERGENCES_DICT[name](spec, alpha)
    problem = ClusterProblem(points, divergence, int(k), family, config.seed, config.max_iters)
    solver = SOLVERS_DICT[config.solver](spec=spec, alpha=alpha, divergence=divergence) \
        if config.solver else None
    result = kmeans(problem, solver)
    _LOGGER.info('%d points, k=%d, objective %.17g after %d iterations', problem.n, problem.k,
                 result.objective, result.iterations)
    report = result.to_json()
    report.update({'family': family, 'divergence': name})
    return report


COMMANDS_DICT = {
    'div': cmd_div,
    'verify': cmd_verify,
    'chernoff': cmd_chernoff,
    'cluster': cmd_cluster,
    'paper-table': cmd_paper_table,
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecParseError(message)


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser with one subcommand per entry of ``COMMANDS_DICT``"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', dest='tol', type=float, default=DEFAULT_CONFIG.abs_tol,
                        help='absolute tolerance of the adaptive quadrature')
    common.add_argument('--mc-samples', dest='mc_samples', type=int, default=DEFAULT_CONFIG.mc_samples,
                        help='Monte Carlo sample count in dimension two or more')
    common.add_argument('--seed', dest='seed', type=int, default=0, help='random seed')
    common.add_argument('--max-nodes', dest='max_nodes', type=int, default=DEFAULT_CONFIG.max_nodes,
                        help='integrand evaluation budget of the quadrature')
    common.add_argument('--format', dest='output_format', type=str, default=FORMAT_DEFAULT,
                        choices=list(FORMAT_DICT), help='output format')
    common.add_argument('--output', dest='output', type=str, default=None,
                        help='write the report to this path instead of stdout')
    common.add_argument('-v', '--verbose', dest='verbose', action='store_true', help='debug logging on stderr')

    parser = _ArgumentParser(prog='gjsd_toolkit', description='Generalized Jensen-Shannon divergences')
    parser.add_argument('-V', '--version', action='version', version='GeneralizedJSD v%s' % __version__)
    commands = parser.add_subparsers(dest='command', parser_class=_ArgumentParser)
    commands.required = True

    mean_choices = list(MEANS_DICT) + [PowerMean.identifier()]
    div = commands.add_parser('div', parents=[common], help='evaluate a divergence between two densities')
    div.add_argument('--d', dest='divergence', type=str, default='kl', choices=DIVERGENCE_CHOICES,
                     help='divergence to evaluate')
    div.add_argument('--base', dest='base', type=str, default='kl', choices=list(DIVERGENCES_DICT),
                     help='base divergence of the js, j and n-jeffreys symmetrizations')
    div.add_argument('--m', dest='mean_m', type=str, default='arithmetic', choices=mean_choices,
                     help='mean of the mixture')
    div.add_argument('--m-power', dest='m_power', type=float, default=None, help='exponent of a power M')
    div.add_argument('--n', dest='mean_n', type=str, default=None, choices=mean_choices,
                     help='mean combining the two divergence terms')
    div.add_argument('--n-power', dest='n_power', type=float, default=None, help='exponent of a power N')
    div.add_argument('--alpha', dest='alpha', type=float, default=0.5, help='mixture skew')
    div.add_argument('--beta', dest='beta', type=float, default=0.5, help='combination skew')
    div.add_argument('--generator', dest='generator', type=str, default='kl', choices=list(GENERATORS_DICT),
                     help='generator of the f divergence')
    div.add_argument('densities', nargs=2, help='density specifications')

    verify = commands.add_parser('verify', parents=[common], help='check closed forms against the oracle')
    verify.add_argument('suite', type=str, choices=list(SUITES_DICT) + ['all'], help='verification suite')
    verify.add_argument('--dim', dest='dim', type=int, default=1, help='dimension of the Gaussian suite')
    verify.add_argument('--cases', dest='cases', type=int, default=20, help='random cases per suite')

    chernoff = commands.add_parser('chernoff', parents=[common], help='Chernoff information')
    chernoff.add_argument('densities', nargs=2, help='density specifications')

    cluster = commands.add_parser('cluster', parents=[common], help='k-means of parameter vectors')
    cluster.add_argument('input', type=str, help='CSV or JSON problem file')
    cluster.add_argument('--k', dest='k', type=int, default=None, help='number of clusters')
    cluster.add_argument('--divergence', dest='cluster_divergence', type=str, default=None,
                         choices=list(PARAM_DIVERGENCES_DICT), help='divergence between parameters')
    cluster.add_argument('--solver', dest='solver', type=str, default=None, choices=list(SOLVERS_DICT),
                         help='centroid solver')
    cluster.add_argument('--alpha', dest='alpha', type=float, default=0.5, help='skew of Jensen divergences')
    cluster.add_argument('--max-iters', dest='max_iters', type=int, default=100, help='Lloyd iteration cap')

    commands.add_parser('paper-table', parents=[common], help='reproduce the reference worked numbers')
    return parser


def _emit_error(error: Exception):
    sys.stderr.write(json.dumps({'error': error.__class__.__name__, 'message': str(error)}, sort_keys=True))
    sys.stderr.write('\n')


def main(argv=None) -> int:
    """Entry point of the command line

    Args:
        argv (optional): Arguments, ``sys.argv[1:]`` when omitted

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING,
                            format='%(levelname)s %(name)s: %(message)s')
        logging.captureWarnings(True)
        config = CliConfig.from_args(args)
        report = COMMANDS_DICT[config.command](config)
    except SpecParseError as error:
        _emit_error(error)
        return 2
    except (GJSDError, ArithmeticError, ValueError, np.linalg.LinAlgError) as error:
        _emit_error(error)
        return 3

    print_formatted = FORMAT_DICT[config.output_format]
    if config.output:
        with open(config.output, 'w') as stream:
            print_formatted(report, stream)
    else:
        print_formatted(report, sys.stdout)
    return 1 if report.get('pass') is False else 0


__author__ = 'GeneralizedJSD developers'
