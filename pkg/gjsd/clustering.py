"""
gjsd.clustering
===============

This module contains divergence-generic k-means clustering of parameter vectors: k-means++
seeding, Lloyd iterations, an exhaustive optimum for tiny instances, the empirical quality check of
the seeding over many seeds and the sampled estimate of
the quasi-triangle and symmetry constants of a Bregman divergence.

Points are assigned to centers by ``D(point : center)``, ties going to the lowest center index.

Attributes:
    PARAM_DIVERGENCES_DICT (dict): Dictionary which maps identifiers to divergence factories
"""

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .cauchy import cauchy_kl
from .exceptions import DegenerateSeedingWarning, DomainError, SingularHessianWarning
from .expfam import ExpFamSpec, bregman, g_jsd, jensen_skew
from .solvers import SOLVERS_DICT, CentroidSolver
from .utils import check_alpha

_LOGGER = logging.getLogger(__name__)

_KAPPA_SAMPLES = 200
_SINGULAR_RATIO = 1e-12
_QUALITY_FACTOR = 8.0
_OPTIMUM_RTOL = 1e-9


@dataclass(frozen=True)
class ParamDivergence:
    """A divergence ``D(point : center)`` between parameter vectors

    Attributes:
        name: Identifier used in reports
        apply: Callable ``(point, center) -> float``
        spec: Exponential family of the parameters, if any
        alpha: Skew of Jensen-type divergences
        solver: Identifier of the default centroid solver
    """

    name: str
    apply: object
    spec: ExpFamSpec = None
    alpha: float = 0.5
    solver: str = 'right-bregman'

    def __call__(self, point, center) -> float:
        return float(self.apply(point, center))

    def default_solver(self) -> CentroidSolver:
        return SOLVERS_DICT[self.solver](spec=self.spec, alpha=self.alpha, divergence=self)


def squared_euclidean() -> ParamDivergence:
    """Squared Euclidean distance, a Bregman divergence with exact center of mass centroids"""
    return ParamDivergence('squared-euclidean', lambda x, c: float(np.sum((np.asarray(x) - c) ** 2)))


def bregman_divergence(spec: ExpFamSpec) -> ParamDivergence:
    """Right-oriented Bregman divergence ``B_F(point : center) = KL(p_center : p_point)``"""
    return ParamDivergence('bregman', lambda x, c: bregman(spec, x, c), spec)


def jensen_divergence(spec: ExpFamSpec, alpha: float = 0.5) -> ParamDivergence:
    """Skew Jensen divergence ``J_F^a(point : center)``"""
    alpha = check_alpha(alpha, open_interval=True)
    return ParamDivergence('jensen', lambda x, c: jensen_skew(spec, x, c, alpha).value, spec, alpha,
                           'jensen-cccp')


def g_jsd_divergence(spec: ExpFamSpec, alpha: float = 0.5) -> ParamDivergence:
    """Closed-form geometric Jensen-Shannon divergence between family members"""
    alpha = check_alpha(alpha, open_interval=True)
    return ParamDivergence('g-jsd', lambda x, c: g_jsd(spec, x, c, alpha), spec, alpha, 'numeric')


def cauchy_kl_divergence() -> ParamDivergence:
    """Kullback-Leibler divergence between Cauchy scale members given as one-element vectors"""
    return ParamDivergence('cauchy-kl', lambda x, c: cauchy_kl(float(x[0]), float(c[0])),
                           solver='numeric')


PARAM_DIVERGENCES_DICT = {
    'squared-euclidean': lambda spec, alpha: squared_euclidean(),
    'bregman': lambda spec, alpha: bregman_divergence(spec),
    'jensen': lambda spec, alpha: jensen_divergence(spec, alpha),
    'g-jsd': lambda spec, alpha: g_jsd_divergence(spec, alpha),
    'cauchy-kl': lambda spec, alpha: cauchy_kl_divergence(),
}


@dataclass
class ClusterProblem:
    """A k-means problem over parameter vectors

    Attributes:
        points: Array of shape ``(n, p)``
        divergence: Divergence between parameter vectors
        k: Number of clusters
        family: Family tag of the points
        seed: Seed of the random choices
        max_iters: Maximum number of Lloyd iterations
        tol: Relative objective change under which Lloyd stops
    """

    points: np.ndarray
    divergence: ParamDivergence
    k: int
    family: str = 'raw'
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-9

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[0] == 0 or not np.all(np.isfinite(points)):
            raise DomainError('points must be a non-empty finite array of shape (n, p)')
        if not 1 <= int(self.k) <= points.shape[0]:
            raise DomainError('k must lie in [1, %d], got %r' % (points.shape[0], self.k))
        spec = self.divergence.spec
        if spec is not None:
            points = np.array([spec.check(point, 'point %d' % index) for index, point in enumerate(points)])
        self.points = points
        self.k = int(self.k)

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass
class ClusterResult:
    """Output of Lloyd's k-means

    Attributes:
        centers: Array of shape ``(k, p)``
        assignment: Center index of every point
        objective_trace: Objective after every assignment step
        iterations: Number of centroid steps
    """

    centers: np.ndarray
    assignment: np.ndarray
    objective_trace: list = field(default_factory=list)
    iterations: int = 0

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]

    def to_json(self) -> dict:
        return {
            'centers': np.asarray(self.centers).tolist(),
            'assignment': [int(index) for index in self.assignment],
            'objective': self.objective,
            'objective_trace': [float(value) for value in self.objective_trace],
            'iterations': self.iterations,
        }


def _distance_matrix(problem: ClusterProblem, centers) -> np.ndarray:
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    return np.array([[problem.divergence(point, center) for center in centers] for point in problem.points])


def assign(problem: ClusterProblem, centers):
    """Assigns every point to its nearest center

    Args:
        problem: Clustering problem
        centers: Array of shape ``(k, p)``

    Returns:
        tuple(ndarray, ndarray): Center index of every point (lowest index on ties) and the
        divergence to that center
    """
    matrix = _distance_matrix(problem, centers)
    assignment = np.argmin(matrix, axis=1)
    return assignment, matrix[np.arange(problem.n), assignment]


def objective(problem: ClusterProblem, centers) -> float:
    """Generalized k-means objective ``(1/n) sum_i min_j D(p_i : c_j)``

    Args:
        problem: Clustering problem
        centers: Array of shape ``(k, p)``

    Returns:
        The objective
    """
    _, distances = assign(problem, centers)
    return float(np.mean(distances))


def seed_kmeanspp(problem: ClusterProblem) -> np.ndarray:
    """k-means++ seeding

    The first center is drawn uniformly; the next ones with probability proportional to the
    divergence from the point to its nearest chosen center. When every remaining point lies at
    zero divergence the missing centers are copies of the first one.

    Args:
        problem: Clustering problem

    Returns:
        ndarray: Array of shape ``(k, p)`` of initial centers
    """
    rng = np.random.default_rng(problem.seed)
    chosen = [int(rng.integers(problem.n))]
    nearest = _distance_matrix(problem, problem.points[chosen])[:, 0]
    while len(chosen) < problem.k:
        total = float(nearest.sum())
        if not total > 0.0:
            warnings.warn('every point lies at zero divergence from the %d chosen centers, the '
                          'remaining centers are copies' % len(chosen), DegenerateSeedingWarning,
                          stacklevel=2)
            chosen.extend([chosen[0]] * (problem.k - len(chosen)))
            break
        index = int(rng.choice(problem.n, p=nearest / total))
        chosen.append(index)
        nearest = np.minimum(nearest, _distance_matrix(problem, problem.points[[index]])[:, 0])
    _LOGGER.debug('k-means++ seeds: %s', chosen)
    return problem.points[chosen].copy()


def lloyd(problem: ClusterProblem, init_centers, centroid_solver: CentroidSolver = None) -> ClusterResult:
    """Lloyd's batched k-means

    Alternates assignment and centroid steps until the relative objective change is below
    ``problem.tol`` or ``problem.max_iters`` centroid steps were made. An emptied cluster is
    reseeded at the point with the largest divergence to its center.

    Args:
        problem: Clustering problem
        init_centers: Array of shape ``(k, p)``
        centroid_solver (optional): Solver of the centroid step, the divergence default when omitted

    Returns:
        The clustering result
    """
    solver = centroid_solver or problem.divergence.default_solver()
    centers = np.atleast_2d(np.array(init_centers, dtype=float))
    if centers.shape != (problem.k, problem.points.shape[1]):
        raise DomainError('expected %d initial centers of size %d'
                          % (problem.k, problem.points.shape[1]))
    assignment, distances = assign(problem, centers)
    trace = [float(np.mean(distances))]
    iterations = 0
    for iterations in range(1, problem.max_iters + 1):
        updated = centers.copy()
        spare = distances.copy()
        for cluster in range(problem.k):
            members = np.flatnonzero(assignment == cluster)
            if members.size == 0:
                farthest = int(np.argmax(spare))
                _LOGGER.debug('cluster %d is empty, reseeded at point %d', cluster, farthest)
                updated[cluster] = problem.points[farthest]
                spare[farthest] = -math.inf
            else:
                updated[cluster] = solver.centroid(problem.points[members])
        centers = updated
        assignment, distances = assign(problem, centers)
        trace.append(float(np.mean(distances)))
        _LOGGER.debug('lloyd iteration %d: objective %.17g', iterations, trace[-1])
        if abs(trace[-2] - trace[-1]) <= problem.tol * abs(trace[-2]):
            break
    return ClusterResult(centers, assignment, trace, iterations)


def kmeans(problem: ClusterProblem, centroid_solver: CentroidSolver = None) -> ClusterResult:
    """k-means++ seeding followed by Lloyd's iterations"""
    return lloyd(problem, seed_kmeanspp(problem), centroid_solver)


def brute_force_optimum(problem: ClusterProblem, centroid_solver: CentroidSolver = None):
    """Exhaustive k-means optimum of a tiny instance

    Every partition of the points into k non-empty parts is scored with the exact centroid of
    each part; the solver must be exact for the divergence.

    Args:
        problem: Clustering problem
        centroid_solver (optional): Exact centroid solver, the divergence default when omitted

    Returns:
        tuple(float, ndarray): Optimal objective and its centers
    """
    solver = centroid_solver or problem.divergence.default_solver()
    best_value, best_centers = math.inf, None
    for labels in itertools.product(range(problem.k), repeat=problem.n - 1):
        labels = np.array((0,) + labels)
        if len(set(labels.tolist())) != problem.k:
            continue
        if any(labels[index] > max(labels[:index]) + 1 for index in range(1, problem.n)):
            continue
        centers = np.array([solver.centroid(problem.points[labels == cluster])
                            for cluster in range(problem.k)])
        value = objective(problem, centers)
        if value < best_value:
            best_value, best_centers = value, centers
    return best_value, best_centers


@dataclass
class SeedingQuality:
    """Outcome of k-means++ seeding and Lloyd's iterations over many seeds

    Attributes:
        optimum: Reference optimal objective ``E*``
        seeded_objectives: Objective of the seeded centers, one per seed
        final_objectives: Objective after Lloyd's iterations, one per seed
        hits: Number of seeds whose Lloyd objective reaches the optimum
        bound: Threshold ``8 (2 + log k) E*`` of the median seeded objective
    """

    optimum: float
    seeded_objectives: list
    final_objectives: list
    hits: int
    bound: float

    @property
    def median_seeded(self) -> float:
        return float(np.median(self.seeded_objectives))

    @property
    def passed(self) -> bool:
        return self.median_seeded <= self.bound

    def to_json(self) -> dict:
        return {
            'optimum': self.optimum,
            'median_seeded': self.median_seeded,
            'bound': self.bound,
            'hits': self.hits,
            'seeds': len(self.seeded_objectives),
            'pass': self.passed,
        }


def seeding_quality(problem: ClusterProblem, seeds, optimum: float = None,
                    centroid_solver: CentroidSolver = None) -> SeedingQuality:
    """Empirical quality of k-means++ seeding against the optimum

    Every seed reseeds a copy of the problem, scores the seeded centers and runs Lloyd's iterations
    from them. The median seeded objective is compared with ``8 (2 + log k) E*``; the threshold is
    empirical, it stands in for the bound on the expected seeded objective.

    Args:
        problem: Clustering problem
        seeds: Iterable of seeds
        optimum (optional): Reference optimum, the exhaustive optimum when omitted
        centroid_solver (optional): Solver of the centroid steps, the divergence default when omitted

    Returns:
        The per-seed objectives, the optimum hits and the threshold
    """
    if optimum is None:
        optimum, _ = brute_force_optimum(problem, centroid_solver)
    optimum = float(optimum)
    tolerance = _OPTIMUM_RTOL * max(1.0, abs(optimum))
    seeded, final, hits = [], [], 0
    for seed in seeds:
        seeded_problem = replace(problem, seed=int(seed))
        centers = seed_kmeanspp(seeded_problem)
        seeded.append(objective(seeded_problem, centers))
        result = lloyd(seeded_problem, centers, centroid_solver)
        final.append(result.objective)
        if result.objective <= optimum + tolerance:
            hits += 1
        else:
            _LOGGER.info('seed %d: Lloyd stopped at %.17g above the optimum %.17g', seed, result.objective,
                         optimum)
    if not seeded:
        raise DomainError('at least one seed is required')
    bound = _QUALITY_FACTOR * (2.0 + math.log(problem.k)) * optimum
    quality = SeedingQuality(optimum, seeded, final, hits, bound)
    if not quality.passed:
        _LOGGER.warning('median seeded objective %.6g exceeds %.6g', quality.median_seeded, bound)
    return quality


def kappa_estimate(spec: ExpFamSpec, thetas, samples: int = _KAPPA_SAMPLES, seed: int = 0):
    """Sampled quasi-triangle and symmetry constants of the Bregman divergence of a family

    Both constants are bounded by the ratio of the largest to the smallest spectral norm of the
    Hessian of F over the convex hull of the parameters. The ratio is sampled at the parameters,
    at the pairwise midpoints and at random convex combinations; it is an estimate, not a
    certified bound.

    Args:
        spec: Exponential family
        thetas: Natural parameters
        samples (optional): Number of random convex combinations
        seed (optional): Seed of the convex combinations

    Returns:
        tuple(float, float): Estimates of the quasi-triangle and symmetry constants, at least 1
    """
    thetas = np.unique(np.array([spec.check(theta) for theta in thetas]), axis=0)
    if len(thetas) < 2:
        return 1.0, 1.0
    rng = np.random.default_rng(seed)
    midpoints = [0.5 * (a + b) for a, b in itertools.combinations(thetas, 2)]
    combinations = rng.dirichlet(np.ones(len(thetas)), size=samples) @ thetas
    norms = []
    for theta in itertools.chain(thetas, midpoints, combinations):
        hessian = spec.hessian(theta)
        norms.append(float(np.linalg.norm(hessian, 2)) if np.all(np.isfinite(hessian)) else math.nan)
    norms = np.array(norms)
    largest = float(np.nanmax(norms)) if not np.all(np.isnan(norms)) else math.nan
    smallest = float(np.nanmin(norms)) if not np.all(np.isnan(norms)) else math.nan
    if np.any(np.isnan(norms)) or not smallest > _SINGULAR_RATIO * largest:
        warnings.warn('sampled Hessian of %s is numerically singular, the constants are unbounded'
                      % spec.identifier(), SingularHessianWarning, stacklevel=2)
        return math.inf, math.inf
    ratio = max(largest / smallest, 1.0)
    _LOGGER.debug('hessian spectral norms in [%.6g, %.6g] over %d samples', smallest, largest, len(norms))
    return ratio, ratio


__author__ = 'GeneralizedJSD developers'
