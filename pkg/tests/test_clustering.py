import math
import unittest
import warnings

import numpy as np

from gjsd.clustering import (PARAM_DIVERGENCES_DICT, ClusterProblem, assign, bregman_divergence,
                             brute_force_optimum, cauchy_kl_divergence, g_jsd_divergence, jensen_divergence,
                             kappa_estimate, kmeans, lloyd, objective, seed_kmeanspp, seeding_quality,
                             squared_euclidean)
from gjsd.exceptions import DegenerateSeedingWarning, DomainError, SingularHessianWarning
from gjsd.expfam import ExponentialSpec, FixedVarianceGaussianSpec, GaussianSpec, PoissonSpec


def _blobs(seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    return np.concatenate([center + rng.normal(scale=0.2, size=(20, 2)) for center in centers])


class TestProblem(unittest.TestCase):

    def test_validation(self):
        self.assertRaises(DomainError, ClusterProblem, [[0.0], [1.0]], squared_euclidean(), 0)
        self.assertRaises(DomainError, ClusterProblem, [[0.0], [1.0]], squared_euclidean(), 3)
        self.assertRaises(DomainError, ClusterProblem, [[0.0], [math.nan]], squared_euclidean(), 1)
        self.assertRaises(DomainError, ClusterProblem, [[1.0], [-1.0]], bregman_divergence(ExponentialSpec()), 1)
        problem = ClusterProblem([0.0, 1.0, 2.0], squared_euclidean(), 2)
        self.assertEqual(problem.points.shape, (3, 1))
        self.assertEqual(problem.n, 3)

    def test_registry(self):
        self.assertEqual(sorted(PARAM_DIVERGENCES_DICT),
                         ['bregman', 'cauchy-kl', 'g-jsd', 'jensen', 'squared-euclidean'])
        divergence = PARAM_DIVERGENCES_DICT['jensen'](PoissonSpec(), 0.3)
        self.assertEqual((divergence.name, divergence.alpha, divergence.solver), ('jensen', 0.3, 'jensen-cccp'))


class TestAssignment(unittest.TestCase):

    def test_ties_go_to_lowest_index(self):
        problem = ClusterProblem([[1.0]], squared_euclidean(), 1)
        assignment, distances = assign(problem, [[0.0], [2.0]])
        self.assertEqual(assignment.tolist(), [0])
        self.assertEqual(distances.tolist(), [1.0])

    def test_objective_zero_at_points(self):
        points = _blobs()[:5]
        problem = ClusterProblem(points, squared_euclidean(), 5)
        self.assertEqual(objective(problem, points), 0.0)

    def test_orientation(self):
        spec = PoissonSpec()
        problem = ClusterProblem([[0.0]], bregman_divergence(spec), 1)
        _, distances = assign(problem, [[1.0]])
        self.assertAlmostEqual(distances[0], 1.0, delta=1e-14)


class TestSeeding(unittest.TestCase):

    def test_deterministic(self):
        problem = ClusterProblem(_blobs(), squared_euclidean(), 3, seed=7)
        first = seed_kmeanspp(problem)
        np.testing.assert_array_equal(first, seed_kmeanspp(problem))
        self.assertEqual(first.shape, (3, 2))
        self.assertEqual(len({tuple(row) for row in first}), 3)

    def test_degenerate(self):
        problem = ClusterProblem([[1.0], [1.0], [1.0]], squared_euclidean(), 2)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            centers = seed_kmeanspp(problem)
        self.assertTrue(any(issubclass(item.category, DegenerateSeedingWarning) for item in caught))
        np.testing.assert_array_equal(centers, [[1.0], [1.0]])


class TestLloyd(unittest.TestCase):

    def test_single_cluster(self):
        points = _blobs()
        problem = ClusterProblem(points, squared_euclidean(), 1)
        result = kmeans(problem)
        np.testing.assert_allclose(result.centers[0], points.mean(axis=0), atol=1e-12)
        expected = float(np.mean(np.sum((points - points.mean(axis=0)) ** 2, axis=1)))
        self.assertAlmostEqual(result.objective, expected, delta=1e-12)

    def test_k_equals_n(self):
        points = _blobs()[:6]
        result = kmeans(ClusterProblem(points, squared_euclidean(), 6))
        self.assertEqual(result.objective, 0.0)
        self.assertEqual(sorted(result.assignment.tolist()), list(range(6)))

    def test_monotone_trace(self):
        for index in range(100):
            rng = np.random.default_rng(index)
            n, k = int(rng.integers(6, 30)), int(rng.integers(2, 5))
            if index % 2:
                points = rng.normal(scale=rng.uniform(0.5, 5.0), size=(n, 2))
                divergence = squared_euclidean()
            else:
                points = rng.uniform(-1.0, 3.0, size=(n, 1))
                divergence = bregman_divergence(PoissonSpec())
            result = kmeans(ClusterProblem(points, divergence, k, seed=index))
            for before, after in zip(result.objective_trace, result.objective_trace[1:]):
                self.assertLessEqual(after, before + 1e-12, 'problem %d' % index)
            self.assertGreaterEqual(result.iterations, 1)

    def test_recovers_blobs(self):
        points = _blobs()
        result = kmeans(ClusterProblem(points, squared_euclidean(), 3, seed=2))
        labels = result.assignment.reshape(3, 20)
        for row in labels:
            self.assertEqual(len(set(row.tolist())), 1)
        self.assertEqual(len({row[0] for row in labels}), 3)

    def test_empty_cluster_reseeded(self):
        problem = ClusterProblem([[0.0], [0.1], [10.0], [10.1]], squared_euclidean(), 2)
        result = lloyd(problem, [[0.0], [100.0]])
        self.assertEqual(result.assignment.tolist(), [0, 0, 1, 1])
        self.assertAlmostEqual(result.objective, 0.0025, delta=1e-12)

    def test_initial_centers_shape(self):
        problem = ClusterProblem([[0.0], [1.0]], squared_euclidean(), 2)
        self.assertRaises(DomainError, lloyd, problem, [[0.0]])

    def test_result_json(self):
        result = kmeans(ClusterProblem([[0.0], [1.0], [5.0]], squared_euclidean(), 2))
        data = result.to_json()
        self.assertEqual(sorted(data), ['assignment', 'centers', 'iterations', 'objective', 'objective_trace'])
        self.assertEqual(data['objective'], data['objective_trace'][-1])


class TestSeedingQuality(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(0)
        self.means = np.array([0.0, 30.0, 60.0])
        self.points = np.concatenate([mean + rng.normal(size=(50, 1)) for mean in self.means])
        self.divergence = bregman_divergence(FixedVarianceGaussianSpec(1.0))

    def test_one_seed_per_cluster(self):
        covered = 0
        for seed in range(100):
            centers = seed_kmeanspp(ClusterProblem(self.points, self.divergence, 3, seed=seed))
            if set(np.rint(centers[:, 0] / 30.0).astype(int).tolist()) == {0, 1, 2}:
                covered += 1
        self.assertGreaterEqual(covered, 95)

    def test_median_within_bound(self):
        problem = ClusterProblem(self.points, self.divergence, 3)
        optimum = lloyd(problem, self.means[:, None]).objective
        quality = seeding_quality(problem, range(100), optimum=optimum)
        self.assertEqual(len(quality.seeded_objectives), 100)
        self.assertEqual(len(quality.final_objectives), 100)
        self.assertAlmostEqual(quality.bound, 8.0 * (2.0 + math.log(3.0)) * optimum, delta=1e-12)
        self.assertLessEqual(quality.median_seeded, quality.bound)
        self.assertTrue(quality.passed)
        self.assertTrue(quality.to_json()['pass'])

    def test_tiny_instance_reaches_optimum(self):
        points = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [10.0, 10.0], [10.0, 11.0], [11.0, 10.0]]
        quality = seeding_quality(ClusterProblem(points, squared_euclidean(), 2), range(100))
        self.assertAlmostEqual(quality.optimum, 4.0 / 9.0, delta=1e-12)
        self.assertGreaterEqual(quality.hits, 90)
        self.assertTrue(quality.passed)
        for value in quality.final_objectives:
            self.assertGreaterEqual(value, quality.optimum - 1e-12)

    def test_no_seeds(self):
        problem = ClusterProblem([[0.0], [1.0]], squared_euclidean(), 1)
        self.assertRaises(DomainError, seeding_quality, problem, [])


class TestFamilies(unittest.TestCase):

    def test_bregman_poisson_against_brute_force(self):
        thetas = np.log([[1.0], [1.5], [2.0], [20.0], [25.0], [30.0]])
        problem = ClusterProblem(thetas, bregman_divergence(PoissonSpec()), 2, seed=3)
        best, _ = brute_force_optimum(problem)
        result = kmeans(problem)
        self.assertGreaterEqual(result.objective, best - 1e-12)
        self.assertAlmostEqual(result.objective, best, delta=1e-12)

    def test_brute_force_small(self):
        problem = ClusterProblem([[0.0], [1.0], [4.0], [5.0]], squared_euclidean(), 2)
        best, centers = brute_force_optimum(problem)
        self.assertAlmostEqual(best, 0.25, delta=1e-15)
        np.testing.assert_allclose(sorted(centers[:, 0]), [0.5, 4.5])

    def test_jensen_gaussians(self):
        spec = GaussianSpec()
        points = [spec.from_moments(mu, sigma) for mu, sigma in
                  ((0.0, 1.0), (0.2, 1.1), (-0.1, 0.9), (8.0, 1.0), (8.3, 1.2), (7.9, 0.8))]
        result = kmeans(ClusterProblem(points, jensen_divergence(spec), 2, seed=4))
        self.assertEqual(len(set(result.assignment[:3].tolist())), 1)
        self.assertEqual(len(set(result.assignment[3:].tolist())), 1)
        self.assertNotEqual(result.assignment[0], result.assignment[3])
        for center in result.centers:
            self.assertTrue(spec.domain_check(center))

    def test_g_jsd_gaussians(self):
        spec = GaussianSpec()
        points = [spec.from_moments(mu, 1.0) for mu in (0.0, 0.5, 6.0, 6.5)]
        result = kmeans(ClusterProblem(points, g_jsd_divergence(spec), 2, seed=5))
        self.assertEqual(result.assignment[0], result.assignment[1])
        self.assertEqual(result.assignment[2], result.assignment[3])
        self.assertNotEqual(result.assignment[0], result.assignment[2])

    def test_cauchy_scales(self):
        result = kmeans(ClusterProblem([[0.1], [0.12], [5.0], [5.5]], cauchy_kl_divergence(), 2, seed=6))
        self.assertEqual(result.assignment[0], result.assignment[1])
        self.assertEqual(result.assignment[2], result.assignment[3])
        self.assertNotEqual(result.assignment[0], result.assignment[2])
        self.assertTrue(np.all(result.centers > 0.0))


class TestKappa(unittest.TestCase):

    def test_quadratic_generator(self):
        self.assertEqual(kappa_estimate(FixedVarianceGaussianSpec(2.0), [[0.0], [1.0], [5.0]]), (1.0, 1.0))

    def test_single_parameter(self):
        self.assertEqual(kappa_estimate(PoissonSpec(), [[0.3], [0.3]]), (1.0, 1.0))

    def test_exponential(self):
        kappa1, kappa2 = kappa_estimate(ExponentialSpec(), [[1.0], [2.0]])
        self.assertAlmostEqual(kappa1, 4.0, delta=1e-12)
        self.assertEqual(kappa1, kappa2)

    def test_singular(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            self.assertEqual(kappa_estimate(PoissonSpec(), [[-40.0], [0.0]]), (math.inf, math.inf))
        self.assertTrue(any(issubclass(item.category, SingularHessianWarning) for item in caught))
