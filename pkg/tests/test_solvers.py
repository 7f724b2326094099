import unittest

import numpy as np
from scipy.optimize import minimize_scalar

from gjsd.exceptions import DomainError
from gjsd.expfam import FixedVarianceGaussianSpec, MvnParam, MvnSpec, PoissonSpec, jensen_skew
from gjsd.solvers import (SOLVERS_DICT, JensenCCCPSolver, NumericSolver, RightBregmanSolver,
                          jensen_centroid_cccp, jensen_objective)


class TestJensenCentroid(unittest.TestCase):

    def test_single_point(self):
        np.testing.assert_array_equal(jensen_centroid_cccp(PoissonSpec(), [[0.7]]), [0.7])

    def test_quadratic_generator(self):
        centroid = jensen_centroid_cccp(FixedVarianceGaussianSpec(2.0), [[-1.0], [0.5], [3.0]], [0.5, 0.25, 0.25])
        self.assertAlmostEqual(float(centroid[0]), 0.375, delta=1e-8)

    def test_symmetric_points(self):
        centroid = jensen_centroid_cccp(FixedVarianceGaussianSpec(), [[-2.0], [2.0]], alpha=0.3)
        self.assertAlmostEqual(float(centroid[0]), 0.0, delta=1e-8)

    def test_poisson_against_scalar_minimization(self):
        spec = PoissonSpec()
        thetas = np.array([[-1.0], [0.5], [2.0]])
        weights = np.full(3, 1.0 / 3.0)
        centroid = jensen_centroid_cccp(spec, thetas, alpha=0.5)
        value = jensen_objective(spec, thetas, weights, centroid, 0.5)
        self.assertLessEqual(value, jensen_objective(spec, thetas, weights, thetas.mean(axis=0), 0.5))
        best = minimize_scalar(lambda t: jensen_objective(spec, thetas, weights, np.array([t]), 0.5),
                               bounds=(-1.0, 2.0), method='bounded', options={'xatol': 1e-10})
        self.assertAlmostEqual(value, best.fun, delta=1e-10)

    def test_gaussians(self):
        spec = MvnSpec(2)
        thetas = [spec.flatten(MvnParam.ordinary(mu, sigma)) for mu, sigma in (
            ([0.0, 0.0], np.eye(2)),
            ([1.0, 2.0], [[1.0, -1.0], [-1.0, 2.0]]),
            ([-1.0, 0.5], [[2.0, 0.3], [0.3, 0.5]]),
        )]
        weights = np.full(3, 1.0 / 3.0)
        centroid = jensen_centroid_cccp(spec, thetas)
        self.assertTrue(spec.domain_check(centroid))
        start = np.mean(thetas, axis=0)
        self.assertLessEqual(jensen_objective(spec, thetas, weights, centroid, 0.5),
                             jensen_objective(spec, thetas, weights, start, 0.5))

    def test_open_skew(self):
        self.assertRaises(DomainError, jensen_centroid_cccp, PoissonSpec(), [[0.0], [1.0]], alpha=1.0)


class TestSolvers(unittest.TestCase):

    def test_registry(self):
        self.assertEqual(sorted(SOLVERS_DICT), ['jensen-cccp', 'numeric', 'right-bregman'])

    def test_right_bregman(self):
        solver = RightBregmanSolver()
        np.testing.assert_allclose(solver.centroid([[0.0, 1.0], [2.0, 3.0]]), [1.0, 2.0])
        np.testing.assert_allclose(solver.centroid([[0.0], [4.0]], [3.0, 1.0]), [1.0])
        self.assertGreaterEqual(solver.time, 0.0)
        self.assertIn('Solver : Right bregman', str(solver))
        self.assertRaises(DomainError, solver.centroid, np.empty((0, 2)))
        self.assertRaises(DomainError, solver.centroid, [[0.0], [4.0]], [1.0])

    def test_jensen_cccp(self):
        spec = FixedVarianceGaussianSpec()
        solver = JensenCCCPSolver(spec=spec, alpha=0.5)
        np.testing.assert_allclose(solver.centroid([[1.0], [3.0]]), [2.0], atol=1e-8)
        self.assertIn('Family : fixed-variance-gaussian', str(solver))
        self.assertRaises(DomainError, JensenCCCPSolver().centroid, [[1.0], [3.0]])

    def test_numeric(self):
        spec = PoissonSpec()

        def divergence(point, center):
            return jensen_skew(spec, point, center, 0.5).value

        points = np.array([[-1.0], [0.5], [2.0]])
        numeric = NumericSolver(spec=spec, divergence=divergence).centroid(points)
        cccp = JensenCCCPSolver(spec=spec).centroid(points)
        np.testing.assert_allclose(numeric, cccp, atol=1e-6)
        self.assertRaises(DomainError, NumericSolver().centroid, points)

    def test_numeric_rejects_outside_domain(self):
        def divergence(point, center):
            if center[0] <= 0.0:
                raise DomainError('outside')
            return (np.log(point[0]) - np.log(center[0])) ** 2

        center = NumericSolver(divergence=divergence).centroid([[1.0], [4.0]])
        self.assertAlmostEqual(float(center[0]), 2.0, delta=1e-6)
