import math
import unittest

import numpy as np

from gjsd.exceptions import DomainError
from gjsd.structures import (Categorical, DENSITIES_DICT, Exponential, FiniteAlphabet, InfiniteDivergence,
                             IntegralEstimate, Interval, Measured, Poisson, PositiveHalfLine, RealLine, Uniform,
                             error_of)


class TestSupports(unittest.TestCase):

    def test_equality(self):
        self.assertEqual(RealLine(1, 0.0, 2.0), RealLine(1, 0.0, 2.0))
        self.assertNotEqual(RealLine(1, 0.0, 2.0), RealLine(2, 0.0, 2.0))
        self.assertEqual(hash(FiniteAlphabet(3)), hash(FiniteAlphabet(3)))
        self.assertRaises(DomainError, RealLine, 0)
        self.assertRaises(DomainError, Interval, 1.0, 1.0)

    def test_union(self):
        self.assertEqual(FiniteAlphabet(3).union(FiniteAlphabet(5)), FiniteAlphabet(5))
        self.assertEqual(PositiveHalfLine(1.0).union(PositiveHalfLine(4.0)), PositiveHalfLine(2.0))
        merged = Interval(0.0, 1.0).union(Interval(2.0, 3.0))
        self.assertEqual((merged.low, merged.high), (0.0, 3.0))
        self.assertEqual(merged.breakpoints, (1.0, 2.0))
        self.assertIsInstance(Interval(0.0, 1.0).union(PositiveHalfLine()), PositiveHalfLine)
        self.assertIsInstance(PositiveHalfLine().union(RealLine()), RealLine)
        self.assertRaises(DomainError, FiniteAlphabet(2).union, RealLine())
        self.assertRaises(DomainError, PositiveHalfLine().union, Interval(-1.0, 1.0))

    def test_partition(self):
        interval = Interval(0.0, 4.0, breakpoints=(3.0, 1.0, 7.0))
        self.assertEqual(interval.partition(), [(0.0, 1.0), (1.0, 3.0), (3.0, 4.0)])


class TestValues(unittest.TestCase):

    def test_integral_estimate(self):
        estimate = IntegralEstimate(1.5, 1e-9, 45)
        self.assertEqual(float(estimate), 1.5)
        self.assertEqual(estimate.method, 'quadrature')
        self.assertEqual(error_of(estimate), 1e-9)
        self.assertRaises(DomainError, IntegralEstimate, 1.0, -1.0, 15)

    def test_measured(self):
        value = Measured(0.25, -1e-8, 'oracle')
        self.assertEqual(value, 0.25)
        self.assertEqual(value.abs_error, 1e-8)
        self.assertEqual(error_of(value), 1e-8)
        self.assertEqual(error_of(0.25), 0.0)
        self.assertNotIsInstance(value + 1.0, Measured)

    def test_infinite_divergence(self):
        partial = IntegralEstimate(3.0, 0.1, 15)
        value = InfiniteDivergence(partial)
        self.assertTrue(math.isinf(value))
        self.assertIs(value.partial, partial)
        self.assertEqual(value.method, 'oracle')


class TestDensities(unittest.TestCase):

    def test_categorical(self):
        p = Categorical([0.25, 0.75, 0.0])
        self.assertEqual(p.support, FiniteAlphabet(3))
        np.testing.assert_allclose(p.eval([0, 1, 2, 3, 1.5]), [0.25, 0.75, 0.0, 0.0, 0.0])
        self.assertRaises(DomainError, Categorical, [0.5, 0.6])
        self.assertRaises(DomainError, Categorical, [-0.5, 1.5])
        self.assertEqual(p, Categorical([0.25, 0.75, 0.0]))
        self.assertNotEqual(p, Categorical([0.75, 0.25, 0.0]))

    def test_uniform(self):
        p = Uniform(1.0, 3.0)
        np.testing.assert_allclose(p.eval([0.0, 2.0, 3.0, 3.5]), [0.0, 0.5, 0.5, 0.0])
        self.assertEqual(p.to_json(), {'family': 'uniform', 'low': 1.0, 'high': 3.0})

    def test_exponential(self):
        p = Exponential(2.0)
        self.assertAlmostEqual(float(p.eval(0.5)), 2.0 * math.exp(-1.0), delta=1e-15)
        self.assertEqual(float(p.eval(-1.0)), 0.0)
        self.assertEqual(p.support, PositiveHalfLine(0.5))
        self.assertRaises(DomainError, Exponential, 0.0)

    def test_poisson(self):
        p = Poisson(3.0)
        self.assertAlmostEqual(float(p.eval(2)), 4.5 * math.exp(-3.0), delta=1e-15)
        self.assertEqual(float(p.eval(2.5)), 0.0)
        self.assertAlmostEqual(math.fsum(p.eval(np.arange(p.support.size))), 1.0, delta=1e-15)

    def test_sampling(self):
        rng = np.random.default_rng(3)
        samples = Categorical([0.1, 0.9]).sample(20000, rng)
        self.assertAlmostEqual(samples.mean(), 0.9, delta=0.01)
        samples = Uniform(0.0, 2.0).sample(1000, rng)
        self.assertTrue(np.all((samples >= 0.0) & (samples <= 2.0)))

    def test_registry(self):
        self.assertEqual(sorted(DENSITIES_DICT), ['categorical', 'exponential', 'poisson', 'uniform'])
        self.assertIsNone(Uniform(0.0, 1.0).closed_kl(Uniform(0.0, 2.0)))
