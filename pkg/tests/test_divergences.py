import math
import unittest
import warnings

import numpy as np

from gjsd.cauchy import CauchyDensity
from gjsd.divergences import (DIVERGENCES_DICT, F_CHI2, F_KL, F_TV, GENERATORS_DICT, KL, KL_ORACLE,
                              REVERSE_KL, FGenerator, alpha_divergence, bhattacharyya, categorical_jsd,
                              categorical_kl, chernoff_information, conjugate_generator, cross_entropy,
                              entropy, f_divergence, generalized_k_divergence, hellinger, j_skew_generator,
                              j_symmetrization, jeffreys, js_skew_generator, js_symmetrization, jsd,
                              k_divergence, kl, likelihood_ratio_family, m_jsd_upper_bound, m_mixture,
                              mean_difference, mn_js, n_jeffreys, resistor_average, reverse)
from gjsd.exceptions import ConvexityWarning, DegenerateInputError, DominanceError, DomainError
from gjsd.expfam import MvnDensity, MvnParam, MvnSpec, jensen_skew, mvn_kl
from gjsd.means import ArithmeticMean, GeometricMean, HarmonicMean, PowerMean
from gjsd.structures import Categorical, Exponential, InfiniteDivergence, Poisson, Uniform, error_of


def _normal(mu, variance):
    return MvnDensity.from_moments([mu], [[variance]])


class TestKullbackLeibler(unittest.TestCase):

    def test_closed_form_against_oracle(self):
        p, q = _normal(0.0, 1.0), _normal(1.0, 2.0)
        closed = KL(p, q)
        oracle = KL_ORACLE(p, q)
        self.assertEqual(closed.method, 'closed-form')
        self.assertEqual(oracle.method, 'oracle')
        self.assertAlmostEqual(closed, 0.5 * (0.5 + 0.5 + math.log(2.0) - 1.0), delta=1e-14)
        self.assertAlmostEqual(oracle, closed, delta=1e-8)

    def test_exponential(self):
        self.assertAlmostEqual(kl(Exponential(1.0), Exponential(2.0)), 1.0 - math.log(2.0), delta=1e-9)

    def test_identical(self):
        p = _normal(0.5, 3.0)
        self.assertEqual(kl(p, _normal(0.5, 3.0)), 0.0)

    def test_infinite(self):
        value = kl(Uniform(0.0, 2.0), Uniform(0.0, 1.0))
        self.assertIsInstance(value, InfiniteDivergence)
        self.assertTrue(math.isinf(value))

    def test_categorical(self):
        p = Categorical([0.2, 0.3, 0.5])
        q = Categorical([0.4, 0.4, 0.2])
        self.assertAlmostEqual(kl(p, q), categorical_kl(p.probs, q.probs), delta=1e-14)
        self.assertEqual(categorical_kl([0.5, 0.5], [1.0, 0.0]), math.inf)

    def test_entropies(self):
        p, q = _normal(0.0, 1.0), _normal(1.0, 2.0)
        self.assertAlmostEqual(entropy(p), 0.5 * math.log(2.0 * math.pi * math.e), delta=1e-9)
        self.assertAlmostEqual(cross_entropy(p, q) - entropy(p), KL(p, q), delta=1e-9)
        self.assertIsInstance(cross_entropy(Uniform(0.0, 2.0), Uniform(0.0, 1.0)), InfiniteDivergence)

    def test_reverse(self):
        p, q = _normal(0.0, 1.0), _normal(1.0, 2.0)
        self.assertIs(reverse(reverse(KL)), KL)
        self.assertIs(reverse(REVERSE_KL), KL)
        self.assertEqual(REVERSE_KL(p, q), KL(q, p))
        self.assertEqual(REVERSE_KL.name, 'kl*')


class TestFDivergences(unittest.TestCase):

    def setUp(self):
        self.p = Categorical([0.1, 0.2, 0.3, 0.4])
        self.q = Categorical([0.25, 0.25, 0.25, 0.25])

    def test_kl_generator(self):
        self.assertAlmostEqual(f_divergence(F_KL, self.p, self.q), kl(self.p, self.q), delta=1e-14)
        self.assertAlmostEqual(f_divergence(conjugate_generator(F_KL), self.p, self.q), kl(self.q, self.p),
                               delta=1e-14)
        self.assertIs(conjugate_generator(conjugate_generator(F_KL)), F_KL)

    def test_chi2(self):
        expected = sum((b - a) ** 2 / a for a, b in zip(self.p.probs, self.q.probs))
        self.assertAlmostEqual(f_divergence(F_CHI2, self.p, self.q), expected, delta=1e-14)

    def test_disjoint_supports(self):
        p, q = Uniform(0.0, 1.0), Uniform(2.0, 3.0)
        self.assertAlmostEqual(f_divergence(F_TV, p, q), 1.0, delta=1e-10)
        self.assertAlmostEqual(hellinger(p, q), 1.0, delta=1e-9)
        self.assertAlmostEqual(jsd(p, q), math.log(2.0), delta=1e-10)

    def test_js_skew_generator(self):
        for alpha in (0.25, 0.5, 0.8):
            expected = js_symmetrization(KL, ArithmeticMean(), alpha, self.p, self.q)
            value = f_divergence(js_skew_generator(F_KL, alpha), self.p, self.q)
            self.assertAlmostEqual(value, expected, delta=1e-14)

    def test_js_skew_generator_boundary(self):
        p, q = Categorical([0.5, 0.5, 0.0]), Categorical([0.0, 0.5, 0.5])
        expected = categorical_jsd(p.probs, q.probs, 0.3)
        self.assertAlmostEqual(f_divergence(js_skew_generator(F_KL, 0.3), p, q), expected, delta=1e-14)

    def test_j_skew_generator(self):
        expected = j_symmetrization(KL, 0.3, self.p, self.q)
        self.assertAlmostEqual(f_divergence(j_skew_generator(F_KL, 0.3), self.p, self.q), expected,
                               delta=1e-14)

    def test_generator_validation(self):
        self.assertRaises(DomainError, FGenerator, lambda u: u, 'identity')
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            self.assertFalse(FGenerator(lambda u: np.log(u), 'log').check_convexity())
        self.assertTrue(any(issubclass(item.category, ConvexityWarning) for item in caught))
        for generator in GENERATORS_DICT.values():
            self.assertTrue(generator.check_convexity(), generator.name)


class TestSymmetrizations(unittest.TestCase):

    def setUp(self):
        self.p = _normal(0.0, 1.0)
        self.q = _normal(2.0, 1.5)

    def test_js_endpoints(self):
        self.assertEqual(js_symmetrization(KL, GeometricMean(), 0.0, self.p, self.q), 0.0)
        self.assertEqual(js_symmetrization(KL, GeometricMean(), 1.0, self.p, self.q), KL(self.p, self.q))

    def test_jsd_bounds(self):
        value = jsd(self.p, self.q)
        self.assertGreater(value, 0.0)
        self.assertLessEqual(value, math.log(2.0))
        self.assertEqual(value.method, 'oracle')

    def test_sqrt_jsd_triangle(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            p, q, r = rng.dirichlet(np.ones(int(rng.integers(2, 9))), size=3)
            left = math.sqrt(categorical_jsd(p, r))
            right = math.sqrt(categorical_jsd(p, q)) + math.sqrt(categorical_jsd(q, r))
            self.assertLessEqual(left, right + 1e-12)

    def test_categorical_jsd_oracle(self):
        p, q = Categorical([0.2, 0.8]), Categorical([0.6, 0.4])
        self.assertAlmostEqual(jsd(p, q), categorical_jsd(p.probs, q.probs), delta=1e-14)
        self.assertAlmostEqual(categorical_jsd([1.0, 0.0], [0.0, 1.0]), math.log(2.0), delta=1e-15)

    def test_geometric_mixture_closed_form(self):
        mixture = m_mixture(self.p, self.q, GeometricMean(), 0.3)
        self.assertIsNotNone(mixture.closed)
        self.assertEqual(mixture.Z.method, 'closed-form')
        family = likelihood_ratio_family(self.p, self.q, 0.3)
        self.assertAlmostEqual(family.Z.value, mixture.Z.value, delta=1e-15)
        value = js_symmetrization(KL, GeometricMean(), 0.3, self.p, self.q)
        self.assertEqual(value.method, 'closed-form')
        spec = MvnSpec(1)
        theta_p, theta_q = spec.flatten(self.p.param), spec.flatten(self.q.param)
        middle = mixture.closed.param
        expected = 0.7 * mvn_kl(self.p.param, middle) + 0.3 * mvn_kl(self.q.param, middle)
        self.assertAlmostEqual(value, expected, delta=1e-12)
        self.assertAlmostEqual(mixture.Z.value, math.exp(-jensen_skew(spec, theta_p, theta_q, 0.3).value),
                               delta=1e-14)

    def test_upper_bound(self):
        for alpha in (0.5, 0.75, 0.9):
            mean = PowerMean(2.0)
            value = js_symmetrization(KL, mean, alpha, self.p, self.q)
            bound = m_jsd_upper_bound(mean, alpha, self.p, self.q)
            self.assertLessEqual(value, bound + 1e-8)
        self.assertRaises(DominanceError, m_jsd_upper_bound, GeometricMean(), 0.5, self.p, self.q)

    def test_j_symmetrization(self):
        forward, backward = KL(self.p, self.q), KL(self.q, self.p)
        self.assertAlmostEqual(j_symmetrization(KL, 0.5, self.p, self.q), 0.5 * (forward + backward), delta=1e-14)
        self.assertAlmostEqual(jeffreys(self.p, self.q), forward + backward, delta=1e-14)

    def test_n_jeffreys(self):
        forward, backward = KL(self.p, self.q), KL(self.q, self.p)
        self.assertAlmostEqual(n_jeffreys(KL, ArithmeticMean(), 0.5, self.p, self.q),
                               0.5 * (forward + backward), delta=1e-14)
        harmonic = n_jeffreys(KL, HarmonicMean(), 0.5, self.p, self.q)
        self.assertAlmostEqual(harmonic, resistor_average(self.p, self.q), delta=1e-13)
        self.assertLessEqual(harmonic, 0.5 * jeffreys(self.p, self.q) + 1e-14)
        self.assertEqual(n_jeffreys(KL, HarmonicMean(), 0.5, self.p, _normal(0.0, 1.0)), 0.0)

    def test_mn_js(self):
        expected = jsd(self.p, self.q)
        value = mn_js(KL, ArithmeticMean(), 0.5, ArithmeticMean(), 0.5, self.p, self.q)
        self.assertAlmostEqual(value, expected, delta=1e-12)
        self.assertRaises(DomainError, mn_js, KL, ArithmeticMean(), 0.0, ArithmeticMean(), 0.5, self.p, self.q)

    def test_k_divergence(self):
        self.assertEqual(k_divergence(self.p, self.q, 1.0), KL(self.p, self.q))
        self.assertRaises(DomainError, k_divergence, self.p, self.q, 0.0)
        self.assertLess(k_divergence(self.p, self.q, 0.5), KL(self.p, self.q))

    def test_generalized_k_divergence(self):
        value = generalized_k_divergence(KL, ArithmeticMean(), 0.5, self.p, self.q)
        self.assertAlmostEqual(value, k_divergence(self.p, self.q, 0.5), delta=1e-12)

    def test_mean_difference(self):
        geometric = mean_difference(ArithmeticMean(), GeometricMean(), 0.5, self.p, self.q)
        self.assertAlmostEqual(geometric, 1.0 - math.exp(-bhattacharyya(self.p, self.q, 0.5)), delta=1e-8)
        harmonic = mean_difference(ArithmeticMean(), HarmonicMean(), 0.5, self.p, self.q)
        self.assertGreaterEqual(harmonic, geometric - 1e-9)
        self.assertGreater(geometric, 0.0)

    def test_registry(self):
        self.assertEqual(sorted(DIVERGENCES_DICT), ['bhattacharyya', 'hellinger', 'jeffreys', 'jsd', 'kl',
                                                    'kl*', 'kl-oracle', 'resistor'])


class TestBhattacharyya(unittest.TestCase):

    def test_gaussian_jensen_gap(self):
        spec = MvnSpec(1)
        first = MvnParam.ordinary([0.0], [[1.0]])
        second = MvnParam.ordinary([1.5], [[0.5]])
        for alpha in (0.2, 0.5, 0.7):
            value = bhattacharyya(MvnDensity(first), MvnDensity(second), alpha)
            self.assertAlmostEqual(value, spec.jensen_gap(first, second, alpha), delta=1e-9)

    def test_reverse_convention(self):
        p, q = _normal(0.0, 1.0), _normal(1.0, 3.0)
        self.assertAlmostEqual(bhattacharyya(p, q, 0.3, reverse=True), bhattacharyya(p, q, 0.7), delta=1e-12)
        self.assertEqual(bhattacharyya(p, p), 0.0)

    def test_disjoint(self):
        self.assertIsInstance(bhattacharyya(Uniform(0.0, 1.0), Uniform(2.0, 3.0)), InfiniteDivergence)

    def test_alpha_divergence(self):
        p, q = _normal(0.0, 1.0), _normal(1.0, 3.0)
        value = alpha_divergence(p, q, 0.4)
        expected = 1.0 - math.exp(-bhattacharyya(q, p, 0.4))
        self.assertAlmostEqual(value, expected, delta=1e-9)


class TestChernoff(unittest.TestCase):

    def test_equal_variances(self):
        result = chernoff_information(_normal(0.0, 1.0), _normal(1.0, 1.0))
        self.assertAlmostEqual(result.alpha_star, 0.5, delta=1e-6)
        self.assertAlmostEqual(result.value, 0.125, delta=1e-8)
        self.assertLess(result.gap, 1e-6)
        alpha_star, value = result
        self.assertEqual(value, result.value)

    def test_unequal_variances(self):
        result = chernoff_information(_normal(0.0, 1.0), _normal(0.0, 4.0))
        self.assertNotAlmostEqual(result.alpha_star, 0.5, delta=1e-3)
        self.assertLess(result.gap, 1e-6)
        self.assertGreaterEqual(result.value, bhattacharyya(_normal(0.0, 1.0), _normal(0.0, 4.0)) - 1e-10)

    def test_degenerate(self):
        self.assertRaises(DegenerateInputError, chernoff_information, _normal(0.0, 1.0), _normal(0.0, 1.0))


class TestGeometricReverseKL(unittest.TestCase):

    def test_matches_bhattacharyya_without_closed_forms(self):
        p, q = Exponential(1.0), Exponential(3.0)
        for alpha in (0.3, 0.5):
            mixture = m_mixture(p, q, GeometricMean(), alpha)
            self.assertIsNone(mixture.closed)
            value = js_symmetrization(REVERSE_KL, GeometricMean(), alpha, p, q)
            self.assertEqual(value.method, 'oracle')
            self.assertAlmostEqual(value, bhattacharyya(p, q, alpha), delta=1e-8)

    def test_matches_bhattacharyya_across_families(self):
        pairs = (
            (CauchyDensity(0.0, 1.0), _normal(0.5, 2.0)),
            (_normal(0.0, 1.0), CauchyDensity(1.0, 0.5)),
            (CauchyDensity(0.0, 0.3), _normal(-1.0, 0.5)),
            (CauchyDensity(-1.0, 1.0), _normal(1.0, 1.0)),
            (CauchyDensity(0.0, 1.0), CauchyDensity(1.0, 2.0)),
            (_normal(0.0, 1.0), _normal(1.0, 3.0)),
            (Exponential(0.5), Exponential(4.0)),
            (Poisson(2.0), Poisson(5.0)),
            (Categorical([0.2, 0.3, 0.5]), Categorical([0.6, 0.3, 0.1])),
            (Exponential(1.0), Exponential(2.5)),
        )
        for index, (p, q) in enumerate(pairs):
            alpha = (0.3, 0.5, 0.7)[index % 3]
            value = js_symmetrization(REVERSE_KL, GeometricMean(), alpha, p, q)
            expected = bhattacharyya(p, q, alpha)
            tolerance = max(1e-8, 3.0 * (error_of(value) + error_of(expected)))
            self.assertLessEqual(abs(value - expected), tolerance, 'pair %d' % index)
