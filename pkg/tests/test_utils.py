import unittest

import numpy as np

from gjsd.exceptions import DomainError, PositiveDefiniteError
from gjsd.utils import capitalized, check_alpha, check_positive, lerp, symmetrized


class TestUtils(unittest.TestCase):

    def test_check_alpha(self):
        self.assertEqual(check_alpha(0), 0.0)
        self.assertEqual(check_alpha(1), 1.0)
        self.assertEqual(check_alpha(0.25), 0.25)
        self.assertRaises(DomainError, check_alpha, -0.1)
        self.assertRaises(DomainError, check_alpha, 1.5)
        self.assertRaises(DomainError, check_alpha, float('nan'))
        self.assertRaises(DomainError, check_alpha, 0.0, True)
        self.assertRaises(DomainError, check_alpha, 1.0, True)

    def test_check_positive(self):
        self.assertEqual(check_positive(2, 'x'), 2.0)
        self.assertRaises(DomainError, check_positive, 0.0, 'x')
        self.assertRaises(DomainError, check_positive, float('inf'), 'x')
        self.assertRaises(DomainError, check_positive, 1e-13, 'x', 1e-12)

    def test_lerp(self):
        a = np.array([1.0, 2.0])
        b = np.array([3.0, 6.0])
        self.assertIs(lerp(a, b, 0.0), a)
        self.assertIs(lerp(a, b, 1.0), b)
        np.testing.assert_allclose(lerp(a, b, 0.5), [2.0, 4.0])

    def test_symmetrized(self):
        matrix = symmetrized([[2.0, 1.0], [1.0 + 1e-10, 3.0]])
        np.testing.assert_array_equal(matrix, matrix.T)
        self.assertRaises(PositiveDefiniteError, symmetrized, [[1.0, 0.0], [1.0, 1.0]])
        self.assertRaises(PositiveDefiniteError, symmetrized, [[1.0, 2.0, 3.0]])
        self.assertRaises(PositiveDefiniteError, symmetrized, [[1.0, float('nan')], [0.0, 1.0]])

    def test_capitalized(self):
        self.assertEqual(capitalized('quasi-arithmetic'), 'Quasi arithmetic')
        self.assertEqual(capitalized('right-bregman'), 'Right bregman')
        self.assertEqual(capitalized('kl'), 'Kl')
