import unittest

from src.error import DomainError
from src.estimators.estimate import Estimate, Method
from src.inference.intervals import ci_fraga_alves


class TestEstimate(unittest.TestCase):

    def test_new_family_needs_alpha_and_k0(self):
        Estimate(value=1.0, method=Method.NEW_FAMILY, k=100, alpha=1.0, k0=10)
        with self.assertRaises(DomainError):
            Estimate(value=1.0, method=Method.NEW_FAMILY, k=100, k0=10)
        with self.assertRaises(DomainError):
            Estimate(value=1.0, method=Method.NEW_FAMILY, k=100, alpha=0.9, k0=10)
        with self.assertRaises(DomainError):
            Estimate(value=1.0, method=Method.FRAGA_ALVES, k=100)

    def test_hill_needs_no_k0(self):
        estimate = Estimate(value=0.7, method=Method.HILL, k=100)
        self.assertIsNone(estimate.k0)
        self.assertIsNone(estimate.ci)

    def test_with_interval(self):
        estimate = Estimate(value=1.0, method=Method.FRAGA_ALVES, k=100, k0=25)
        ci = ci_fraga_alves(1.0, 25, 0.9)
        attached = estimate.with_interval(ci)
        self.assertIs(attached.ci, ci)
        self.assertIsNone(estimate.ci)
        self.assertEqual(attached.value, estimate.value)
