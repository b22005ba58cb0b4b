import unittest

from parameterized import parameterized

from src.error import DegenerateProbeError, DomainError
from src.sampling.models import NEG_INF, Burr, Frechet, Pareto
from src.sampling.second_order import SecondOrderTriple, a_numeric, true_params


class TestSecondOrderTriple(unittest.TestCase):

    def test_valid(self):
        triple = SecondOrderTriple(gamma=1.0, rho=-0.5, c=2.0)
        self.assertTrue(triple.has_finite_rho)
        self.assertFalse(SecondOrderTriple(gamma=1.0, rho=NEG_INF).has_finite_rho)

    @parameterized.expand([
        (0.0, -1.0, None),
        (1.0, 0.5, None),
        (1.0, NEG_INF, 1.0),
    ])
    def test_invalid(self, gamma, rho, c):
        with self.assertRaises(DomainError):
            SecondOrderTriple(gamma=gamma, rho=rho, c=c)


class TestNumericSecondOrder(unittest.TestCase):

    @parameterized.expand([(100.0,), (1e4,), (1e6,)])
    def test_pareto_has_no_second_order_term(self, t):
        fit = a_numeric(Pareto(2.0), t, 2.0, 5.0)
        self.assertLess(abs(fit.A_t), 1e-9)
        self.assertAlmostEqual(fit.a_t / (2.0 * t ** 2.0), 1.0, places=10)

    def test_burr_decay_rate(self):
        # |A| is regularly varying with index rho = -1
        ratio = a_numeric(Burr(2.0, 1.0), 1e4, 2.0, 5.0).A_t / a_numeric(Burr(2.0, 1.0), 1e3, 2.0, 5.0).A_t
        self.assertLess(abs(ratio - 0.1), 0.005)

    def test_frechet_decay_rate(self):
        model = Frechet(2.0)
        ratio = a_numeric(model, 1e5, 2.0, 5.0).A_t / a_numeric(model, 1e4, 2.0, 5.0).A_t
        self.assertLess(abs(ratio - 0.1), 0.005)

    def test_equal_probes_are_degenerate(self):
        with self.assertRaises(DegenerateProbeError):
            a_numeric(Burr(2.0, 1.0), 1e3, 3.0, 3.0)

    def test_probe_domain(self):
        with self.assertRaises(DomainError):
            a_numeric(Burr(2.0, 1.0), 5.0, 2.0, 3.0)
        with self.assertRaises(DomainError):
            a_numeric(Burr(2.0, 1.0), 1e3, 0.5, 3.0)


class TestTrueParams(unittest.TestCase):

    def test_burr(self):
        params = true_params(Burr(2.0, 1.0))
        self.assertEqual(params.gamma, 0.5)
        self.assertEqual(params.rho, -1.0)
        self.assertTrue(params.c_is_approximate)
        # U(t) = (t - 1)^{1/2} gives A(t) = 1 / (2 t)
        self.assertAlmostEqual(params.c, 0.5, delta=1e-3)

    def test_frechet(self):
        params = true_params(Frechet(1.0))
        self.assertEqual((params.gamma, params.rho), (1.0, -1.0))
        self.assertIsNotNone(params.c)

    def test_pareto(self):
        params = true_params(Pareto(2.0))
        self.assertEqual(params.gamma, 2.0)
        self.assertEqual(params.rho, NEG_INF)
        self.assertIsNone(params.c)
