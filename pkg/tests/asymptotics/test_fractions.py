import math
import unittest
from unittest import mock

import numpy as np
from parameterized import parameterized

from src.asymptotics.constants import alpha0, b_alpha, v_alpha
from src.asymptotics.context import AsymptoticContext
from src.asymptotics.fractions import (Branch, bias_components, k0_opt1, k0_opt2, k0_opt3, k0_opt_select,
                                       mse_asymptotic, round_fraction, solve_d1, threshold_exponent)
from src.error import DomainError, FractionBoundsError, NullBiasError, ParameterError, SignError
from src.sampling.models import NEG_INF

LARGE_GAMMA = AsymptoticContext(gamma=2.0, rho=-1.0, c=1.0, alpha=1.0)


def integer_argmin(function, low, high):
    candidates = np.arange(low, high + 1)
    return int(candidates[np.argmin([function(k0) for k0 in candidates])])


class TestAsymptoticMse(unittest.TestCase):

    def test_hand_value(self):
        ctx = AsymptoticContext(gamma=1.0, rho=-2.0, c=None, alpha=1.0)
        self.assertAlmostEqual(mse_asymptotic(ctx, 100, 1000, 1e6), 0.01390625, places=14)

    def test_remainder_regime_uses_both_bias_terms(self):
        k_term, n_term = bias_components(LARGE_GAMMA, 1000, 1e5, 1e6)
        expected = 4.0 * 1.25 / 1000 + (k_term - n_term) ** 2
        self.assertAlmostEqual(mse_asymptotic(LARGE_GAMMA, 1000, 1e5, 1e6), expected, places=14)

    def test_log_term_only_at_boundary(self):
        boundary = AsymptoticContext(gamma=1.0, rho=-1.0, c=1.0, alpha=1.0)
        plain = mse_asymptotic(boundary, 100, 1000, 1e6)
        self.assertNotEqual(mse_asymptotic(boundary, 100, 1000, 1e6, include_log_term=True), plain)
        inside = AsymptoticContext(gamma=1.0, rho=-2.0, c=1.0, alpha=1.0)
        self.assertEqual(mse_asymptotic(inside, 100, 1000, 1e6, include_log_term=True),
                         mse_asymptotic(inside, 100, 1000, 1e6))

    def test_remainder_regime_needs_c(self):
        with self.assertRaises(ParameterError):
            mse_asymptotic(AsymptoticContext(gamma=2.0, rho=-1.0, c=None, alpha=1.0), 100, 1000, 1e6)

    @parameterized.expand([(0, 10, 100), (10, 10, 100), (5, 100, 100)])
    def test_fraction_domain(self, k0, k, n):
        with self.assertRaises(DomainError):
            mse_asymptotic(LARGE_GAMMA, k0, k, n)


class TestOptimalFractionFromK(unittest.TestCase):

    def test_hand_value(self):
        ctx = AsymptoticContext(gamma=1.0, rho=-2.0, c=None, alpha=1.0)
        self.assertAlmostEqual(k0_opt1(ctx, 1000), 164.414, delta=1e-3)
        self.assertLessEqual(abs(round_fraction(k0_opt1(ctx, 1000), 1000) - 165), 1)

    def test_scaling_in_k(self):
        ctx = AsymptoticContext(gamma=1.0, rho=NEG_INF, c=None, alpha=1.0)
        self.assertAlmostEqual(k0_opt1(ctx, 8000) / k0_opt1(ctx, 1000), 4.0, places=10)

    def test_minimizes_grid_mse(self):
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 20:
            gamma = rng.uniform(0.2, 2.0)
            ctx = AsymptoticContext(gamma=gamma, rho=rng.uniform(-3.0, -gamma), c=None, alpha=rng.uniform(1.0, 3.0))
            k = int(rng.integers(200, 5000))
            if abs(b_alpha(ctx.alpha, gamma)) < 0.05:
                continue
            optimum = k0_opt1(ctx, k)
            if not 3 <= optimum <= k - 3:
                continue
            best = integer_argmin(lambda k0: mse_asymptotic(ctx, k0, k, 10 * k), 1, k - 1)
            self.assertLessEqual(abs(best - optimum), 1.0, msg=str(ctx))
            checked += 1

    def test_null_bias(self):
        with mock.patch('src.asymptotics.fractions.b_alpha', return_value=0.0):
            with self.assertRaises(NullBiasError):
                k0_opt1(AsymptoticContext(gamma=1.0, rho=-2.0, c=None, alpha=1.5), 1000)


class TestOptimalFractionFromN(unittest.TestCase):

    def test_hand_value(self):
        self.assertAlmostEqual(k0_opt2(LARGE_GAMMA, 1e6), 16441.4, delta=0.1)

    def test_minimizes_remainder_mse(self):
        remainder = 1.0 * 2.0 * b_alpha(1.0, 1.0) / (2.0 - 1.0)

        def mse(k0):
            return 4.0 * v_alpha(1.0) / k0 + (remainder * k0 / 1e6) ** 2

        self.assertLessEqual(abs(integer_argmin(mse, 15000, 18000) - k0_opt2(LARGE_GAMMA, 1e6)), 1.0)

    @parameterized.expand([
        (AsymptoticContext(gamma=2.0, rho=-1.0, c=None, alpha=1.0),),
        (AsymptoticContext(gamma=2.0, rho=-1.0, c=0.0, alpha=1.0),),
        (AsymptoticContext(gamma=1.0, rho=-1.0, c=1.0, alpha=1.0),),
        (AsymptoticContext(gamma=1.0, rho=NEG_INF, c=None, alpha=1.0),),
    ])
    def test_parameters(self, ctx):
        with self.assertRaises(ParameterError):
            k0_opt2(ctx, 1e6)


class TestCancellingFraction(unittest.TestCase):

    def test_hand_value(self):
        self.assertAlmostEqual(k0_opt3(LARGE_GAMMA, 1e5, 1e6), 16875.0, delta=1e-6)

    def test_bias_terms_cancel(self):
        k0 = k0_opt3(LARGE_GAMMA, 1e5, 1e6)
        k_term, n_term = bias_components(LARGE_GAMMA, k0, 1e5, 1e6)
        self.assertLessEqual(abs(k_term - n_term), 1e-12 * abs(k_term))

    def test_sign(self):
        with self.assertRaises(SignError):
            k0_opt3(AsymptoticContext(gamma=2.0, rho=-1.0, c=-1.0, alpha=1.0), 1e5, 1e6)

    def test_regime(self):
        with self.assertRaises(ParameterError):
            k0_opt3(AsymptoticContext(gamma=0.5, rho=-1.0, c=1.0, alpha=1.0), 1e5, 1e6)


class TestBalancedFraction(unittest.TestCase):

    def test_residual(self):
        for D in (0.1, 1.0, 10.0):
            d1 = solve_d1(LARGE_GAMMA, D)
            gamma, rho = 2.0, -1.0
            k_bias = b_alpha(1.0, gamma)
            remainder = 2.0 * b_alpha(1.0, 1.0)
            value = (2 * gamma * k_bias ** 2 * D ** (-2 * gamma) * d1 ** (2 * gamma + 1)
                     + 2 * (rho - gamma) * k_bias * remainder * D ** (-gamma) * d1 ** (gamma - rho + 1)
                     - 2 * rho * remainder ** 2 * d1 ** (1 - 2 * rho))
            target = gamma ** 2 * v_alpha(1.0)
            self.assertLessEqual(abs(value - target), 1e-10 * target)

    def test_closed_form_without_k_bias(self):
        alpha = alpha0(2.0)
        ctx = AsymptoticContext(gamma=2.0, rho=-1.0, c=1.0, alpha=alpha)
        remainder = 2.0 * b_alpha(alpha, 1.0)
        expected = (4.0 * v_alpha(alpha) / (2.0 * remainder ** 2)) ** (1.0 / 3.0)
        self.assertAlmostEqual(solve_d1(ctx, 1.0) / expected, 1.0, places=9)

    def test_stationary_point_of_mse(self):
        n, D = 1e8, 1.0
        k = D * n ** threshold_exponent(LARGE_GAMMA)
        k0 = solve_d1(LARGE_GAMMA, D) * n ** (2.0 / 3.0)
        step = 1e-4 * k0
        slope = (mse_asymptotic(LARGE_GAMMA, k0 + step, k, n) - mse_asymptotic(LARGE_GAMMA, k0 - step, k, n)) / (2 * step)
        self.assertLessEqual(abs(slope) * k0 / mse_asymptotic(LARGE_GAMMA, k0, k, n), 1e-6)

    def test_domain(self):
        with self.assertRaises(DomainError):
            solve_d1(LARGE_GAMMA, 0.0)
        with self.assertRaises(ParameterError):
            solve_d1(AsymptoticContext(gamma=0.5, rho=-1.0, c=1.0, alpha=1.0), 1.0)


class TestFractionSelection(unittest.TestCase):

    def test_k_dominated_models(self):
        burr = AsymptoticContext(gamma=0.5, rho=-1.0, c=0.5, alpha=1.0)
        pareto = AsymptoticContext(gamma=0.5, rho=NEG_INF, c=None, alpha=1.0)
        for ctx in (burr, pareto):
            choice = k0_opt_select(ctx, 500, 1000)
            self.assertEqual(choice.branch, Branch.OPT1)
            self.assertEqual(choice.value, k0_opt1(ctx, 500))
            self.assertIsNone(choice.ratio)

    def test_small_k(self):
        n = 1e12
        choice = k0_opt_select(LARGE_GAMMA, 1e-3 * n ** threshold_exponent(LARGE_GAMMA), n)
        self.assertEqual(choice.branch, Branch.OPT1)

    def test_large_k(self):
        n = 1e18
        self.assertEqual(k0_opt_select(LARGE_GAMMA, n ** 0.9, n).branch, Branch.OPT3)
        negative = AsymptoticContext(gamma=2.0, rho=-1.0, c=-1.0, alpha=1.0)
        self.assertEqual(k0_opt_select(negative, n ** 0.9, n).branch, Branch.OPT2)

    def test_balanced(self):
        n = 1e8
        choice = k0_opt_select(LARGE_GAMMA, n ** threshold_exponent(LARGE_GAMMA), n)
        self.assertEqual(choice.branch, Branch.BALANCED)
        self.assertAlmostEqual(choice.value / (solve_d1(LARGE_GAMMA, choice.ratio) * n ** (2.0 / 3.0)), 1.0, places=12)

    def test_domain(self):
        with self.assertRaises(DomainError):
            k0_opt_select(LARGE_GAMMA, 1000, 1000)


class TestRoundFraction(unittest.TestCase):

    @parameterized.expand([
        (164.4, 1000, 164),
        (164.5, 1000, 165),
        (1.2, 100, 2),
        (500.0, 100, 99),
        (2.0, 3, 2),
    ])
    def test_rounding(self, value, k, expected):
        self.assertEqual(round_fraction(value, k), expected)

    def test_bounds(self):
        with self.assertRaises(FractionBoundsError):
            round_fraction(1.0, 2)
        with self.assertRaises(DomainError):
            round_fraction(math.inf, 100)
