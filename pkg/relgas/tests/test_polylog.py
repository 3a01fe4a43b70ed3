import math

import mpmath
from django.test import SimpleTestCase

from relgas import polylog
from relgas.exceptions import DomainError, SeriesDivergenceError
from relgas.oracle import fermi_dirac_integral
from relgas.series import ASYMPTOTIC, DEGRADED, SeriesConfig


def reference(s, x):
    with mpmath.workdps(30):
        return float(mpmath.re(mpmath.polylog(s, x)))


def dli_ds_reference(s, x, terms=400):
    """-sum_k ln(k) x^k / k^s, the s-derivative of the defining series."""
    return -math.fsum(math.log(k) * x ** k / k ** s for k in range(2, terms))


class DirectSeriesTests(SimpleTestCase):
    def test_matches_mpmath(self):
        for s, x in ((2, 0.5), (3.5, -0.8), (-2, 0.3), (0.5, 0.85)):
            self.assertAlmostEqual(polylog.li_direct(s, x) / reference(s, x), 1.0, places=12)

    def test_diverges_on_unit_circle(self):
        with self.assertRaises(SeriesDivergenceError):
            polylog.li_direct(2, 1.0)

    def test_zero_argument(self):
        self.assertEqual(polylog.li_direct(2, 0.0), 0.0)

    def test_unconverged_sum_is_refused(self):
        with self.assertRaises(SeriesDivergenceError):
            polylog.li_direct(-1, 0.999, SeriesConfig(max_terms=1000))


def li_minus_three(x):
    """Li_-3(x) = x(1 + 4x + x²)/(1 - x)^4."""
    return x * (1.0 + 4.0 * x + x * x) / (1.0 - x) ** 4


class NegativeIntegerOrderTests(SimpleTestCase):
    def test_closed_form(self):
        for z in (-0.001, -0.5, -3.0):
            x = math.exp(z)
            self.assertAlmostEqual(polylog.li_neg_integer_exp(0, z) / (x / -math.expm1(z)), 1.0, places=13)
            self.assertAlmostEqual(polylog.li_neg_integer_exp(1, z) / (x / math.expm1(z) ** 2), 1.0, places=13)
            self.assertAlmostEqual(polylog.li_neg_integer_exp(3, z) / li_minus_three(x), 1.0, places=11)

    def test_dispatch_near_the_pole(self):
        z = -0.001
        outcome = polylog.polylog_exp(-1, z)
        self.assertEqual(outcome.method, "rational")
        self.assertAlmostEqual(outcome.value / (math.exp(z) / math.expm1(z) ** 2), 1.0, places=13)
        self.assertLess(outcome.error_estimate, 1e-13 * outcome.value)

    def test_inversion_for_negative_orders(self):
        for z in (2.0, 5.0):
            x = -math.exp(z)
            self.assertAlmostEqual(polylog.li_inversion(-1, z) / (x / (1.0 - x) ** 2), 1.0, places=12)
            self.assertAlmostEqual(polylog.li_inversion(-3, z) / li_minus_three(x), 1.0, places=11)
        self.assertEqual(polylog.polylog_exp(-3, 5.0, polylog.Sign.MINUS).method, "inversion")


class ExpansionTests(SimpleTestCase):
    def test_non_integer_order(self):
        for s in (1.5, 2.5, -0.5):
            for z in (-0.3, -1.2, -3.0):
                expected = polylog.li_direct(s, math.exp(z))
                self.assertAlmostEqual(polylog.li_exp_expansion(s, z) / expected, 1.0, places=11)

    def test_non_integer_order_refuses_integers(self):
        with self.assertRaises(DomainError):
            polylog.li_exp_expansion(2.0, -1.0)
        with self.assertRaises(DomainError):
            polylog.li_exp_expansion(2.5, 0.5)

    def test_integer_order(self):
        for n in (1, 2, 3, 5):
            for z in (-0.2, -1.1, -4.0):
                expected = polylog.li_direct(n, math.exp(z))
                self.assertAlmostEqual(polylog.li_exp_integer(n, z) / expected, 1.0, places=11)

    def test_dilog_near_one(self):
        # Li_2(e^z) -> π²/6 as z -> 0-
        self.assertAlmostEqual(polylog.li_exp_integer(2, -1e-12), math.pi ** 2 / 6, places=10)

    def test_minus_exp(self):
        for s in (0.5, 2.5, 4.0, -1.5):
            for z in (-1.7, -0.3):
                expected = polylog.li_direct(s, -math.exp(z))
                self.assertAlmostEqual(polylog.li_minus_exp(s, z) / expected, 1.0, places=11)

    def test_minus_exp_positive_argument(self):
        # Li_s(-e^z) = -F_(s-1)(z)
        for s in (0.5, 2.5, 4.0):
            for z in (1.2, 2.5):
                expected = -fermi_dirac_integral(s - 1.0, z)
                self.assertAlmostEqual(polylog.li_minus_exp(s, z) / expected, 1.0, places=10)

    def test_minus_exp_at_zero_is_minus_eta(self):
        self.assertAlmostEqual(polylog.li_minus_exp(1.0, 0.0), -math.log(2.0), places=15)
        self.assertAlmostEqual(polylog.li_minus_exp(2.0, 0.0), -math.pi ** 2 / 12, places=15)

    def test_minus_exp_integer(self):
        for n in (1, 2, 3, 4):
            for z in (-1.6, 0.4, 2.0):
                expected = reference(n, -math.exp(z))
                self.assertAlmostEqual(polylog.li_minus_exp_integer(n, z) / expected, 1.0, places=11)

    def test_radius_guard(self):
        with self.assertRaises(DomainError):
            polylog.li_minus_exp(2.5, math.pi)
        with self.assertRaises(DomainError):
            polylog.li_exp_integer(2, -7.0)


class NegativeEvenOrderTests(SimpleTestCase):
    def test_order_zero_closed_form(self):
        for z in (-0.5, -2.0, 1.0):
            x = math.exp(z)
            self.assertAlmostEqual(polylog.li_neg_even_exp(0, z) / (x / (1.0 - x)), 1.0, places=12)

    def test_against_direct(self):
        for m in (1, 2, 3):
            for z in (-0.4, -1.3, -3.0):
                expected = polylog.li_direct(-2 * m, math.exp(z))
                self.assertAlmostEqual(polylog.li_neg_even_exp(m, z) / expected, 1.0, places=10)

    def test_minus_exp(self):
        for m in (0, 1, 2):
            for z in (-1.3, 0.5, 2.0):
                expected = reference(-2 * m, -math.exp(z))
                self.assertAlmostEqual(polylog.li_neg_even_minus_exp(m, z), expected, places=11)

    def test_pole_refused(self):
        with self.assertRaises(DomainError):
            polylog.li_neg_even_exp(1, 0.0)

    def test_order_derivative(self):
        for m in (0, 1, 2):
            for z in (-0.7, -2.0):
                expected = dli_ds_reference(-2 * m, math.exp(z))
                self.assertAlmostEqual(polylog.dli_ds_neg_even_exp(m, z) / expected, 1.0, places=9)

    def test_order_derivative_minus_exp(self):
        for m in (0, 1, 2):
            for z in (-0.7, -2.0):
                expected = dli_ds_reference(-2 * m, -math.exp(z))
                self.assertAlmostEqual(polylog.dli_ds_neg_even_minus_exp(m, z), expected, places=10)


class LargeArgumentTests(SimpleTestCase):
    def test_inversion(self):
        for n in (0, 1, 2, 3, 4):
            for z in (1.0, 4.0, 12.0):
                expected = reference(n, -math.exp(z))
                self.assertAlmostEqual(polylog.li_inversion(n, z) / expected, 1.0, places=12)

    def test_asymptotic_integer_order_terminates(self):
        outcome = polylog.li_asymptotic(3, 30.0)
        self.assertAlmostEqual(outcome.value / reference(3, -math.exp(30.0)), 1.0, places=13)
        self.assertNotIn(ASYMPTOTIC, outcome.flags)

    def test_asymptotic_shortfall_is_flagged(self):
        with self.assertLogs("relgas.polylog", level="WARNING"):
            outcome = polylog.li_asymptotic(2.5, 3.0)
        self.assertIn(ASYMPTOTIC, outcome.flags)
        self.assertGreater(outcome.error_estimate, 0.0)

    def test_asymptotic_shortfall_is_covered_by_the_estimate(self):
        with self.assertLogs("relgas.polylog", level="WARNING"):
            outcome = polylog.li_asymptotic(2.5, 15.0)
        expected = -fermi_dirac_integral(1.5, 15.0)
        self.assertIn(ASYMPTOTIC, outcome.flags)
        self.assertLessEqual(abs(outcome.value - expected), outcome.error_estimate)
        self.assertLess(abs(outcome.value / expected - 1.0), 1e-8)


class DispatchTests(SimpleTestCase):
    def test_zeta_at_one(self):
        outcome = polylog.polylog_exp(2.0, 0.0)
        self.assertEqual(outcome.method, "zeta")
        self.assertAlmostEqual(outcome.value, math.pi ** 2 / 6, places=15)
        with self.assertRaises(SeriesDivergenceError):
            polylog.polylog_exp(1.0, 0.0)

    def test_complex_branch_refused(self):
        with self.assertRaises(DomainError):
            polylog.polylog_exp(2.0, 0.5)
        with self.assertRaises(DomainError):
            polylog.PolylogQuery(2.0, 0.5)

    def test_representation_choice(self):
        cases = [
            ((2.5, -3.0, polylog.Sign.PLUS), "direct"),
            ((2.0, -0.5, polylog.Sign.PLUS), "robinson-integer"),
            ((2.5, -0.5, polylog.Sign.PLUS), "robinson"),
            ((-2.0, -0.5, polylog.Sign.PLUS), "neg-even"),
            ((-1.0, -0.5, polylog.Sign.PLUS), "rational"),
            ((2.5, 0.5, polylog.Sign.MINUS), "wood"),
            ((3.0, 5.0, polylog.Sign.MINUS), "inversion"),
            ((2.5, 40.0, polylog.Sign.MINUS), "asymptotic"),
        ]
        for (s, z, sign), method in cases:
            self.assertEqual(polylog.polylog_exp(s, z, sign).method, method)

    def test_values_agree_with_mpmath(self):
        cfg = SeriesConfig(rtol=1e-15)
        for s, z, sign in ((2.5, -0.5, polylog.Sign.PLUS), (4.0, 2.0, polylog.Sign.MINUS), (4.0, 6.0, polylog.Sign.MINUS)):
            query = polylog.PolylogQuery(s, z, sign, cfg)
            expected = reference(s, sign.value * math.exp(z))
            self.assertAlmostEqual(query.evaluate().value / expected, 1.0, places=11)

    def test_degraded_asymptotic(self):
        with self.assertLogs("relgas.polylog", level="WARNING"):
            outcome = polylog.polylog_exp(2.5, 3.2, polylog.Sign.MINUS)
        self.assertIn(DEGRADED, outcome.flags)


class DerivativeIdentityTests(SimpleTestCase):
    def test_argument_derivative_lowers_the_order(self):
        h = 1e-5
        for s in (2, 3, 4):
            for x in (0.3, -0.3, 0.7, -0.7):
                slope = (polylog.li_direct(s, x + h) - polylog.li_direct(s, x - h)) / (2 * h)
                expected = polylog.li_direct(s - 1, x)
                self.assertAlmostEqual(x * slope / expected, 1.0, delta=1e-7, msg=(s, x))

    def test_exponent_derivative_lowers_the_order(self):
        h = 1e-4
        cases = [
            (2.5, -0.5, polylog.Sign.PLUS),
            (3.5, -2.0, polylog.Sign.PLUS),
            (2.5, 0.5, polylog.Sign.MINUS),
            (3.0, 2.0, polylog.Sign.MINUS),
            (2.5, -2.5, polylog.Sign.MINUS),
        ]
        for s, z, sign in cases:
            upper = polylog.polylog_exp(s, z + h, sign).value
            lower = polylog.polylog_exp(s, z - h, sign).value
            expected = polylog.polylog_exp(s - 1.0, z, sign).value
            self.assertAlmostEqual((upper - lower) / (2 * h) / expected, 1.0, delta=1e-7, msg=(s, z, sign))

    def test_minus_one_is_minus_eta(self):
        for s in (2.0, 2.5, 3.0, 4.0):
            outcome = polylog.polylog_exp(s, 0.0, polylog.Sign.MINUS)
            expected = -float(mpmath.altzeta(s))
            self.assertAlmostEqual(outcome.value / expected, 1.0, places=13, msg=s)

    def test_order_derivative_at_minus_one(self):
        value = polylog.dli_ds_neg_even_minus_exp(0, 0.0)
        self.assertEqual(value, -0.5 * math.log(0.5 * math.pi))
        self.assertAlmostEqual(value, -float(mpmath.diff(mpmath.altzeta, 0)), places=12)
