import math

from django.test import SimpleTestCase

from relgas import hightemp, oracle
from relgas.exceptions import DomainError, OutOfDomainError
from relgas.hightemp import HFKind, ReducedState
from relgas.series import DEGRADED, SeriesConfig, Statistics

FERMION = Statistics.FERMION
BOSON = Statistics.BOSON
PI2 = math.pi ** 2
ZETA3 = 1.2020569031595942


def fermion(lam, nu):
    return ReducedState(lam, nu, FERMION)


def boson(lam, nu):
    return ReducedState(lam, nu, BOSON)


def relative(a, b):
    return abs(a - b) / max(abs(a), abs(b))


class ReducedStateTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(DomainError):
            ReducedState(-0.1, 0.0, FERMION)
        with self.assertRaises(DomainError):
            ReducedState(float("nan"), 0.0, FERMION)
        with self.assertRaisesMessage(DomainError, "mu exceeds mass for boson"):
            boson(0.5, 0.6)

    def test_ratio_is_zero_when_massless(self):
        state = fermion(0.0, 0.7)
        self.assertTrue(state.massless)
        self.assertEqual(state.r, 0.0)
        self.assertEqual(fermion(0.5, 0.25).r, 0.5)

    def test_high_t_guard(self):
        with self.assertRaises(OutOfDomainError):
            fermion(2.5, 0.9).check_high_t()
        with self.assertRaises(OutOfDomainError):
            boson(6.0, 0.5).check_high_t()
        with self.assertRaises(DomainError):
            boson(0.5, -0.9).check_high_t()
        fermion(2.0, -1.0).check_high_t()


class HFPolyTests(SimpleTestCase):
    def test_documented_values(self):
        self.assertEqual(hightemp.hf_poly(HFKind.PRESSURE_EVEN, 1, 0.0), 1.0)
        self.assertAlmostEqual(hightemp.hf_poly("(-k,-k-2;1/2)", 1, 0.5), 2.5, places=14)
        for r in (0.0, 0.3, 2.0):
            self.assertAlmostEqual(hightemp.hf_poly(HFKind.PRESSURE_ODD, 1, r), 1.0, places=15)

    def test_degree(self):
        self.assertEqual(len(hightemp.HFPoly(HFKind.PRESSURE_EVEN, 3).coefficients), 4)
        self.assertEqual(len(hightemp.HFPoly(HFKind.SCALAR_ODD, 3).coefficients), 3)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            hightemp.hf_poly("(k,k;1)", 1, 0.1)
        with self.assertRaises(DomainError):
            hightemp.HFPoly(HFKind.DENSITY_EVEN, 0)

    def test_scaled_terms_match_evaluation(self):
        poly = hightemp.HFPoly(HFKind.SCALAR_EVEN, 3)
        lam, nu = 0.7, 0.3
        scaled = math.fsum(c * nu ** a * lam ** b for c, a, b in poly.scaled_terms(6))
        self.assertAlmostEqual(scaled, lam ** 6 * poly.evaluate(nu / lam), places=13)


class GPolyTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            hightemp.GPoly("x", 1)
        with self.assertRaises(DomainError):
            hightemp.GPoly("n", 0)

    def test_blocks_are_finite_polynomials(self):
        for kind in ("p", "n", "sc", "s"):
            block = hightemp.GPoly(kind, 2).block()
            self.assertGreater(len(block), 0)
            self.assertTrue(all(a >= 0 for a, _, _, _ in block.items()))
            self.assertTrue(math.isfinite(hightemp.GPoly(kind, 2).evaluate(0.8, 0.4)))


class TermBlockTests(SimpleTestCase):
    def setUp(self):
        # 3 ν² λ + λ² ln λ
        self.block = hightemp.TermBlock.from_terms({(2, 1, 0): 3.0, (0, 2, 1): 1.0})

    def test_evaluate(self):
        lam, nu = 0.6, 0.4
        self.assertAlmostEqual(self.block.evaluate(lam, nu), 3 * nu ** 2 * lam + lam ** 2 * math.log(lam), places=15)

    def test_derivatives(self):
        lam, nu = 0.6, 0.4
        self.assertAlmostEqual(self.block.d_nu().evaluate(lam, nu), 6 * nu * lam, places=15)
        self.assertAlmostEqual(
            self.block.d_lam().evaluate(lam, nu), 3 * nu ** 2 + 2 * lam * math.log(lam) + lam, places=15
        )
        self.assertAlmostEqual(
            self.block.entropy().evaluate(lam, nu), 3 * nu ** 2 * lam + 2 * lam ** 2 * math.log(lam) - lam ** 2, places=15
        )

    def test_massless_keeps_pure_nu_powers(self):
        block = hightemp.TermBlock.from_terms({(2, 0, 0): 1.0, (0, 2, 1): 1.0, (1, 3, 0): 5.0})
        self.assertEqual(block.evaluate(0.0, 2.0), 4.0)

    def test_zero_coefficients_dropped(self):
        self.assertEqual(len(hightemp.TermBlock.from_terms({(1, 1, 0): 0.0})), 0)
        self.assertEqual(hightemp.TermBlock.from_terms({}).evaluate(0.3, 0.1), 0.0)


class FermionSeriesTests(SimpleTestCase):
    def test_massless_constants(self):
        state = fermion(0.0, 0.0)
        self.assertAlmostEqual(hightemp.pressure_ht_fermion(state).value, 7 * PI2 / 720, places=15)
        self.assertAlmostEqual(hightemp.pressure_ht_fermion_even(state).value, 7 * PI2 / 720, places=15)
        self.assertAlmostEqual(hightemp.density_ht_fermion(state).value, 3 * ZETA3 / (4 * PI2), places=14)
        self.assertAlmostEqual(hightemp.entropy_ht_fermion(state).value, 7 * PI2 / 180, places=14)
        self.assertAlmostEqual(hightemp.scalar_density_ht_fermion(state).value, 0.0, places=15)

    def test_massless_chemical_potential(self):
        nu = 1.2
        even = 7 * PI2 / 720 + nu ** 2 / 24 + nu ** 4 / (48 * PI2)
        self.assertAlmostEqual(hightemp.pressure_ht_fermion_even(fermion(0.0, nu)).value, even, places=14)
        self.assertAlmostEqual(hightemp.scalar_density_ht_fermion(fermion(0.0, nu)).value, 0.0, places=15)

    def test_odd_parts_vanish_at_zero_chemical_potential(self):
        state = fermion(0.7, 0.0)
        self.assertEqual(hightemp.pressure_ht_fermion_odd(state).value, 0.0)
        self.assertEqual(hightemp.density_ht_fermion(state, part="odd").value, 0.0)
        self.assertEqual(hightemp.entropy_ht_fermion(state, part="odd").value, 0.0)

    def test_against_quadrature(self):
        for lam, nu in ((0.5, 0.2), (0.05, -1.0), (1.2, 0.8), (1.0, -0.5)):
            state = fermion(lam, nu)
            self.assertLess(
                relative(hightemp.pressure_ht_fermion(state).value, oracle.pressure_quad(lam, nu, FERMION).value), 1e-10
            )
            self.assertLess(
                relative(hightemp.density_ht_fermion(state).value, oracle.number_quad(lam, nu, FERMION).value), 1e-9
            )
            self.assertLess(
                relative(hightemp.scalar_density_ht_fermion(state).value, oracle.scalar_quad(lam, nu, FERMION).value),
                1e-9,
            )

    def test_derivatives_by_finite_differences(self):
        lam, nu, h = 0.4, 0.2, 1e-5

        def pressure(l, n):
            return hightemp.pressure_ht_fermion(fermion(l, n)).value

        dn = (pressure(lam, nu + h) - pressure(lam, nu - h)) / (2 * h)
        dl = (pressure(lam + h, nu) - pressure(lam - h, nu)) / (2 * h)
        self.assertAlmostEqual(hightemp.density_ht_fermion(fermion(lam, nu)).value, dn, delta=1e-8)
        self.assertAlmostEqual(hightemp.scalar_density_ht_fermion(fermion(lam, nu)).value, -dl, delta=1e-8)

    def test_scalar_density_small_mass_limit(self):
        lam = 1e-4
        self.assertAlmostEqual(hightemp.scalar_density_ht_fermion(fermion(lam, 0.0)).value / lam, 1 / 24, places=7)

    def test_entropy_identity(self):
        lam, nu = 0.5, 0.3
        state = fermion(lam, nu)
        p = hightemp.pressure_ht_fermion(state).value
        n = hightemp.density_ht_fermion(state).value
        sc = hightemp.scalar_density_ht_fermion(state).value
        s = hightemp.entropy_ht_fermion(state).value
        self.assertLess(abs(s - (4 * p + lam * sc - nu * n)), 1e-11)

    def test_closed_forms_match_differentiated_pressure(self):
        for lam, nu in ((0.3, 0.1), (1.2, -0.8), (1.5, 0.5)):
            state = fermion(lam, nu)
            for quantity in ("density", "scalar", "entropy"):
                closed = hightemp.evaluate_series(state, quantity).value
                derived = hightemp.evaluate_series(state, quantity, derived=True).value
                self.assertLess(relative(closed, derived), 1e-11, msg=f"{quantity} at ({lam}, {nu})")

    def test_out_of_domain(self):
        with self.assertRaises(OutOfDomainError):
            hightemp.pressure_ht_fermion(fermion(2.5, 0.9))
        with self.assertRaises(OutOfDomainError):
            hightemp.density_ht_fermion(fermion(0.0, -3.2))

    def test_wrong_statistics(self):
        with self.assertRaises(DomainError):
            hightemp.pressure_ht_fermion(boson(0.5, 0.0))
        with self.assertRaises(DomainError):
            hightemp.entropy_ht_boson(fermion(0.5, 0.0))

    def test_truncation_is_flagged(self):
        with self.assertLogs("relgas.hightemp", level="WARNING"):
            outcome = hightemp.pressure_ht_fermion(fermion(2.0, 0.5), SeriesConfig(max_terms=2))
        self.assertIn(DEGRADED, outcome.flags)
        self.assertEqual(outcome.terms_used, 2)

    def test_error_estimate_shrinks_with_more_terms(self):
        state = fermion(1.5, 0.5)
        errors = [hightemp.pressure_ht_fermion(state, SeriesConfig(max_terms=n)).error_estimate for n in (2, 4, 8)]
        self.assertGreater(errors[0], errors[1])
        self.assertGreater(errors[1], errors[2])

    def test_unknown_quantity_or_part(self):
        with self.assertRaises(ValueError):
            hightemp.evaluate_series(fermion(0.3, 0.0), "energy")
        with self.assertRaises(ValueError):
            hightemp.evaluate_series(fermion(0.3, 0.0), "pressure", part="both")


class BosonSeriesTests(SimpleTestCase):
    def test_massless_constants(self):
        state = boson(0.0, 0.0)
        self.assertAlmostEqual(hightemp.pressure_ht_boson(state).value, PI2 / 90, places=15)
        self.assertAlmostEqual(hightemp.density_ht_boson(state).value, ZETA3 / PI2, places=14)
        self.assertAlmostEqual(hightemp.entropy_ht_boson(state).value, 4 * PI2 / 90, places=14)

    def test_against_quadrature(self):
        for lam, nu in ((0.5, 0.0), (0.5, 0.3), (1.0, -0.9), (2.0, 1.8), (0.1, 0.025)):
            state = boson(lam, nu)
            self.assertLess(
                relative(hightemp.pressure_ht_boson(state).value, oracle.pressure_quad(lam, nu, BOSON).value), 1e-9
            )
            self.assertLess(
                relative(hightemp.density_ht_boson(state).value, oracle.number_quad(lam, nu, BOSON).value), 1e-9
            )
            self.assertLess(
                relative(hightemp.scalar_density_ht_boson(state).value, oracle.scalar_quad(lam, nu, BOSON).value), 1e-9
            )

    def test_arcsin_term_is_smooth_through_zero(self):
        lam = 0.8
        at_zero = hightemp.pressure_ht_boson(boson(lam, 0.0)).value
        near_zero = hightemp.pressure_ht_boson(boson(lam, 1e-9)).value
        self.assertAlmostEqual(at_zero, near_zero, places=12)

    def test_entropy_identity(self):
        lam, nu = 1.0, 0.6
        state = boson(lam, nu)
        p = hightemp.pressure_ht_boson(state).value
        n = hightemp.density_ht_boson(state).value
        sc = hightemp.scalar_density_ht_boson(state).value
        s = hightemp.entropy_ht_boson(state).value
        self.assertLess(abs(s - (4 * p + lam * sc - nu * n)), 1e-11)

    def test_parity(self):
        lam, nu = 1.0, 0.4
        for quantity in hightemp.QUANTITIES:
            even = [hightemp.evaluate_series(boson(lam, x), quantity, part="even").value for x in (nu, -nu)]
            odd = [hightemp.evaluate_series(boson(lam, x), quantity, part="odd").value for x in (nu, -nu)]
            self.assertAlmostEqual(even[0], even[1], places=14)
            self.assertAlmostEqual(odd[0], -odd[1], places=14)

    def test_chemical_potential_beyond_mass(self):
        with self.assertRaises(DomainError):
            hightemp.pressure_ht_boson(boson(0.5, -0.8))


class PolylogFormTests(SimpleTestCase):
    def test_massless_fermion(self):
        outcome = hightemp.pressure_polylog_form(fermion(0.0, 0.0))
        self.assertEqual(outcome.method, "polylog")
        self.assertAlmostEqual(outcome.value, 7 * PI2 / 720, places=15)

    def test_massless_boson(self):
        self.assertAlmostEqual(hightemp.pressure_polylog_form(boson(0.0, 0.0)).value, PI2 / 90, places=15)

    def test_matches_high_t_series(self):
        for lam, nu in ((0.3, 0.1), (1.0, -0.5), (0.8, 1.0)):
            form = hightemp.pressure_polylog_form(fermion(lam, nu)).value
            series = hightemp.pressure_ht_fermion(fermion(lam, nu)).value
            self.assertLess(relative(form, series), 1e-10)

    def test_boson_form_against_quadrature(self):
        for lam, nu in ((0.3, -1.0), (0.5, -2.0)):
            form = hightemp.pressure_polylog_form(boson(lam, nu)).value
            self.assertLess(relative(form, oracle.pressure_quad(lam, nu, BOSON).value), 1e-9)

    def test_domain(self):
        with self.assertRaises(OutOfDomainError):
            hightemp.pressure_polylog_form(fermion(2.0, 1.5))
        with self.assertRaises(OutOfDomainError):
            hightemp.pressure_polylog_form(boson(0.3, -0.1))


class KlajnFormTests(SimpleTestCase):
    def test_matches_even_part(self):
        for lam, nu in ((0.5, 0.2), (1.0, 0.0), (1.5, -0.5)):
            state = fermion(lam, nu)
            even = hightemp.pressure_ht_fermion_even(state).value
            self.assertAlmostEqual(hightemp.klajn_even_fermion(state), even, delta=1e-12)

    def test_massless_constant(self):
        self.assertAlmostEqual(hightemp.klajn_even_fermion(fermion(0.0, 0.0)), 7 * PI2 / 720, places=15)
