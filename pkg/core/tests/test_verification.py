import math

from django.test import SimpleTestCase

from core import verification
from core.exceptions import DomainError


class RateReportTests(SimpleTestCase):
    def test_fit_slope(self):
        self.assertAlmostEqual(verification.fit_slope([10, 100, 1000], [1.0, 0.1, 0.01]), -1.0)
        with self.assertRaises(DomainError):
            verification.fit_slope([10], [1.0])
        with self.assertRaises(DomainError):
            verification.fit_slope([10, 20], [1.0, 0.0])

    def test_exact_series_passes_without_fit(self):
        report = verification.rate_report('exact', [10, 20, 40], [0.0, 0.0, 0.0])
        self.assertTrue(report.passed)
        self.assertIsNone(report.fitted_slope)
        self.assertEqual(report.notes, ['exact: error identically zero'])

    def test_slope_band(self):
        good = verification.rate_report('good', [100, 200, 400], [1e-2, 5e-3, 2.5e-3])
        self.assertTrue(good.passed)
        self.assertAlmostEqual(good.fitted_slope, -1.0)
        slow = verification.rate_report('slow', [100, 400], [1e-2, 5e-3])
        self.assertFalse(slow.passed)
        bound = verification.rate_report('bound', [100, 400], [1e-2, 1e-4], one_sided=True)
        self.assertTrue(bound.passed)

    def test_non_monotone_steps(self):
        report = verification.rate_report('noisy', [10, 20, 40, 80, 160], [1.0, 1.2, 0.3, 0.35, 0.06])
        self.assertFalse(report.passed)
        self.assertIn('2 non-monotone step(s)', report.notes)

    def test_n_values_must_increase(self):
        with self.assertRaises(DomainError):
            verification.rate_report('bad', [20, 10], [1.0, 0.5])


class ErrorSequenceTests(SimpleTestCase):
    def test_mod_phi_error_decays(self):
        self.assertEqual(verification.mod_phi_error(1, 50, 1, 0), 0.0)
        for i in (1, 2, 3):
            small = verification.mod_phi_error(i, 100, 1, 0.3)
            large = verification.mod_phi_error(i, 400, 1, 0.3)
            self.assertLess(large, small)
            self.assertLess(large * 400, small * 100 * 2)

    def test_llt_rows(self):
        k, pmf, gauss = verification.llt_rows(2, 100, 1)
        self.assertEqual(len(k), 100)
        self.assertEqual((int(k[0]), int(k[-1])), (1, 100))
        self.assertAlmostEqual(float(pmf.sum()), 1.0, places=12)
        self.assertAlmostEqual(float(gauss.sum()), 1.0, places=3)
        with self.assertRaises(DomainError):
            verification.llt_rows(1, 0, 1)
        self.assertLess(verification.llt_sup_error(2, 400, 1), verification.llt_sup_error(2, 100, 1))

    def test_ldp_error(self):
        self.assertLess(verification.ldp_error(1, 400, 1, 0.5), 0.05)
        with self.assertRaises(DomainError):
            verification.ldp_error(3, 10, 2, 0)

    def test_mod_poisson_error(self):
        self.assertEqual(verification.mod_poisson_error(100, 0), 0.0)
        self.assertLess(verification.mod_poisson_error(800, 0.5), verification.mod_poisson_error(100, 0.5))

    def test_moment_growth(self):
        for i in (1, 2, 3):
            report = verification.moment_growth_check(i, 2, [50, 100, 200])
            self.assertTrue(report.passed, report)


class ContourTests(SimpleTestCase):
    def test_touchard(self):
        for z in ('1', '1/2', '-4'):
            self.assertLess(verification.contour_check('touchard', 20, z), 1e-10)

    def test_family_three(self):
        self.assertLess(verification.contour_check('g3', 10, '3/10', theta=2), 1e-10)
        self.assertLess(verification.contour_check('g3', 10, '0', theta=2), 1e-10)
        self.assertLess(verification.contour_check('g3', 10, '-1/5', theta=2), 1e-10)

    def test_complex_branch_point_inside_circle(self):
        # theta n = 3/2 and 5/2 put (1 - e^-z)^theta's branch point at distance ~3.49 inside the circle.
        for theta in ('3/20', '1/4'):
            with self.assertRaises(DomainError):
                verification.contour_check('g3', 10, '-1/5', theta=theta)

    def test_rejections(self):
        with self.assertRaises(DomainError):
            verification.contour_check('touchard', 10, -1)
        with self.assertRaises(DomainError):
            verification.contour_check('bessel', 10, 1)
        with self.assertRaises(DomainError):
            verification.contour_check('touchard', 10, 1, num_points=16)
        with self.assertRaises(DomainError):
            verification.contour_check('g3', 10, 1)
        self.assertTrue(math.isfinite(verification.contour_check('touchard', 10, 3)))
