import cmath
import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from scipy.special import lambertw as scipy_lambertw

from core import lambertw
from core.exceptions import BranchCutError, DomainError
from core.numeric import extended

BP = -1 / math.e


class RealBranchTests(SimpleTestCase):
    def test_w0_matches_scipy(self):
        for x in [BP + 1e-12, -0.3, -0.1, 0.0, 1e-9, 0.5, 1.0, math.e, 10.0, 1e5, 1e200]:
            expected = scipy_lambertw(x, 0).real
            self.assertAlmostEqual(lambertw.w0_real(x), expected, delta=1e-13 * max(1, abs(expected)))

    def test_wm1_matches_scipy(self):
        for x in [BP + 1e-12, -0.3, -0.1, -1e-5, -1e-100]:
            expected = scipy_lambertw(x, -1).real
            self.assertAlmostEqual(lambertw.wm1_real(x), expected, delta=1e-13 * abs(expected))

    def test_special_values(self):
        self.assertEqual(lambertw.w0_real(0), 0)
        self.assertEqual(lambertw.w0_real(lambertw.BRANCH_POINT), -1)
        self.assertEqual(lambertw.wm1_real(lambertw.BRANCH_POINT), -1)
        self.assertAlmostEqual(lambertw.w0_real(math.e), 1.0, places=15)

    def test_domain(self):
        with self.assertRaises(DomainError):
            lambertw.w0_real(-0.5)
        with self.assertRaises(DomainError):
            lambertw.wm1_real(0.1)
        with self.assertRaises(DomainError):
            lambertw.w0_real(1 + 1j)

    def test_extended_precision(self):
        ctx = extended(256)
        w = lambertw.w0_real(ctx.mpf(1), ctx)
        self.assertLess(abs(w - mpmath.mp.lambertw(1)), mpmath.mpf(10) ** -70)
        self.assertLess(ctx.fabs(w * ctx.exp(w) - 1), ctx.mpf(10) ** -70)
        wm = lambertw.wm1_real(ctx.mpf('-0.2'), ctx)
        self.assertLess(ctx.fabs(wm * ctx.exp(wm) + ctx.mpf('0.2')), ctx.mpf(10) ** -70)


class ComplexBranchTests(SimpleTestCase):
    def test_principal_branch_matches_scipy(self):
        rng = np.random.default_rng(3)
        for z in rng.uniform(-30, 30, 200) + 1j * rng.uniform(-30, 30, 200):
            w = lambertw.w0_complex(complex(z))
            self.assertLess(abs(w - complex(scipy_lambertw(z, 0))), 1e-12 * max(1, abs(w)))

    def test_real_axis_off_the_cut(self):
        self.assertAlmostEqual(lambertw.w0_complex(1.0), complex(scipy_lambertw(1.0)), places=14)

    def test_cut_raises(self):
        with self.assertRaises(BranchCutError) as caught:
            lambertw.w0_complex(-2.0)
        self.assertIn('w0_boundary', str(caught.exception))

    def test_boundary_values(self):
        for x in [BP - 1e-10, BP - 1e-4, -0.5, -1.0, -10.0, -1e8]:
            above = lambertw.w0_boundary(x, 'above')
            below = lambertw.w0_boundary(x, 'below')
            self.assertGreater(above.imag, 0)
            self.assertLess(above.imag, math.pi)
            self.assertEqual(below, above.conjugate())
            self.assertLess(abs(above * cmath.exp(above) - x), 1e-14 * max(1, abs(x)))
            approach = lambertw.w0_complex(complex(x, 1e-9 * max(1, abs(x))))
            self.assertLess(abs(approach - above), 1e-6)

    def test_w0_at_reads_cut_sides(self):
        self.assertEqual(lambertw.w0_at(-1.0, 'below'), lambertw.w0_boundary(-1.0, 'below'))
        self.assertAlmostEqual(lambertw.w0_at(2.0), lambertw.w0_complex(2.0))

    def test_derivative(self):
        self.assertEqual(lambertw.w0_derivative(0), 1)
        z = 0.7 + 0.2j
        h = 1e-6
        numeric = (lambertw.w0_complex(z + h) - lambertw.w0_complex(z - h)) / (2 * h)
        self.assertLess(abs(lambertw.w0_derivative(z) - numeric), 1e-8)


class PuiseuxTests(SimpleTestCase):
    def test_expansion_error_is_order_delta(self):
        for delta in (1e-4, 1e-6, 1e-8):
            inside = lambertw.w0_puiseux(delta)
            self.assertLess(abs(inside - lambertw.w0_real(BP + delta)), 10 * delta)
            above = lambertw.w0_puiseux(delta, 'above-cut')
            self.assertLess(abs(above - lambertw.w0_boundary(BP - delta, 'above')), 10 * delta)
            below = lambertw.w0_puiseux(delta, 'below-cut')
            self.assertEqual(below, above.conjugate())

    def test_range(self):
        with self.assertRaises(DomainError):
            lambertw.w0_puiseux(0.5)
