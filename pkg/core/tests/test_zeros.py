import cmath
import math
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from core import combinatorics as comb
from core import zeros
from core.exceptions import DomainError, IntegrityError


class RealRootTests(SimpleTestCase):
    def assertRootsEqual(self, got, expected, tol=1e-9):
        self.assertEqual(len(got), len(expected))
        for a, b in zip(got, expected):
            self.assertAlmostEqual(a, b, delta=tol * max(1.0, abs(b)))

    def test_simple_roots_both_methods(self):
        p = comb.ExactPolynomial.from_roots([-3, -1, Fraction(-1, 2)])
        for method in ('sturm', 'validated'):
            self.assertRootsEqual(zeros.real_roots(p, method=method), [-3.0, -1.0, -0.5])

    def test_repeated_and_zero_roots(self):
        p = comb.ExactPolynomial.from_roots([-1, -1, -2, 0])
        self.assertRootsEqual(zeros.real_roots(p, method='sturm'), [-2.0, -1.0, -1.0, 0.0])
        self.assertRootsEqual(zeros.real_roots(comb.touchard_poly(2)), [-1.0, 0.0])
        self.assertRootsEqual(zeros.real_roots(comb.stirling_poly(6)), [-5.0, -4.0, -3.0, -2.0, -1.0, 0.0])

    def test_not_real_rooted(self):
        with self.assertRaises(IntegrityError):
            zeros.real_roots(comb.ExactPolynomial((1, 0, 1)), method='sturm')
        with self.assertRaises(DomainError):
            zeros.real_roots(comb.ExactPolynomial(()))
        with self.assertRaises(DomainError):
            zeros.real_roots(comb.ExactPolynomial((1, 1)), method='newton')

    @override_settings(STIRLING_WORKERS=2)
    def test_many_keeps_input_order(self):
        polys = [comb.stirling_poly(n) for n in (5, 2, 8)]
        roots = zeros.real_roots_many(polys)
        self.assertEqual([len(r) for r in roots], [5, 2, 8])
        self.assertAlmostEqual(roots[2][0], -7.0, delta=1e-9)

    def test_touchard_roots_agree_across_methods(self):
        p = comb.touchard_poly(40)
        sturm = zeros.real_roots(p, method='sturm')
        validated = zeros.real_roots(p, method='validated')
        self.assertRootsEqual(sturm, validated, tol=1e-8)
        self.assertLess(zeros.vieta_check(p, sturm), 1e-8)

    def test_bernoulli_decomposition(self):
        p = comb.gen_poly(1, 5, 2)
        probabilities = zeros.bernoulli_decomposition(p)
        for got, expected in zip(probabilities, [1 / 3, 2 / 5, 1 / 2, 2 / 3, 1.0]):
            self.assertAlmostEqual(got, expected, places=9)
        self.assertAlmostEqual(sum(probabilities), float(comb.polynomial_moments(p)[0]), places=9)
        with self.assertRaises(DomainError):
            zeros.bernoulli_decomposition(comb.ExactPolynomial((1, 1)))


class EmpiricalMeasureTests(SimpleTestCase):
    def test_first_kind_points_are_a_lattice(self):
        measure = zeros.empirical_measure(comb.gen_poly(1, 20, 20), 20)
        self.assertEqual(measure.weight, 1 / 20)
        self.assertAlmostEqual(measure.total_mass, 1.0)
        for j, x in enumerate(measure.points):
            self.assertAlmostEqual(x, j / 20, delta=1e-9)

    def test_positive_root_is_rejected(self):
        with self.assertRaises(IntegrityError):
            zeros.empirical_measure(comb.ExactPolynomial.from_roots([2, -1]), 2)

    def test_transform_of_a_single_atom(self):
        measure = zeros.RootMeasure(points=(0.5,), weight=1.0)
        self.assertAlmostEqual(zeros.stieltjes_empirical(measure, 1.5), 1.0)
        with self.assertRaises(DomainError):
            zeros.stieltjes_empirical(measure, 0.5)


class LimitMeasureTests(SimpleTestCase):
    def test_uniform_limit_of_family_one(self):
        theta, z = 1.5, complex(2, 1)
        expected = theta * cmath.log(z / (z - 1 / theta))
        self.assertLess(abs(zeros.stieltjes_limit(1, z, theta) - expected), 1e-12)

    def test_closed_form_matches_phi_derivative(self):
        for z in (complex(1, 1), complex(-2, 1), complex(3, -0.5), -3.0):
            self.assertLess(abs(zeros.stieltjes_limit(3, z, 2) - zeros.stieltjes_limit_Z3(z, 2)), 1e-10)

    def test_removable_point(self):
        theta = 2.0
        left = zeros.stieltjes_limit_Z3(complex(-1, 1e-7), theta)
        self.assertLess(abs(zeros.stieltjes_limit_Z3(-1, theta) - left), 1e-6)

    def test_support_edges(self):
        self.assertAlmostEqual(zeros.m_theta(2), 4.6935, delta=1e-3)
        self.assertEqual(zeros.m_theta(1), math.inf)
        self.assertEqual(zeros.elbert_density(3.0), 0.0)
        self.assertGreater(zeros.elbert_density(1.0), 0.0)
        self.assertEqual(zeros.density_g(2, 5.0), 0.0)
        with self.assertRaises(DomainError):
            zeros.stieltjes_limit_elbert(1.0)
        with self.assertRaises(DomainError):
            zeros.density_edge_constant(1)

    def test_masses(self):
        self.assertAlmostEqual(zeros.integrate_density(2, 1), 1.0, delta=1e-6)
        self.assertAlmostEqual(zeros.integrate_density(1, 2), 1.0, delta=1e-6)
        for theta, mass in [(2, 1.0), (1, 1.0), (0.3, 0.3)]:
            self.assertAlmostEqual(zeros.integrate_density(3, theta), mass, delta=1e-4)

    def test_edge_constant(self):
        eps = 1e-7
        ratio = zeros.density_g(2, zeros.m_theta(2) - eps) / math.sqrt(eps) / zeros.density_edge_constant(2)
        self.assertAlmostEqual(ratio, 1.0, delta=1e-2)

    def test_transform_from_density(self):
        for i, theta in [(2, 1), (3, 2)]:
            z = complex(1, 1)
            spec = zeros.limit_spec(i, theta)
            self.assertLess(abs(zeros.stieltjes_from_density(i, theta, z) - spec.stieltjes(z)), 1e-4)

    def test_scaled_touchard_zeros_approach_the_limit(self):
        n = 150
        measure = zeros.empirical_measure(comb.touchard_poly(n).scale(n), n)
        z = complex(2, 1)
        gap = abs(zeros.stieltjes_empirical(measure, z) - zeros.stieltjes_limit_elbert(z))
        self.assertLess(gap, 0.05)


class FreeConvolutionTests(SimpleTestCase):
    def test_unit_and_scaling(self):
        p = comb.ExactPolynomial.from_roots([1, 2, 3])
        unit = comb.ExactPolynomial((-1, 1)) ** 3
        self.assertEqual(zeros.finite_free_mult_conv(unit, p, 3), p)
        two = comb.ExactPolynomial((-2, 1)) ** 3
        self.assertEqual(zeros.finite_free_mult_conv(two, p, 3), comb.ExactPolynomial.from_roots([2, 4, 6]))
        with self.assertRaises(DomainError):
            zeros.finite_free_mult_conv(p, p, 2)

    def test_laguerre(self):
        self.assertEqual(zeros.laguerre(2, 0).coeffs, (1, -2, Fraction(1, 2)))
        self.assertEqual(zeros.laguerre(0, 5).coeffs, (1,))

    def test_family_three_representation(self):
        for n, theta in [(6, Fraction(3)), (6, Fraction(8)), (9, Fraction(21, 2))]:
            lhs = comb.gen_poly(3, n, theta, relaxed=True).reflect() * theta ** n
            rhs = zeros.finite_free_mult_conv(
                comb.touchard_poly(n).reflect(), zeros.laguerre_dual_factor(n, theta), n
            )
            self.assertEqual(lhs, rhs)


class MarchenkoPasturTests(SimpleTestCase):
    def test_density_and_atom(self):
        self.assertEqual(zeros.mp_atom_weight(0.5), 0.5)
        self.assertEqual(zeros.mp_atom_weight(2), 0.0)
        self.assertEqual(zeros.mp_density(4, 0.5), 0.0)
        self.assertAlmostEqual(zeros.mp_cdf(2, 100.0), 1.0, places=6)
        self.assertAlmostEqual(zeros.mp_cdf(0.5, 100.0), 1.0, places=6)

    def test_ks_distance(self):
        self.assertAlmostEqual(zeros.ks_distance([0.5], lambda x: min(max(x, 0.0), 1.0)), 0.5)
