"""
Acceptance checks of the verification suite.

Every check is a :class:`VerificationCheck` with a ``fast`` and a ``full``
parameter set. ``run`` never raises: failures come back as a result dict with
status ``failed`` and exceptions as status ``error``.
"""
import functools
import logging
import math
import random
import time
from fractions import Fraction
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy import integrate

from . import combinatorics as comb
from . import lambertw, modphi, verification, zeros
from .verification import RateReport, rate_report

logger = logging.getLogger(__name__)

SUITES = ('fast', 'full')


class VerificationCheck:
    """Base class for acceptance checks"""

    name = None
    description = ''
    suites = SUITES
    fast: Dict[str, Any] = {}
    full: Dict[str, Any] = {}

    def params(self, suite: str) -> Dict[str, Any]:
        return self.full if suite == 'full' else self.fast

    def evaluate(self, suite: str) -> Tuple[List[RateReport], Dict[str, Any], List[Tuple[str, bool]]]:
        """
        Compute the check.

        Returns:
            (reports, values, assertions); the check passes when every report
            and every named assertion passes.
        """
        raise NotImplementedError

    def run(self, suite: str = 'fast') -> Dict[str, Any]:
        start_time = time.time()
        try:
            reports, values, assertions = self.evaluate(suite)
            failed = [label for label, ok in assertions if not ok]
            failed += [r.label for r in reports if not r.passed]
            values['assertions'] = {label: bool(ok) for label, ok in assertions}
            status = 'failed' if failed else 'passed'
            if failed:
                logger.warning(f"Check {self.name} failed: {', '.join(failed)}")
            else:
                logger.info(f"Check {self.name} passed in {time.time() - start_time:.1f}s")
            return {'name': self.name, 'status': status, 'success': not failed,
                    'reports': reports, 'values': values, 'error': None}
        except Exception as e:
            logger.error(f"Check {self.name} raised: {str(e)}")
            return {'name': self.name, 'status': 'error', 'success': False,
                    'reports': [], 'values': {}, 'error': f"{type(e).__name__}: {str(e)}"}


class ExactnessCheck(VerificationCheck):
    name = 'exactness'
    description = 'Stirling numbers of both kinds against brute-force enumeration'
    fast = full = {'n_max': 8}

    def evaluate(self, suite):
        assertions = []
        for n in range(1, self.params(suite)['n_max'] + 1):
            cycles = comb.enumerate_cycle_counts(n)
            blocks = comb.enumerate_block_counts(n)
            first = comb.triangle(comb.StirlingKind.FIRST).row(n)
            second = comb.triangle(comb.StirlingKind.SECOND).row(n)
            assertions.append((f"first kind n={n}", all(first[k] == cycles.get(k, 0) for k in range(n + 1))))
            assertions.append((f"second kind n={n}", all(second[k] == blocks.get(k, 0) for k in range(n + 1))))
            assertions.append((f"Bell moments n={n}", comb.bell_moments(n) == comb.moments(comb.dist(2, n, 1))))
        return [], {}, assertions


class LambertWCheck(VerificationCheck):
    name = 'lambert_w'
    description = 'Residual of W exp(W) = z on all branches and the cut, and the Puiseux oracle'
    fast = full = {'points': 2500, 'residual': 1e-14, 'deltas': (1e-4, 1e-6, 1e-8)}

    def evaluate(self, suite):
        p = self.params(suite)
        m = p['points']
        bp = lambertw.BRANCH_POINT
        residuals = []

        def record(z, w):
            residuals.append(abs(w * np.exp(w) - z) / max(1.0, abs(z)))

        for x in np.concatenate([bp + np.geomspace(1e-15, 1.0, m // 2), np.geomspace(1.0, 1e6, m // 2)]):
            record(float(x), lambertw.w0_real(float(x)))
        for x in -np.geomspace(1e-300, -bp, m)[:-1]:
            record(float(x), lambertw.wm1_real(float(x)))
        rng = np.random.default_rng(7)
        for z in (rng.uniform(-20, 20, m) + 1j * rng.uniform(-20, 20, m)):
            if z.imag != 0:
                record(complex(z), lambertw.w0_complex(complex(z)))
        for x in bp - np.geomspace(1e-12, 1e6, m // 2):
            for side in lambertw.CutSide:
                record(complex(x), lambertw.w0_boundary(float(x), side))

        worst = max(residuals)
        assertions = [(f"residual <= {p['residual']}", worst <= p['residual'])]
        puiseux = {}
        for delta in p['deltas']:
            errors = [
                abs(lambertw.w0_puiseux(delta) - lambertw.w0_real(bp + delta)),
                abs(lambertw.w0_puiseux(delta, 'above-cut') - lambertw.w0_boundary(bp - delta, 'above')),
                abs(lambertw.w0_puiseux(delta, 'below-cut') - lambertw.w0_boundary(bp - delta, 'below')),
            ]
            puiseux[str(delta)] = max(errors)
            assertions.append((f"Puiseux delta={delta}", max(errors) <= 10 * delta))
        return [], {'points': len(residuals), 'max_residual': worst, 'puiseux_errors': puiseux}, assertions


class ModPhiRateCheck(VerificationCheck):
    name = 'mod_phi_rate'
    description = 'O(1/n) rate of mod-phi convergence for the three families'
    fast = {'n_values': (50, 100, 200, 400), 'cases': ((1, 1), (2, 1), (3, 1), (3, 2)),
            'z_values': (0.3, -0.2, 0.1 + 0.1j)}
    full = {**fast, 'n_values': (50, 100, 200, 400, 800)}

    def evaluate(self, suite):
        p = self.params(suite)
        reports = []
        for i, theta in p['cases']:
            for z in p['z_values']:
                errors = [verification.mod_phi_error(i, n, theta, z) for n in p['n_values']]
                reports.append(rate_report(
                    f"mod-phi family {i} theta={theta} z={z}", p['n_values'], errors,
                    family=i, theta=theta, z_or_t=z, expected_slope=-1.0, tolerance=0.2,
                ))
        return reports, {}, []


class MomentGrowthCheck(VerificationCheck):
    name = 'moment_growth'
    description = 'Linear growth of the mean and variance'
    fast = full = {'n_values': (25, 50, 100, 200), 'cases': ((1, 1), (2, 1), (3, 1), (3, 2))}

    def evaluate(self, suite):
        p = self.params(suite)
        reports = [verification.moment_growth_check(i, theta, p['n_values']) for i, theta in p['cases']]
        return reports, {}, []


class LocalLimitCheck(VerificationCheck):
    name = 'local_limit'
    description = 'sqrt(n) sup-error of the local limit theorem decreases in n'
    fast = {'n_small': 100, 'n_large': 400, 'n_figure': 200, 'cases': ((1, 1), (2, 1), (3, 1), (3, 2))}
    full = {**fast, 'n_small': 200, 'n_large': 800, 'n_figure': 500}

    def evaluate(self, suite):
        p = self.params(suite)
        values, assertions = {}, []
        for i, theta in p['cases']:
            small = verification.llt_sup_error(i, p['n_small'], theta)
            large = verification.llt_sup_error(i, p['n_large'], theta)
            values[f"family {i} theta={theta}"] = {str(p['n_small']): small, str(p['n_large']): large}
            assertions.append((f"family {i} theta={theta} decreasing", large < small))

            n = p['n_figure']
            k, pmf, _ = verification.llt_rows(i, n, theta)
            mode = int(k[np.argmax(pmf)])
            centre = float(modphi.mu(i, theta)) * n
            spread = math.sqrt(float(modphi.sigma2(i, theta)) * n)
            assertions.append((f"family {i} theta={theta} mode near mean", abs(mode - centre) <= 2 * spread))
        return [], values, assertions


class LargeDeviationCheck(VerificationCheck):
    name = 'large_deviations'
    description = 'LDP error halves when n doubles; rate of family 3 continuous at theta = 1'
    fast = {'n_pair': (200, 400), 't_values': (0.3, 0.5, 0.7), 'band': (1.6, 2.6)}
    full = {**fast, 'n_pair': (400, 800)}

    def evaluate(self, suite):
        p = self.params(suite)
        lo, hi = p['band']
        n1, n2 = p['n_pair']
        values, assertions = {}, []
        for i in (1, 2, 3):
            for t in p['t_values']:
                e1 = verification.ldp_error(i, n1, 1, Fraction(str(t)))
                e2 = verification.ldp_error(i, n2, 1, Fraction(str(t)))
                ratio = e1 / e2
                values[f"family {i} t={t}"] = {'errors': [e1, e2], 'ratio': ratio}
                assertions.append((f"family {i} t={t} ratio in [{lo}, {hi}]", lo <= ratio <= hi))
        for t in p['t_values']:
            centre = float(modphi.rate(3, t, 1))
            jump = max(abs(float(modphi.rate(3, t, 1 + s)) - centre) for s in (1e-9, -1e-9))
            assertions.append((f"family 3 rate continuous at theta=1, t={t}", jump <= 1e-6))
        return [], values, assertions


def _transform_gaps(measure, limit, points):
    return {str(z): abs(zeros.stieltjes_empirical(measure, z) - limit(z)) for z in points}


class TouchardZerosCheck(VerificationCheck):
    name = 'touchard_zeros'
    description = 'Zeros of T_n(n x) approach the Elbert law'
    fast = {'n_values': (150, 300), 'window': 0.15, 'tolerance': 0.05,
            'points': (-1, 2 + 1j, -0.5 + 0.5j)}
    full = {**fast, 'n_values': (300, 600)}

    def evaluate(self, suite):
        p = self.params(suite)
        n_small, n_large = p['n_values']
        polys = [comb.touchard_poly(n).scale(n) for n in (n_small, n_large)]
        measures = [
            zeros.RootMeasure(points=tuple(sorted(-r for r in roots)), weight=1.0 / n)
            for roots, n in zip(zeros.real_roots_many(polys), (n_small, n_large))
        ]
        smallest = [-m.points[-1] for m in measures]
        gaps = [_transform_gaps(m, zeros.stieltjes_limit_elbert, p['points']) for m in measures]
        values = {'smallest_root': dict(zip(map(str, p['n_values']), smallest)),
                  'transform_gaps': dict(zip(map(str, p['n_values']), gaps))}
        assertions = [
            ('smallest root in window', -math.e < smallest[1] < -math.e + p['window']),
            ('smallest root moves towards -e', abs(smallest[1] + math.e) < abs(smallest[0] + math.e)),
            ('transform within tolerance', max(gaps[1].values()) <= p['tolerance']),
            ('transform improves with n', max(gaps[1].values()) < max(gaps[0].values())),
        ]
        return [], values, assertions


class Family3ZerosCheck(VerificationCheck):
    name = 'family3_zeros'
    description = 'Zeros of the family-3 polynomial against the limit with density g_theta'
    fast = {'n_values': (50, 100), 'theta': 2, 'tolerance': 0.05, 'points': (1 + 1j, 3 + 0.5j, -2 + 1j)}
    full = {**fast, 'n_values': (100, 200)}

    def evaluate(self, suite):
        p = self.params(suite)
        theta = p['theta']
        edge = zeros.m_theta(theta)
        values, assertions = {'m_theta': edge}, []
        limit = functools.partial(zeros.stieltjes_limit_Z3, theta=theta)
        for n in p['n_values']:
            measure = zeros.empirical_measure(comb.gen_poly(3, n, theta * n), n)
            values[f"n={n} max_point"] = measure.points[-1]
            assertions.append((f"n={n} support below 1.05 m_theta", measure.points[-1] <= 1.05 * edge))
            gaps = _transform_gaps(measure, limit, p['points'])
            values[f"n={n} transform_gaps"] = gaps
        last = values[f"n={p['n_values'][-1]} transform_gaps"]
        assertions.append(('transform within tolerance', max(last.values()) <= p['tolerance']))
        return [], values, assertions


class DensityCheck(VerificationCheck):
    name = 'density_totals'
    description = 'Mass, transforms and edge asymptotics of the zero-limit densities'
    fast = full = {
        'unit_thetas': (1.5, 2, 5), 'partial_thetas': (0.3, 0.7), 'mass_tolerance': 1e-4,
        'small_t': (1e-6, 1e-30, 1e-100, 1e-250), 'large_t': 1e6, 'eps': 1e-6, 'ratio_tolerance': 0.05,
        'transform_points': (1 + 1j, -1 + 0.5j, 2 - 1j, -3 + 0j, 0.5 + 2j),
    }

    def evaluate(self, suite):
        p = self.params(suite)
        values, assertions = {}, []
        for theta in p['unit_thetas'] + p['partial_thetas']:
            target = 1.0 if theta >= 1 else theta
            total = zeros.integrate_density(3, theta)
            values[f"mass theta={theta}"] = total
            assertions.append((f"mass theta={theta}", abs(total - target) <= p['mass_tolerance']))
        elbert = zeros.integrate_density(2, 1)
        values['Elbert mass'] = elbert
        assertions.append(('Elbert mass', abs(elbert - 1) <= 1e-6))

        ratios = [zeros.density_g(2, t) * t * math.log(t) ** 2 for t in p['small_t']]
        values['ratio at 0'] = dict(zip(map(str, p['small_t']), ratios))
        assertions.append(('ratio at 0 within tolerance', abs(ratios[-1] - 1) <= p['ratio_tolerance']))
        assertions.append(('ratio at 0 approaches 1',
                           all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))))

        t = p['large_t']
        tail = zeros.density_g(1, t) * math.sqrt(2) * math.pi * t ** 1.5
        values['ratio at infinity, theta=1'] = tail
        assertions.append(('ratio at infinity', abs(tail - 1) <= p['ratio_tolerance']))

        eps = p['eps']
        edge = zeros.density_g(2, zeros.m_theta(2) - eps) / math.sqrt(eps) / zeros.density_edge_constant(2)
        values['ratio at m_theta, theta=2'] = edge
        assertions.append(('ratio at m_theta', abs(edge - 1) <= p['ratio_tolerance']))

        gaps = {}
        for z in p['transform_points']:
            gaps[str(z)] = abs(zeros.stieltjes_from_density(3, 2, z) - zeros.stieltjes_limit_Z3(z, 2))
        values['transform by quadrature'] = gaps
        assertions.append(('transform by quadrature', max(gaps.values()) <= 1e-4))
        return [], values, assertions


def _random_poly(rng, n):
    return comb.ExactPolynomial(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n + 1)))


class FreeConvolutionCheck(VerificationCheck):
    name = 'free_convolution'
    description = 'Exact identities of the finite free multiplicative convolution'
    fast = {'n_unit': 10, 'n_duality': 12, 'n_g3': 15, 'g3_thetas': ('3', 'n+2')}
    full = {**fast, 'g3_thetas': ('3', 'n+2', '7n/2')}

    def evaluate(self, suite):
        p = self.params(suite)
        rng = random.Random(2024)
        assertions = []
        x_minus_1 = comb.ExactPolynomial((-1, 1))
        for n in range(1, p['n_unit'] + 1):
            poly, other = _random_poly(rng, n), _random_poly(rng, n)
            assertions.append((f"unit n={n}", zeros.finite_free_mult_conv(x_minus_1 ** n, poly, n) == poly))
            lhs = zeros.finite_free_mult_conv(poly.scale(3), other.scale(Fraction(1, 3)), n)
            assertions.append((f"scaling n={n}", lhs == zeros.finite_free_mult_conv(poly, other, n)))

        for n in range(1, p['n_duality'] + 1):
            for i in range(n):
                lhs = comb.ExactPolynomial.monomial(i, Fraction((-1) ** i, math.factorial(i))) * zeros.laguerre(n, i - n)
                rhs = comb.ExactPolynomial.monomial(n, Fraction((-1) ** n, math.factorial(n))) * zeros.laguerre(i, n - i)
                assertions.append((f"Laguerre duality i={i} n={n}", lhs == rhs))

        for n in range(1, p['n_g3'] + 1):
            thetas = {'3': Fraction(3), 'n+2': Fraction(n + 2), '7n/2': Fraction(7 * n, 2)}
            for label in p['g3_thetas']:
                theta = thetas[label]
                lhs = comb.gen_poly(3, n, theta, relaxed=True).reflect() * theta ** n
                rhs = zeros.finite_free_mult_conv(comb.touchard_poly(n).reflect(), zeros.laguerre_dual_factor(n, theta), n)
                assertions.append((f"family 3 representation n={n} theta={label}", lhs == rhs))
        return [], {'identities': len(assertions)}, assertions


class ContourCheck(VerificationCheck):
    name = 'contour'
    description = 'Saddle-point Cauchy integrals against exact values'
    fast = full = {
        'n_values': (10, 20, 40), 'touchard_z': ('1', '1/2', '3', '-4'),
        'g3_cases': ((2, '0'), (2, '3/10'), (1, '3/10'), (2, '-1/5')), 'tolerance': 1e-10,
    }

    def evaluate(self, suite):
        p = self.params(suite)
        values, assertions = {}, []
        for n in p['n_values']:
            for z in p['touchard_z']:
                error = verification.contour_check('touchard', n, z)
                values[f"touchard n={n} z={z}"] = error
                assertions.append((f"touchard n={n} z={z}", error <= p['tolerance']))
            for theta, z in p['g3_cases']:
                error = verification.contour_check('g3', n, z, theta=theta)
                values[f"g3 n={n} theta={theta} z={z}"] = error
                assertions.append((f"g3 n={n} theta={theta} z={z}", error <= p['tolerance']))
        return [], values, assertions


class SigmaMaximiserCheck(VerificationCheck):
    name = 'sigma_maximisers'
    description = 'Maximisers of theta -> sigma_i(theta)'
    fast = full = {'targets': {1: 0.46241, 2: 0.48273, 3: 1.6313}, 'tolerance': 1e-3}

    def evaluate(self, suite):
        p = self.params(suite)
        values, assertions = {}, []
        for i, target in p['targets'].items():
            found = modphi.sigma_argmax(i)
            values[f"family {i}"] = found
            assertions.append((f"family {i} maximiser", abs(found - target) <= p['tolerance']))
        return [], values, assertions


class ModPoissonCheck(VerificationCheck):
    name = 'mod_poisson'
    description = 'Mod-Poisson convergence of the cycle counts to 1 / Gamma(e^z)'
    fast = {'n_values': (100, 200, 400, 800), 'z_values': (0, 0.5)}
    full = {**fast, 'n_values': (100, 200, 400, 800, 1600)}

    def evaluate(self, suite):
        p = self.params(suite)
        reports = []
        for z in p['z_values']:
            errors = [verification.mod_poisson_error(n, z) for n in p['n_values']]
            reports.append(rate_report(f"mod-Poisson z={z}", p['n_values'], errors, family=1, theta=1,
                                       z_or_t=z, expected_slope=-1.0, tolerance=0.3))
        return reports, {}, []


class RealRootednessCheck(VerificationCheck):
    name = 'real_rootedness'
    description = 'All zeros real and nonpositive, Vieta consistent, Bernoulli decomposition'
    suites = ('full',)
    fast = full = {'n_values': (50, 100, 200), 'theta': 2, 'vieta': 1e-8}

    def evaluate(self, suite):
        p = self.params(suite)
        polys = []
        for n in p['n_values']:
            polys.append(comb.gen_poly(2, n, n))
            polys.append(comb.gen_poly(3, n, p['theta'] * n))
        roots = zeros.real_roots_many(polys)
        tol = 1e-10
        values, assertions = {}, []
        for poly, found in zip(polys, roots):
            label = f"degree {poly.degree}, leading {float(poly.leading):.3e}"
            mismatch = zeros.vieta_check(poly, found)
            values[label] = {'max_root': found[-1], 'vieta': mismatch}
            assertions.append((f"{label} nonpositive", found[-1] <= tol * max(1.0, abs(found[0]))))
            assertions.append((f"{label} Vieta", mismatch <= p['vieta']))

        n = p['n_values'][0]
        probabilities = zeros.bernoulli_decomposition(comb.gen_poly(2, n, n))
        mean, _ = comb.moments(comb.dist(2, n, n))
        assertions.append(('Bernoulli mean', abs(sum(probabilities) - float(mean)) <= 1e-8 * float(mean)))
        return [], values, assertions


class MarchenkoPasturCheck(VerificationCheck):
    name = 'marchenko_pastur'
    description = 'Laguerre zeros against the Marchenko-Pastur law'
    suites = ('full',)
    fast = full = {'n': 100, 'theta': 4, 'ks': 0.1}

    def evaluate(self, suite):
        p = self.params(suite)
        points = zeros.laguerre_zero_points(p['n'], p['theta'], method='validated')
        distance = zeros.ks_distance(points, functools.partial(zeros.mp_cdf, p['theta']))
        lo, hi = (math.sqrt(2) - 1) ** 2, (math.sqrt(2) + 1) ** 2
        mass, _ = integrate.quad(functools.partial(zeros.mp_density, 2), lo, hi, limit=200)
        return [], {'ks_distance': distance, 'mass theta=2': mass}, [
            ('KS distance', distance <= p['ks']),
            ('density mass', abs(mass - 1) <= 1e-6),
        ]


class SmallestRootCheck(VerificationCheck):
    name = 'smallest_root'
    description = 'Growth exponent of the smallest zero of the theta = n family-3 polynomial (diagnostic)'
    suites = ('full',)
    fast = full = {'n_values': (50, 100, 150, 200)}

    def evaluate(self, suite):
        result = zeros.smallest_root_exponent(self.params(suite)['n_values'])
        result['near_two'] = abs(result['exponent'] - 2) <= 0.3
        return [], result, []


CHECKS: Dict[str, VerificationCheck] = {
    check.name: check for check in (
        ExactnessCheck(), LambertWCheck(), ModPhiRateCheck(), LocalLimitCheck(), LargeDeviationCheck(),
        TouchardZerosCheck(), Family3ZerosCheck(), DensityCheck(), FreeConvolutionCheck(), ContourCheck(),
        SigmaMaximiserCheck(), ModPoissonCheck(), MomentGrowthCheck(),
        RealRootednessCheck(), MarchenkoPasturCheck(), SmallestRootCheck(),
    )
}


def suite_checks(suite: str) -> List[str]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return [name for name, check in CHECKS.items() if suite in check.suites]


def run_check(name: str, suite: str = 'fast') -> Dict[str, Any]:
    if name not in CHECKS:
        raise ValueError(f"unknown check {name!r}")
    logger.info(f"Running check {name} ({suite})")
    return CHECKS[name].run(suite)
