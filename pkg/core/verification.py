"""
Numerical verification of the limit theorems against exact finite-n values.

Each operation compares an exact quantity from :mod:`core.combinatorics`
(evaluated in extended precision where it is large) with the corresponding
limit object from :mod:`core.modphi`, and returns the error. Sequences of
errors over growing n are summarised in a :class:`RateReport`.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .combinatorics import dist, gen_poly, log_mgf, polynomial_moments, touchard_eval
from .exceptions import DomainError
from .lambertw import w0_real
from .modphi import L3, mu, phi, psi, rate, sigma2
from .numeric import as_rational, extended

logger = logging.getLogger(__name__)

MIN_CONTOUR_POINTS = 2 ** 10
MAX_CONTOUR_POINTS = 2 ** 18
CONTOUR_AGREEMENT = 1e-12


@dataclass
class RateReport:
    label: str
    family: Optional[int]
    theta: Optional[str]
    z_or_t: Optional[str]
    n_values: List[int]
    errors: List[float]
    fitted_slope: Optional[float]
    passed: bool
    expected_slope: float = -1.0
    tolerance: float = 0.2
    notes: List[str] = field(default_factory=list)


def fit_slope(n_values: Sequence[int], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(n)."""
    if len(n_values) < 2:
        raise DomainError('a slope fit needs at least two points')
    if any(e <= 0 for e in errors):
        raise DomainError('a slope fit needs positive errors')
    return float(np.polyfit(np.log(n_values), np.log(errors), 1)[0])


def _non_monotone_steps(errors: Sequence[float]) -> int:
    return sum(1 for a, b in zip(errors, errors[1:]) if b > a)


def rate_report(label, n_values, errors, family=None, theta=None, z_or_t=None,
                expected_slope=-1.0, tolerance=0.2, one_sided=False) -> RateReport:
    """
    Summarise an error sequence.

    A sequence that is identically zero is exact and passes without a fit.
    Otherwise the fitted slope must lie within ``tolerance`` of
    ``expected_slope`` (or below ``expected_slope + tolerance`` when
    ``one_sided``), with at most one non-monotone step.
    """
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise DomainError(f"n_values must be strictly increasing, got {n_values}")
    errors = [float(e) for e in errors]
    report = RateReport(
        label=label,
        family=family,
        theta=None if theta is None else str(theta),
        z_or_t=None if z_or_t is None else str(z_or_t),
        n_values=n_values,
        errors=errors,
        fitted_slope=None,
        passed=False,
        expected_slope=expected_slope,
        tolerance=tolerance,
    )
    if all(e == 0 for e in errors):
        report.passed = True
        report.notes.append('exact: error identically zero')
        return report

    slope = fit_slope(n_values, errors)
    report.fitted_slope = slope
    if one_sided:
        in_band = slope <= expected_slope + tolerance
    else:
        in_band = abs(slope - expected_slope) <= tolerance
    steps = _non_monotone_steps(errors)
    if steps:
        logger.warning(f"{label}: error sequence has {steps} non-monotone step(s): {errors}")
        report.notes.append(f"{steps} non-monotone step(s)")
    report.passed = in_band and steps <= 1
    return report


def _tilt(n, theta) -> Fraction:
    return as_rational(theta) * n


def mod_phi_error(i, n, theta, z, precision=None, relaxed=False) -> float:
    """
    |E exp(z X) / exp(n phi_i(z)) - Psi_i(z)| for X with parameters (n, theta n).

    Zero at z = 0, where both sides equal 1.
    """
    if z == 0:
        return 0.0
    ctx = extended(precision)
    vartheta = as_rational(theta)
    p = gen_poly(i, n, _tilt(n, vartheta), relaxed=relaxed)
    z = ctx.convert(z)
    lm = log_mgf(p, z, precision)
    ratio = ctx.exp(lm - n * phi(i, z, vartheta, ctx))
    return float(ctx.fabs(ratio - psi(i, z, vartheta, ctx)))


def _gaussian(k, mean, var):
    return np.exp(-(k - mean) ** 2 / (2 * var)) / math.sqrt(2 * math.pi * var)


def llt_rows(i, n, theta, relaxed=False):
    """
    (k, pmf(k), Gaussian(k)) for k = 1..n with mean mu_i n and variance sigma_i^2 n.

    k = 0 carries no mass once n >= 1.

    With ``relaxed`` family 3 takes any tilt and the coefficients of the
    generating polynomial stand in for the pmf.
    """
    if n < 1:
        raise DomainError(f"llt_rows needs n >= 1, got {n}")
    vartheta = as_rational(theta)
    if relaxed:
        coeffs = gen_poly(i, n, _tilt(n, vartheta), relaxed=True).coeffs
    else:
        coeffs = dist(i, n, _tilt(n, vartheta)).polynomial.coeffs
    mean, var = float(mu(i, vartheta)) * n, float(sigma2(i, vartheta)) * n
    k = np.arange(1, n + 1)
    pmf = np.array([float(coeffs[j]) if j < len(coeffs) else 0.0 for j in k])
    return k, pmf, _gaussian(k, mean, var)


def llt_sup_error(i, n, theta) -> float:
    """sqrt(n) * max_k |pmf(k) - Gaussian(k)|."""
    _, pmf, gauss = llt_rows(i, n, theta)
    return math.sqrt(n) * float(np.max(np.abs(pmf - gauss)))


def ldp_error(i, n, theta, t, precision=None) -> float:
    """|-(1/n) log pmf(round(t n)) - I_i(t; theta)|."""
    ctx = extended(precision)
    vartheta = as_rational(theta)
    d = dist(i, n, _tilt(n, vartheta))
    k = int(round(float(t) * n))
    p = d.probability(k)
    if p == 0:
        raise DomainError(f"k={k} (t={t}, n={n}) is outside the support of family {i}")
    log_p = ctx.log(p.numerator) - ctx.log(p.denominator)
    return float(ctx.fabs(-log_p / n - rate(i, ctx.convert(as_rational(t)), vartheta, ctx)))


def mod_poisson_error(n, z, precision=None) -> float:
    """|E exp(z eta_n) / exp(log n (e^z - 1)) - 1 / Gamma(e^z)| for cycle counts eta_n."""
    if z == 0:
        return 0.0
    ctx = extended(precision)
    z = ctx.convert(z)
    lm = log_mgf(dist(1, n, 1), z, precision)
    ez = ctx.exp(z)
    ratio = ctx.exp(lm - ctx.log(n) * (ez - 1))
    return float(ctx.fabs(ratio - ctx.rgamma(ez)))


def _trapezoid_circle(log_integrand, radius, points):
    x = radius * np.exp(2j * np.pi * np.arange(points) / points)
    logs = log_integrand(x)
    shift = np.max(logs.real)
    return shift, np.mean(np.exp(logs - shift))


def _contour(log_integrand, radius, num_points):
    points = max(MIN_CONTOUR_POINTS, int(num_points))
    shift, value = _trapezoid_circle(log_integrand, radius, points)
    while points < MAX_CONTOUR_POINTS:
        points *= 2
        shift2, value2 = _trapezoid_circle(log_integrand, radius, points)
        refined = value2 * np.exp(shift2 - shift)
        if abs(refined - value) <= CONTOUR_AGREEMENT * abs(refined):
            return shift, refined, points
        value = refined
    logger.warning(f"Contour sums still changing at {points} points")
    return shift, value, points


def contour_check(kind, n, z, theta=None, num_points=MIN_CONTOUR_POINTS, precision=None) -> float:
    """
    Relative error of a trapezoid-rule Cauchy integral on the saddle-point circle.

    ``touchard`` compares with T_n(n z) / n! on the circle of radius W0(1/z).
    ``g3`` compares with the family-3 moment generating function at z on the
    circle of radius L3(z; theta), theta being the vartheta of the tilt theta n.
    """
    if int(num_points) < MIN_CONTOUR_POINTS:
        raise DomainError(f"contour_check needs at least {MIN_CONTOUR_POINTS} points, got {num_points}")
    ctx = extended(precision)
    z_exact = as_rational(z)
    zf = float(z_exact)

    if kind == 'touchard':
        if -math.e <= zf <= 0:
            raise DomainError(f"no saddle-point circle for z={z} in [-e, 0]")
        radius = abs(float(w0_real(1 / zf)))

        def log_integrand(x):
            return n * zf * (np.exp(x) - 1) - n * np.log(x)

        exact = touchard_eval(n, n * z_exact) / math.factorial(n)
        log_exact = ctx.log(exact.numerator) - ctx.log(exact.denominator)
    elif kind == 'g3':
        if theta is None:
            raise DomainError('contour_check g3 needs theta')
        vartheta = as_rational(theta)
        big = vartheta * n
        radius = float(L3(zf, vartheta))
        if big.denominator != 1:
            # (1 + e^z (e^x - 1))^theta branches where e^x = 1 - e^-z, i.e. at
            # log|pole| + i arg(pole) + 2 pi i k; k = 0 (and -1 for pole < 0) is nearest.
            pole = 1 - math.exp(-zf)
            if pole != 0:
                nearest = abs(complex(math.log(abs(pole)), math.pi if pole < 0 else 0.0))
                if nearest <= radius:
                    raise DomainError(
                        f"branch point of the integrand at distance {nearest:.4g} inside the circle of radius {radius}"
                    )
        ez = math.exp(zf)
        log_scale = math.lgamma(n + 1) - n * math.log(float(big))

        def log_integrand(x):
            return float(big) * np.log(1 + ez * (np.exp(x) - 1)) - n * np.log(x) + log_scale

        log_exact = log_mgf(gen_poly(3, n, big, relaxed=True), ctx.convert(z_exact), precision)
    else:
        raise DomainError(f"unknown contour kind {kind!r}")

    shift, value, points = _contour(log_integrand, radius, num_points)
    log_value = ctx.convert(shift) + ctx.log(ctx.convert(complex(value)))
    error = float(ctx.fabs(ctx.exp(log_value - log_exact) - 1))
    logger.debug(f"contour {kind} n={n} z={z}: {points} points, relative error {error:.3e}")
    return error


def moment_growth_check(i, theta, n_values, relaxed=False) -> RateReport:
    """
    Errors max(|E X / n - mu_i|, |Var X / n - sigma_i^2|) over n; both must
    vanish with fitted slope at most -0.8.
    """
    vartheta = as_rational(theta)
    m, s2 = float(mu(i, vartheta)), float(sigma2(i, vartheta))
    errors = []
    for n in n_values:
        mean, var = polynomial_moments(gen_poly(i, n, _tilt(n, vartheta), relaxed=relaxed))
        errors.append(max(abs(float(mean) / n - m), abs(float(var) / n - s2)))
    return rate_report(
        f"moments family {i}", n_values, errors, family=i, theta=vartheta,
        expected_slope=-1.0, tolerance=0.2, one_sided=True,
    )
