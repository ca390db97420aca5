"""
Zeros of the generating polynomials and their limit measures.

Real roots are isolated exactly with Sturm sequences on integer polynomials
up to ``STIRLING_STURM_MAX_DEGREE`` and certified with python-flint's ball
arithmetic above it. Empirical zero measures are compared with their limits
through Stieltjes transforms, whose boundary values on the cut give the limit
densities.
"""
import functools
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import flint
import numpy as np
from django.conf import settings
from scipy import integrate, stats

from .combinatorics import ExactPolynomial, gen_poly
from .exceptions import ConvergenceError, DomainError, IntegrityError
from .lambertw import BRANCH_POINT, w0_boundary, w0_complex
from .modphi import phi_derivs
from .numeric import DOUBLE, as_rational

logger = logging.getLogger(__name__)

MAX_DEGREE = 1000

# Below this log t the cut values of W0 come from the logarithmic form
# W + log W = log u; |u| is then too large for a direct evaluation.
LOG_FORM_BELOW = -14.0

# Upper truncation of the unbounded theta = 1 support; the t^(-3/2) tail beyond
# it is added in closed form.
UNBOUNDED_CUTOFF = 1e8

_flint_lock = threading.Lock()


# Root isolation

def _content_free(coeffs: List[int]) -> List[int]:
    g = math.gcd(*coeffs)
    return [c // g for c in coeffs] if g > 1 else coeffs


def _pseudo_remainder(a: List[int], b: List[int]) -> List[int]:
    """Positive multiple of a mod b, integer coefficients, lowest degree first."""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    scale, sign = abs(lead), (1 if lead > 0 else -1)
    while r and len(r) - 1 >= db:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [scale * c for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= sign * top * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _sturm_chain(coeffs: List[int]) -> List[List[int]]:
    chain = [_content_free(coeffs)]
    derivative = [k * c for k, c in enumerate(coeffs) if k]
    if derivative:
        chain.append(_content_free(derivative))
    while len(chain[-1]) > 1:
        rem = _pseudo_remainder(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in _content_free(rem)])
    return chain


def _sign_at(coeffs: List[int], x: Fraction) -> int:
    # den**d * p(num/den), evaluated by homogeneous Horner in integers.
    num, den = x.numerator, x.denominator
    d = len(coeffs) - 1
    acc = coeffs[-1]
    power = 1
    for k in range(d - 1, -1, -1):
        power *= den
        acc = acc * num + coeffs[k] * power
    return (acc > 0) - (acc < 0)


def _variations(chain: List[List[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_bound(coeffs: List[int]) -> Fraction:
    """Power of two above the Cauchy bound 1 + max |a_k / a_d|."""
    if len(coeffs) < 2:
        return Fraction(1)
    ratio = max(abs(c) for c in coeffs[:-1]) // abs(coeffs[-1]) + 2
    return Fraction(2 ** ratio.bit_length())


def _isolate_squarefree(chain: List[List[int]], tol: float) -> List[float]:
    q = chain[0]
    bound = _root_bound(q)
    lo, hi = -bound, bound
    stack = [(lo, hi, _variations(chain, lo), _variations(chain, hi))]
    isolated, roots = [], []
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count == 0:
            continue
        if count == 1:
            isolated.append((a, b))
            continue
        if b - a < tol * max(1, abs(a), abs(b)):
            logger.warning(f"{count} roots closer than {tol} near {float(a)}; reported as a cluster")
            roots.extend([float((a + b) / 2)] * count)
            continue
        m = (a + b) / 2
        if _sign_at(q, m) == 0:
            m += (b - a) / 2 ** 20
        vm = _variations(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))

    for a, b in isolated:
        sa = _sign_at(q, a)
        while b - a > tol * max(1, abs(a), abs(b)):
            m = (a + b) / 2
            sm = _sign_at(q, m)
            if sm == 0:
                a = b = m
                break
            if sm == sa:
                a = m
            else:
                b = m
        roots.append(float((a + b) / 2))
    return roots


def _sturm_roots(coeffs: List[int], tol: float) -> List[float]:
    if len(coeffs) <= 1:
        return []
    chain = _sturm_chain(coeffs)
    g = chain[-1]
    if len(g) == 1:
        return _isolate_squarefree(chain, tol)
    # Repeated roots: split into the squarefree part and the gcd with p'.
    p, gcd = ExactPolynomial(tuple(coeffs)), ExactPolynomial(tuple(g))
    squarefree = p.divmod(gcd)[0]
    return (_isolate_squarefree(_sturm_chain(squarefree.integer_coefficients()), tol)
            + _sturm_roots(gcd.integer_coefficients(), tol))


def _validated_roots(coeffs: List[int], bits: int) -> List[float]:
    with _flint_lock:
        saved = flint.ctx.prec
        flint.ctx.prec = bits
        try:
            found = flint.fmpz_poly(coeffs).complex_roots()
        finally:
            flint.ctx.prec = saved
    roots = []
    for c, multiplicity in found:
        if not c.imag.is_zero():
            raise IntegrityError(f"certified root {c} is not real")
        roots.extend([float(c.real)] * multiplicity)
    return roots


def real_roots(p: ExactPolynomial, precision=None, method=None) -> List[float]:
    """
    All roots of a real-rooted polynomial, sorted, repeated by multiplicity.

    ``method`` is ``'sturm'`` (exact isolation), ``'validated'`` (certified
    ball arithmetic) or None to choose by degree.
    """
    if p.is_zero():
        raise DomainError('the zero polynomial has no finite root set')
    degree = p.degree
    if degree > MAX_DEGREE:
        raise DomainError(f"real_roots supports degree <= {MAX_DEGREE}, got {degree}")
    if method is None:
        method = 'sturm' if degree <= settings.STIRLING_STURM_MAX_DEGREE else 'validated'
    if method not in ('sturm', 'validated'):
        raise DomainError(f"unknown root isolation method {method!r}")

    zeros = p.zero_root_multiplicity()
    coeffs = p.integer_coefficients()[zeros:]
    logger.debug(f"Isolating roots of a degree {degree} polynomial by {method}")
    if method == 'sturm':
        roots = _sturm_roots(coeffs, settings.STIRLING_ROOT_TOLERANCE)
    else:
        roots = _validated_roots(coeffs, int(precision or settings.STIRLING_PRECISION_BITS))
    roots = sorted(roots + [0.0] * zeros)
    if len(roots) != degree:
        raise IntegrityError(
            f"found {len(roots)} real roots for a degree {degree} polynomial; it is not real-rooted"
        )
    return roots


def real_roots_many(polys: Sequence[ExactPolynomial], precision=None, method=None) -> List[List[float]]:
    """Isolate independent polynomials on a thread pool; results follow the input order."""
    results: List[Optional[List[float]]] = [None] * len(polys)
    with ThreadPoolExecutor(max_workers=settings.STIRLING_WORKERS) as executor:
        futures = {executor.submit(real_roots, p, precision, method): idx for idx, p in enumerate(polys)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def vieta_check(p: ExactPolynomial, roots: Sequence[float]) -> float:
    """
    Relative mismatch of the root sum and of log|root product| against the
    coefficients. Zero roots are left out of the product.
    """
    d = p.degree
    coeffs = p.coeffs
    expected_sum = float(-coeffs[d - 1] / coeffs[d])
    got_sum = math.fsum(roots)
    mismatch = abs(got_sum - expected_sum) / max(1.0, abs(expected_sum))

    zeros = p.zero_root_multiplicity()
    nonzero = [r for r in roots if r != 0.0]
    if len(nonzero) == d - zeros and nonzero:
        expected_log = math.log(abs(coeffs[zeros])) - math.log(abs(coeffs[d]))
        got_log = math.fsum(math.log(abs(r)) for r in nonzero)
        mismatch = max(mismatch, abs(got_log - expected_log) / max(1.0, abs(expected_log)))
    return mismatch


def bernoulli_decomposition(p: ExactPolynomial, tol: float = 1e-8) -> List[float]:
    """
    Success probabilities 1/(1 - r_j) of independent Bernoulli variables whose
    sum has probability generating function ``p``.

    ``p`` must have nonpositive roots and p(1) = 1.
    """
    if p(Fraction(1)) != 1:
        raise DomainError('bernoulli_decomposition needs a probability generating function')
    roots = real_roots(p)
    if roots and roots[-1] > tol:
        raise IntegrityError(f"positive root {roots[-1]}: not a Bernoulli sum")
    probabilities = sorted(1.0 / (1.0 - min(r, 0.0)) for r in roots)

    product = np.array([1.0])
    for q in probabilities:
        product = np.convolve(product, [1.0 - q, q])
    pmf = np.array([float(c) for c in p.coeffs])
    if np.max(np.abs(product - pmf)) > tol:
        raise IntegrityError('Bernoulli product does not reproduce the pmf')
    return probabilities


# Empirical measures

@dataclass(frozen=True)
class RootMeasure:
    """Negated roots with mass 1/w_n each."""

    points: Tuple[float, ...]
    weight: float

    @property
    def total_mass(self) -> float:
        return len(self.points) * self.weight


def empirical_measure(p: ExactPolynomial, w_n, precision=None, method=None) -> RootMeasure:
    roots = real_roots(p, precision, method)
    tol = settings.STIRLING_ROOT_TOLERANCE
    if roots and roots[-1] > tol * max(1.0, abs(roots[0])):
        raise IntegrityError(f"positive root {roots[-1]} in a polynomial expected to have nonpositive roots")
    points = tuple(sorted(max(0.0, -r) for r in roots))
    return RootMeasure(points=points, weight=1.0 / float(w_n))


def stieltjes_empirical(m: RootMeasure, z) -> complex:
    """(1 / w_n) sum_j 1 / (z - x_j)."""
    z = complex(z)
    points = np.asarray(m.points)
    if z.imag == 0 and z.real >= 0 and points.size and np.min(np.abs(points - z.real)) <= 1e-12:
        raise DomainError(f"z={z} coincides with an atom of the measure")
    return complex(m.weight * np.sum(1.0 / (z - points)))


# Limit measures

def _check_off_support(z, upper=None):
    z = complex(z)
    if z.imag == 0 and z.real >= 0 and (upper is None or z.real <= upper):
        raise DomainError(f"z={z} lies on the support of the limit measure")
    return z


def stieltjes_limit_elbert(z) -> complex:
    """1 - exp(W0(-1/z)), the transform of the limit of the scaled Touchard zeros."""
    z = _check_off_support(z, math.e)
    return complex(1 - DOUBLE.exp(w0_complex(-1 / z)))


def m_theta(theta) -> float:
    """Right end of the support of the family-3 zero limit; +inf for theta = 1."""
    theta = float(theta)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if theta == 1:
        return math.inf
    return 1.0 / math.expm1(math.log(theta) + 1 / theta - 1)


def stieltjes_limit_Z3(z, theta) -> complex:
    """
    theta/z - theta^2 / (z (z + 1)) * W0(u) / (1 + theta W0(u)),
    u = (-1/z - 1) / (theta e^(1/theta)).
    """
    theta = float(theta)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    z = _check_off_support(z)
    c = theta * math.exp(1 / theta)
    if z == -1:
        # W0(u) / (z + 1) -> 1/c at the removable point z = -1.
        return complex(-theta + theta * theta / c)
    w = w0_complex((-1 / z - 1) / c)
    return complex(theta / z - theta * theta / (z * (z + 1)) * w / (1 + theta * w))


def stieltjes_limit(i, z, theta) -> complex:
    """phi_i'(log(-z); theta) / z: the transform of the zero limit of family i."""
    z = _check_off_support(z)
    log_neg = DOUBLE.log(-z)
    return complex(phi_derivs(i, log_neg, theta, strict=False)[0] / z)


def _cut_w0_from_log(ell):
    """W0(u + i0) for u << -1/e, from ell = log|u| + i pi by Newton on W + log W = ell."""
    w = ell - DOUBLE.log(ell)
    for _ in range(50):
        step = (w + DOUBLE.log(w) - ell) / (1 + 1 / w)
        w -= step
        if abs(step) <= 4e-16 * abs(w):
            return w
    raise ConvergenceError(f"cut value of W0 at log u = {ell} did not converge")


def _elbert_weight(s) -> float:
    # t f(t) at t = e^s.
    if s >= 1:
        return 0.0
    if s < LOG_FORM_BELOW:
        w = _cut_w0_from_log(complex(-s, math.pi))
        return (-1 / w).imag / math.pi
    t = math.exp(s)
    u = -1 / t
    if u >= BRANCH_POINT:
        return 0.0
    return t * DOUBLE.exp(w0_boundary(u)).imag / math.pi


def elbert_density(t) -> float:
    """Density (1/pi) Im exp(W0(-1/t + i0)) on (0, e), zero beyond."""
    t = float(t)
    if t <= 0:
        raise DomainError(f"density needs t > 0, got {t}")
    if -1 / t >= BRANCH_POINT:
        return 0.0
    return DOUBLE.exp(w0_boundary(-1 / t)).imag / math.pi


def _g_weight(theta, s) -> float:
    # t g_theta(t) at t = e^s.
    c_log = math.log(theta) + 1 / theta
    t = math.exp(s)
    if s < LOG_FORM_BELOW:
        w = _cut_w0_from_log(complex(-s + math.log1p(t) - c_log, math.pi))
    else:
        u = -(1 / t + 1) * math.exp(-c_log)
        if u >= BRANCH_POINT:
            return 0.0
        w = w0_boundary(u)
    return theta * theta / (math.pi * (t + 1)) * (w / (1 + theta * w)).imag


def density_g(theta, t) -> float:
    """Density of the family-3 zero limit; vanishes for t >= m_theta."""
    theta, t = float(theta), float(t)
    if t <= 0:
        raise DomainError(f"density needs t > 0, got {t}")
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if t >= m_theta(theta):
        return 0.0
    return _g_weight(theta, math.log(t)) / t


def density_edge_constant(theta) -> float:
    """Limit of g_theta(m_theta - eps) / sqrt(eps) as eps -> 0, theta != 1."""
    theta = float(theta)
    if theta == 1:
        raise DomainError('the theta = 1 limit has unbounded support')
    m = m_theta(theta)
    c = theta * math.exp(1 / theta)
    kappa = math.sqrt(2 * math.e / (c * m * m))
    return theta * theta * kappa / (math.pi * m * (m + 1) * (1 - theta) ** 2)


@dataclass(frozen=True)
class LimitSpec:
    stieltjes: Callable
    density: Optional[Callable]
    support_upper: float
    total_mass: float
    log_weight: Optional[Callable] = None


def limit_spec(i, theta) -> LimitSpec:
    """
    Zero limit of family i with theta = vartheta * n and w_n = n.

    ``log_weight(s)`` is t * density(t) at t = e^s, the integrand in log scale.
    """
    theta = float(theta)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    transform = functools.partial(stieltjes_limit, i, theta=theta)
    if i == 1:
        return LimitSpec(
            stieltjes=transform,
            density=lambda t: theta if 0 < t < 1 / theta else 0.0,
            support_upper=1 / theta,
            total_mass=1.0,
            log_weight=lambda s: theta * math.exp(s) if s < -math.log(theta) else 0.0,
        )
    if i == 2:
        return LimitSpec(
            stieltjes=transform,
            density=lambda t: theta * elbert_density(theta * t),
            support_upper=math.e / theta,
            total_mass=1.0,
            log_weight=lambda s: _elbert_weight(s + math.log(theta)),
        )
    if i == 3:
        return LimitSpec(
            stieltjes=functools.partial(stieltjes_limit_Z3, theta=theta),
            density=functools.partial(density_g, theta),
            support_upper=m_theta(theta),
            total_mass=1.0 if theta >= 1 else theta,
            log_weight=functools.partial(_g_weight, theta),
        )
    raise DomainError(f"family must be one of (1, 2, 3), got {i!r}")


def _log_quad(f, upper) -> float:
    # The integrand in log scale decays like 1/s^2 as s -> -inf.
    split = min(LOG_FORM_BELOW, upper - 1)
    head, _ = integrate.quad(f, -np.inf, split, limit=200, epsabs=1e-11, epsrel=1e-10)
    body, _ = integrate.quad(f, split, upper, limit=200, epsabs=1e-11, epsrel=1e-10)
    return head + body


def integrate_density(i, theta) -> float:
    """Total mass of the density of the zero limit of family i, by quadrature in log t."""
    spec = limit_spec(i, theta)
    upper = spec.support_upper
    tail = 0.0
    if math.isinf(upper):
        upper = UNBOUNDED_CUTOFF
        tail = math.sqrt(2) / (math.pi * math.sqrt(upper))
    total = _log_quad(spec.log_weight, math.log(upper)) + tail
    logger.debug(f"Density mass of family {i}, theta={theta}: {total}")
    return total


def stieltjes_from_density(i, theta, z) -> complex:
    """Transform of the limit density by quadrature, an oracle for the closed forms."""
    z = _check_off_support(z)
    spec = limit_spec(i, theta)
    upper = spec.support_upper if not math.isinf(spec.support_upper) else UNBOUNDED_CUTOFF
    log_upper = math.log(upper)
    re = _log_quad(lambda s: (spec.log_weight(s) / (z - math.exp(s))).real, log_upper)
    im = _log_quad(lambda s: (spec.log_weight(s) / (z - math.exp(s))).imag, log_upper)
    return complex(re, im)


# Laguerre polynomials and finite free convolution

def _binomial(a: Fraction, m: int) -> Fraction:
    """Generalised binomial coefficient C(a, m) for rational a."""
    if m < 0:
        return Fraction(0)
    result = Fraction(1)
    for j in range(m):
        result = result * (a - j) / (j + 1)
    return result


def laguerre(n: int, alpha) -> ExactPolynomial:
    """L_n^(alpha)(x) = sum_k (-1)^k C(n + alpha, n - k) x^k / k!."""
    if n < 0:
        raise DomainError(f"laguerre needs n >= 0, got {n}")
    alpha = as_rational(alpha)
    return ExactPolynomial(tuple(
        (-1) ** k * _binomial(n + alpha, n - k) / math.factorial(k) for k in range(n + 1)
    ))


def laguerre_dual_factor(n: int, theta) -> ExactPolynomial:
    """n! x^n L_n^(theta - n)(1/x): coefficient of x^j is n! (-1)^(n-j) C(theta, j) / (n - j)!."""
    theta = as_rational(theta)
    return ExactPolynomial(tuple(
        math.factorial(n) * (-1) ** (n - j) * _binomial(theta, j) / math.factorial(n - j)
        for j in range(n + 1)
    ))


def finite_free_mult_conv(p: ExactPolynomial, q: ExactPolynomial, n: int) -> ExactPolynomial:
    """p boxtimes_n q = sum_k (-1)^(n-k) a_k b_k / C(n, k) x^k."""
    if p.degree > n or q.degree > n:
        raise DomainError(f"finite_free_mult_conv needs degrees <= {n}, got {p.degree} and {q.degree}")
    a = p.coeffs + (Fraction(0),) * (n + 1 - len(p.coeffs))
    b = q.coeffs + (Fraction(0),) * (n + 1 - len(q.coeffs))
    return ExactPolynomial(tuple(
        (-1) ** (n - k) * a[k] * b[k] / math.comb(n, k) for k in range(n + 1)
    ))


# Marchenko-Pastur law

def _mp_edges(theta) -> Tuple[float, float]:
    root = math.sqrt(theta)
    return (root - 1) ** 2, (root + 1) ** 2


def mp_atom_weight(theta) -> float:
    theta = float(theta)
    return max(0.0, 1.0 - theta)


def mp_density(theta, x) -> float:
    """sqrt((b - x)(x - a)) / (2 pi x) on [a, b] = [(sqrt theta -/+ 1)^2]; the atom is separate."""
    theta, x = float(theta), float(x)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    a, b = _mp_edges(theta)
    if x <= a or x >= b or x <= 0:
        return 0.0
    return math.sqrt((b - x) * (x - a)) / (2 * math.pi * x)


def mp_cdf(theta, x) -> float:
    theta, x = float(theta), float(x)
    if x < 0:
        return 0.0
    a, b = _mp_edges(theta)
    mass = mp_atom_weight(theta)
    if x <= a:
        return mass
    value, _ = integrate.quad(lambda y: mp_density(theta, y), a, min(x, b), limit=200)
    return min(1.0, mass + value)


def ks_distance(points: Sequence[float], cdf: Callable[[float], float]) -> float:
    """Kolmogorov-Smirnov distance between the empirical law of ``points`` and ``cdf``."""
    return float(stats.kstest(np.asarray(points, dtype=float), np.vectorize(cdf)).statistic)


def laguerre_zero_points(n: int, theta, precision=None, method=None) -> List[float]:
    """Zeros of y -> L_n^(theta n - n)(n y)."""
    alpha = as_rational(theta) * n - n
    return real_roots(laguerre(n, alpha).scale(n), precision, method)


def smallest_root_exponent(ns: Sequence[int], precision=None) -> Dict[str, object]:
    """
    Fitted exponent of |smallest root| of the family-3 polynomial with theta = n
    against n. Diagnostic only.
    """
    values = []
    for n in ns:
        roots = real_roots(gen_poly(3, n, n), precision)
        values.append(abs(roots[0]))
    slope = float(np.polyfit(np.log(ns), np.log(values), 1)[0])
    logger.info(f"Smallest root exponent over n={list(ns)}: {slope:.3f}")
    return {'n_values': list(ns), 'values': values, 'exponent': slope}
