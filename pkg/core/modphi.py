"""
Closed-form limit objects of the Stirling laws under the tilt theta = vartheta * n.

For each family i the normalised moment generating function satisfies

    E exp(z X) / exp(n phi_i(z)) -> Psi_i(z)

on a strip around the real axis. This module evaluates L1, L2, L3, phi_i,
Psi_i and their derivatives, the asymptotic mean and variance, the inverse
mean maps and the large deviation rate functions.
"""
import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy import optimize

from .exceptions import BranchCutError, DomainError
from .lambertw import branch_point, w0_complex, w0_real, wm1_real
from .numeric import DOUBLE, is_double

logger = logging.getLogger(__name__)

FAMILIES = (1, 2, 3)

INF = float('inf')


def _family(i):
    if i not in FAMILIES:
        raise DomainError(f"family must be one of {FAMILIES}, got {i!r}")
    return i


def _theta(ctx, theta):
    theta = ctx.convert(theta)
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta}")
    return theta


def _log1p(ctx, x):
    if is_double(ctx) and not isinstance(x, complex):
        return math.log1p(x)
    return ctx.log1p(x)


def _w0(ctx, u):
    """W0 of a point off the cut, real-valued for real arguments."""
    u = ctx.convert(u)
    if ctx.im(u) == 0:
        x = ctx.re(u)
        if x < branch_point(ctx):
            raise BranchCutError(x)
        return w0_real(x, ctx)
    return w0_complex(u, ctx)


def _off_negative_axis(ctx, z, name):
    z = ctx.convert(z)
    if ctx.im(z) == 0 and ctx.re(z) <= 0:
        raise DomainError(f"{name} is undefined on (-inf, 0], got {z}")
    return z


def L1(z, ctx=DOUBLE):
    """(z + 1) log(z + 1) - z log z."""
    z = _off_negative_axis(ctx, z, 'L1')
    return (z + 1) * ctx.log(z + 1) - z * ctx.log(z)


def L2(z, ctx=DOUBLE):
    """W0(1/z) + 1/W0(1/z) - z + log z."""
    z = _off_negative_axis(ctx, z, 'L2')
    w = _w0(ctx, 1 / z)
    return w + 1 / w - z + ctx.log(z)


def L3(z, theta, ctx=DOUBLE):
    """1/theta + W0(theta^-1 (e^-z - 1) e^(-1/theta))."""
    theta = _theta(ctx, theta)
    z = ctx.convert(z)
    u = ctx.expm1(-z) * ctx.exp(-1 / theta) / theta
    return 1 / theta + _w0(ctx, u)


@functools.lru_cache(maxsize=256)
def guaranteed_strip(i, theta):
    """
    Half-width h of the strip |Im z| < h on which phi_i and Psi_i are evaluated.

    Largest h <= 1 on a 0.1 grid such that, over Re z in [-8, 8], the Lambert W
    arguments stay off the cut and the logarithm/square root arguments stay in
    the right half plane; returned with a 10% margin.
    """
    _family(i)
    theta = float(theta)
    for h in np.arange(1.0, 0.05, -0.1):
        if _strip_is_clear(i, theta, h):
            logger.debug(f"Strip half-width for family {i}, theta={theta}: {0.9 * h}")
            return 0.9 * h
    raise DomainError(f"no analytic strip found for family {i}, theta={theta}")


def _strip_is_clear(i, theta, h):
    bp = branch_point()
    for a in np.linspace(-8.0, 8.0, 65):
        for b in np.linspace(-h, h, 9):
            z = complex(a, b)
            try:
                if i in (1, 2):
                    arg = theta * np.exp(z)
                    if arg.imag == 0 and arg.real <= 0:
                        return False
                    if i == 2:
                        u = 1 / arg
                        if u.imag == 0 and u.real < bp:
                            return False
                else:
                    l3 = L3(z, theta)
                    if complex(l3).real <= 0 or complex(theta * l3 + theta - 1).real <= 0:
                        return False
            except DomainError:
                return False
    return True


def _check_strip(i, z, theta, ctx):
    h = guaranteed_strip(i, float(theta))
    if abs(float(ctx.im(z))) >= h:
        raise DomainError(f"Im z = {ctx.im(z)} outside the strip |Im z| < {h} of family {i}")


def phi(i, z, theta, ctx=DOUBLE, strict=True):
    """
    Mod-phi exponent phi_i(z; theta).

    ``strict`` confines z to :func:`guaranteed_strip`; the closed forms stay
    analytic beyond it and callers continuing them analytically pass False.
    """
    _family(i)
    theta = _theta(ctx, theta)
    z = ctx.convert(z)
    if strict:
        _check_strip(i, z, theta, ctx)
    if i == 1:
        return L1(theta * ctx.exp(z), ctx) - L1(theta, ctx)
    if i == 2:
        return L2(theta * ctx.exp(z), ctx) - L2(theta, ctx)
    l3 = L3(z, theta, ctx)
    return (theta - 1) * ctx.log(theta) - 1 + (theta - 1) * ctx.log(l3) + theta * (z + l3)


def psi(i, z, theta, ctx=DOUBLE, strict=True):
    """Limit function Psi_i(z; theta) of the normalised moment generating function."""
    _family(i)
    theta = _theta(ctx, theta)
    z = ctx.convert(z)
    if strict:
        _check_strip(i, z, theta, ctx)
    if i == 1:
        return ctx.exp(z / 2) * ctx.sqrt((theta + 1) / (theta * ctx.exp(z) + 1))
    if i == 2:
        return ctx.sqrt((_w0(ctx, 1 / theta) + 1) / (_w0(ctx, ctx.exp(-z) / theta) + 1))
    l3 = L3(z, theta, ctx)
    return ctx.sqrt(theta / (theta * l3 + theta - 1))


def phi_derivs(i, z, theta, ctx=DOUBLE, strict=True):
    """(phi_i', phi_i'') at z."""
    _family(i)
    theta = _theta(ctx, theta)
    z = ctx.convert(z)
    if strict:
        _check_strip(i, z, theta, ctx)
    a = theta * ctx.exp(z)
    if i == 1:
        d1 = a * _log1p(ctx, 1 / a)
        return d1, d1 - 1 / (1 + 1 / a)
    if i == 2:
        w = _w0(ctx, 1 / a)
        return 1 / w - a, 1 / (w * (1 + w)) - a

    # Family 3, written through q = exp(-W - z - 1/theta) = -theta W / (e^z - 1)
    # so that z = 0 is a regular point.
    w = L3(z, theta, ctx) - 1 / theta
    q = ctx.exp(-w - z - 1 / theta)
    s = 1 + theta * w
    wz = -q / (theta * (1 + w))
    d1 = theta - theta * q / s
    d2 = -theta * q * ((-wz - 1) * s - theta * wz) / (s * s)
    return d1, d2


def mu(i, theta, ctx=DOUBLE):
    """Asymptotic mean rate: E X / n -> mu_i(theta)."""
    _family(i)
    theta = _theta(ctx, theta)
    if i == 1:
        return theta * _log1p(ctx, 1 / theta)
    if i == 2:
        return 1 / _w0(ctx, 1 / theta) - theta
    return -theta * ctx.expm1(-1 / theta)


def sigma2(i, theta, ctx=DOUBLE):
    """Asymptotic variance rate: Var X / n -> sigma_i^2(theta)."""
    _family(i)
    theta = _theta(ctx, theta)
    if i == 1:
        return mu(1, theta, ctx) - theta / (1 + theta)
    if i == 2:
        w = _w0(ctx, 1 / theta)
        return 1 / (w * (1 + w)) - theta
    e = ctx.exp(-1 / theta)
    return theta * e * (1 - e - e / theta)


def mu_inverse(i, t, ctx=DOUBLE):
    """Inverse of theta -> mu_i(theta) on (0, 1), for i in {1, 2}."""
    if i not in (1, 2):
        raise DomainError(f"mu_inverse is defined for families 1 and 2, got {i!r}")
    t = ctx.convert(t)
    if not 0 < t < 1:
        raise DomainError(f"mu_inverse needs t in (0, 1), got {t}")
    if i == 1:
        return -t / (t + wm1_real(-t * ctx.exp(-t), ctx))
    return t / (1 + t * w0_real(-ctx.exp(-1 / t) / t, ctx)) - t


def _rate3_interior(t, theta, ctx):
    a = mu_inverse(2, t, ctx)
    return ((t - 1) * ctx.log(a) - 1 / (t + a) + (theta - t) * ctx.log(theta - t)
            + 1 - (theta - 1) * ctx.log(theta))


def rate(i, t, theta, ctx=DOUBLE):
    """
    Large deviation rate function I_i(t; theta).

    Families 1 and 2 live on [0, 1]. Family 3 lives on (0, 1] for theta >= 1
    and on (0, theta] for theta < 1. The endpoint values are the closed forms;
    +inf is returned off the domain.
    """
    _family(i)
    theta = _theta(ctx, theta)
    t = ctx.convert(t)

    if i in (1, 2):
        L = L1 if i == 1 else L2
        if t < 0 or t > 1:
            return ctx.inf
        if t == 0:
            return L1(theta, ctx) if i == 1 else ctx.inf
        if t == 1:
            return L(theta, ctx) - 1 - ctx.log(theta)
        a = mu_inverse(i, t, ctx)
        return t * ctx.log(a) - L(a, ctx) - (t * ctx.log(theta) - L(theta, ctx))

    upper = 1 if theta >= 1 else theta
    if t <= 0 or t > upper:
        return ctx.inf
    if t < upper:
        return _rate3_interior(t, theta, ctx)
    if theta > 1:
        return (theta - 1) * ctx.log(theta - 1) + 1 - (theta - 1) * ctx.log(theta)
    if theta == 1:
        return ctx.mpf(1)
    a = mu_inverse(2, theta, ctx)
    return (theta - 1) * ctx.log(a) - 1 / (theta + a) + 1 - (theta - 1) * ctx.log(theta)


def legendre_transform(i, t, theta, bound=40.0):
    """
    sup_z (t z - phi_i(z; theta)) over real z, by solving phi_i'(z) = t.

    Used as an independent oracle for :func:`rate` on interior points.
    """
    def slope(z):
        return float(phi_derivs(i, z, theta, strict=False)[0]) - t

    lo, hi = -1.0, 1.0
    while slope(lo) > 0 and lo > -bound:
        lo *= 2
    while slope(hi) < 0 and hi < bound:
        hi *= 2
    if slope(lo) > 0 or slope(hi) < 0:
        raise DomainError(f"t={t} is outside the range of phi_{i}' on [-{bound}, {bound}]")
    z = optimize.brentq(slope, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return t * z - float(phi(i, z, theta, strict=False))


def sigma_argmax(i, lo=1e-2, hi=1e2, points=400):
    """
    Maximiser of theta -> sigma_i(theta).

    A log-spaced scan brackets the maximum, golden-section search refines it.
    Several local maxima are logged; the largest is returned.
    """
    _family(i)
    grid = np.geomspace(lo, hi, points)
    values = np.array([float(sigma2(i, g)) for g in grid])
    peaks = [j for j in range(1, points - 1) if values[j] >= values[j - 1] and values[j] >= values[j + 1]]
    if not peaks:
        raise DomainError(f"sigma_{i} has no interior maximum on [{lo}, {hi}]")

    def negative_sigma(theta):
        return -math.sqrt(float(sigma2(i, theta)))

    maxima = []
    for j in peaks:
        result = optimize.minimize_scalar(
            negative_sigma, bracket=(grid[j - 1], grid[j], grid[j + 1]), method='golden', tol=1e-10
        )
        maxima.append((result.fun, float(result.x)))
    if len(maxima) > 1:
        logger.warning(f"sigma_{i} has {len(maxima)} local maxima: {[x for _, x in maxima]}")
    return min(maxima)[1]


@dataclass(frozen=True)
class ModPhiLimit:
    family: int
    theta: float
    phi: Callable
    psi: Callable
    domain_halfwidth: float


def mod_phi_limit(i, theta) -> ModPhiLimit:
    _family(i)
    theta = float(_theta(DOUBLE, theta))
    return ModPhiLimit(
        family=i,
        theta=theta,
        phi=functools.partial(phi, i, theta=theta),
        psi=functools.partial(psi, i, theta=theta),
        domain_halfwidth=guaranteed_strip(i, theta),
    )


def mu_sigma_curve(i, thetas: Sequence[float]) -> List[Dict[str, float]]:
    """Rows (theta, mu_i, sigma_i^2, sigma_i) for plotting the mean/variance landscape."""
    rows = []
    for theta in thetas:
        s2 = float(sigma2(i, theta))
        rows.append({'theta': float(theta), 'mu': float(mu(i, theta)), 'sigma2': s2, 'sigma': math.sqrt(s2)})
    return rows


def rate_curve(i, theta, ts: Sequence[float]) -> List[Tuple[float, float]]:
    return [(float(t), float(rate(i, t, theta))) for t in ts]
