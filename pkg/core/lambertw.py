"""
Lambert W: the real branches W0 and W-1, the principal branch on the slit
plane, its one-sided values on the cut (-inf, -1/e], the derivative and the
Puiseux expansion at the branch point.

All functions take an mpmath context ``ctx`` (``fp`` by default) so the same
code serves double and extended precision.
"""
import logging
from enum import Enum

from .exceptions import BranchCutError, ConvergenceError, DomainError
from .numeric import DOUBLE, is_double

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 100

# Half-width of the neighbourhood of -1/e where boundary values are seeded by
# the Puiseux expansion instead of Richardson extrapolation.
PUISEUX_RADIUS = 1e-3

RICHARDSON_STEPS = (1e-6, 1e-7, 1e-8)


class CutSide(str, Enum):
    ABOVE = 'above'
    BELOW = 'below'


class PuiseuxSide(str, Enum):
    INSIDE = 'inside'
    ABOVE_CUT = 'above-cut'
    BELOW_CUT = 'below-cut'


def branch_point(ctx=DOUBLE):
    """-1/e at the working precision of ``ctx``."""
    return -ctx.exp(-1)


BRANCH_POINT = branch_point()


def _halley(ctx, z, w):
    """
    Solve w*exp(w) = z by Halley's method from the initial guess ``w``.

    Stops on a step below the working tolerance or a residual at rounding
    level; the residual test matters next to the branch point where the
    steps stall at the size of the rounding noise.
    """
    tol = 4 * ctx.eps
    scale = max(1, ctx.fabs(z))
    for _ in range(MAX_ITERATIONS):
        ew = ctx.exp(w)
        f = w * ew - z
        if ctx.fabs(f) <= ctx.eps * scale:
            return w
        w1 = w + 1
        if w1 == 0:
            w1 = ctx.eps
        dw = f / (ew * w1 - (w + 2) * f / (2 * w1))
        w = w - dw
        if ctx.fabs(dw) <= tol * (2 + ctx.fabs(w)):
            return w
    if ctx.fabs(w * ctx.exp(w) - z) <= 64 * ctx.eps * scale:
        return w
    raise ConvergenceError(f"Halley iteration for W({z}) did not converge")


def _near_branch_seed(ctx, p):
    # Puiseux series in p = sqrt(2(ez+1)); the sign/phase of p picks the sheet.
    return -1 + p - p * p / 3 + 11 * p ** 3 / 72


def _check_real(ctx, x, name):
    x = ctx.convert(x)
    if ctx.im(x) != 0:
        raise DomainError(f"{name} expects a real argument, got {x}")
    return ctx.re(x)


def _clamp_to_branch_point(ctx, x):
    """Return ``x`` or -1/e when ``x`` undershoots it by rounding only."""
    bp = branch_point(ctx)
    if x < bp:
        if bp - x <= 8 * ctx.eps * ctx.fabs(bp):
            return bp
        raise DomainError(f"{x} is below the branch point -1/e")
    return x


def w0_real(x, ctx=DOUBLE):
    """
    Principal branch on [-1/e, inf): the unique w >= -1 with w*exp(w) = x.
    """
    x = _clamp_to_branch_point(ctx, _check_real(ctx, x, 'w0_real'))
    if x == 0:
        return ctx.mpf(0)
    bp = branch_point(ctx)
    if x == bp:
        return ctx.mpf(-1)
    if not is_double(ctx) and ctx.fabs(x) < 1e300:
        w = ctx.convert(w0_real(float(x)))
    elif x < -0.25:
        w = _near_branch_seed(ctx, ctx.sqrt(max(0, 2 * (ctx.e * x + 1))))
    elif x < 3:
        w = ctx.log(1 + x)
    else:
        l1 = ctx.log(x)
        l2 = ctx.log(l1)
        w = l1 - l2 + l2 / l1
    w = _halley(ctx, x, w)
    return max(w, ctx.mpf(-1))


def wm1_real(x, ctx=DOUBLE):
    """
    Lower real branch on [-1/e, 0): the unique w <= -1 with w*exp(w) = x.
    """
    x = _clamp_to_branch_point(ctx, _check_real(ctx, x, 'wm1_real'))
    if x >= 0:
        raise DomainError(f"wm1_real is defined on [-1/e, 0), got {x}")
    if x == branch_point(ctx):
        return ctx.mpf(-1)
    if not is_double(ctx) and x < -1e-300:
        w = ctx.convert(wm1_real(float(x)))
    elif x < -0.25:
        w = _near_branch_seed(ctx, -ctx.sqrt(max(0, 2 * (ctx.e * x + 1))))
    else:
        l1 = ctx.log(-x)
        l2 = ctx.log(-l1)
        w = l1 - l2 + l2 / l1
    w = _halley(ctx, x, w)
    return min(w, ctx.mpf(-1))


def w0_complex(z, ctx=DOUBLE):
    """
    Principal branch on the plane slit along (-inf, -1/e].

    Real arguments on the cut raise :class:`BranchCutError`; one-sided
    values there come from :func:`w0_boundary`.
    """
    z = ctx.convert(z)
    x, y = ctx.re(z), ctx.im(z)
    if y == 0:
        bp = branch_point(ctx)
        if x < bp:
            raise BranchCutError(z)
        return ctx.mpc(w0_real(x, ctx), 0)

    if not is_double(ctx) and 1e-300 < ctx.fabs(z) < 1e300:
        w = ctx.convert(w0_complex(complex(z)))
    elif ctx.fabs(z - branch_point(ctx)) <= 1.5:
        w = ctx.sqrt(2 * ctx.e * z + 2) - 1
    else:
        l1 = ctx.log(z)
        w = l1 - ctx.log(l1)
    w = _halley(ctx, z, ctx.mpc(w))
    if ctx.fabs(ctx.im(w)) >= ctx.pi:
        raise ConvergenceError(f"Halley iteration for W0({z}) left the principal branch")
    return w


def _extrapolate_to_zero(steps, values):
    # Neville-Aitken evaluation at h = 0 of the interpolant through (h_i, v_i).
    total = 0
    for i, (hi, vi) in enumerate(zip(steps, values)):
        weight = 1
        for j, hj in enumerate(steps):
            if j != i:
                weight *= hj / (hj - hi)
        total += weight * vi
    return total


def w0_boundary(x, side=CutSide.ABOVE, ctx=DOUBLE):
    """
    One-sided value W0(x +/- i0) for x < -1/e.

    Above the cut the imaginary part lies in (0, pi); the value below the cut
    is the complex conjugate.
    """
    side = CutSide(side)
    x = _check_real(ctx, x, 'w0_boundary')
    bp = branch_point(ctx)
    if x >= bp:
        raise DomainError(f"w0_boundary expects x < -1/e, got {x}")

    delta = bp - x
    if delta <= PUISEUX_RADIUS:
        s = ctx.sqrt(2 * ctx.e * delta)
        w = _near_branch_seed(ctx, ctx.mpc(0, s))
    else:
        steps = [ctx.convert(h) for h in RICHARDSON_STEPS]
        values = [w0_complex(ctx.mpc(x, h), ctx) for h in steps]
        w = _extrapolate_to_zero(steps, values)
    w = _halley(ctx, ctx.mpc(x, 0), ctx.mpc(w))

    if not 0 < ctx.im(w) < ctx.pi:
        raise ConvergenceError(f"boundary value of W0 at {x} left the upper sheet: {w}")
    return w if side is CutSide.ABOVE else ctx.conj(w)


def w0_at(z, side=CutSide.ABOVE, ctx=DOUBLE):
    """W0(z), reading real arguments on the cut as the ``side`` boundary value."""
    z = ctx.convert(z)
    if ctx.im(z) == 0 and ctx.re(z) < branch_point(ctx):
        return w0_boundary(ctx.re(z), side, ctx)
    return w0_complex(z, ctx)


def w0_derivative(z, ctx=DOUBLE):
    """W0'(z) = W0(z) / (z (1 + W0(z))), with the removable value 1 at z = 0."""
    z = ctx.convert(z)
    if z == 0:
        return ctx.mpf(1)
    w = w0_complex(z, ctx)
    if w + 1 == 0:
        raise DomainError('W0 is not differentiable at the branch point -1/e')
    return w / (z * (1 + w))


def w0_puiseux(delta, side=PuiseuxSide.INSIDE, ctx=DOUBLE):
    """
    Two-term expansion of W0 at distance ``delta`` from -1/e.

    ``inside`` gives W0(-1/e + delta); the cut sides give W0(-1/e - delta +/- i0).
    """
    side = PuiseuxSide(side)
    delta = _check_real(ctx, delta, 'w0_puiseux')
    if not 0 < delta < 0.1:
        raise DomainError(f"Puiseux expansion needs 0 < delta < 0.1, got {delta}")
    s = ctx.sqrt(2 * ctx.e * delta)
    if side is PuiseuxSide.INSIDE:
        return -1 + s
    if side is PuiseuxSide.ABOVE_CUT:
        return ctx.mpc(-1, s)
    return ctx.mpc(-1, -s)
