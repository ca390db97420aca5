"""
Precision contexts and exact/inexact conversions shared by the numeric modules.

Every numeric routine takes an mpmath context ``ctx``: ``fp`` for fast double
arithmetic or an ``MPContext`` from :func:`extended` for a configurable mantissa.
Contexts from :func:`extended` are private to the calling thread, so changing
precision in one worker never leaks into another.
"""
import threading
from fractions import Fraction
from numbers import Rational

from django.conf import settings
from mpmath import fp
from mpmath.ctx_mp import MPContext

from .exceptions import DomainError

DOUBLE = fp

_local = threading.local()


def extended(bits=None):
    """Return this thread's mpmath context with ``bits`` of mantissa."""
    bits = int(bits or settings.STIRLING_PRECISION_BITS)
    if bits < 64:
        raise DomainError(f"precision must be at least 64 bits, got {bits}")
    contexts = getattr(_local, 'contexts', None)
    if contexts is None:
        contexts = _local.contexts = {}
    ctx = contexts.get(bits)
    if ctx is None:
        ctx = MPContext()
        ctx.prec = bits
        contexts[bits] = ctx
    return ctx


def is_double(ctx):
    return ctx is fp


def as_rational(value):
    """
    Coerce a user-facing parameter to an exact rational.

    Accepts ints, Fractions, strings such as ``"7/2"`` or ``"0.01"`` and floats
    (read through their shortest repr, so ``0.1`` becomes ``1/10``).
    """
    if isinstance(value, bool):
        raise DomainError(f"expected a rational number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"cannot read {value!r} as a rational number") from e
    raise DomainError(f"expected a rational number, got {value!r}")


def to_ctx(ctx, value):
    """Convert an int, Fraction, float or complex into a number of ``ctx``."""
    if isinstance(value, Rational):
        if is_double(ctx):
            return float(Fraction(value))
        return ctx.mpf(int(value.numerator)) / int(value.denominator)
    if isinstance(value, complex):
        return ctx.mpc(value.real, value.imag)
    return ctx.convert(value)


def is_real(ctx, z):
    return ctx.im(z) == 0
