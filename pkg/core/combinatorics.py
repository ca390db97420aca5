"""
Exact combinatorics: Stirling triangles of both kinds, Bell numbers, Touchard
polynomials and the three Stirling distributions with their generating
polynomials and moment generating functions.

Everything here is exact (Python ints and Fractions) except :func:`log_mgf`,
which evaluates in extended precision.
"""
import itertools
import logging
import math
import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from django.conf import settings

from .exceptions import DomainError, IntegrityError, PrecisionError
from .numeric import DOUBLE, as_rational, extended, to_ctx

logger = logging.getLogger(__name__)

FAMILIES = (1, 2, 3)


class StirlingKind(str, Enum):
    FIRST = 'first'
    SECOND = 'second'


class StirlingTriangle:
    """
    Rows of unsigned Stirling numbers c(n, k), 0 <= k <= n <= n_max.

    Rows are produced by the triangular recurrence on demand. The most recently
    requested rows are kept (``cache_rows`` of them) together with the furthest
    row reached, so increasing sweeps over n cost one recurrence step per row.
    Row extension is serialised by a lock; readers get immutable tuples.
    """

    def __init__(self, kind, n_max=None, cache_rows=None):
        self.kind = StirlingKind(kind)
        self.n_max = settings.STIRLING_N_MAX if n_max is None else n_max
        self.cache_rows = cache_rows or settings.STIRLING_ROW_CACHE
        self._rows: 'OrderedDict[int, Tuple[int, ...]]' = OrderedDict({0: (1,)})
        self._frontier: Tuple[int, Tuple[int, ...]] = (0, (1,))
        self._lock = threading.Lock()

    def _step(self, n, row):
        """Row n+1 from row n."""
        nxt = [0] * (n + 2)
        if self.kind is StirlingKind.FIRST:
            for k in range(1, n + 2):
                nxt[k] = (n * row[k] if k <= n else 0) + row[k - 1]
        else:
            for k in range(1, n + 2):
                nxt[k] = (k * row[k] if k <= n else 0) + row[k - 1]
        return tuple(nxt)

    def row(self, n: int) -> Tuple[int, ...]:
        """c(n, 0), ..., c(n, n)."""
        if not 0 <= n <= self.n_max:
            raise DomainError(f"row {n} outside 0..{self.n_max} ({self.kind.value} kind)")
        with self._lock:
            cached = self._rows.get(n)
            if cached is not None:
                self._rows.move_to_end(n)
                return cached

            start_n, row = self._frontier
            if start_n > n:
                start_n = max((k for k in self._rows if k < n), default=0)
                row = self._rows.get(start_n, (1,))
            if n - start_n > 200:
                logger.info(f"Extending {self.kind.value}-kind triangle from row {start_n} to {n}")
            for m in range(start_n, n):
                row = self._step(m, row)

            if n > self._frontier[0]:
                self._frontier = (n, row)
            self._rows[n] = row
            while len(self._rows) > self.cache_rows:
                self._rows.popitem(last=False)
            return row

    def __call__(self, n: int, k: int) -> int:
        if not 1 <= k <= n <= self.n_max:
            raise DomainError(f"stirling({self.kind.value}, {n}, {k}) needs 1 <= k <= n <= {self.n_max}")
        return self.row(n)[k]


_triangles: Dict[StirlingKind, StirlingTriangle] = {}
_triangles_lock = threading.Lock()


def triangle(kind) -> StirlingTriangle:
    """Process-wide triangle of the given kind."""
    kind = StirlingKind(kind)
    with _triangles_lock:
        if kind not in _triangles:
            _triangles[kind] = StirlingTriangle(kind)
        return _triangles[kind]


def stirling(kind, n: int, k: int) -> int:
    return triangle(kind)(n, k)


def bell(n: int) -> int:
    if n < 1:
        raise DomainError(f"bell(n) needs n >= 1, got {n}")
    return sum(triangle(StirlingKind.SECOND).row(n))


@dataclass(frozen=True)
class ExactPolynomial:
    """Dense polynomial with Fraction coefficients, ``coeffs[k]`` multiplying x**k."""

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def monomial(cls, k: int, c=1) -> 'ExactPolynomial':
        return cls((0,) * k + (c,))

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> 'ExactPolynomial':
        p = cls((leading,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Highest index with a nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def zero_root_multiplicity(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate(self, x, ctx=DOUBLE):
        """Horner evaluation in the arithmetic of ``ctx``."""
        acc = ctx.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + to_ctx(ctx, c)
        return acc

    def __add__(self, other: 'ExactPolynomial') -> 'ExactPolynomial':
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (size - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (size - len(other.coeffs))
        return ExactPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> 'ExactPolynomial':
        return ExactPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: 'ExactPolynomial') -> 'ExactPolynomial':
        return self + (-other)

    def __mul__(self, other) -> 'ExactPolynomial':
        if not isinstance(other, ExactPolynomial):
            return ExactPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return ExactPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return ExactPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> 'ExactPolynomial':
        result = ExactPolynomial((1,))
        for _ in range(e):
            result = result * self
        return result

    def divmod(self, other: 'ExactPolynomial') -> Tuple['ExactPolynomial', 'ExactPolynomial']:
        if other.is_zero():
            raise ZeroDivisionError('polynomial division by zero')
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        d = other.degree
        for i in range(len(rem) - 1, d - 1, -1):
            q = rem[i] / lead
            if q:
                quot[i - d] = q
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] -= q * b
        return ExactPolynomial(tuple(quot)), ExactPolynomial(tuple(rem[:d]))

    def derivative(self) -> 'ExactPolynomial':
        return ExactPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def scale(self, c) -> 'ExactPolynomial':
        """x -> p(c x)."""
        c = Fraction(c)
        return ExactPolynomial(tuple(a * c ** k for k, a in enumerate(self.coeffs)))

    def reflect(self) -> 'ExactPolynomial':
        """x -> p(-x)."""
        return self.scale(-1)

    def monic(self) -> 'ExactPolynomial':
        return self * (1 / self.leading)

    def integer_coefficients(self) -> List[int]:
        """Coefficients times the positive lcm of their denominators."""
        scale = 1
        for c in self.coeffs:
            scale = math.lcm(scale, c.denominator)
        return [int(c * scale) for c in self.coeffs]


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def touchard_poly(n: int) -> ExactPolynomial:
    """T_n(x) = sum_k S(n, k) x**k."""
    if n < 0:
        raise DomainError(f"touchard_poly needs n >= 0, got {n}")
    return ExactPolynomial(triangle(StirlingKind.SECOND).row(n))


def touchard_eval(n: int, x) -> Fraction:
    return touchard_poly(n)(as_rational(x))


def stirling_poly(n: int) -> ExactPolynomial:
    """S_n(x) = x (x+1) ... (x+n-1) = sum_k s(n, k) x**k."""
    if n < 0:
        raise DomainError(f"stirling_poly needs n >= 0, got {n}")
    return ExactPolynomial(triangle(StirlingKind.FIRST).row(n))


def falling_factorial(x, k: int):
    result = Fraction(1) if isinstance(x, Fraction) else 1
    for j in range(k):
        result *= x - j
    return result


def falling_factorial_poly(k: int) -> ExactPolynomial:
    return ExactPolynomial.from_roots(range(k))


def _check_family(family, n, theta, relaxed=False) -> Fraction:
    if family not in FAMILIES:
        raise DomainError(f"family must be one of {FAMILIES}, got {family!r}")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    theta = as_rational(theta)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")
    if family == 3 and not relaxed and theta.denominator != 1 and theta <= n - 1:
        raise DomainError(
            f"family 3 needs an integer theta or theta > n - 1 (n={n}, theta={theta}); "
            'pass relaxed=True for the non-probabilistic regime'
        )
    return theta


def _weights(family: int, n: int, theta: Fraction) -> Tuple[List[Fraction], Fraction]:
    """Unnormalised coefficients of the generating polynomial and their normaliser."""
    if family == 1:
        row = triangle(StirlingKind.FIRST).row(n)
        weights = [c * theta ** k for k, c in enumerate(row)]
        normaliser = falling_factorial(theta + n - 1, n)
    elif family == 2:
        row = triangle(StirlingKind.SECOND).row(n)
        weights = [c * theta ** k for k, c in enumerate(row)]
        normaliser = sum(weights)
    else:
        row = triangle(StirlingKind.SECOND).row(n)
        weights = []
        ff = Fraction(1)
        for k, c in enumerate(row):
            weights.append(c * ff)
            ff *= theta - k
        normaliser = theta ** n
    return weights, Fraction(normaliser)


def gen_poly(family: int, n: int, theta, relaxed: bool = False) -> ExactPolynomial:
    """
    Generating polynomial t -> sum_k P[X = k] t**k of the Stirling law.

    Family 1 and 2 have degree n. Family 3 with an integer theta <= n has
    degree theta. With ``relaxed`` family 3 accepts any theta > 0 and the
    coefficients may be signed; they still sum to 1.
    """
    theta = _check_family(family, n, theta, relaxed)
    weights, normaliser = _weights(family, n, theta)
    return ExactPolynomial(tuple(w / normaliser for w in weights))


@dataclass(frozen=True)
class DiscreteDist:
    family: int
    n: int
    theta: Fraction
    pmf: Dict[int, Fraction] = field(compare=False)

    @property
    def support(self) -> List[int]:
        return sorted(self.pmf)

    def probability(self, k: int) -> Fraction:
        return self.pmf.get(k, Fraction(0))

    @property
    def polynomial(self) -> ExactPolynomial:
        top = max(self.pmf)
        return ExactPolynomial(tuple(self.pmf.get(k, 0) for k in range(top + 1)))


def dist(family: int, n: int, theta) -> DiscreteDist:
    """Exact pmf of the Stirling distribution of the given family."""
    theta = _check_family(family, n, theta)
    p = gen_poly(family, n, theta)
    pmf = {k: c for k, c in enumerate(p.coeffs) if c}
    if any(c < 0 for c in pmf.values()):
        raise IntegrityError(f"negative probability in family {family}, n={n}, theta={theta}")
    return DiscreteDist(family=family, n=n, theta=theta, pmf=pmf)


def log_mgf(source, z, precision=None):
    """
    Principal logarithm of sum_k c_k exp(z k) for a distribution or polynomial.

    Terms are summed in log space, scaled by the largest modulus, in an
    extended-precision context of ``precision`` bits.
    """
    ctx = extended(precision)
    coeffs = source.polynomial.coeffs if isinstance(source, DiscreteDist) else source.coeffs
    z = ctx.convert(z)

    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        log_abs = ctx.log(abs(c.numerator)) - ctx.log(c.denominator)
        terms.append((1 if c > 0 else -1, log_abs + z * k))
    if not terms:
        raise DomainError('log_mgf of the zero polynomial')

    top = max(ctx.re(a) for _, a in terms)
    total = ctx.fsum(sign * ctx.exp(a - top) for sign, a in terms)
    if ctx.fabs(total) <= len(terms) * ctx.eps:
        raise PrecisionError(f"moment generating function at z={z} cancels below working precision", ctx.prec)
    return top + ctx.log(total)


def polynomial_moments(p: ExactPolynomial) -> Tuple[Fraction, Fraction]:
    """
    Mean and variance read off the first two derivatives of log p(e^z) at 0.

    For a probability generating function these are the moments of the law;
    the same formula serves the signed relaxed family-3 polynomials.
    """
    a = p.integer_coefficients()
    s0 = sum(a)
    if s0 == 0:
        raise DomainError('polynomial vanishes at 1; moments undefined')
    s1 = sum(k * c for k, c in enumerate(a))
    s2 = sum(k * k * c for k, c in enumerate(a))
    mean = Fraction(s1, s0)
    return mean, Fraction(s2, s0) - mean * mean


def moments(d: DiscreteDist) -> Tuple[Fraction, Fraction]:
    return polynomial_moments(d.polynomial)


def bell_moments(n: int) -> Tuple[Fraction, Fraction]:
    """Mean and variance of the second-kind law with theta = 1 through Bell numbers."""
    b0, b1, b2 = bell(n), bell(n + 1), bell(n + 2)
    ratio = Fraction(b1, b0)
    return ratio - 1, Fraction(b2, b0) - ratio * ratio - 1


def _cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if not seen[start]:
            cycles += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return cycles


def enumerate_cycle_counts(n: int) -> Dict[int, int]:
    """Brute force: number of permutations of n elements with k cycles."""
    return dict(Counter(_cycle_count(p) for p in itertools.permutations(range(n))))


def _restricted_growth_strings(n: int) -> Iterator[List[int]]:
    # Each set partition of {0..n-1} corresponds to one restricted growth string.
    if n == 0:
        yield []
        return

    def extend(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for b in range(top + 2):
            yield from extend(prefix + [b], max(top, b))

    yield from extend([0], 0)


def enumerate_block_counts(n: int) -> Dict[int, int]:
    """Brute force: number of partitions of an n-set into k blocks."""
    return dict(Counter(max(s) + 1 for s in _restricted_growth_strings(n)))
