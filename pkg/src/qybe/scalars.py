"""Exact and big-float scalar arithmetic at a fixed deformation point.

The deformation parameter q is pinned down by a rational square root
``root`` with 0 < root < 1 and q = root**2.  Keeping the square root
rational makes every half-integer power of q -- and in particular the
unit-phase constant p = i / root -- an exact Gaussian rational, so the
whole exact backend lives inside Q(i).

Two backends coexist:

* exact: :class:`GaussRat` (a pair of ``Fraction``s, re + im*i);
* float: ``mpmath`` complex numbers at a caller-chosen binary precision
  (128 bits or more), used only where genuinely infinite sums appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

__all__ = [
    "GaussRat",
    "QPoint",
    "as_gauss",
    "q_pochhammer",
    "q_pochhammer_float",
    "q_int",
    "q_factorial",
    "poch_binomial",
    "bracket_binomial",
    "to_mpc",
    "mp_ctx",
]

_RatLike = Union[int, Fraction]


class GaussRat:
    """A Gaussian rational re + im*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re: _RatLike = 0, im: _RatLike = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = as_gauss(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gauss(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gauss(other) - self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other):
        other = as_gauss(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gauss(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRat(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return as_gauss(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (GaussRat(1) / self) ** (-n)
        out, base = GaussRat(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates -----------------------------------------------------
    def __eq__(self, other):
        try:
            other = as_gauss(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


Scalar = Union[int, Fraction, GaussRat]


def as_gauss(x) -> GaussRat:
    """Coerce an int / Fraction / GaussRat into a GaussRat."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRat(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussRat")


@dataclass(frozen=True)
class QPoint:
    """The evaluation point: q = root**2 with root a rational in (0, 1).

    ``p`` is the exact Gaussian rational i/root (so p**2 == -1/q), the
    phase constant used by the mixed-family Cartan data and gauges.
    """

    root: Fraction

    def __post_init__(self):
        object.__setattr__(self, "root", Fraction(self.root))
        if not (0 < self.root < 1):
            raise ValueError("q-root must lie strictly between 0 and 1")

    @property
    def q(self) -> Fraction:
        return self.root * self.root

    def qpow(self, e: int) -> Fraction:
        """q**e for an integer exponent (possibly negative)."""
        return self.q ** e

    def hpow(self, e2: int) -> Fraction:
        """root**e2, i.e. q raised to the half-integer power e2/2."""
        return self.root ** e2

    @property
    def p(self) -> GaussRat:
        return GaussRat(0, 1 / self.root)

    def p_pow(self, k: int) -> GaussRat:
        """p**k = i**k * root**(-k), exact for any integer k."""
        mag = self.root ** (-k)
        r = k % 4
        if r == 0:
            return GaussRat(mag, 0)
        if r == 1:
            return GaussRat(0, mag)
        if r == 2:
            return GaussRat(-mag, 0)
        return GaussRat(0, -mag)


# ---------------------------------------------------------------------------
# q-Pochhammer symbols
# ---------------------------------------------------------------------------


def q_pochhammer(z, q, m: int):
    """Finite product (z; q)_m = prod_{k=0}^{m-1} (1 - z*q**k).

    Works for exact operands (Fraction / GaussRat) and for mpmath
    numbers alike; (q; q)_m, (q^2; q^2)_m, (q^4; q^4)_m are the three
    conventions used downstream (pass z == q, q**2, q**4 resp.).
    """
    if m < 0:
        raise ValueError("q-Pochhammer length must be nonnegative")
    out = 1
    zq = z
    for _ in range(m):
        out = out * (1 - zq)
        zq = zq * q
    return out


@lru_cache(maxsize=None)
def _poch_cached(qpt: QPoint, base: int, m: int) -> Fraction:
    # (q^base; q^base)_m, base in {1, 2, 4}
    qb = qpt.qpow(base)
    return Fraction(q_pochhammer(qb, qb, m))


def poch(qpt: QPoint, base: int, m: int) -> Fraction:
    """(q^base; q^base)_m with memoisation (base = 1, 2 or 4)."""
    return _poch_cached(qpt, base, m)


def q_pochhammer_float(z, q, m: int, ctx=None):
    ctx = ctx or mpmath.mp
    out = ctx.mpf(1)
    zq = to_mpc(z, ctx)
    for _ in range(m):
        out *= 1 - zq
        zq *= q
    return out


# ---------------------------------------------------------------------------
# symmetric q-integers and the two binomial conventions
# ---------------------------------------------------------------------------


def q_int(qpt: QPoint, m: int) -> Fraction:
    """Symmetric q-integer [m] = (q^m - q^-m) / (q - q^-1)."""
    q = qpt.q
    return (q ** m - q ** -m) / (q - 1 / q)


@lru_cache(maxsize=None)
def q_factorial(qpt: QPoint, m: int) -> Fraction:
    if m < 0:
        raise ValueError("factorial of negative length")
    out = Fraction(1)
    for k in range(1, m + 1):
        out *= q_int(qpt, k)
    return out


def poch_binomial(qpt: QPoint, m: int, k: int, base: int = 2) -> Fraction:
    """Pochhammer-style binomial (q^b)_m / ((q^b)_k (q^b)_{m-k}).

    Zero unless 0 <= k <= m, matching the convention used throughout.
    """
    if k < 0 or k > m or m < 0:
        return Fraction(0)
    return poch(qpt, base, m) / (poch(qpt, base, k) * poch(qpt, base, m - k))


def bracket_binomial(qpt: QPoint, m: int, k: int) -> Fraction:
    """Bracket binomial [m]! / ([k]! [m-k]!); zero outside 0 <= k <= m."""
    if k < 0 or k > m or m < 0:
        return Fraction(0)
    return q_factorial(qpt, m) / (q_factorial(qpt, k) * q_factorial(qpt, m - k))


# ---------------------------------------------------------------------------
# float backend helpers
# ---------------------------------------------------------------------------


def mp_ctx(precision_bits: int = 128):
    """A private mpmath context at the requested binary precision."""
    if precision_bits < 128:
        raise ValueError("float backend requires at least 128 bits")
    ctx = mpmath.mp.clone()
    ctx.prec = precision_bits
    return ctx


def to_mpc(x, ctx=None):
    """Convert an exact scalar (or mpmath number) to an mpmath complex."""
    ctx = ctx or mpmath.mp
    if isinstance(x, GaussRat):
        return ctx.mpc(
            ctx.mpf(x.re.numerator) / x.re.denominator,
            ctx.mpf(x.im.numerator) / x.im.denominator,
        )
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)
