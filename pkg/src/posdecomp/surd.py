"""Exact numbers a + b*sqrt(d) with rational a, b and squarefree integer d > 1.

These are the values produced when the quadratic behind a hyperplane's
parameters does not split over Q.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import PreconditionError
from .qexact import UniPoly, as_rational


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n == s*s*d and d squarefree (n > 0)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, d = 1, 1
    p = 2
    while p * p <= n:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        s *= p ** (k // 2)
        if k % 2:
            d *= p
        p += 1
    return s, d * n


class QuadSurd:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 1):
        a, b = as_rational(a), as_rational(b)
        if d < 1:
            raise PreconditionError("radicand must be positive")
        if b and d != 1:
            s, sq = squarefree_split(d)
            b, d = b * s, sq
        if d == 1:
            a, b = a + b, Fraction(0)
        if not b:
            d = 1
        self.a, self.b, self.d = a, b, d

    @classmethod
    def coerce(cls, v) -> QuadSurd:
        if isinstance(v, QuadSurd):
            return v
        return cls(as_rational(v))

    def is_rational(self) -> bool:
        return not self.b

    def rational(self) -> Fraction:
        if self.b:
            raise ValueError("not rational")
        return self.a

    def simplify(self):
        """Fraction when rational, else self."""
        return self.a if not self.b else self

    def _pair(self, other):
        o = QuadSurd.coerce(other)
        d = self.d if self.b else o.d
        if self.b and o.b and self.d != o.d:
            raise PreconditionError("cannot mix different radicands")
        return o, d

    def __add__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        o, d = self._pair(other)
        return QuadSurd(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        return self + (-QuadSurd.coerce(other))

    def __rsub__(self, other):
        return QuadSurd.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        o, d = self._pair(other)
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadSurd:
        return QuadSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        o = QuadSurd.coerce(other)
        n = o.norm()
        if not n:
            raise ZeroDivisionError("division by zero")
        return self * o.conjugate() * (1 / n)

    def __rtruediv__(self, other):
        return QuadSurd.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QuadSurd(1) / (self ** (-k))
        out, base = QuadSurd(1), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def sign(self) -> int:
        a, b = self.a, self.b
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if a * a > b * b * self.d else -sa

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadSurd(other)
        if not isinstance(other, QuadSurd):
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash(("surd", self.a, self.b, self.d))

    def __str__(self):
        if not self.b:
            return str(self.a)
        rad = f"sqrt({self.d})"
        mag = abs(self.b)
        term = rad if mag == 1 else f"{mag}*{rad}"
        if not self.a:
            return term if self.b > 0 else f"-{term}"
        return f"{self.a} {'+' if self.b > 0 else '-'} {term}"

    def __repr__(self):
        return f"QuadSurd({self})"

    def minpoly(self) -> UniPoly:
        if not self.b:
            return UniPoly((-self.a, 1))
        return UniPoly((self.a * self.a - self.b * self.b * self.d, -2 * self.a, 1))

    def enclosure(self, bits: int = 32) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= 2^-bits containing the value."""
        if not self.b:
            return self.a, self.a
        scale = 1 << bits
        # |b| sqrt(d) = sqrt(b^2 d); enclose sqrt(N/D) by integer square roots
        q = self.b * self.b * self.d
        big = q.numerator * scale * scale * q.denominator
        r = isqrt(big)
        lo = Fraction(r, scale * q.denominator)
        hi = Fraction(r + 1, scale * q.denominator)
        if self.b < 0:
            lo, hi = -hi, -lo
        return self.a + lo, self.a + hi

    def to_point(self):
        """The value as a rational or an AlgebraicNumber with an isolating interval."""
        from .realpoint import AlgebraicNumber, Interval

        if not self.b:
            return self.a
        bits = 8
        sep = 2 * abs(self.b)  # the two roots differ by 2|b|sqrt(d) >= 2|b|
        while Fraction(1, 1 << bits) * 4 >= sep:
            bits += 4
        lo, hi = self.enclosure(bits)
        m = self.minpoly()
        while not m(lo) or not m(hi):
            bits += 4
            lo, hi = self.enclosure(bits)
        return AlgebraicNumber(m, Interval(lo, hi), trusted=True)


def sqrt_rational(q) -> QuadSurd:
    q = as_rational(q)
    if q < 0:
        raise PreconditionError("square root of a negative rational")
    if not q:
        return QuadSurd(0)
    n = q.numerator * q.denominator
    s, d = squarefree_split(n)
    return QuadSurd(0, Fraction(s, q.denominator), d)


def surd_value(v):
    """Normalize Fraction|int|QuadSurd to Fraction when rational."""
    if isinstance(v, QuadSurd):
        return v.simplify()
    return as_rational(v)


__all__ = ["QuadSurd", "sqrt_rational", "squarefree_split", "surd_value"]
