"""Exact arithmetic over Q.

``Fraction`` is the rational type. ``UniPoly`` is dense and ``MultiPoly`` is a
sparse map from exponent vectors to coefficients. Both rational-function types
keep one canonical form: integer coefficients, numerator and denominator
coprime, joint content 1, and a denominator whose leading coefficient (lex
order for several variables) is positive. Sign information therefore lives in
the numerator alone.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import ArityError, PreconditionError, ZeroDenominatorError

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        d = v.denominator
        out = out * d // gcd(out, d)
    return out


def _int_content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            break
    return g


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Dense polynomial in Q[x]; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self._c = tuple(cs)

    @classmethod
    def _raw(cls, cs) -> UniPoly:
        p = object.__new__(cls)
        p._c = cs
        return p

    @classmethod
    def x(cls) -> UniPoly:
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def const(cls, c) -> UniPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, c, k: int) -> UniPoly:
        return cls([0] * k + [c])

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else _ZERO

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def constant_value(self) -> Fraction:
        if len(self._c) > 1:
            raise ValueError("polynomial is not constant")
        return self._c[0] if self._c else _ZERO

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == UniPoly((other,))._c
        return NotImplemented

    def __hash__(self):
        return hash(("UniPoly", self._c))

    def __repr__(self):
        return f"UniPoly({format_unipoly(self)!r})"

    def __str__(self):
        return format_unipoly(self)

    # ring operations -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(tuple(-c for c in self._c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return UniPoly()
            return UniPoly._raw(tuple(c * other for c in self._c))
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return UniPoly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = UniPoly._raw((_ONE,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, x):
        """Horner evaluation; works for any ring element that mixes with Fraction."""
        if not self._c:
            return _ZERO
        acc = self._c[-1]
        for c in reversed(self._c[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly._raw(tuple(i * c for i, c in enumerate(self._c) if i)) if len(self._c) > 1 else UniPoly()

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDenominatorError("polynomial division by zero")
        r = list(self._c)
        db = other.degree
        if len(r) <= db:
            return UniPoly(), self
        inv = 1 / other.lc
        q = [_ZERO] * (len(r) - db)
        b = other._c
        for k in range(len(r) - 1, db - 1, -1):
            f = r[k] * inv
            if f:
                q[k - db] = f
                for i in range(db + 1):
                    r[k - db + i] -= f * b[i]
        return UniPoly(q), UniPoly(r[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod(other)
        if r:
            raise ValueError("division is not exact")
        return q

    def divides(self, other: UniPoly) -> bool:
        """True when self divides other."""
        return not other.divmod(self)[1]

    def monic(self) -> UniPoly:
        if not self._c:
            return self
        return self * (1 / self.lc)

    def primitive_int(self) -> tuple[Fraction, tuple]:
        """Return (content, ints) with self == content * ints, content > 0, gcd(ints) = 1."""
        if not self._c:
            return _ONE, ()
        L = _lcm_denominators(self._c)
        ints = [int(c * L) for c in self._c]
        g = _int_content(ints)
        return Fraction(g, L), tuple(v // g for v in ints)

    def shift_scale(self, a, b) -> UniPoly:
        """Return p(a*x + b)."""
        lin = UniPoly((b, a))
        out = UniPoly()
        for c in reversed(self._c):
            out = out * lin + c
        return out


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via primitive integer remainder sequences."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return UniPoly._raw((_ONE,))
    A = list(a.primitive_int()[1])
    B = list(b.primitive_int()[1])
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _int_prem(A, B)
        A, B = B, _int_primitive(R)
    return UniPoly(A).monic()


def _int_prem(A, B):
    r = list(A)
    nb = len(B)
    lb = B[-1]
    while len(r) >= nb:
        lr = r[-1]
        shift = len(r) - nb
        r = [c * lb for c in r]
        for i, bc in enumerate(B):
            r[i + shift] -= lr * bc
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r


def _int_primitive(ints):
    if not ints:
        return []
    g = _int_content(ints)
    if ints[-1] < 0:
        g = -g
    return [v // g for v in ints]


def is_squarefree(p: UniPoly) -> bool:
    return poly_gcd(p, p.derivative()).degree <= 0


# ---------------------------------------------------------------------------
# univariate rational functions


def _as_unipoly(v) -> UniPoly:
    if isinstance(v, UniPoly):
        return v
    return UniPoly((as_rational(v),))


def _canonical_pair(num: UniPoly, den: UniPoly) -> tuple[UniPoly, UniPoly]:
    if den.is_zero():
        raise ZeroDenominatorError("zero denominator")
    if num.is_zero():
        return UniPoly(), UniPoly._raw((_ONE,))
    if num.degree > 0 and den.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
    L = _lcm_denominators(num.coeffs + den.coeffs)
    ni = [int(c * L) for c in num.coeffs]
    di = [int(c * L) for c in den.coeffs]
    g = _int_content(ni + di)
    if di[-1] < 0:
        g = -g
    return (UniPoly._raw(tuple(Fraction(v // g) for v in ni)),
            UniPoly._raw(tuple(Fraction(v // g) for v in di)))


class RationalFunction:
    """Reduced element num/den of Q(x) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        self.num, self.den = _canonical_pair(_as_unipoly(num), _as_unipoly(den))

    @classmethod
    def _raw(cls, num, den) -> RationalFunction:
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def coerce(cls, v) -> RationalFunction:
        if isinstance(v, RationalFunction):
            return v
        if isinstance(v, MultiRationalFunction):
            return v.to_univariate()
        if isinstance(v, MultiPoly):
            return cls(v.to_unipoly())
        return cls(_as_unipoly(v))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> UniPoly:
        if not self.den.is_constant():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def __eq__(self, other):
        if isinstance(other, (UniPoly, int, Fraction)):
            other = RationalFunction(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash(("RF", self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({format_rational_function(self)!r})"

    def __str__(self):
        return format_rational_function(self)

    def _other(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (UniPoly, int, Fraction)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            if self.is_zero():
                raise ZeroDenominatorError("zero to a negative power")
            return RationalFunction(self.den, self.num) ** (-k)
        return RationalFunction._raw(self.num ** k, self.den ** k) if k else RationalFunction(1)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDenominatorError("denominator vanishes at the evaluation point")
        return self.num(x) / d

    def derivative(self) -> RationalFunction:
        n, d = self.num, self.den
        if d.is_constant():
            return RationalFunction(n.derivative(), d)
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def derivative_numerator(self) -> UniPoly:
        """num'·den − num·den'; same sign as the derivative wherever den ≠ 0."""
        n, d = self.num, self.den
        if d.is_constant():
            return n.derivative() * d.constant_value()
        return n.derivative() * d - n * d.derivative()


def normalize(num, den) -> RationalFunction:
    return RationalFunction(num, den)


def derivative(r):
    """Formal derivative; returns the same kind of object it was given."""
    if isinstance(r, UniPoly):
        return r.derivative()
    if isinstance(r, (int, Fraction)):
        return Fraction(0)
    return r.derivative()


# ---------------------------------------------------------------------------
# multivariate


class MultiPoly:
    """Sparse polynomial in Q[x1..xm]: exponent tuple -> nonzero Fraction."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms=None, arity: int = 1):
        if arity < 0:
            raise ArityError("arity must be non-negative")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != arity:
                raise ArityError(f"exponent {e} does not match arity {arity}")
            if any(k < 0 for k in e):
                raise ValueError("negative exponent")
            c = as_rational(c)
            if c:
                clean[e] = clean.get(e, _ZERO) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self.arity = arity

    @classmethod
    def _raw(cls, terms, arity) -> MultiPoly:
        p = object.__new__(cls)
        p.terms = terms
        p.arity = arity
        return p

    @classmethod
    def var(cls, i: int, arity: int) -> MultiPoly:
        """The variable x_{i+1} (0-based index)."""
        if not 0 <= i < arity:
            raise ArityError(f"variable index {i} out of range for arity {arity}")
        e = [0] * arity
        e[i] = 1
        return cls._raw({tuple(e): _ONE}, arity)

    @classmethod
    def const(cls, c, arity: int) -> MultiPoly:
        c = as_rational(c)
        return cls._raw({(0,) * arity: c} if c else {}, arity)

    @classmethod
    def from_unipoly(cls, p: UniPoly) -> MultiPoly:
        return cls._raw({(i,): c for i, c in enumerate(p.coeffs) if c}, 1)

    def to_unipoly(self) -> UniPoly:
        if self.arity != 1:
            raise ArityError("only arity-1 polynomials convert to UniPoly")
        if not self.terms:
            return UniPoly()
        cs = [_ZERO] * (max(e[0] for e in self.terms) + 1)
        for e, c in self.terms.items():
            cs[e[0]] = c
        return UniPoly(cs)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values())) if self.terms else _ZERO

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def lead(self) -> tuple[tuple, Fraction]:
        """Leading (exponent, coefficient) under lexicographic order."""
        e = max(self.terms)
        return e, self.terms[e]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(other, self.arity).terms
        return NotImplemented

    def __hash__(self):
        return hash(("MultiPoly", self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({format_multipoly(self)!r}, arity={self.arity})"

    def __str__(self):
        return format_multipoly(self)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.arity)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e, _ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.arity)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.arity)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw({}, self.arity)
            return MultiPoly._raw({e: c * other for e, c in self.terms.items()}, self.arity)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, _ZERO) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self.arity)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, point):
        if len(point) != self.arity:
            raise ArityError("evaluation point has the wrong length")
        total = _ZERO
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    def diff(self, i: int) -> MultiPoly:
        """Partial derivative with respect to x_{i+1} (0-based index)."""
        if not 0 <= i < self.arity:
            raise ArityError(f"variable index {i} out of range for arity {self.arity}")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MultiPoly._raw(out, self.arity)

    def apply_derivation(self, coeffs) -> MultiPoly:
        out = MultiPoly._raw({}, self.arity)
        for i, l in enumerate(coeffs):
            if l:
                out = out + self.diff(i) * l
        return out

    def primitive_int(self) -> tuple[Fraction, dict]:
        if not self.terms:
            return _ONE, {}
        L = _lcm_denominators(self.terms.values())
        ints = {e: int(c * L) for e, c in self.terms.items()}
        g = _int_content(ints.values())
        return Fraction(g, L), {e: v // g for e, v in ints.items()}

    def exact_div(self, other: MultiPoly) -> MultiPoly:
        """Exact quotient by lexicographic division; raises when not divisible."""
        if other.is_zero():
            raise ZeroDenominatorError("division by the zero polynomial")
        if other.is_constant():
            return self * (1 / other.constant_value())
        le, lc = other.lead()
        inv = 1 / lc
        r = dict(self.terms)
        q = {}
        while r:
            e = max(r)
            d = tuple(a - b for a, b in zip(e, le))
            if any(k < 0 for k in d):
                raise ValueError("division is not exact")
            f = r[e] * inv
            q[d] = f
            for oe, oc in other.terms.items():
                te = tuple(a + b for a, b in zip(oe, d))
                v = r.get(te, _ZERO) - f * oc
                if v:
                    r[te] = v
                else:
                    r.pop(te, None)
        return MultiPoly._raw(q, self.arity)


def _coeff_list(p: MultiPoly, v: int) -> list:
    """Coefficients of p as a polynomial in x_v (each coefficient free of x_v)."""
    n = p.degree_in(v)
    out = [dict() for _ in range(n + 1)]
    for e, c in p.terms.items():
        out[e[v]][e[:v] + (0,) + e[v + 1:]] = c
    return [MultiPoly._raw(t, p.arity) for t in out]


def _from_coeff_list(cs, v: int, arity: int) -> MultiPoly:
    out = {}
    for k, c in enumerate(cs):
        for e, val in c.terms.items():
            out[e[:v] + (k,) + e[v + 1:]] = val
    return MultiPoly._raw(out, arity)


def _lex_monic(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    return p * (1 / p.lead()[1])


def _content_in(cs, rest) -> MultiPoly:
    g = None
    for c in cs:
        if c.is_zero():
            continue
        g = c if g is None else _mgcd(g, c, rest)
        if g.is_constant():
            return MultiPoly.const(1, c.arity)
    return _lex_monic(g)


def _mgcd(a: MultiPoly, b: MultiPoly, variables: tuple) -> MultiPoly:
    arity = a.arity
    if a.is_zero():
        return _lex_monic(b)
    if b.is_zero():
        return _lex_monic(a)
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(1, arity)
    used = [v for v in variables if a.degree_in(v) > 0 or b.degree_in(v) > 0]
    if not used:
        return MultiPoly.const(1, arity)
    v = used[0]
    rest = tuple(used[1:])
    A = _coeff_list(a, v)
    B = _coeff_list(b, v)
    ca = _content_in(A, rest)
    cb = _content_in(B, rest)
    c = _mgcd(ca, cb, rest)
    A = [x.exact_div(ca) for x in A]
    B = [x.exact_div(cb) for x in B]
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _mprem(A, B)
        if R:
            cr = _content_in(R, rest)
            R = [x.exact_div(cr) for x in R]
        A, B = B, R
    if len(A) <= 1:
        return _lex_monic(c)
    return _lex_monic(c * _from_coeff_list(A, v, arity))


def _mprem(A, B):
    r = list(A)
    nb = len(B)
    lb = B[-1]
    while len(r) >= nb:
        lr = r[-1]
        shift = len(r) - nb
        r = [x * lb for x in r]
        for i, bc in enumerate(B):
            r[i + shift] = r[i + shift] - lr * bc
        r.pop()
        while r and r[-1].is_zero():
            r.pop()
    return r


def multi_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """gcd in Q[x1..xm], normalized to lex-leading coefficient 1."""
    if a.arity != b.arity:
        raise ArityError(f"arity mismatch: {a.arity} vs {b.arity}")
    return _mgcd(a, b, tuple(range(a.arity)))


def _canonical_multi(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if num.arity != den.arity:
        raise ArityError(f"arity mismatch: {num.arity} vs {den.arity}")
    if den.is_zero():
        raise ZeroDenominatorError("zero denominator")
    arity = num.arity
    if num.is_zero():
        return MultiPoly._raw({}, arity), MultiPoly.const(1, arity)
    if not num.is_constant() and not den.is_constant():
        g = multi_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
    L = _lcm_denominators(list(num.terms.values()) + list(den.terms.values()))
    ni = {e: int(c * L) for e, c in num.terms.items()}
    di = {e: int(c * L) for e, c in den.terms.items()}
    g = _int_content(list(ni.values()) + list(di.values()))
    if di[max(di)] < 0:
        g = -g
    return (MultiPoly._raw({e: Fraction(v // g) for e, v in ni.items()}, arity),
            MultiPoly._raw({e: Fraction(v // g) for e, v in di.items()}, arity))


class MultiRationalFunction:
    """Reduced element of Q(x1..xm) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(1, num.arity)
        self.num, self.den = _canonical_multi(num, den)

    @classmethod
    def _raw(cls, num, den) -> MultiRationalFunction:
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def const(cls, c, arity: int) -> MultiRationalFunction:
        return cls(MultiPoly.const(c, arity))

    @classmethod
    def var(cls, i: int, arity: int) -> MultiRationalFunction:
        return cls(MultiPoly.var(i, arity))

    @classmethod
    def from_univariate(cls, r) -> MultiRationalFunction:
        r = RationalFunction.coerce(r)
        return cls(MultiPoly.from_unipoly(r.num), MultiPoly.from_unipoly(r.den))

    @property
    def arity(self) -> int:
        return self.num.arity

    def to_univariate(self) -> RationalFunction:
        return RationalFunction(self.num.to_unipoly(), self.den.to_unipoly())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiRationalFunction.const(other, self.arity)
        if isinstance(other, MultiPoly):
            other = MultiRationalFunction(other)
        if isinstance(other, MultiRationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash(("MRF", self.num, self.den))

    def __repr__(self):
        return f"MultiRationalFunction({format_multi_rational(self)!r}, arity={self.arity})"

    def __str__(self):
        return format_multi_rational(self)

    def _other(self, other):
        if isinstance(other, MultiRationalFunction):
            if other.arity != self.arity:
                raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, MultiPoly):
            return MultiRationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return MultiRationalFunction.const(other, self.arity)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return MultiRationalFunction(self.num + o.num, self.den)
        return MultiRationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return MultiRationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return MultiRationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return MultiRationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return MultiRationalFunction.const(1, self.arity) / (self ** (-k))
        return MultiRationalFunction._raw(self.num ** k, self.den ** k) if k else \
            MultiRationalFunction.const(1, self.arity)

    def __call__(self, point):
        d = self.den(point)
        if not d:
            raise ZeroDenominatorError("denominator vanishes at the evaluation point")
        return self.num(point) / d

    def derivation_numerator(self, coeffs) -> MultiPoly:
        """Numerator of D(r) over den², D = sum coeffs[i] * d/dx_{i+1}."""
        if len(coeffs) != self.arity:
            raise ArityError("derivation length does not match arity")
        dn = self.num.apply_derivation(coeffs)
        if self.den.is_constant():
            return dn * self.den.constant_value()
        return dn * self.den - self.num * self.den.apply_derivation(coeffs)

    def apply_derivation(self, coeffs) -> MultiRationalFunction:
        return MultiRationalFunction(self.derivation_numerator(coeffs), self.den * self.den)


def partial_derivative(r, i: int) -> MultiRationalFunction:
    """d r / d x_i with the 1-based index used in the variable names x1..xm."""
    if isinstance(r, MultiPoly):
        r = MultiRationalFunction(r)
    if not 1 <= i <= r.arity:
        raise ArityError(f"index {i} out of range 1..{r.arity}")
    coeffs = [0] * r.arity
    coeffs[i - 1] = 1
    return r.apply_derivation(coeffs)


# ---------------------------------------------------------------------------
# irreducibility certificates (Rabin's test modulo small primes)


def _small_primes(count: int):
    out = []
    n = 2
    while len(out) < count:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(_fp_trim(out), f, p)


def _fp_pow(a, e, f, p):
    result = [1]
    base = _fp_mod(a, f, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _fp_mulmod(base, base, f, p)
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducible_mod_p(ints, p: int) -> bool:
    f = _fp_trim([c % p for c in ints])
    n = len(f) - 1
    if n != len(ints) - 1 or n < 1:
        return False
    x = [0, 1]

    def frob(k):
        h = x
        for _ in range(k):
            h = _fp_pow(h, p, f, p)
        return h

    diff = _fp_trim([(a - b) % p for a, b in _zip_pad(frob(n), x)])
    if _fp_mod(diff, f, p):
        return False
    for q in _prime_factors(n):
        h = _fp_trim([(a - b) % p for a, b in _zip_pad(frob(n // q), x)])
        if len(_fp_gcd(f, h, p)) != 1:
            return False
    return True


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _rational_roots(ints):
    """Rational roots of an integer polynomial (rational root theorem)."""
    lead, const = ints[-1], ints[0]
    if const == 0:
        return [Fraction(0)]
    p = UniPoly(ints)

    def divisors(n):
        n = abs(n)
        small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
        return sorted(set(small + [n // d for d in small]))

    out = []
    for a in divisors(const):
        for b in divisors(lead):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if r not in out and p(r) == 0:
                    out.append(r)
    return out


def certify_irreducible(p: UniPoly, effort: int = 30) -> bool:
    """True when p is proven irreducible over Q; False means "not proven".

    Tries Rabin's irreducibility test modulo the first ``effort`` primes, and
    for degree <= 3 with small coefficients falls back on the rational root
    test, which is exact there.
    """
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    ints = p.primitive_int()[1]
    for q in _small_primes(effort):
        if ints[-1] % q and irreducible_mod_p(ints, q):
            return True
    if p.degree <= 3 and max(abs(c) for c in ints) < 10 ** 8:
        return not _rational_roots(list(ints))
    return False


# ---------------------------------------------------------------------------
# text rendering (the CLI parser reads these back)


def _format_coeff_term(c: Fraction, mono: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if mono:
        body = mono if a == 1 else f"{a}*{mono}"
    else:
        body = str(a)
    if first:
        return f"-{body}" if sign == "-" else body
    return f" {sign} {body}"


def format_unipoly(p: UniPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append(_format_coeff_term(c, mono, not parts))
    return "".join(parts)


def _var_names(arity: int):
    return ["x"] if arity == 1 else [f"x{i + 1}" for i in range(arity)]


def format_multipoly(p: MultiPoly, names=None) -> str:
    if p.is_zero():
        return "0"
    names = names or _var_names(p.arity)
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
        parts.append(_format_coeff_term(c, "*".join(factors), not parts))
    return "".join(parts)


def format_rational_function(r: RationalFunction, var: str = "x") -> str:
    if r.den == 1:
        return format_unipoly(r.num, var)
    return f"({format_unipoly(r.num, var)})/({format_unipoly(r.den, var)})"


def format_multi_rational(r: MultiRationalFunction, names=None) -> str:
    if r.den == 1:
        return format_multipoly(r.num, names)
    return f"({format_multipoly(r.num, names)})/({format_multipoly(r.den, names)})"


__all__ = [
    "Rational", "as_rational", "UniPoly", "poly_gcd", "is_squarefree",
    "RationalFunction", "normalize", "derivative", "MultiPoly", "multi_gcd",
    "MultiRationalFunction", "partial_derivative", "certify_irreducible",
    "irreducible_mod_p", "format_unipoly", "format_multipoly",
    "format_rational_function", "format_multi_rational", "PreconditionError",
]
