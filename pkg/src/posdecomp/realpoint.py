"""Evaluation points and the rigorous sign oracle.

A point is a named transcendental constant (pi, e), a digit stream supplied by
the caller, or a real algebraic number given by its minimal polynomial and an
isolating interval. Signs are decided by an exact zero test followed by
interval evaluation at doubling precision. All interval arithmetic is done on
dyadic integers with outward rounding, so enclosures are rigorous.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import (
    ArityError,
    DenominatorVanishesError,
    FieldInvariantError,
    PreconditionError,
    PrecisionExhausted,
)
from .qexact import (
    MultiPoly,
    MultiRationalFunction,
    RationalFunction,
    UniPoly,
    as_rational,
    certify_irreducible,
    is_squarefree,
    poly_gcd,
)

DEFAULT_MAX_BITS = 1 << 16
START_BITS = 64


class Sign(enum.IntEnum):
    NEG = -1
    ZERO = 0
    POS = 1

    def __str__(self):
        return {1: "+", 0: "0", -1: "-"}[int(self)]

    @classmethod
    def of(cls, value) -> Sign:
        return cls((value > 0) - (value < 0))

    def __mul__(self, other):
        if isinstance(other, Sign):
            return Sign(int(self) * int(other))
        return int(self) * other


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise PreconditionError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def intersects(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


# ---------------------------------------------------------------------------
# precision bookkeeping (reported by the CLI and verification suites)


@dataclass
class PrecisionStats:
    queries: int = 0
    max_bits: int = 0
    total_bits: int = 0

    def record(self, bits: int):
        self.queries += 1
        self.total_bits += bits
        self.max_bits = max(self.max_bits, bits)

    def as_dict(self) -> dict:
        return {"sign_queries": self.queries, "max_bits": self.max_bits}


_tracker: contextvars.ContextVar = contextvars.ContextVar("posdecomp_precision", default=None)


@contextlib.contextmanager
def track_precision():
    stats = PrecisionStats()
    token = _tracker.set(stats)
    try:
        yield stats
    finally:
        _tracker.reset(token)


def _record(bits: int):
    stats = _tracker.get()
    if stats is not None:
        stats.record(bits)


# ---------------------------------------------------------------------------
# dyadic interval arithmetic: [lo, hi] / 2^k with integer lo, hi


def _floor_shift(v: int, s: int) -> int:
    return v >> s


def _ceil_shift(v: int, s: int) -> int:
    return -((-v) >> s)


def _to_dyadic(iv: Interval, k: int) -> tuple[int, int]:
    lo = iv.lo * (1 << k)
    hi = iv.hi * (1 << k)
    return floor(lo), ceil(hi)


def _dmul(a, b, k):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return _floor_shift(min(p), k), _ceil_shift(max(p), k)


def _dpow(a, e, k):
    if e == 0:
        return 1 << k, 1 << k
    if e == 1:
        return a
    lo, hi = a
    s = k * (e - 1)
    if lo >= 0:
        return _floor_shift(lo ** e, s), _ceil_shift(hi ** e, s)
    if hi <= 0:
        if e % 2:
            return _floor_shift(lo ** e, s), _ceil_shift(hi ** e, s)
        return _floor_shift(hi ** e, s), _ceil_shift(lo ** e, s)
    if e % 2:
        return _floor_shift(lo ** e, s), _ceil_shift(hi ** e, s)
    return 0, _ceil_shift(max(-lo, hi) ** e, s)


def _horner_dyadic(ints, x, k):
    """Enclosure of sum ints[i] * x^i (integer coefficients) at scale 2^k."""
    acc = (ints[-1] << k, ints[-1] << k)
    for c in reversed(ints[:-1]):
        acc = _dmul(acc, x, k)
        ck = c << k
        acc = (acc[0] + ck, acc[1] + ck)
    return acc


def _sign_of_dyadic(d) -> Sign | None:
    if d[0] > 0:
        return Sign.POS
    if d[1] < 0:
        return Sign.NEG
    return None


def eval_interval(p: UniPoly, iv: Interval, bits: int = 64) -> Interval:
    """Rigorous enclosure of p over iv (rational endpoints, outward rounded)."""
    if p.is_zero():
        return Interval(0, 0)
    content, ints = p.primitive_int()
    k = bits + 8
    d = _horner_dyadic(list(ints), _to_dyadic(iv, k), k)
    return Interval(Fraction(d[0], 1 << k) * content, Fraction(d[1], 1 << k) * content)


# ---------------------------------------------------------------------------
# points


class RealPoint:
    """A real number known through ever finer rational enclosures."""

    transcendental = True
    name = "point"

    def __init__(self, max_bits: int = DEFAULT_MAX_BITS):
        self.max_bits = max_bits
        self._lock = threading.Lock()
        self._best: tuple[int, Interval] | None = None

    def _compute(self, bits: int) -> Interval:
        raise NotImplementedError

    def refine(self, bits: int) -> Interval:
        """Interval of width <= 2^-bits containing the point."""
        if bits < 0:
            raise PreconditionError("bits must be non-negative")
        if bits > self.max_bits:
            raise PrecisionExhausted(
                f"{self.name}: requested {bits} bits exceeds the cap of {self.max_bits}"
            )
        with self._lock:
            best = self._best
        if best is not None and best[0] >= bits:
            return best[1]
        iv = self._compute(bits)
        if iv.width > Fraction(1, 1 << bits):
            raise FieldInvariantError(f"{self.name}: enclosure wider than 2^-{bits}")
        with self._lock:
            if self._best is None or self._best[0] < bits:
                self._best = (bits, iv)
        return iv

    def fresh_copy(self) -> RealPoint:
        """A copy with an empty enclosure cache (for independent re-checks)."""
        raise NotImplementedError

    def describe(self) -> str:
        return self.name

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


def _round_out(lo: Fraction, hi: Fraction, bits: int) -> Interval:
    g = 1 << (bits + 2)
    return Interval(Fraction(floor(lo * g), g), Fraction(ceil(hi * g), g))


def _arctan_inv(x: int, one: int) -> tuple[int, int]:
    """Fixed-point arctan(1/x) * one and the number of series terms used."""
    x2 = x * x
    term = one // x
    total = 0
    k = 0
    while term:
        t = term // (2 * k + 1)
        total = total - t if k % 2 else total + t
        term //= x2
        k += 1
    return total, k


def _pi_enclosure(bits: int) -> Interval:
    guard = 32
    while True:
        prec = bits + guard
        one = 1 << prec
        a, n1 = _arctan_inv(5, one)
        b, n2 = _arctan_inv(239, one)
        approx = 16 * a - 4 * b
        err = 16 * (2 * n1 + 3) + 4 * (2 * n2 + 3)
        if 2 * err <= 1 << (guard - 1):
            lo = Fraction(approx - err, one)
            hi = Fraction(approx + err, one)
            return _round_out(lo, hi, bits)
        guard += 16


def _e_enclosure(bits: int) -> Interval:
    guard = 32
    while True:
        prec = bits + guard
        one = 1 << prec
        term = one
        total = one
        k = 1
        while term:
            term //= k
            total += term
            k += 1
        err = k + 3
        if 2 * err <= 1 << (guard - 1):
            return _round_out(Fraction(total - err, one), Fraction(total + err, one), bits)
        guard += 16


class NamedConstant(RealPoint):
    """pi or e, computed from integer fixed-point series with explicit error bounds."""

    _SOURCES = {"pi": _pi_enclosure, "e": _e_enclosure}

    def __init__(self, name: str, max_bits: int = DEFAULT_MAX_BITS):
        if name not in self._SOURCES:
            raise PreconditionError(f"unknown constant {name!r}; choose pi or e")
        super().__init__(max_bits)
        self.name = name

    def _compute(self, bits: int) -> Interval:
        return self._SOURCES[self.name](bits)

    def fresh_copy(self) -> NamedConstant:
        return NamedConstant(self.name, self.max_bits)


def pi(max_bits: int = DEFAULT_MAX_BITS) -> NamedConstant:
    return NamedConstant("pi", max_bits)


def e(max_bits: int = DEFAULT_MAX_BITS) -> NamedConstant:
    return NamedConstant("e", max_bits)


class DigitStream(RealPoint):
    """Point defined by a caller-supplied enclosure callback.

    ``callback(n)`` must return an Interval of width <= 2^-n containing the
    value; enclosures from different calls must overlap. The value is treated
    as transcendental, which is a promise made by whoever supplies it.
    """

    def __init__(self, callback, name: str = "digits", max_bits: int = DEFAULT_MAX_BITS):
        super().__init__(max_bits)
        self._callback = callback
        self.name = name

    def _compute(self, bits: int) -> Interval:
        iv = self._callback(bits)
        if not isinstance(iv, Interval):
            iv = Interval(*iv)
        with self._lock:
            best = self._best
        if best is not None and not best[1].intersects(iv):
            raise FieldInvariantError(f"{self.name}: enclosures are not nested-compatible")
        return iv

    def fresh_copy(self) -> DigitStream:
        return DigitStream(self._callback, self.name, self.max_bits)


def parse_digits(text: str) -> tuple[Fraction, int, int]:
    """Parse the digit-file format; returns (sign, integer part, fraction digits)."""
    lines = text.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise PreconditionError("empty digit file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "decimal" or not header[1].isdigit():
        raise PreconditionError("digit file must start with a 'decimal <count>' header")
    count = int(header[1])
    body = "".join("".join(lines[1:]).split())
    sign = 1
    if body[:1] in "+-" and body:
        sign = -1 if body[0] == "-" else 1
        body = body[1:]
    whole, _, frac = body.partition(".")
    if not whole.isdigit() or (frac and not frac.isdigit()):
        raise PreconditionError("digit file body must look like 3.14159...")
    if len(frac) < count:
        raise PreconditionError(f"header promises {count} digits but only {len(frac)} follow")
    return sign, int(whole), frac[:count]


def digits_point(text: str, name: str = "digits", max_bits: int = DEFAULT_MAX_BITS) -> DigitStream:
    """Digit stream from decimal text; truncated or correctly rounded digits both work."""
    sign, whole, frac = parse_digits(text)

    def callback(bits: int) -> Interval:
        k = 0
        while 10 ** k < 1 << (bits + 1):
            k += 1
        if k > len(frac):
            raise PrecisionExhausted(
                f"{name}: {bits} bits need {k} digits but the file has {len(frac)}"
            )
        d = Fraction(whole) + (Fraction(int(frac[:k]), 10 ** k) if k else 0)
        u = Fraction(1, 10 ** k)
        lo, hi = d - u, d + u
        if sign < 0:
            lo, hi = -hi, -lo
        return Interval(lo, hi)

    return DigitStream(callback, name, max_bits)


def load_digits(path, max_bits: int = DEFAULT_MAX_BITS) -> DigitStream:
    with open(path, encoding="utf-8") as fh:
        return digits_point(fh.read(), name=f"digits:{path}", max_bits=max_bits)


# ---------------------------------------------------------------------------
# real algebraic numbers


def sturm_sequence(p: UniPoly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        # scale to keep coefficients tidy; only the sign of the factor matters
        c = r.primitive_int()[0]
        seq.append(-r * (1 / c))
    return seq


def _variations(seq, x) -> int:
    signs = [s for s in (Sign.of(q(x)) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: UniPoly, lo, hi, seq=None) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


class AlgebraicNumber(RealPoint):
    """Real root of ``minpoly`` isolated by ``isolating``.

    The constructor checks degree, squarefreeness, that neither endpoint is a
    root, and that the Sturm count inside the interval is exactly one.
    Irreducibility is certified where cheap; ``trusted=True`` skips that
    check (the zero test stays correct for squarefree reducible input).
    """

    transcendental = False

    def __init__(self, minpoly: UniPoly, isolating, trusted: bool = False,
                 max_bits: int = DEFAULT_MAX_BITS, _checked: bool = False):
        super().__init__(max_bits)
        if not isinstance(isolating, Interval):
            isolating = Interval(*isolating)
        if minpoly.degree < 1:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        m = minpoly.monic()
        if not _checked:
            if not is_squarefree(m):
                raise PreconditionError(f"{m} is not squarefree")
            if isolating.width and (not m(isolating.lo) or not m(isolating.hi)):
                raise PreconditionError("isolating interval endpoint is a root")
            if isolating.width:
                n = count_roots(m, isolating.lo, isolating.hi)
            else:
                n = 1 if not m(isolating.lo) else 0
            if n != 1:
                raise PreconditionError(
                    f"interval {isolating} holds {n} roots of {m}, expected exactly one"
                )
            if not trusted and not certify_irreducible(m):
                raise PreconditionError(
                    f"could not certify {m} irreducible; pass trusted=True to accept it"
                )
        self.minpoly = m
        self.isolating = isolating
        self.trusted = trusted
        self.name = f"root of {m} in {isolating}"
        if m.degree == 1:
            r = -m.coeffs[0]
            self._best = (max_bits, Interval(r, r))
            self._lo_sign = Sign.ZERO
        else:
            self._lo_sign = Sign.of(m(isolating.lo))
            self._best = None
        self._current = isolating

    @classmethod
    def rational(cls, value) -> AlgebraicNumber:
        v = as_rational(value)
        return cls(UniPoly((-v, 1)), Interval(v, v), _checked=True)

    def rational_value(self) -> Fraction | None:
        if self.minpoly.degree == 1:
            return -self.minpoly.coeffs[0]
        return None

    def _compute(self, bits: int) -> Interval:
        target = Fraction(1, 1 << bits)
        with self._lock:
            iv = self._current
        m = self.minpoly
        lo, hi = iv.lo, iv.hi
        while hi - lo > target:
            mid = (lo + hi) / 2
            s = Sign.of(m(mid))
            if s == 0:
                lo = hi = mid
                break
            if s == self._lo_sign:
                lo = mid
            else:
                hi = mid
        out = Interval(lo, hi)
        with self._lock:
            if out.width < self._current.width:
                self._current = out
        return out

    def fresh_copy(self) -> AlgebraicNumber:
        return AlgebraicNumber(self.minpoly, self.isolating, self.trusted, self.max_bits, _checked=True)

    def is_root_of(self, p: UniPoly) -> bool:
        """Exact test p(a) == 0 through gcd with the minimal polynomial."""
        if p.is_zero():
            return True
        g = poly_gcd(p, self.minpoly)
        if g.degree < 1:
            return False
        if g.degree == self.minpoly.degree:
            return True
        iv = self.isolating
        if iv.width == 0:
            return not g(iv.lo)
        return count_roots(g, iv.lo, iv.hi) > 0

    def describe(self) -> str:
        return f"root of {self.minpoly} in {self.isolating}"


def algebraic(minpoly, lo, hi, trusted: bool = False, max_bits: int = DEFAULT_MAX_BITS) -> AlgebraicNumber:
    return AlgebraicNumber(minpoly, Interval(lo, hi), trusted=trusted, max_bits=max_bits)


@dataclass(frozen=True)
class PointTuple:
    points: tuple
    independence_promise: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise PreconditionError("a point tuple needs at least one coordinate")

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------------------
# sign oracle


def _univariate(r) -> tuple[UniPoly, UniPoly]:
    if isinstance(r, UniPoly):
        return r, UniPoly((1,))
    if isinstance(r, (int, Fraction)):
        return UniPoly((r,)), UniPoly((1,))
    r = RationalFunction.coerce(r)
    return r.num, r.den


def _poly_sign_refined(p: UniPoly, pt: RealPoint, start_bits: int) -> Sign:
    """Sign of p at pt, assuming p(pt) != 0 has been established."""
    ints = list(p.primitive_int()[1])
    if len(ints) == 1:
        return Sign.of(ints[0])
    bits = start_bits
    cap = pt.max_bits
    while True:
        b = min(bits, cap)
        iv = pt.refine(b)
        if iv.width == 0:
            _record(b)
            return Sign.of(p(iv.lo))
        k = b + 2 * len(ints) + 8
        s = _sign_of_dyadic(_horner_dyadic(ints, _to_dyadic(iv, k), k))
        if s is not None:
            _record(b)
            return s
        if b >= cap:
            raise PrecisionExhausted(
                f"sign of {p} at {pt.describe()} undecided at the {cap}-bit cap"
            )
        bits *= 2


def poly_sign_at(p: UniPoly, pt, start_bits: int = START_BITS) -> Sign:
    if p.is_zero():
        return Sign.ZERO
    if isinstance(pt, (int, Fraction)):
        return Sign.of(p(pt))
    if p.is_constant():
        return Sign.of(p.lc)
    if isinstance(pt, AlgebraicNumber):
        rv = pt.rational_value()
        if rv is not None:
            return Sign.of(p(rv))
        if pt.is_root_of(p):
            return Sign.ZERO
    return _poly_sign_refined(p, pt, start_bits)


def sign_at(r, pt, start_bits: int = START_BITS) -> Sign:
    """Exact sign of a polynomial or rational function at a point."""
    num, den = _univariate(r)
    if den.is_zero():
        raise DenominatorVanishesError("zero denominator")
    if isinstance(pt, (int, Fraction)):
        dv = den(pt)
        if not dv:
            raise DenominatorVanishesError(f"denominator {den} vanishes at {pt}")
        return Sign.of(num(pt) / dv)
    if isinstance(pt, AlgebraicNumber) and not den.is_constant():
        if pt.is_root_of(den):
            raise DenominatorVanishesError(f"denominator {den} vanishes at {pt.describe()}")
    sn = poly_sign_at(num, pt, start_bits)
    if sn == 0:
        return Sign.ZERO
    sd = Sign.of(den.lc) if den.is_constant() else poly_sign_at(den, pt, start_bits)
    return Sign(int(sn) * int(sd))


def _box_eval(terms: dict, boxes, k: int):
    lo = hi = 0
    for e, c in terms.items():
        acc = (c << k, c << k)
        for b, ex in zip(boxes, e):
            if ex:
                acc = _dmul(acc, _dpow(b, ex, k), k)
        lo += acc[0]
        hi += acc[1]
    return lo, hi


def multi_poly_sign_at(p: MultiPoly, pts: PointTuple, start_bits: int = START_BITS) -> Sign:
    if len(pts) != p.arity:
        raise ArityError(f"polynomial arity {p.arity} but {len(pts)} coordinates")
    if p.is_zero():
        return Sign.ZERO
    if p.is_constant():
        return Sign.of(p.constant_value())
    coords = pts.points
    if all(isinstance(c, (int, Fraction)) for c in coords):
        return Sign.of(p(coords))
    if len(coords) == 1:
        return poly_sign_at(p.to_unipoly(), coords[0], start_bits)
    if not pts.independence_promise:
        raise PreconditionError(
            "multivariate sign queries need the algebraic-independence promise"
        )
    _, ints = p.primitive_int()
    real = [c for c in coords if not isinstance(c, (int, Fraction))]
    cap = min(c.max_bits for c in real)
    deg = max(p.total_degree, 1)
    bits = start_bits
    while True:
        b = min(bits, cap)
        k = b + 4 * deg + 16
        boxes = []
        for c in coords:
            if isinstance(c, (int, Fraction)):
                boxes.append(_to_dyadic(Interval(c, c), k))
            else:
                boxes.append(_to_dyadic(c.refine(b), k))
        s = _sign_of_dyadic(_box_eval(ints, boxes, k))
        if s is not None:
            _record(b)
            return s
        if b >= cap:
            raise PrecisionExhausted(
                f"sign undecided at the {cap}-bit cap; the independence promise may be false"
            )
        bits *= 2


def sign_at_tuple(r, pts: PointTuple, start_bits: int = START_BITS) -> Sign:
    if isinstance(r, MultiPoly):
        r = MultiRationalFunction(r)
    if r.arity != len(pts):
        raise ArityError(f"function arity {r.arity} but {len(pts)} coordinates")
    sn = multi_poly_sign_at(r.num, pts, start_bits)
    if sn == 0:
        return Sign.ZERO
    if r.den.is_constant():
        return Sign(int(sn) * (1 if r.den.constant_value() > 0 else -1))
    sd = multi_poly_sign_at(r.den, pts, start_bits)
    if sd == 0:
        raise DenominatorVanishesError("denominator vanishes at the point tuple")
    return Sign(int(sn) * int(sd))


def compare(pt, value, start_bits: int = START_BITS) -> Sign:
    """Sign of (pt - value) for a rational value."""
    return sign_at(UniPoly((-as_rational(value), 1)), pt, start_bits)


def grid_floor(pt, k: int) -> int:
    """The integer m with m/2^k <= pt < (m+1)/2^k, independent of cached enclosures."""
    scale = 1 << k
    if isinstance(pt, (int, Fraction)):
        return floor(as_rational(pt) * scale)
    iv = pt.refine(min(k + 2, pt.max_bits))
    m = floor(iv.lo * scale)
    while compare(pt, Fraction(m, scale)) < 0:
        m -= 1
    while compare(pt, Fraction(m + 1, scale)) >= 0:
        m += 1
    return m


def points_equal(a, b) -> bool:
    """Exact equality where decidable.

    Rationals and algebraic numbers compare exactly. A transcendental point
    never equals a rational or algebraic one. Two transcendental points are
    equal when they are the same object or the same named constant; otherwise
    they are separated by refinement (PrecisionExhausted if that fails).
    """
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    if isinstance(a, (int, Fraction)):
        a, b = b, a
    if isinstance(a, AlgebraicNumber):
        if isinstance(b, (int, Fraction)):
            return a.is_root_of(UniPoly((-as_rational(b), 1)))
        if isinstance(b, AlgebraicNumber):
            return b.is_root_of(a.minpoly)
        return False
    if isinstance(b, (int, Fraction)) or isinstance(b, AlgebraicNumber):
        return False
    if a is b:
        return True
    if isinstance(a, NamedConstant) and isinstance(b, NamedConstant):
        return a.name == b.name
    bits = START_BITS
    cap = min(a.max_bits, b.max_bits)
    while True:
        bb = min(bits, cap)
        if not a.refine(bb).intersects(b.refine(bb)):
            return False
        if bb >= cap:
            raise PrecisionExhausted("could not separate two transcendental points")
        bits *= 2


def point_text(pt) -> str:
    if isinstance(pt, (int, Fraction)):
        return str(pt)
    return pt.describe()


__all__ = [
    "Sign", "Interval", "RealPoint", "NamedConstant", "DigitStream", "AlgebraicNumber",
    "PointTuple", "pi", "e", "algebraic", "digits_point", "load_digits", "sign_at",
    "poly_sign_at", "sign_at_tuple", "multi_poly_sign_at", "eval_interval", "compare",
    "points_equal", "grid_floor", "track_precision", "PrecisionStats", "count_roots", "sturm_sequence",
    "point_text", "DEFAULT_MAX_BITS", "START_BITS",
]
