"""Multiplication-closed hyperplanes of Q[x] and counterexamples for the others.

A hyperplane is written through its normalized coefficient sequence
(lambda_0, lambda_1, ...) = (0, 1, lambda_2, ...): p = sum a_i x^i lies on it
iff sum a_i lambda_i = 0. The closed ones come in three families:

* TwoPoint(beta, gamma): p(beta) = p(gamma), lambda_i = (beta^i - gamma^i)/(beta - gamma)
* Derivation(delta): p'(delta) = 0, lambda_i = i delta^(i-1)
* ComplexPair(u, v): Im p(u + iv) = 0, lambda_i = Im z^i / Im z

and the sign of 3 lambda_2^2 - 4 lambda_3 tells them apart. Parameters are
exact: rationals, or quadratic surds when the defining quadratic does not
split over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError, RetryBudgetExhausted
from .qexact import UniPoly, as_rational
from .realpoint import (
    AlgebraicNumber,
    RealPoint,
    START_BITS,
    Sign,
    compare,
    grid_floor,
    point_text,
    points_equal,
    poly_sign_at,
    sign_at,
    track_precision,
)
from .surd import QuadSurd, sqrt_rational, surd_value


def _exact(v):
    if isinstance(v, (QuadSurd, RealPoint)):
        return surd_value(v) if isinstance(v, QuadSurd) else v
    return as_rational(v)


def _sign_exact(v) -> int:
    if isinstance(v, QuadSurd):
        return v.sign()
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# Gaussian numbers with exact (rational or surd) components


@dataclass(frozen=True)
class Gaussian:
    re: object
    im: object

    def __add__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian(self.re + other.re, self.im + other.im)
        return Gaussian(self.re + other, self.im)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        return Gaussian(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = Gaussian(Fraction(1), Fraction(0)), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __str__(self):
        return f"{surd_value(self.re) if isinstance(self.re, QuadSurd) else self.re} + " \
               f"({surd_value(self.im) if isinstance(self.im, QuadSurd) else self.im})i"


# ---------------------------------------------------------------------------
# hyperplane kinds


@dataclass(frozen=True)
class TwoPoint:
    beta: object
    gamma: object

    def __post_init__(self):
        object.__setattr__(self, "beta", _exact(self.beta))
        object.__setattr__(self, "gamma", _exact(self.gamma))
        if self.beta == self.gamma:
            raise PreconditionError("two-point hyperplane needs distinct points")

    name = "two-point"


@dataclass(frozen=True)
class Derivation:
    delta: object

    def __post_init__(self):
        object.__setattr__(self, "delta", _exact(self.delta))

    name = "derivation"


@dataclass(frozen=True)
class ComplexPair:
    u: object
    v: object

    def __post_init__(self):
        u, v = _exact(self.u), _exact(self.v)
        if isinstance(u, RealPoint) or isinstance(v, RealPoint):
            raise PreconditionError("complex-pair parameters must be exact")
        if not v:
            raise PreconditionError("complex-pair hyperplane needs v != 0")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    name = "complex-pair"

    @property
    def z(self) -> Gaussian:
        return Gaussian(self.u, self.v)


HyperplaneKind = (TwoPoint, Derivation, ComplexPair)


def same_kind(k1, k2) -> bool:
    """Equality up to swapping beta/gamma and v/-v."""
    if type(k1) is not type(k2):
        return False
    if isinstance(k1, TwoPoint):
        return {k1.beta, k1.gamma} == {k2.beta, k2.gamma}
    if isinstance(k1, Derivation):
        return k1.delta == k2.delta
    return k1.u == k2.u and (k1.v == k2.v or k1.v == -k2.v)


def kind_to_dict(kind) -> dict:
    if isinstance(kind, TwoPoint):
        return {"kind": kind.name, "beta": str(kind.beta), "gamma": str(kind.gamma)}
    if isinstance(kind, Derivation):
        return {"kind": kind.name, "delta": point_text(kind.delta)
                if isinstance(kind.delta, RealPoint) else str(kind.delta)}
    return {"kind": kind.name, "u": str(kind.u), "v": str(kind.v)}


# ---------------------------------------------------------------------------
# lambda sequences


def lambda_closed_form(kind, i: int):
    """lambda_i of the family, computed directly from the parameters."""
    if i < 0:
        raise PreconditionError("index must be non-negative")
    if i == 0:
        return Fraction(0)
    if isinstance(kind, TwoPoint):
        b, g = QuadSurd.coerce(kind.beta), QuadSurd.coerce(kind.gamma)
        return surd_value((b ** i - g ** i) / (b - g))
    if isinstance(kind, Derivation):
        if isinstance(kind.delta, RealPoint):
            raise PreconditionError("closed forms need an exact delta")
        return surd_value(QuadSurd.coerce(kind.delta) ** (i - 1) * i)
    if isinstance(kind, ComplexPair):
        w = kind.z ** i
        return surd_value(QuadSurd.coerce(w.im) / QuadSurd.coerce(kind.v))
    raise TypeError(f"unknown hyperplane kind {kind!r}")


@dataclass(frozen=True)
class LambdaSeq:
    values: tuple

    def __post_init__(self):
        vals = tuple(surd_value(v) if isinstance(v, QuadSurd) else as_rational(v) for v in self.values)
        if len(vals) >= 1 and vals[0] != 0:
            raise PreconditionError("lambda_0 must be 0")
        if len(vals) >= 2 and vals[1] != 1:
            raise PreconditionError("lambda_1 must be 1 (normalized)")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def prefix(self, n: int) -> LambdaSeq:
        return LambdaSeq(self.values[:n])

    def pair(self, p: UniPoly):
        """sum a_i lambda_i; zero means p lies on the hyperplane."""
        if p.degree >= len(self.values):
            raise PreconditionError(f"prefix of length {len(self.values)} too short for degree {p.degree}")
        total = Fraction(0)
        for a, lam in zip(p.coeffs, self.values):
            if a:
                total = total + a * lam
        return surd_value(total) if isinstance(total, QuadSurd) else total

    def residues(self):
        return [recursion_residue(self.values, j) for j in range(1, len(self.values) - 2)]

    @classmethod
    def of_kind(cls, kind, length: int) -> LambdaSeq:
        return cls(tuple(lambda_closed_form(kind, i) for i in range(length)))


def recursion_residue(lam, j: int):
    """lambda_2^2 lambda_j - lambda_1 lambda_2 lambda_(j+1) - lambda_1 lambda_3 lambda_j
    + lambda_1^2 lambda_(j+2)."""
    l1, l2, l3 = lam[1], lam[2], lam[3]
    r = l2 * l2 * lam[j] - l1 * l2 * lam[j + 1] - l1 * l3 * lam[j] + l1 * l1 * lam[j + 2]
    return surd_value(r) if isinstance(r, QuadSurd) else r


def lambda_recursion_extend(l1, l2, l3, K: int) -> LambdaSeq:
    """Prefix lambda_0..lambda_K generated from lambda_1..lambda_3 by the recursion."""
    l1 = as_rational(l1) if not isinstance(l1, QuadSurd) else l1
    if l1 != 1:
        raise PreconditionError("lambda_1 must be normalized to 1")
    vals = [Fraction(0), Fraction(1), l2, l3]
    j = 2
    while len(vals) < K + 1:
        # lambda_(j+2) = lambda_2 lambda_(j+1) + (lambda_3 - lambda_2^2) lambda_j
        nxt = l2 * vals[j + 1] + (l3 - l2 * l2) * vals[j]
        vals.append(surd_value(nxt) if isinstance(nxt, QuadSurd) else nxt)
        j += 1
    return LambdaSeq(tuple(vals[:K + 1]))


def discriminant(l2, l3):
    d = 3 * l2 * l2 - 4 * l3
    return surd_value(d) if isinstance(d, QuadSurd) else d


def classify_params(l2, l3):
    """Family and parameters of the closed hyperplane with the given lambda_2, lambda_3."""
    l2, l3 = _exact(l2), _exact(l3)
    if isinstance(l2, (QuadSurd, RealPoint)) or isinstance(l3, (QuadSurd, RealPoint)):
        raise PreconditionError("classify_params expects rational lambda_2 and lambda_3")
    disc = discriminant(l2, l3)
    if disc < 0:
        root = sqrt_rational(-disc)  # sqrt(4 lambda_3 - 3 lambda_2^2)
        beta = surd_value((QuadSurd(l2) - root) / 2)
        gamma = surd_value((QuadSurd(l2) + root) / 2)
        return TwoPoint(beta, gamma)
    if disc == 0:
        return Derivation(l2 / 2)
    u = l2 / 2
    return ComplexPair(u, surd_value(sqrt_rational(3 * u * u - l3)))


def region(l2, l3) -> str:
    s = _sign_exact(discriminant(l2, l3))
    return {-1: TwoPoint.name, 0: Derivation.name, 1: ComplexPair.name}[s]


# ---------------------------------------------------------------------------
# membership and product closure


def membership(p: UniPoly, kind) -> bool:
    """Exact test of the family's defining equation."""
    if isinstance(kind, TwoPoint):
        return p(kind.beta) == p(kind.gamma)
    if isinstance(kind, Derivation):
        dp = p.derivative()
        if isinstance(kind.delta, RealPoint):
            return poly_sign_at(dp, kind.delta) == 0
        return not dp(kind.delta)
    if isinstance(kind, ComplexPair):
        w = p(kind.z) if not p.is_zero() else Fraction(0)
        im = w.im if isinstance(w, Gaussian) else 0
        return not im
    raise TypeError(f"unknown hyperplane kind {kind!r}")


@dataclass
class ClosureReport:
    kind: object
    pairs_checked: int = 0
    member_pairs: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_product_closure(kind, samples) -> ClosureReport:
    report = ClosureReport(kind)
    for p, q in samples:
        report.pairs_checked += 1
        if membership(p, kind) and membership(q, kind):
            report.member_pairs += 1
            if not membership(p * q, kind):
                report.violations.append((p, q))
    return report


# ---------------------------------------------------------------------------
# certified counterexamples


@dataclass(frozen=True)
class Term:
    """coef * poly(point); a Gaussian point contributes Im(poly(point))."""

    coef: Fraction
    poly: UniPoly
    point: object


@dataclass(frozen=True)
class Inequality:
    label: str
    terms: tuple
    sign: int

    def evaluate(self, fresh: bool = False, start_bits: int = START_BITS) -> Sign:
        exact = Fraction(0)
        real_poly = None
        real_point = None
        for t in self.terms:
            pt = t.point
            if isinstance(pt, Gaussian):
                w = t.poly(pt)
                im = w.im if isinstance(w, Gaussian) else 0
                exact = exact + t.coef * im
            elif isinstance(pt, (int, Fraction, QuadSurd)):
                exact = exact + t.coef * t.poly(pt)
            else:
                if real_point is not None and real_point is not pt:
                    raise PreconditionError("an inequality may involve one real point only")
                real_point = pt
                real_poly = t.poly * t.coef if real_poly is None else real_poly + t.poly * t.coef
        if real_point is None:
            if isinstance(exact, QuadSurd):
                return Sign(exact.sign())
            return Sign.of(exact)
        if isinstance(exact, QuadSurd):
            raise PreconditionError("cannot mix surd constants with a real point")
        pt = real_point.fresh_copy() if fresh else real_point
        return sign_at(real_poly + exact, pt, start_bits)

    def holds(self, fresh: bool = False, start_bits: int = START_BITS) -> bool:
        return int(self.evaluate(fresh, start_bits)) == self.sign

    def as_dict(self) -> dict:
        return {"inequality": self.label, "required_sign": str(Sign(self.sign))}


@dataclass
class Counterexample:
    family: str
    witnesses: tuple
    inequalities: tuple
    power: int | None = None
    params: dict = field(default_factory=dict)
    precision_used: int = 0

    def reverify(self, start_bits: int = 2 * START_BITS) -> bool:
        """Recheck every inequality on fresh points, starting at doubled precision."""
        return all(q.holds(fresh=True, start_bits=start_bits) for q in self.inequalities)

    def as_dict(self) -> dict:
        out = {
            "family": self.family,
            "witnesses": [str(w) for w in self.witnesses],
            "certificates": [dict(q.as_dict(), precision_bits=str(self.precision_used))
                             for q in self.inequalities],
            "params": {k: str(v) for k, v in self.params.items()},
        }
        if self.power is not None:
            out["power"] = str(self.power)
        return out


def _certify(family, witnesses, inequalities, power=None, params=None, stats=None) -> Counterexample:
    for q in inequalities:
        if not q.holds():
            raise PreconditionError(f"{family} counterexample failed: {q.label}")
    return Counterexample(family, tuple(witnesses), tuple(inequalities), power,
                          params or {}, stats.max_bits if stats else 0)


def _lin(a) -> UniPoly:
    return UniPoly((-as_rational(a), 1))


def _is_alpha(v, alpha) -> bool:
    if v is alpha or (isinstance(v, str) and v == "alpha"):
        return True
    if isinstance(v, (int, Fraction)) and isinstance(alpha, RealPoint):
        return isinstance(alpha, AlgebraicNumber) and points_equal(alpha, as_rational(v))
    return False


def counterexample_twopoint(alpha, b, c) -> Counterexample:
    """p with p(alpha) > 0, p(c) > 0 and p(b) < -p(c): so p sits on the c side of
    the split by p(b) vs p(c) while p^2 sits on the b side."""
    if _is_alpha(b, alpha):
        raise PreconditionError("b must differ from alpha")
    b = as_rational(b)
    with track_precision() as stats:
        if _is_alpha(c, alpha):
            s = 1 if compare(alpha, b) > 0 else -1
            dist = UniPoly((-s * b, s))  # |x - b| near alpha
            k = _between(lambda q: sign_at(UniPoly((2 * q,)) - dist, alpha) > 0,
                         lambda q: sign_at(dist - q, alpha) > 0)
            p = dist - k
            ineq = [
                Inequality("p(alpha) > 0", (Term(Fraction(1), p, alpha),), 1),
                Inequality("p(b) + p(alpha) < 0",
                           (Term(Fraction(1), p, b), Term(Fraction(1), p, alpha)), -1),
                Inequality("p(b) < 0", (Term(Fraction(1), p, b),), -1),
                Inequality("p(b)^2 - p(alpha)^2 > 0",
                           (Term(Fraction(1), p * p, b), Term(Fraction(-1), p * p, alpha)), 1),
            ]
            return _certify("two-point", [p], ineq, params={"b": b, "c": "alpha"}, stats=stats)
        c = as_rational(c)
        if b == c:
            raise PreconditionError("b and c must be distinct")
        if isinstance(alpha, AlgebraicNumber) and points_equal(alpha, c):
            raise PreconditionError("c equals alpha; pass the point itself for that case")
        lag = UniPoly((-c, 1)) * (Fraction(-3) / (b - c)) + UniPoly((-b, 1)) * (Fraction(1) / (c - b))
        quad = _lin(b) * _lin(c)
        s = int(sign_at(quad, alpha))
        if s == 0:
            raise PreconditionError("alpha coincides with b or c")
        m = Fraction(s)
        for _ in range(256):
            p = lag + quad * m
            if sign_at(p, alpha) > 0:
                break
            m *= 2
        else:
            raise RetryBudgetExhausted("no multiplier made p positive at alpha")
        ineq = [
            Inequality("p(alpha) > 0", (Term(Fraction(1), p, alpha),), 1),
            Inequality("p(c) > 0", (Term(Fraction(1), p, c),), 1),
            Inequality("p(b) + p(c) < 0", (Term(Fraction(1), p, b), Term(Fraction(1), p, c)), -1),
            Inequality("p(b)^2 - p(c)^2 > 0",
                       (Term(Fraction(1), p * p, b), Term(Fraction(-1), p * p, c)), 1),
        ]
        return _certify("two-point", [p], ineq, params={"b": b, "c": c}, stats=stats)


def _between(above_low, below_high) -> Fraction:
    from .derivsplit import simplest_between

    return simplest_between(above_low, below_high)


def _complex_shifts(alpha):
    """Shifts b with alpha + b > 0, in a fixed order: 0 first when allowed,
    then values approaching -alpha from above."""
    out = []
    if compare(alpha, 0) > 0:
        out.append(Fraction(0))
    for k in range(0, 8):
        scale = 1 << k
        b = -Fraction(grid_floor(alpha, k), scale)
        if compare(alpha, -b) <= 0:
            b += Fraction(1, scale)
        if b not in out:
            out.append(b)
    return out


def counterexample_complex(alpha, u, v, cap: int = 64) -> Counterexample:
    """p = x + b with p(alpha) > 0 and Im p(z) > 0 but Im p(z)^n < 0, z = u + iv."""
    u = as_rational(u)
    v = _exact(v)
    if not v:
        raise PreconditionError("v must be nonzero")
    if _sign_exact(v) < 0:
        v = -v
    with track_precision() as stats:
        for b in _complex_shifts(alpha):
            w = Gaussian(u + b, v)
            acc = w
            for n in range(2, cap + 1):
                acc = acc * w
                if _sign_exact(acc.im) < 0:
                    p = UniPoly((b, 1))
                    z = Gaussian(u, v)
                    ineq = [
                        Inequality("p(alpha) > 0", (Term(Fraction(1), p, alpha),), 1),
                        Inequality("Im p(z) > 0", (Term(Fraction(1), p, z),), 1),
                        Inequality(f"Im p(z)^{n} < 0", (Term(Fraction(1), p ** n, z),), -1),
                    ]
                    return _certify("complex-pair", [p], ineq, power=n,
                                    params={"u": u, "v": v, "b": b}, stats=stats)
        # Nearly real z: a linear p cannot rotate it far enough. The quadratic
        # (x-u)^2 + A(x-u) + v^2 sends z to iAv, whose cube has negative Im,
        # and is positive at alpha once A is small.
        v2 = v * v
        if isinstance(v2, Fraction) or (isinstance(v2, QuadSurd) and v2.b == 0):
            v2 = Fraction(v2) if isinstance(v2, Fraction) else v2.a
            t = UniPoly((-u, 1))
            A = Fraction(1)
            for _ in range(256):
                p = t * t + t * A + v2
                if sign_at(p, alpha) > 0:
                    z = Gaussian(u, v)
                    ineq = [
                        Inequality("p(alpha) > 0", (Term(Fraction(1), p, alpha),), 1),
                        Inequality("Im p(z) > 0", (Term(Fraction(1), p, z),), 1),
                        Inequality("Im p(z)^3 < 0", (Term(Fraction(1), p ** 3, z),), -1),
                    ]
                    return _certify("complex-pair", [p], ineq, power=3,
                                    params={"u": u, "v": v, "A": A}, stats=stats)
                A /= 2
    raise RetryBudgetExhausted(f"no power up to {cap} turned Im negative for any shift tried")


def counterexample_derivation(alpha, delta) -> Counterexample:
    """Quadratics p+ and p- positive at alpha with p(delta) < 0 and p'(delta) = +-1,
    so squaring flips the sign of the derivative at delta."""
    if _is_alpha(delta, alpha):
        raise PreconditionError("delta must differ from alpha")
    d = _exact(delta)
    if not isinstance(d, Fraction):
        raise PreconditionError("delta must be rational")
    t = _lin(d)
    with track_precision() as stats:
        c = Fraction(1)
        for _ in range(256):
            pp = t * t * c + t - 1
            pm = t * t * c - t - 1
            if sign_at(pp, alpha) > 0 and sign_at(pm, alpha) > 0:
                break
            c *= 2
        else:
            raise RetryBudgetExhausted("no quadratic coefficient made both positive")
        ineq = []
        for name, p, s in (("p+", pp, 1), ("p-", pm, -1)):
            ineq += [
                Inequality(f"{name}(alpha) > 0", (Term(Fraction(1), p, alpha),), 1),
                Inequality(f"{name}(delta) < 0", (Term(Fraction(1), p, d),), -1),
                Inequality(f"{name}'(delta) {'>' if s > 0 else '<'} 0",
                           (Term(Fraction(1), p.derivative(), d),), s),
                Inequality(f"({name}^2)'(delta) {'<' if s > 0 else '>'} 0",
                           (Term(Fraction(1), (p * p).derivative(), d),), -s),
            ]
        return _certify("derivation", [pp, pm], ineq, params={"delta": d, "c": c}, stats=stats)


__all__ = [
    "Gaussian", "TwoPoint", "Derivation", "ComplexPair", "HyperplaneKind", "same_kind",
    "kind_to_dict", "lambda_closed_form", "LambdaSeq", "recursion_residue",
    "lambda_recursion_extend", "discriminant", "classify_params", "region", "membership",
    "ClosureReport", "check_product_closure", "Term", "Inequality", "Counterexample",
    "counterexample_twopoint", "counterexample_complex", "counterexample_derivation",
]
