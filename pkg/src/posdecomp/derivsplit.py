"""Derivation-sign decompositions of positive elements.

Univariate: an element r of Q(alpha) with r(alpha) > 0 goes to H+, H0 or H-
by the sign of r'(alpha). Two-piece variants attach H0 to one side. The
lifting routine classifies p1/p2 from its numerator and denominator alone,
using a linear multiplier when the two land in the same class.

Multivariate: a SplitPlan cuts the positive cone repeatedly by the sign of a
rational derivation sum(l_i d/dx_i).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import ceil, floor

from .errors import (
    ArityError,
    LinearDependenceError,
    NotPositiveError,
    PreconditionError,
    WitnessSearchExhausted,
)
from .qexact import (
    MultiPoly,
    MultiRationalFunction,
    RationalFunction,
    UniPoly,
    as_rational,
    poly_gcd,
)
from .realpoint import (
    PointTuple,
    Sign,
    compare,
    grid_floor,
    multi_poly_sign_at,
    poly_sign_at,
    sign_at,
    sign_at_tuple,
)


class Piece(enum.Enum):
    PLUS = "H+"
    ZERO = "H0"
    MINUS = "H-"

    @classmethod
    def from_sign(cls, s) -> Piece:
        return {1: cls.PLUS, 0: cls.ZERO, -1: cls.MINUS}[int(s)]


class TwoPolicy(enum.Enum):
    ZERO_WITH_PLUS = "zero-with-plus"
    ZERO_WITH_MINUS = "zero-with-minus"


class TwoClass(enum.Enum):
    H1 = "H1"
    H2 = "H2"


class ZeroSide(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def _as_rf(r) -> RationalFunction:
    return RationalFunction.coerce(r)


def _require_positive(r: RationalFunction, alpha, what: str = "element"):
    if sign_at(r, alpha) <= 0:
        raise NotPositiveError(f"{what} {r} is not positive at the point")


def derivative_sign(r, alpha) -> Sign:
    """Sign of r'(alpha), read off the quotient-rule numerator."""
    r = _as_rf(r)
    return poly_sign_at(r.derivative_numerator(), alpha)


def classify3(r, alpha) -> Piece:
    r = _as_rf(r)
    _require_positive(r, alpha)
    return Piece.from_sign(derivative_sign(r, alpha))


def piece_to_class(piece: Piece, policy: TwoPolicy) -> TwoClass:
    if piece is Piece.PLUS:
        return TwoClass.H1
    if piece is Piece.MINUS:
        return TwoClass.H2
    return TwoClass.H1 if policy is TwoPolicy.ZERO_WITH_PLUS else TwoClass.H2


def classify2(r, alpha, policy: TwoPolicy = TwoPolicy.ZERO_WITH_PLUS) -> TwoClass:
    return piece_to_class(classify3(r, alpha), policy)


# ---------------------------------------------------------------------------
# simplest rationals (Stern-Brocot descent via continued fractions)


def _simplest_closed_pos(x: Fraction, y: Fraction) -> Fraction:
    c = ceil(x)
    if c <= y:
        return Fraction(c)
    f = floor(x)
    return f + 1 / _simplest_closed_pos(1 / (y - f), 1 / (x - f))


def _simplest_open_pos(x: Fraction, y: Fraction) -> Fraction:
    n = floor(x) + 1
    if n < y:
        return Fraction(n)
    f = floor(x)
    if x == f:
        return f + Fraction(1, floor(1 / (y - f)) + 1)
    return f + 1 / _simplest_open_pos(1 / (y - f), 1 / (x - f))


def simplest_rational(lo, hi, open_interval: bool = False) -> Fraction:
    """Rational of least denominator in [lo, hi] (or (lo, hi)), nearest zero on ties."""
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi or (open_interval and lo == hi):
        raise PreconditionError("empty interval")
    if lo == hi:
        return lo
    if lo < 0 < hi or (not open_interval and (lo == 0 or hi == 0)):
        return Fraction(0)
    if hi <= 0:
        return -simplest_rational(-hi, -lo, open_interval)
    return _simplest_open_pos(lo, hi) if open_interval else _simplest_closed_pos(lo, hi)


def _gallop(pred) -> int:
    """Largest k >= 1 with pred(k) true, for pred monotone (true, then false)."""
    hi = 2
    while pred(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _simplest_positive(above_low, below_high) -> Fraction:
    a, b, c, d = 0, 1, 1, 0
    while True:
        f = Fraction(a + c, b + d)
        if not above_low(f):
            k = _gallop(lambda k, a=a, b=b, c=c, d=d: not above_low(Fraction(a + k * c, b + k * d)))
            a, b = a + k * c, b + k * d
        elif not below_high(f):
            k = _gallop(lambda k, a=a, b=b, c=c, d=d: not below_high(Fraction(c + k * a, d + k * b)))
            c, d = c + k * a, d + k * b
        else:
            return f


def simplest_between(above_low, below_high) -> Fraction:
    """Simplest rational q with above_low(q) and below_high(q).

    The predicates describe an open interval (m, M) through exact comparisons:
    above_low(q) is q > m and below_high(q) is q < M. Stern-Brocot descent
    with galloping steps; only the comparisons touch the real endpoints.
    """
    zero = Fraction(0)
    if above_low(zero) and below_high(zero):
        return zero
    if not above_low(zero):
        return _simplest_positive(above_low, below_high)
    return -_simplest_positive(lambda q: below_high(-q), lambda q: above_low(-q))


def _separating_core(p1: UniPoly, p2: UniPoly, alpha) -> UniPoly:
    """Linear l with l(alpha) > 0 and (p1 l)'(alpha), (p2 l)'(alpha) of opposite sign.

    Needs p1(alpha), p2(alpha) > 0 and p1'p2 - p1p2' nonzero at alpha, so that
    c = p1'/p1 and d = p2'/p2 differ at alpha.
    """
    d1, d2 = p1.derivative(), p2.derivative()
    # q > p'/p at alpha  <=>  (q p - p')(alpha) > 0 because p(alpha) > 0
    if sign_at(d2 * p1 - d1 * p2, alpha) > 0:
        (lo_p, lo_d), (hi_p, hi_d) = (p1, d1), (p2, d2)
    else:
        (lo_p, lo_d), (hi_p, hi_d) = (p2, d2), (p1, d1)
    t = simplest_between(lambda q: sign_at(lo_p * q - lo_d, alpha) > 0,
                         lambda q: sign_at(hi_d - hi_p * q, alpha) > 0)
    a = -t
    for k in range(0, 4096):
        m = grid_floor(alpha, k)
        beta = simplest_rational(Fraction(m, 1 << k), Fraction(m + 1, 1 << k))
        b = 1 - a * beta
        l = UniPoly((b, a))
        # window: l(alpha) = 1 + a(alpha - beta) must lie in (1/2, 3/2)
        if sign_at(l - Fraction(1, 2), alpha) > 0 and sign_at(Fraction(3, 2) - l, alpha) > 0:
            s1 = derivative_sign(p1 * l, alpha)
            s2 = derivative_sign(p2 * l, alpha)
            if s1 != 0 and s2 != 0 and s1 != s2:
                return l
    raise PreconditionError("no separating linear factor found")


def is_rational_multiple(p1: UniPoly, p2: UniPoly) -> bool:
    if p1.is_zero() or p2.is_zero():
        return p1.is_zero() and p2.is_zero()
    return p1 * p2.lc == p2 * p1.lc


def find_separating_linear(p1: UniPoly, p2: UniPoly, alpha) -> UniPoly:
    """Rational ax+b, positive at alpha, whose products with p1 and p2 land in
    opposite derivative-sign pieces."""
    _require_positive(_as_rf(p1), alpha, "p1")
    _require_positive(_as_rf(p2), alpha, "p2")
    s1 = derivative_sign(p1, alpha)
    s2 = derivative_sign(p2, alpha)
    if s1 == 0 or s2 == 0:
        raise PreconditionError("derivatives of p1 and p2 must be nonzero at the point")
    if s1 != s2:
        raise PreconditionError("derivatives of p1 and p2 must have the same sign")
    if is_rational_multiple(p1, p2):
        raise PreconditionError("p1 is a rational multiple of p2")
    w = p1.derivative() * p2 - p1 * p2.derivative()
    if poly_sign_at(w, alpha) == 0:
        raise PreconditionError("p1'/p1 and p2'/p2 coincide at the point")
    return _separating_core(p1, p2, alpha)


@dataclass(frozen=True)
class LiftTrace:
    result: TwoClass
    route: str
    multiplier: UniPoly | None = None


def lift_trace(p1, p2, alpha, policy: TwoPolicy = TwoPolicy.ZERO_WITH_PLUS) -> LiftTrace:
    p1 = _as_rf(p1).as_poly()
    p2 = _as_rf(p2).as_poly()
    if poly_gcd(p1, p2).degree > 0:
        raise PreconditionError("p1 and p2 must be coprime")
    _require_positive(_as_rf(p1), alpha, "p1")
    _require_positive(_as_rf(p2), alpha, "p2")
    c1 = classify2(p1, alpha, policy)
    if p2.is_constant():
        return LiftTrace(c1, "constant-denominator")
    c2 = classify2(p2, alpha, policy)
    if c1 != c2:
        return LiftTrace(c1, "classes-differ")
    w = p1.derivative() * p2 - p1 * p2.derivative()
    if poly_sign_at(w, alpha) == 0:
        return LiftTrace(piece_to_class(Piece.ZERO, policy), "zero-derivative")
    l = _separating_core(p1, p2, alpha)
    q1, q2 = p1 * l, p2 * l
    c1l = classify2(q1, alpha, policy)
    if c1l == classify2(q2, alpha, policy):
        raise PreconditionError("separating multiplier failed its postcondition")
    return LiftTrace(c1l, "linear-multiplier", l)


def lift_classify(p1, p2, alpha, policy: TwoPolicy = TwoPolicy.ZERO_WITH_PLUS) -> TwoClass:
    return lift_trace(p1, p2, alpha, policy).result


# ---------------------------------------------------------------------------
# generator decomposition


@dataclass(frozen=True)
class FactoredPoly:
    """constant * (x - beta)^power * (beta_prime - x)^[beta_prime is not None]."""

    constant: Fraction
    beta: Fraction
    power: int
    beta_prime: Fraction | None = None

    def expand(self) -> UniPoly:
        h = UniPoly((-self.beta, 1)) ** self.power * self.constant
        if self.beta_prime is not None:
            h = h * UniPoly((self.beta_prime, -1))
        return h

    def __str__(self):
        parts = [] if self.constant == 1 else [str(self.constant)]
        lin = f"(x - {self.beta})" if self.beta >= 0 else f"(x + {-self.beta})"
        parts.append(lin if self.power == 1 else f"{lin}^{self.power}")
        if self.beta_prime is not None:
            parts.append(f"({self.beta_prime} - x)")
        return "*".join(parts)


def generator_decomposition(g: UniPoly, alpha) -> FactoredPoly:
    """Product h of rational linear factors with LC(h) = LC(g) and 0 < h(alpha) < g(alpha)."""
    g = _as_rf(g).as_poly()
    if g.degree < 2:
        raise PreconditionError("generator decomposition needs degree >= 2")
    _require_positive(_as_rf(g), alpha, "g")
    n, lead = g.degree, g.lc
    for k in range(0, 4096):
        scale = 1 << k
        m = grid_floor(alpha, k)
        beta = Fraction(m, scale)
        if compare(alpha, beta) == 0:
            beta -= Fraction(1, scale)
        if lead > 0:
            h = FactoredPoly(lead, beta, n)
        else:
            h = FactoredPoly(-lead, beta, n - 1, Fraction(m + 1, scale))
        hp = h.expand()
        if sign_at(hp, alpha) > 0 and sign_at(g - hp, alpha) > 0:
            return h
    raise PreconditionError("generator decomposition did not converge")


# ---------------------------------------------------------------------------
# multivariate split plans


@dataclass(frozen=True)
class DerivationSpec:
    coefficients: tuple

    def __post_init__(self):
        cs = tuple(as_rational(c) for c in self.coefficients)
        if not cs:
            raise PreconditionError("a derivation needs at least one coefficient")
        if not any(cs):
            raise PreconditionError("a derivation must have a nonzero coefficient")
        object.__setattr__(self, "coefficients", cs)

    @property
    def arity(self) -> int:
        return len(self.coefficients)

    def sign_of(self, r, pts: PointTuple) -> Sign:
        if isinstance(r, MultiPoly):
            r = MultiRationalFunction(r)
        return multi_poly_sign_at(r.derivation_numerator(self.coefficients), pts)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coefficients) + ")"


@dataclass(frozen=True)
class PlanStep:
    derivation: DerivationSpec
    target: int
    zero_side: ZeroSide
    new_piece: int


@dataclass
class SplitPlan:
    arity: int
    steps: list
    witnesses: dict = field(default_factory=dict)

    @property
    def pieces(self) -> int:
        return len(self.steps) + 1


def check_pairwise_independent(derivs) -> None:
    for i in range(len(derivs)):
        for j in range(i + 1, len(derivs)):
            a, b = derivs[i].coefficients, derivs[j].coefficients
            if all(a[p] * b[q] == a[q] * b[p] for p in range(len(a)) for q in range(p + 1, len(a))):
                raise LinearDependenceError(
                    f"derivations {derivs[i]} and {derivs[j]} are linearly dependent"
                )


def _walk(sigs, steps) -> int:
    """Piece id from a cached signature function sigs(step_index) -> Sign."""
    piece = 1
    for j, st in enumerate(steps):
        if st.target != piece:
            continue
        s = sigs(j)
        keep = s > 0 or (s == 0 and st.zero_side is ZeroSide.PLUS)
        if not keep:
            piece = st.new_piece
    return piece


def classify_n(r, pts: PointTuple, plan: SplitPlan) -> int:
    if isinstance(r, MultiPoly):
        r = MultiRationalFunction(r)
    if r.arity != plan.arity or len(pts) != plan.arity:
        raise ArityError("arity mismatch between element, points and plan")
    if sign_at_tuple(r, pts) <= 0:
        raise NotPositiveError(f"{r} is not positive at the point tuple")
    cache: dict = {}

    def sigs(j):
        if j not in cache:
            cache[j] = plan.steps[j].derivation.sign_of(r, pts)
        return cache[j]

    return _walk(sigs, plan.steps)


def _candidate_stream(arity: int, pts: PointTuple, height: int, seed: int, budget: int):
    """Positive candidate witnesses in a fixed order."""
    one = MultiPoly.const(1, arity)
    xs = [MultiPoly.var(i, arity) for i in range(arity)]
    monos = list(xs)
    for i, j in combinations_with_replacement(range(arity), 2):
        monos.append(xs[i] * xs[j])
    yield one
    for m in monos:
        yield m
    for m in monos:
        # K - m with K an integer just above m(pts)
        k = 1
        while sign_at_tuple(MultiRationalFunction(MultiPoly.const(k, arity) - m), pts) <= 0:
            k *= 2
        yield MultiPoly.const(k, arity) - m
    rng = random.Random(seed)
    for _ in range(budget):
        p = MultiPoly.const(rng.randint(-height, height), arity)
        for m in monos:
            c = rng.randint(-height, height)
            if c:
                p = p + m * c
        if p.is_zero():
            continue
        yield p


def build_plan(derivs, pts: PointTuple, zero_sides=None, targets=None,
               height: int = 8, seed: int = 0, budget: int = 400) -> SplitPlan:
    """Cut the positive cone once per derivation, certifying every piece by a witness."""
    derivs = [d if isinstance(d, DerivationSpec) else DerivationSpec(tuple(d)) for d in derivs]
    arity = len(pts)
    if arity < 2:
        raise PreconditionError("split plans need at least two variables")
    if not pts.independence_promise:
        raise PreconditionError("split plans need the algebraic-independence promise")
    if not derivs:
        raise PreconditionError("at least one derivation is required")
    for d in derivs:
        if d.arity != arity:
            raise ArityError(f"derivation {d} has length {d.arity}, expected {arity}")
    check_pairwise_independent(derivs)
    zero_sides = list(zero_sides) if zero_sides is not None else [ZeroSide.MINUS] * len(derivs)
    if len(zero_sides) != len(derivs):
        raise PreconditionError("one zero side per derivation is required")
    zero_sides = [z if isinstance(z, ZeroSide) else ZeroSide(z) for z in zero_sides]
    if targets is not None and len(targets) != len(derivs):
        raise PreconditionError("one target per derivation is required")

    cands = []
    for p in _candidate_stream(arity, pts, height, seed, budget):
        r = MultiRationalFunction(p)
        if sign_at_tuple(r, pts) > 0:
            sig = tuple(d.sign_of(r, pts) for d in derivs)
            cands.append((r, sig))

    steps: list = []
    for j, d in enumerate(derivs):
        new_id = j + 2
        choices = [targets[j]] if targets is not None else list(range(1, j + 2))
        chosen = None
        for t in choices:
            if not 1 <= t <= j + 1:
                raise PreconditionError(f"step {j + 1} targets piece {t}, which does not exist yet")
            trial = steps + [PlanStep(d, t, zero_sides[j], new_id)]
            hit_keep = hit_new = False
            for _, sig in cands:
                got = _walk(lambda i, s=sig: s[i], trial)
                hit_keep = hit_keep or got == t
                hit_new = hit_new or got == new_id
                if hit_keep and hit_new:
                    break
            if hit_keep and hit_new:
                chosen = trial
                break
        if chosen is None:
            raise WitnessSearchExhausted(
                f"no witnesses found for step {j + 1} (height {height}, budget {budget})"
            )
        steps = chosen

    witnesses: dict = {}
    for r, sig in cands:
        pid = _walk(lambda i, s=sig: s[i], steps)
        witnesses.setdefault(pid, r)
        if len(witnesses) == len(steps) + 1:
            break
    plan = SplitPlan(arity, steps, dict(sorted(witnesses.items())))
    for pid, w in plan.witnesses.items():
        if classify_n(w, pts, plan) != pid:
            raise WitnessSearchExhausted("witness failed re-certification")
    if len(plan.witnesses) != plan.pieces:
        raise WitnessSearchExhausted("some piece has no witness")
    return plan


def lex_classify(r, pts: PointTuple, derivs) -> TwoClass:
    """Two-piece split by the first nonzero derivation sign (positive -> H1)."""
    if isinstance(r, MultiPoly):
        r = MultiRationalFunction(r)
    if sign_at_tuple(r, pts) <= 0:
        raise NotPositiveError(f"{r} is not positive at the point tuple")
    for d in derivs:
        d = d if isinstance(d, DerivationSpec) else DerivationSpec(tuple(d))
        s = d.sign_of(r, pts)
        if s:
            return TwoClass.H1 if s > 0 else TwoClass.H2
    return TwoClass.H2


__all__ = [
    "Piece", "TwoPolicy", "TwoClass", "ZeroSide", "classify3", "classify2", "piece_to_class",
    "derivative_sign", "simplest_rational", "find_separating_linear", "is_rational_multiple",
    "lift_classify", "lift_trace", "LiftTrace", "FactoredPoly", "generator_decomposition",
    "DerivationSpec", "PlanStep", "SplitPlan", "build_plan", "classify_n",
    "check_pairwise_independent", "lex_classify",
]
