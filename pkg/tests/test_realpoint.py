from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_unipolys, rationals
from posdecomp.errors import (
    DenominatorVanishesError,
    PrecisionExhausted,
    PreconditionError,
)
from posdecomp.qexact import MultiPoly, RationalFunction, UniPoly
from posdecomp.realpoint import (
    AlgebraicNumber,
    Interval,
    NamedConstant,
    PointTuple,
    Sign,
    algebraic,
    compare,
    count_roots,
    digits_point,
    eval_interval,
    grid_floor,
    parse_digits,
    sign_at,
    sign_at_tuple,
    track_precision,
)
from posdecomp.surd import QuadSurd, sqrt_rational, squarefree_split

X = UniPoly.x()

# 60 digits, enough for the bracketing checks below
PI_60 = Fraction("3.141592653589793238462643383279502884197169399375105820974944")
E_60 = Fraction("2.718281828459045235360287471352662497757247093699959574966967")


@pytest.mark.parametrize("name,ref", [("pi", PI_60), ("e", E_60)])
@pytest.mark.parametrize("bits", [0, 8, 64, 150])
def test_constant_enclosures(name, ref, bits):
    iv = NamedConstant(name).refine(bits)
    assert iv.width <= Fraction(1, 2 ** bits)
    tol = Fraction(1, 10 ** 59)
    assert iv.lo <= ref + tol and ref - tol <= iv.hi


def test_pi_zero_bits():
    iv = NamedConstant("pi").refine(0)
    assert iv.lo <= 3 and Fraction(13, 4) >= iv.hi


def test_refine_cap():
    with pytest.raises(PrecisionExhausted):
        NamedConstant("pi", max_bits=32).refine(64)


@given(st.integers(0, 120), st.integers(0, 120))
def test_refinements_nest(a, b):
    p = NamedConstant("pi")
    lo, hi = sorted((a, b))
    coarse = p.fresh_copy().refine(lo)
    fine = p.fresh_copy().refine(hi)
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi


def test_sign_at_pi_anchors(pi):
    assert sign_at(X - 3, pi) == Sign.POS
    assert sign_at(X - 4, pi) == Sign.NEG
    assert sign_at(X ** 2 - 10, pi) == Sign.NEG
    assert sign_at(RationalFunction(X ** 2 + 1, X + 2), pi) == Sign.POS
    assert sign_at(UniPoly(), pi) == Sign.ZERO


def test_sign_at_rational_exact():
    assert sign_at(X - Fraction(1, 3), Fraction(1, 3)) == Sign.ZERO
    assert sign_at(RationalFunction(X, X - 1), Fraction(2)) == Sign.POS


def test_algebraic_exact_zero(sqrt2):
    assert sign_at(X ** 2 - 2, sqrt2) == Sign.ZERO
    assert sign_at((X ** 2 - 2) * (X + 5), sqrt2) == Sign.ZERO
    assert sign_at(X ** 2 - 2 - Fraction(1, 10 ** 30), sqrt2) == Sign.NEG
    assert sign_at(X ** 2 - 2 + Fraction(1, 10 ** 30), sqrt2) == Sign.POS


def test_algebraic_denominator_vanishes(sqrt2):
    with pytest.raises(DenominatorVanishesError):
        sign_at(RationalFunction(UniPoly((1,)), X ** 2 - 2), sqrt2)


def test_algebraic_rejects_bad_interval():
    with pytest.raises(PreconditionError):
        algebraic(X ** 2 - 2, -2, 2)  # two roots
    with pytest.raises(PreconditionError):
        algebraic(X ** 2 - 2, 2, 3)  # none
    with pytest.raises(PreconditionError):
        algebraic((X ** 2 - 2) * (X - 10), 1, 2)  # not irreducible


def test_algebraic_trusted_skips_irreducibility():
    a = algebraic((X ** 2 - 2) * (X - 10), 1, 2, trusted=True)
    assert compare(a, Fraction(141, 100)) == Sign.POS


def test_sturm_counts():
    p = (X - 1) * (X - 2) * (X + 3)
    assert count_roots(p, 0, 3) == 2
    assert count_roots(p, -10, 10) == 3
    assert count_roots(p, 1, 2) == 1  # half-open (1, 2]


def test_grid_floor_independent_of_history(pi):
    fresh = NamedConstant("pi")
    first = [grid_floor(fresh, k) for k in range(10)]
    fresh.refine(400)
    assert [grid_floor(fresh, k) for k in range(10)] == first
    assert first[0] == 3 and first[3] == 25  # 25/8 <= pi < 26/8


def test_digits_point():
    sign, whole, frac = parse_digits("decimal 5\n3.14159\n")
    assert (whole, frac) == (3, "14159")
    pt = digits_point("decimal 60\n3.141592653589793238462643383279502884197169399375105820974944\n")
    assert sign_at(X - 3, pt) == Sign.POS
    assert sign_at(X * 7 - 22, pt) == Sign.NEG
    with pytest.raises(PrecisionExhausted):
        pt.refine(400)


def test_track_precision(pi):
    with track_precision() as stats:
        sign_at(X - 3, pi)
    assert stats.queries >= 1 and stats.max_bits >= 64


def test_sign_at_tuple(pi_e):
    x1, x2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    assert sign_at_tuple(x1 - x2, pi_e) == Sign.POS
    assert sign_at_tuple(x1 * x2 - 9, pi_e) == Sign.NEG  # pi*e ~ 8.54
    assert sign_at_tuple(x1 - x1, pi_e) == Sign.ZERO


def test_sign_at_tuple_needs_promise(pi, e):
    x1 = MultiPoly.var(0, 2)
    with pytest.raises(PreconditionError):
        sign_at_tuple(x1 - 1, PointTuple((pi, e)))


def test_sign_at_tuple_rational_points_exact():
    x1, x2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    pts = PointTuple((Fraction(1, 2), Fraction(3)))
    assert sign_at_tuple(x1 * 6 - x2, pts) == Sign.ZERO


@given(nonzero_unipolys(4), nonzero_unipolys(4))
def test_sign_multiplicative(p, q):
    pi = NamedConstant("pi")
    assert sign_at(p * q, pi) == sign_at(p, pi) * sign_at(q, pi)


@given(nonzero_unipolys(4), rationals)
def test_sign_matches_exact_at_rationals(p, q):
    assert sign_at(p, q) == Sign.of(p(q))


@given(nonzero_unipolys(3), st.integers(-5, 5), st.integers(1, 4))
def test_interval_evaluation_encloses(p, lo, w):
    iv = Interval(Fraction(lo), Fraction(lo + w))
    enc = eval_interval(p, iv, 64)
    for k in range(5):
        x = iv.lo + iv.width * Fraction(k, 4)
        assert enc.contains(p(x))


# -- quadratic surds -----------------------------------------------------------


def test_squarefree_split():
    assert squarefree_split(12) == (2, 3)
    assert squarefree_split(7) == (1, 7)


def test_surd_arithmetic():
    r = sqrt_rational(Fraction(3, 4))
    assert str(r) == "1/2*sqrt(3)"
    assert r * r == Fraction(3, 4)
    assert (QuadSurd(1, 1, 2) * QuadSurd(1, -1, 2)) == -1
    assert QuadSurd(0, 1, 2).sign() == 1
    assert QuadSurd(Fraction(-3, 2), 1, 2).sign() == -1  # sqrt2 < 3/2


@given(rationals, rationals, rationals, rationals)
def test_surd_field_ops(a, b, c, d):
    x, y = QuadSurd(a, b, 5), QuadSurd(c, d, 5)
    assert (x + y) - y == x
    if y:
        assert (x * y) / y == x
    assert (x * y).sign() == x.sign() * y.sign()


def test_surd_point_matches_minpoly():
    s = QuadSurd(1, 1, 2)
    pt = s.to_point()
    assert isinstance(pt, AlgebraicNumber)
    assert sign_at(s.minpoly(), pt) == Sign.ZERO
    assert compare(pt, Fraction(24, 10)) == Sign.POS
