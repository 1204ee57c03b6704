from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals, unipolys
from posdecomp.errors import PreconditionError
from posdecomp.hyperplane import (
    ComplexPair,
    Derivation,
    LambdaSeq,
    TwoPoint,
    classify_params,
    counterexample_complex,
    counterexample_derivation,
    counterexample_twopoint,
    discriminant,
    kind_to_dict,
    lambda_closed_form,
    lambda_recursion_extend,
    membership,
    recursion_residue,
    region,
    same_kind,
)
from posdecomp.qexact import UniPoly
from posdecomp.surd import QuadSurd

X = UniPoly.x()


def test_lambda_anchors():
    assert [lambda_closed_form(TwoPoint(1, 2), i) for i in range(5)] == [0, 1, 3, 7, 15]
    assert [lambda_closed_form(Derivation(1), i) for i in range(5)] == [0, 1, 2, 3, 4]
    assert [lambda_closed_form(Derivation(Fraction(3, 2)), i) for i in range(4)] == \
        [0, 1, 3, Fraction(27, 4)]
    assert [lambda_closed_form(ComplexPair(0, 1), i) for i in range(6)] == [0, 1, 0, -1, 0, 1]
    assert lambda_closed_form(ComplexPair(1, 2), 2) == 2
    assert lambda_closed_form(ComplexPair(1, 2), 3) == -1


def test_recursion_extend_anchor():
    assert list(lambda_recursion_extend(1, 3, 7, 6).values) == [0, 1, 3, 7, 15, 31, 63]


@pytest.mark.parametrize("l2,l3,kind", [
    (3, 7, TwoPoint(1, 2)),
    (2, 3, Derivation(1)),
    (0, -1, ComplexPair(0, 1)),
])
def test_classify_params_anchors(l2, l3, kind):
    got = classify_params(l2, l3)
    assert same_kind(got, kind)


def test_kind_to_dict():
    assert kind_to_dict(classify_params(3, 7)) == {"kind": "two-point", "beta": "1", "gamma": "2"}


def test_two_point_with_surds():
    k = classify_params(1, 2)  # disc -5: beta, gamma = (1 -+ sqrt5)/2
    assert isinstance(k, TwoPoint) and isinstance(k.beta, QuadSurd)
    assert region(1, 2) == k.name
    assert lambda_closed_form(k, 2) == 1 and lambda_closed_form(k, 3) == 2


def test_complex_pair_with_surd_v():
    k = classify_params(2, 1)  # disc 8: z = 1 + i*sqrt2
    assert isinstance(k, ComplexPair) and k.u == 1 and isinstance(k.v, QuadSurd)
    assert lambda_closed_form(k, 2) == 2 and lambda_closed_form(k, 3) == 1


def test_complex_pair_requires_nonzero_v():
    with pytest.raises(PreconditionError):
        ComplexPair(1, 0)


@given(rationals, rationals)
def test_trichotomy_round_trip(l2, l3):
    k = classify_params(l2, l3)
    d = discriminant(l2, l3)
    assert k.name == ("two-point" if d < 0 else "derivation" if d == 0 else "complex-pair")
    assert lambda_closed_form(k, 2) == l2
    assert lambda_closed_form(k, 3) == l3


kinds = st.one_of(
    st.tuples(rationals, rationals).filter(lambda t: t[0] != t[1]).map(lambda t: TwoPoint(*t)),
    st.builds(Derivation, rationals),
    st.builds(ComplexPair, rationals, rationals.filter(bool)),
)


@given(kinds, st.integers(2, 15))
def test_recursion_residue_zero(kind, j):
    lam = [lambda_closed_form(kind, i) for i in range(j + 3)]
    assert recursion_residue(lam, j) == 0


@given(kinds, unipolys(4), unipolys(4), rationals, rationals)
def test_membership_is_linear(kind, p, q, a, b):
    seq = LambdaSeq.of_kind(kind, 6)
    assert seq.pair(p * a + q * b) == seq.pair(p) * a + seq.pair(q) * b
    assert membership(p, kind) == (seq.pair(p) == 0)


def project(p, kind):
    """p - L(p) x lies on the hyperplane, since L(x) = lambda_1 = 1 for every family."""
    return p - X * LambdaSeq.of_kind(kind, p.degree + 2).pair(p)


@given(kinds, unipolys(3), unipolys(3))
def test_members_closed_under_product(kind, p, q):
    p, q = project(p, kind), project(q, kind)
    assert membership(p, kind) and membership(q, kind)
    assert membership(p * q, kind)


def test_membership_examples():
    assert membership(X ** 2 - 3 * X, TwoPoint(1, 2))
    assert not membership(X, TwoPoint(1, 2))
    assert membership((X - 1) ** 2, Derivation(1))
    assert membership(X ** 2 + 1, ComplexPair(0, 1))


# -- counterexamples ---------------------------------------------------------------


def test_twopoint_counterexample(pi):
    ce = counterexample_twopoint(pi, 0, 1)
    assert ce.reverify()
    assert ce.family == "two-point"


def test_twopoint_counterexample_with_alpha(pi):
    ce = counterexample_twopoint(pi, 3, "alpha")
    assert ce.reverify()


def test_complex_counterexample(pi):
    ce = counterexample_complex(pi, 0, 1)
    assert ce.power == 3 and ce.reverify()


def test_complex_counterexample_nearly_real(pi):
    ce = counterexample_complex(pi, 32, Fraction(1, 5))
    assert ce.reverify()


def test_derivation_counterexample(pi):
    ce = counterexample_derivation(pi, 0)
    assert ce.reverify()
    with pytest.raises(PreconditionError):
        counterexample_derivation(pi, pi)


def test_counterexample_json_shape(pi):
    d = counterexample_twopoint(pi, 0, 1).as_dict()
    assert d["family"] == "two-point"
    assert all(isinstance(c["precision_bits"], str) for c in d["certificates"])
