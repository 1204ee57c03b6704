from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import unipolys
from posdecomp.algext import (
    NumberField,
    element_sign,
    field_add,
    field_mul,
    in_kernel,
    indecomposability_witness,
    parse_field_descriptor,
    reduce_mod,
)
from posdecomp.errors import ParseError, PreconditionError
from posdecomp.qexact import UniPoly
from posdecomp.realpoint import Sign

X = UniPoly.x()
FIELDS = {
    "x^2-2": X ** 2 - 2,
    "x^2-x-1": X ** 2 - X - 1,
    "x^3-2": X ** 3 - 2,
    "x^4-x-1": X ** 4 - X - 1,
}


@pytest.fixture(scope="module", params=sorted(FIELDS))
def field(request):
    return NumberField(FIELDS[request.param], 1, 2)


def test_witness(field):
    w = indecomposability_witness(field)
    assert w.as_dict() == {"kernel": "ok", "mprime_sign": "+"}
    assert field.irreducibility_certified


def test_reducible_needs_trust():
    with pytest.raises(PreconditionError):
        NumberField((X ** 2 - 2) * (X - 5), 1, 2)
    f = NumberField((X ** 2 - 2) * (X - 5), 1, 2, trusted=True)
    assert not f.irreducibility_certified


def test_golden_ratio_arithmetic():
    f = NumberField(X ** 2 - X - 1, 1, 2)
    phi = f.element((0, 1))
    assert field_mul(phi, phi, f) == field_add(phi, f.one(), f)  # phi^2 = phi + 1
    assert element_sign(f.element((Fraction(-8, 5), 1)), f) == Sign.POS  # phi > 1.6
    assert element_sign(f.element((Fraction(-17, 10), 1)), f) == Sign.NEG


def test_descriptor():
    f = parse_field_descriptor("field: x^3-2; root in [1, 2]")
    assert f.degree == 3
    with pytest.raises(ParseError):
        parse_field_descriptor("x^3-2 in [1,2]")


@given(unipolys(5), unipolys(5))
def test_reduction_is_ring_homomorphism(p, q):
    f = NumberField(X ** 3 - 2, 1, 2)
    assert reduce_mod(p * q, f) == field_mul(reduce_mod(p, f), reduce_mod(q, f), f)
    assert reduce_mod(p + q, f) == field_add(reduce_mod(p, f), reduce_mod(q, f), f)


@given(unipolys(4), st.sampled_from(sorted(FIELDS)))
def test_kernel_is_ideal_of_minpoly(p, name):
    f = NumberField(FIELDS[name], 1, 2)
    assert in_kernel(p * f.minpoly, f)
    assert in_kernel(p, f) == f.minpoly.divides(p)
