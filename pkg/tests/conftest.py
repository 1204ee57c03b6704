from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from posdecomp.qexact import MultiPoly, RationalFunction, UniPoly
from posdecomp.realpoint import NamedConstant, PointTuple, algebraic

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


def unipolys(max_degree: int = 4, coeffs=small_ints):
    return st.lists(coeffs, min_size=0, max_size=max_degree + 1).map(UniPoly)


def nonzero_unipolys(max_degree: int = 4):
    return unipolys(max_degree).filter(lambda p: not p.is_zero())


def rational_functions(max_degree: int = 3):
    return st.builds(RationalFunction, unipolys(max_degree), nonzero_unipolys(max_degree))


def multipolys(arity: int = 2, max_degree: int = 2):
    exps = st.tuples(*[st.integers(0, max_degree)] * arity)
    return st.dictionaries(exps, small_ints, max_size=5).map(lambda t: MultiPoly(t, arity))


@pytest.fixture(scope="session")
def pi():
    return NamedConstant("pi")


@pytest.fixture(scope="session")
def e():
    return NamedConstant("e")


@pytest.fixture(scope="session")
def sqrt2():
    return algebraic(UniPoly((-2, 0, 1)), 1, 2)


@pytest.fixture(scope="session")
def pi_e(pi, e):
    return PointTuple((pi, e), independence_promise=True)
