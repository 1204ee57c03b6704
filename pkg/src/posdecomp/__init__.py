"""Exact decompositions of the positive cone of Q(alpha) by derivation signs.

Arithmetic is exact over Q; every sign at a real point is decided by a
certified interval oracle or an exact algebraic test, never by floats.
"""

from __future__ import annotations

from .errors import DecompError, PrecisionExhausted, PreconditionError
from .qexact import (
    MultiPoly,
    MultiRationalFunction,
    RationalFunction,
    UniPoly,
    derivative,
    normalize,
    partial_derivative,
    poly_gcd,
)
from .realpoint import (
    AlgebraicNumber,
    NamedConstant,
    PointTuple,
    RealPoint,
    Sign,
    algebraic,
    digits_point,
    e,
    pi,
    sign_at,
    sign_at_tuple,
)
from .derivsplit import (
    DerivationSpec,
    Piece,
    SplitPlan,
    TwoClass,
    TwoPolicy,
    ZeroSide,
    build_plan,
    classify2,
    classify3,
    classify_n,
    find_separating_linear,
    generator_decomposition,
    lift_classify,
)
from .hyperplane import (
    ComplexPair,
    Derivation,
    TwoPoint,
    classify_params,
    counterexample_complex,
    counterexample_derivation,
    counterexample_twopoint,
    lambda_closed_form,
    membership,
)
from .algext import NumberField, indecomposability_witness
from .parser import parse_expr, parse_poly, to_text

__version__ = "0.1.0"

__all__ = [
    "DecompError", "PrecisionExhausted", "PreconditionError", "MultiPoly",
    "MultiRationalFunction", "RationalFunction", "UniPoly", "derivative", "normalize",
    "partial_derivative", "poly_gcd", "AlgebraicNumber", "NamedConstant", "PointTuple",
    "RealPoint", "Sign", "algebraic", "digits_point", "e", "pi", "sign_at", "sign_at_tuple",
    "DerivationSpec", "Piece", "SplitPlan", "TwoClass", "TwoPolicy", "ZeroSide", "build_plan",
    "classify2", "classify3", "classify_n", "find_separating_linear",
    "generator_decomposition", "lift_classify", "ComplexPair", "Derivation", "TwoPoint",
    "classify_params", "counterexample_complex", "counterexample_derivation",
    "counterexample_twopoint", "lambda_closed_form", "membership", "NumberField",
    "indecomposability_witness", "parse_expr", "parse_poly", "to_text",
]
