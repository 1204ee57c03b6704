"""Simple real number fields Q(a) = Q[x]/(m) and the indecomposability witness.

Elements are coordinate vectors in the basis 1, a, ..., a^(n-1). The
evaluation map Phi: Q[x] -> Q(a) is reduction modulo m. The witness records
the two facts that rule out a 2-decomposition of Q(a)+: m lies in the kernel
of Phi, yet m'(a) != 0, so m is off the only candidate hyperplane p'(a) = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldInvariantError, ParseError, PreconditionError
from .qexact import UniPoly, as_rational, certify_irreducible, is_squarefree
from .realpoint import AlgebraicNumber, DEFAULT_MAX_BITS, Interval, Sign, sign_at, track_precision


class NumberField:
    def __init__(self, minpoly: UniPoly, lo, hi, trusted: bool = False, effort: int = 30,
                 max_bits: int = DEFAULT_MAX_BITS):
        if minpoly.degree < 1:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        m = minpoly.monic()
        if not is_squarefree(m):
            raise PreconditionError(f"{m} is not squarefree")
        certified = certify_irreducible(m, effort)
        if not certified and not trusted:
            raise PreconditionError(
                f"could not certify {m} irreducible; mark the field as trusted to proceed"
            )
        self.minpoly = m
        self.irreducibility_certified = certified
        self.root = AlgebraicNumber(m, Interval(lo, hi), trusted=True, max_bits=max_bits)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def element(self, coords) -> FieldElement:
        coords = tuple(as_rational(c) for c in coords)
        if len(coords) != self.degree:
            raise PreconditionError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(coords)

    def one(self) -> FieldElement:
        return FieldElement((Fraction(1),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> FieldElement:
        return FieldElement((Fraction(0),) * self.degree)

    def __repr__(self):
        return f"NumberField({self.minpoly}, root in {self.root.isolating})"


@dataclass(frozen=True)
class FieldElement:
    coords: tuple

    def to_poly(self) -> UniPoly:
        return UniPoly(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)


def reduce_mod(p: UniPoly, field: NumberField) -> FieldElement:
    r = p % field.minpoly
    cs = list(r.coeffs) + [Fraction(0)] * (field.degree - len(r.coeffs))
    return FieldElement(tuple(cs))


def _check(x: FieldElement, field: NumberField):
    if len(x.coords) != field.degree:
        raise PreconditionError(
            f"element has {len(x.coords)} coordinates but the field has degree {field.degree}"
        )


def field_add(x: FieldElement, y: FieldElement, field: NumberField) -> FieldElement:
    _check(x, field)
    _check(y, field)
    return FieldElement(tuple(a + b for a, b in zip(x.coords, y.coords)))


def field_mul(x: FieldElement, y: FieldElement, field: NumberField) -> FieldElement:
    _check(x, field)
    _check(y, field)
    return reduce_mod(x.to_poly() * y.to_poly(), field)


def element_sign(x: FieldElement, field: NumberField) -> Sign:
    _check(x, field)
    if x.is_zero():
        return Sign.ZERO
    return sign_at(x.to_poly(), field.root)


def in_kernel(p: UniPoly, field: NumberField) -> bool:
    return reduce_mod(p, field).is_zero()


@dataclass(frozen=True)
class Witness:
    field: NumberField
    kernel_check: bool
    derivative_sign: Sign
    precision_used: int

    def as_dict(self) -> dict:
        return {
            "kernel": "ok" if self.kernel_check else "failed",
            "mprime_sign": str(self.derivative_sign),
        }

    def certificates(self) -> list:
        m = self.field.minpoly
        return [
            {"inequality": f"reduce({m}) = 0", "required_sign": "0", "precision_bits": "0"},
            {"inequality": f"({m.derivative()})(a) != 0",
             "required_sign": str(self.derivative_sign),
             "precision_bits": str(self.precision_used)},
        ]


def indecomposability_witness(field: NumberField) -> Witness:
    m = field.minpoly
    kernel = in_kernel(m, field)
    with track_precision() as stats:
        s = sign_at(m.derivative(), field.root)
    if not kernel:
        raise FieldInvariantError(f"{m} does not reduce to zero in its own field")
    if s == 0:
        raise FieldInvariantError(f"derivative of {m} vanishes at the root; not separable")
    return Witness(field, kernel, s, stats.max_bits)


_DESCRIPTOR = re.compile(
    r"^\s*field\s*:\s*(?P<poly>[^;]+);\s*root\s+in\s*\[\s*(?P<lo>[^,\]]+)\s*,\s*(?P<hi>[^\]]+)\]\s*$"
)


def parse_field_descriptor(text: str, trusted: bool = False) -> NumberField:
    """Read ``field: <poly>; root in [lo, hi]``."""
    from .parser import parse_poly

    m = _DESCRIPTOR.match(text)
    if not m:
        raise ParseError("expected 'field: <polynomial>; root in [lo, hi]'")
    poly = parse_poly(m.group("poly"))
    try:
        lo = as_rational(m.group("lo"))
        hi = as_rational(m.group("hi"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad interval endpoint: {exc}") from None
    return NumberField(poly, lo, hi, trusted=trusted)


__all__ = [
    "NumberField", "FieldElement", "reduce_mod", "field_add", "field_mul", "element_sign",
    "in_kernel", "Witness", "indecomposability_witness", "parse_field_descriptor",
]
