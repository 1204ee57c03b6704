from __future__ import annotations

import json
from fractions import Fraction

from posdecomp import oracle
from posdecomp.derivsplit import DerivationSpec
from posdecomp.hyperplane import ComplexPair, Derivation, TwoPoint
from posdecomp.qexact import UniPoly

X = UniPoly.x()


def test_enumeration_counts():
    polys = list(oracle.enumerate_corpus(oracle.Corpus(1, 1, integer_only=True)))
    assert len(polys) == 9 and len(set(polys)) == 9
    consts = [p.constant_value() if not p.is_zero() else 0
              for p in oracle.enumerate_corpus(oracle.Corpus(0, 2))]
    assert consts == [-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2]
    assert oracle.Corpus(3, 2, integer_only=True).count() == 5 ** 4


def test_enumeration_deterministic():
    c = oracle.Corpus(2, 1, arity=2, integer_only=True)
    assert list(oracle.enumerate_corpus(c)) == list(oracle.enumerate_corpus(c))


def test_closure_small(pi, sqrt2):
    assert oracle.verify_closure(pi, oracle.Corpus(2, 1, integer_only=True)).passed
    rep = oracle.verify_closure(sqrt2, oracle.Corpus(2, 1, integer_only=True))
    assert rep.passed and rep.cases > 0


def test_closure_empty_corpus(pi):
    rep = oracle.verify_closure(pi, oracle.Corpus(-1, 1))
    assert rep.passed and rep.cases == 0


def test_translation_examples(pi):
    rep = oracle.verify_translation(pi, [X ** 2, 10 - X], [Fraction(7), Fraction(-5)])
    assert rep.passed
    assert oracle.square_identity_holds()


def test_lift_and_separating_small(pi):
    assert oracle.verify_lift_agreement(pi, 100, 1, extra_pairs=[(X ** 2 + 1, X + 2)]).passed
    assert oracle.verify_lift_agreement(pi, 0, 1).passed
    assert oracle.verify_separating(pi, 30, 2).passed


def test_recursion_and_product():
    assert oracle.verify_recursion([TwoPoint(1, 2), Derivation(Fraction(3, 2)), ComplexPair(1, 2)], 20).passed
    polys = list(oracle.enumerate_corpus(oracle.Corpus(2, 1, integer_only=True)))
    assert oracle.verify_product_closure([TwoPoint(0, 1), Derivation(0), ComplexPair(0, 1)], polys).passed


def test_generator_and_counterexamples(pi):
    assert oracle.verify_generator(pi, 20, 3).passed
    assert oracle.verify_counterexamples(pi, 5, 3).passed


def test_plan(pi_e):
    rep = oracle.verify_plan(pi_e, [DerivationSpec((1, 0)), DerivationSpec((0, 1))], 50, 1, pair_samples=30)
    assert rep.passed


def test_report_json():
    r = oracle.Report("demo")
    r.cases = 2
    r.violate([X], "H+", "H-")
    d = json.loads(r.to_json())
    assert d["suite"] == "demo" and not r.passed
    assert d["violations"][0]["inputs"] == ["x"]
