"""Brute-force verification suites.

Each suite enumerates or samples inputs, runs the constructive routines and an
independent check side by side, and returns a Report. Corpora are finite and
enumerated in a fixed order so reruns with the same seed produce identical
reports.

Coefficient grid for height h: every reduced fraction num/den with
|num| <= h and 1 <= den <= h, sorted ascending (integers only when
``integer_only``). Polynomials are enumerated as the itertools.product of the
grid over the coefficient slots, constant term first.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import ceil

from .derivsplit import (
    Piece,
    TwoPolicy,
    build_plan,
    classify2,
    classify3,
    classify_n,
    derivative_sign,
    find_separating_linear,
    generator_decomposition,
    lift_trace,
)
from .errors import DecompError
from .hyperplane import (
    check_product_closure,
    classify_params,
    counterexample_complex,
    counterexample_derivation,
    counterexample_twopoint,
    lambda_closed_form,
    lambda_recursion_extend,
    recursion_residue,
    same_kind,
    kind_to_dict,
)
from .qexact import MultiPoly, MultiRationalFunction, RationalFunction, UniPoly, poly_gcd
from .realpoint import PointTuple, Sign, sign_at, sign_at_tuple, track_precision
from .surd import QuadSurd

DEFAULT_PAIR_BUDGET = 100_000


# ---------------------------------------------------------------------------
# corpora


def coefficient_grid(height: int, integer_only: bool = False) -> list:
    if height < 0:
        return []
    if integer_only or height == 0:
        return [Fraction(v) for v in range(-height, height + 1)]
    vals = {Fraction(n, d) for d in range(1, height + 1) for n in range(-height, height + 1)}
    return sorted(vals)


def monomials(arity: int, max_degree: int) -> list:
    """Exponent vectors of total degree <= max_degree, by degree then reverse lex."""
    out = []
    for deg in range(max_degree + 1):
        level = []
        for combo in combinations_with_replacement(range(arity), deg):
            e = [0] * arity
            for i in combo:
                e[i] += 1
            level.append(tuple(e))
        out.extend(sorted(set(level), reverse=True))
    return out


@dataclass(frozen=True)
class Corpus:
    max_degree: int
    height: int
    arity: int = 1
    integer_only: bool = False
    positive_at: object = None

    def grid(self) -> list:
        return coefficient_grid(self.height, self.integer_only)

    def count(self) -> int:
        """Size of the unfiltered enumeration."""
        if self.max_degree < 0 or self.height < 0:
            return 0
        return len(self.grid()) ** len(monomials(self.arity, self.max_degree))


def enumerate_corpus(corpus: Corpus):
    if corpus.max_degree < 0 or corpus.height < 0:
        return
    grid = corpus.grid()
    if corpus.arity == 1:
        slots = corpus.max_degree + 1
        for coeffs in product(grid, repeat=slots):
            p = UniPoly(coeffs)
            if corpus.positive_at is None or sign_at(p, corpus.positive_at) > 0:
                yield p
        return
    monos = monomials(corpus.arity, corpus.max_degree)
    for coeffs in product(grid, repeat=len(monos)):
        p = MultiPoly(dict(zip(monos, coeffs)), corpus.arity)
        if corpus.positive_at is None or sign_at_tuple(MultiRationalFunction(p), corpus.positive_at) > 0:
            yield p


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    suite: str
    cases: int = 0
    violations: list = field(default_factory=list)
    precision: dict = field(default_factory=dict)
    mode: str = "exhaustive"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def violate(self, inputs, expected, got):
        self.violations.append({"inputs": _text(inputs), "expected": _text(expected), "got": _text(got)})

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": str(self.cases),
            "mode": self.mode,
            "passed": self.passed,
            "violations": self.violations,
            "precision": {k: str(v) for k, v in self.precision.items()},
            "details": {k: _text(v) for k, v in self.details.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def _text(v):
    if isinstance(v, (list, tuple)):
        return [_text(x) for x in v]
    if isinstance(v, dict):
        return {k: _text(x) for k, x in v.items()}
    if isinstance(v, (Piece, TwoPolicy)) or hasattr(v, "value") and isinstance(v.value, str):
        return v.value
    if isinstance(v, bool):
        return v
    return str(v)


class _Tracked:
    """Run a suite body under precision tracking and store the stats."""

    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self._cm = track_precision()
        self.stats = self._cm.__enter__()
        return self.report

    def __exit__(self, *exc):
        self._cm.__exit__(*exc)
        self.report.precision = self.stats.as_dict()
        return False


# ---------------------------------------------------------------------------
# random inputs


def random_poly(rng: random.Random, max_degree: int, height: int) -> UniPoly:
    deg = rng.randint(0, max_degree)
    return UniPoly([rng.randint(-height, height) for _ in range(deg + 1)])


def random_positive_rf(rng: random.Random, alpha, max_degree: int = 3, height: int = 5) -> RationalFunction:
    while True:
        num = random_poly(rng, max_degree, height)
        den = random_poly(rng, max_degree, height)
        if num.is_zero() or den.is_zero():
            continue
        r = RationalFunction(num, den)
        s = sign_at(r, alpha)
        if s:
            return r if s > 0 else -r


def random_positive_poly(rng: random.Random, alpha, max_degree: int, height: int,
                         min_degree: int = 0) -> UniPoly:
    while True:
        deg = rng.randint(min_degree, max_degree)
        p = UniPoly([rng.randint(-height, height) for _ in range(deg)] +
                    [rng.choice([c for c in range(-height, height + 1) if c])])
        s = sign_at(p, alpha)
        if s:
            return p if s > 0 else -p


# ---------------------------------------------------------------------------
# suites


def _pairs_with_budget(groups: dict, budget: int, seed: int):
    """All same-group pairs (i <= j), or a stratified sample when over budget."""
    strata = defaultdict(list)
    total = 0
    for items in groups.values():
        n = len(items)
        total += n * (n + 1) // 2
    if total <= budget:
        out = []
        for key in sorted(groups, key=str):
            items = groups[key]
            for i in range(len(items)):
                for j in range(i, len(items)):
                    out.append((items[i], items[j]))
        return out, "exhaustive"
    rng = random.Random(seed)
    for key in sorted(groups, key=str):
        for i, a in enumerate(groups[key]):
            for b in groups[key][i:]:
                strata[(str(key), a.degree if hasattr(a, "degree") else 0,
                        b.degree if hasattr(b, "degree") else 0)].append((a, b))
    out = []
    for key in sorted(strata):
        pairs = strata[key]
        take = min(len(pairs), ceil(budget * len(pairs) / total))
        out.extend(rng.sample(pairs, take))
    return out, "sampled"


def verify_closure(alpha, corpus: Corpus, budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> Report:
    """Same-piece sums and products stay in the piece."""
    report = Report("closure")
    with _Tracked(report):
        groups = defaultdict(list)
        for p in enumerate_corpus(Corpus(corpus.max_degree, corpus.height, corpus.arity,
                                         corpus.integer_only, alpha)):
            groups[classify3(p, alpha)].append(p)
        pairs, report.mode = _pairs_with_budget(groups, budget, seed)
        piece_of = {}
        for piece, items in groups.items():
            for p in items:
                piece_of[p] = piece
        report.details = {"elements": sum(len(v) for v in groups.values()),
                          **{f"piece {k.value}": len(v) for k, v in sorted(groups.items(), key=lambda kv: kv[0].value)}}
        for a, b in pairs:
            want = piece_of[a]
            for op, val in (("+", a + b), ("*", a * b)):
                report.cases += 1
                got = classify3(val, alpha)
                if got != want:
                    report.violate([a, op, b], want, got)
    return report


def square_identity_holds() -> bool:
    a = MultiPoly.var(0, 2)
    r = MultiPoly.var(1, 2)
    return (a + r * 2) ** 2 == a ** 2 + (a + r) * r * 4


def verify_translation(alpha, corpus, shifts) -> Report:
    """classify3(r + q) == classify3(r) for rational q keeping positivity."""
    report = Report("translation")
    with _Tracked(report):
        items = corpus if not isinstance(corpus, Corpus) else enumerate_corpus(
            Corpus(corpus.max_degree, corpus.height, corpus.arity, corpus.integer_only, alpha))
        for r in items:
            r = RationalFunction.coerce(r)
            if sign_at(r, alpha) <= 0:
                continue
            base = classify3(r, alpha)
            for q in shifts:
                s = r + Fraction(q)
                if sign_at(s, alpha) <= 0:
                    continue
                report.cases += 1
                got = classify3(s, alpha)
                if got != base:
                    report.violate([r, q], base, got)
        report.cases += 1
        if not square_identity_holds():
            report.violate("(a+2r)^2 = a^2 + 4(a+r)r", "identity", "mismatch")
    return report


def verify_partition(alpha, elements) -> Report:
    """Every positive element lands in exactly one piece, by two routes."""
    report = Report("partition")
    with _Tracked(report):
        for r in elements:
            r = RationalFunction.coerce(r)
            report.cases += 1
            piece = classify3(r, alpha)
            # second route: sign of the fully formed derivative r' (not just its numerator)
            s = sign_at(r.derivative(), alpha)
            member = [s > 0, s == 0, s < 0]
            if sum(member) != 1 or Piece.from_sign(s) != piece:
                report.violate(r, Piece.from_sign(s), piece)
    return report


def verify_degree_one(alpha, elements) -> Report:
    """For positive ax + b the piece is read off the sign of a."""
    report = Report("degree-one")
    with _Tracked(report):
        for p in elements:
            p = RationalFunction.coerce(p).as_poly()
            if p.degree > 1 or sign_at(p, alpha) <= 0:
                continue
            report.cases += 1
            a = p.coeffs[1] if p.degree == 1 else Fraction(0)
            want = Piece.from_sign(Sign.of(a))
            got = classify3(p, alpha)
            if got != want:
                report.violate(p, want, got)
    return report


def verify_lift_agreement(alpha, samples: int, seed: int, max_degree: int = 3,
                          height: int = 5, extra_pairs=()) -> Report:
    """lift_classify(p1, p2) == classify2(p1/p2) under both policies."""
    report = Report("lift-agreement")
    rng = random.Random(seed)
    with _Tracked(report):
        pairs = list(extra_pairs)
        while len(pairs) < samples + len(extra_pairs):
            p1 = random_positive_poly(rng, alpha, max_degree, height)
            p2 = random_positive_poly(rng, alpha, max_degree, height)
            if poly_gcd(p1, p2).degree > 0:
                continue
            pairs.append((p1, p2))
        routes = defaultdict(int)
        for p1, p2 in pairs:
            for policy in TwoPolicy:
                report.cases += 1
                tr = lift_trace(p1, p2, alpha, policy)
                routes[tr.route] += 1
                want = classify2(RationalFunction(p1, p2), alpha, policy)
                if tr.result != want:
                    report.violate([p1, p2, policy], want, tr.result)
                if tr.multiplier is not None:
                    l = tr.multiplier
                    if not separating_postcondition(p1, p2, l, alpha):
                        report.violate([p1, p2, l], "separating multiplier", "postcondition failed")
        report.details = dict(sorted(routes.items()))
    return report


def separating_postcondition(p1: UniPoly, p2: UniPoly, l: UniPoly, alpha) -> bool:
    """l(alpha) > 0, the products' derivatives have opposite signs, and the threshold
    -a/l(alpha) lies strictly between p1'/p1 and p2'/p2 at alpha."""
    if l.degree != 1 or sign_at(l, alpha) <= 0:
        return False
    s1 = derivative_sign(p1 * l, alpha)
    s2 = derivative_sign(p2 * l, alpha)
    if s1 == 0 or s2 == 0 or s1 == s2:
        return False
    a = l.coeffs[1]
    # c - t has the sign of (p1' l + a p1)(alpha) since p1, l > 0 there; likewise for d
    c_minus_t = sign_at(p1.derivative() * l + p1 * a, alpha)
    d_minus_t = sign_at(p2.derivative() * l + p2 * a, alpha)
    return c_minus_t * d_minus_t < 0


def verify_separating(alpha, samples: int, seed: int, max_degree: int = 3, height: int = 5,
                      extra_pairs=()) -> Report:
    report = Report("separating-linear")
    rng = random.Random(seed)
    with _Tracked(report):
        pairs = list(extra_pairs)
        tries = 0
        while len(pairs) < samples + len(extra_pairs) and tries < 100 * (samples + 1):
            tries += 1
            p1 = random_positive_poly(rng, alpha, max_degree, height, 1)
            p2 = random_positive_poly(rng, alpha, max_degree, height, 1)
            s1, s2 = derivative_sign(p1, alpha), derivative_sign(p2, alpha)
            if s1 != s2 or s1 == 0 or p1 * p2.lc == p2 * p1.lc:
                continue
            pairs.append((p1, p2))
        for p1, p2 in pairs:
            report.cases += 1
            l = find_separating_linear(p1, p2, alpha)
            if not separating_postcondition(p1, p2, l, alpha):
                report.violate([p1, p2], "postcondition", l)
    return report


def verify_recursion(kinds, K: int) -> Report:
    """Closed forms satisfy the recursion; the recursion regenerates them; params round-trip."""
    if K < 3:
        raise ValueError("K must be at least 3")
    report = Report("recursion")
    with _Tracked(report):
        for kind in kinds:
            lam = [lambda_closed_form(kind, i) for i in range(K + 1)]
            for j in range(1, K - 1):
                report.cases += 1
                res = recursion_residue(lam, j)
                if res != 0:
                    report.violate([kind_to_dict(kind), j], 0, res)
            report.cases += 1
            ext = lambda_recursion_extend(1, lam[2], lam[3], K).values
            if list(ext) != lam:
                report.violate(kind_to_dict(kind), "recursion prefix", "mismatch")
            if not isinstance(lam[2], QuadSurd) and not isinstance(lam[3], QuadSurd):
                report.cases += 1
                back = classify_params(lam[2], lam[3])
                if not same_kind(back, kind):
                    report.violate(kind_to_dict(kind), kind_to_dict(kind), kind_to_dict(back))
    return report


def verify_product_closure(kinds, polys) -> Report:
    report = Report("hyperplane-product")
    with _Tracked(report):
        polys = list(polys)
        pairs = [(polys[i], polys[j]) for i in range(len(polys)) for j in range(i, len(polys))]
        members = {}
        for kind in kinds:
            rep = check_product_closure(kind, pairs)
            report.cases += rep.member_pairs
            members[kind.name + " " + str(kind_to_dict(kind))] = rep.member_pairs
            for p, q in rep.violations:
                report.violate([kind_to_dict(kind), p, q], "member", "non-member")
        report.details = members
    return report


def verify_counterexamples(alpha, count: int, seed: int, height: int = 6) -> Report:
    """Random parameters for each non-closed family; every certificate re-verifies."""
    report = Report("counterexamples")
    rng = random.Random(seed)

    def rat():
        return Fraction(rng.randint(-height * height, height * height), rng.randint(1, height))

    with _Tracked(report):
        jobs = []
        while len([j for j in jobs if j[0] == "two-point"]) < count:
            b, c = rat(), rat()
            if b != c:
                jobs.append(("two-point", b, c))
        while len([j for j in jobs if j[0] == "complex-pair"]) < count:
            v = rat()
            if v:
                jobs.append(("complex-pair", rat(), v))
        for _ in range(count):
            jobs.append(("derivation", rat(), None))
        for fam, x, y in jobs:
            report.cases += 1
            try:
                if fam == "two-point":
                    ce = counterexample_twopoint(alpha, x, y)
                elif fam == "complex-pair":
                    ce = counterexample_complex(alpha, x, y)
                else:
                    ce = counterexample_derivation(alpha, x)
            except DecompError as exc:
                report.violate([fam, x, y], "certificate", f"{exc.code}: {exc}")
                continue
            if not ce.reverify():
                report.violate([fam, x, y], "re-verified", "failed at doubled precision")
    return report


def verify_generator(alpha, samples: int, seed: int, max_degree: int = 5, height: int = 6) -> Report:
    report = Report("generator")
    rng = random.Random(seed)
    with _Tracked(report):
        signs = defaultdict(int)
        for k in range(samples):
            while True:
                g = random_positive_poly(rng, alpha, max_degree, height, 2)
                want = 1 if k % 2 == 0 else -1
                if (g.lc > 0) == (want > 0):
                    break
            signs["positive LC" if g.lc > 0 else "negative LC"] += 1
            report.cases += 1
            h = generator_decomposition(g, alpha)
            hp = h.expand()
            ok = (hp.lc == g.lc and hp.degree == g.degree and h.constant > 0 and
                  sign_at(hp, alpha) > 0 and sign_at(g - hp, alpha) > 0)
            if g.lc > 0:
                ok = ok and h.beta_prime is None and h.power == g.degree
            else:
                ok = ok and h.beta_prime is not None and h.power == g.degree - 1 and \
                    sign_at(UniPoly((-h.beta_prime, 1)), alpha) < 0
            ok = ok and sign_at(UniPoly((-h.beta, 1)), alpha) > 0
            if not ok:
                report.violate(g, "0 < h < g, LC(h) = LC(g), factor shapes", h)
        report.details = dict(sorted(signs.items()))
    return report


def verify_plan(pts: PointTuple, derivs, samples: int, seed: int, pair_samples: int = 200,
                height: int = 4, **plan_kwargs) -> Report:
    """Witnesses for every piece, a partition of random elements, sampled closure."""
    report = Report(f"plan-{len(derivs) + 1}")
    rng = random.Random(seed)
    arity = len(pts)
    with _Tracked(report):
        plan = build_plan(derivs, pts, **plan_kwargs)
        for pid, w in plan.witnesses.items():
            report.cases += 1
            if classify_n(w, pts, plan) != pid:
                report.violate(w, pid, classify_n(w, pts, plan))
        if len(plan.witnesses) != plan.pieces:
            report.violate("witnesses", plan.pieces, len(plan.witnesses))
        monos = monomials(arity, 2)
        elems = []
        while len(elems) < samples:
            p = MultiPoly({e: rng.randint(-height, height) for e in monos}, arity)
            if rng.random() < 0.3:
                q = MultiPoly({e: rng.randint(-height, height) for e in monos[: arity + 1]}, arity)
                if q.is_zero():
                    continue
                r = MultiRationalFunction(p, q) if not p.is_zero() else None
            else:
                r = MultiRationalFunction(p) if not p.is_zero() else None
            if r is None:
                continue
            s = sign_at_tuple(r, pts)
            if s == 0:
                continue
            elems.append(r if s > 0 else -r)
        by_piece = defaultdict(list)
        for r in elems:
            report.cases += 1
            pid = classify_n(r, pts, plan)
            if not 1 <= pid <= plan.pieces:
                report.violate(r, "piece id in range", pid)
            by_piece[pid].append(r)
        for pid in sorted(by_piece):
            items = by_piece[pid] + [plan.witnesses[pid]]
            for _ in range(pair_samples // max(1, len(by_piece))):
                a, b = rng.choice(items), rng.choice(items)
                for op, val in (("+", a + b), ("*", a * b)):
                    report.cases += 1
                    got = classify_n(val, pts, plan)
                    if got != pid:
                        report.violate([a, op, b], pid, got)
        report.details = {"pieces": plan.pieces,
                          **{f"piece {k}": len(v) for k, v in sorted(by_piece.items())},
                          **{f"witness {k}": v for k, v in plan.witnesses.items()}}
    return report


def verify_witnesses(fields, samples: int, seed: int, max_degree: int = 8, height: int = 9) -> Report:
    """Phi(m) = 0, m'(a) != 0, and reduce_mod(p) = 0 exactly when m divides p."""
    from .algext import in_kernel, indecomposability_witness

    report = Report("witnesses")
    rng = random.Random(seed)
    with _Tracked(report):
        for fld in fields:
            report.cases += 1
            w = indecomposability_witness(fld)
            if not w.kernel_check or w.derivative_sign == 0:
                report.violate(fld.minpoly, "witness", w.as_dict())
            for k in range(samples):
                p = random_poly(rng, max_degree, height)
                if k % 2:  # half the samples are multiples of m
                    p = p * fld.minpoly
                report.cases += 1
                lhs = in_kernel(p, fld)
                rhs = fld.minpoly.divides(p)
                if lhs != rhs:
                    report.violate([fld.minpoly, p], rhs, lhs)
    return report


__all__ = [
    "coefficient_grid", "monomials", "Corpus", "enumerate_corpus", "Report", "random_poly",
    "random_positive_rf", "random_positive_poly", "verify_closure", "square_identity_holds",
    "verify_translation", "verify_partition", "verify_degree_one", "verify_lift_agreement",
    "separating_postcondition", "verify_separating", "verify_recursion",
    "verify_product_closure", "verify_counterexamples", "verify_generator", "verify_plan",
    "verify_witnesses", "DEFAULT_PAIR_BUDGET",
]
