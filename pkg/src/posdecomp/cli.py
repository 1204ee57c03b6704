"""Command-line front end.

Every command prints one JSON object with the keys ``input``, ``result`` and
``certificates`` (plus ``suite`` for ``verify``). Numbers are exact strings.
Errors print ``{"error": {"code": ..., "message": ...}}`` and exit with 2 for
precondition failures, 3 for precision exhaustion and 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algext import NumberField, indecomposability_witness
from .derivsplit import (
    DerivationSpec,
    TwoPolicy,
    ZeroSide,
    build_plan,
    classify3,
    classify_n,
    derivative_sign,
    piece_to_class,
)
from .errors import DecompError, PreconditionError
from .hyperplane import (
    LambdaSeq,
    classify_params,
    counterexample_complex,
    counterexample_derivation,
    counterexample_twopoint,
    discriminant,
    kind_to_dict,
    lambda_closed_form,
    membership,
)
from .parser import parse_expr, parse_poly, to_text
from .qexact import as_rational
from .realpoint import (
    DEFAULT_MAX_BITS,
    NamedConstant,
    PointTuple,
    algebraic,
    load_digits,
    track_precision,
)


def parse_alpha(text: str, max_bits: int = DEFAULT_MAX_BITS):
    """pi | e | algebraic:<poly>:<lo>:<hi> | digits:<path>"""
    text = text.strip()
    if text in ("pi", "e"):
        return NamedConstant(text, max_bits)
    kind, _, rest = text.partition(":")
    if kind == "algebraic":
        parts = rest.split(":")
        if len(parts) != 3:
            raise PreconditionError("expected algebraic:<poly>:<lo>:<hi>")
        poly, lo, hi = parts
        try:
            lo_q, hi_q = as_rational(lo), as_rational(hi)
        except (ValueError, ZeroDivisionError):
            raise PreconditionError(f"bad interval endpoints {lo!r}, {hi!r}") from None
        return algebraic(parse_poly(poly), lo_q, hi_q, max_bits=max_bits)
    if kind == "digits":
        try:
            return load_digits(rest, max_bits)
        except OSError as exc:
            raise PreconditionError(f"cannot read digit file: {exc}") from None
    raise PreconditionError(f"unknown point {text!r}; use pi, e, algebraic:... or digits:...")


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"not an exact rational: {text!r}") from None


def _cert(label: str, sign, bits) -> dict:
    return {"inequality": label, "required_sign": str(sign), "precision_bits": str(bits)}


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> dict:
    alpha = parse_alpha(args.alpha, args.max_bits)
    r = parse_expr(args.expr, 1).to_univariate()
    policy = TwoPolicy(args.policy)
    with track_precision() as stats:
        piece = classify3(r, alpha)
        ds = derivative_sign(r, alpha)
    result = piece.value if args.pieces == 3 else piece_to_class(piece, policy).value
    inp = {"command": "classify", "alpha": args.alpha, "expr": to_text(r), "pieces": str(args.pieces)}
    if args.pieces == 2:
        inp["policy"] = policy.value
    return {
        "input": inp,
        "result": result,
        "certificates": [
            _cert("r(alpha) > 0", "+", stats.max_bits),
            _cert(f"r'(alpha) sign is {ds}", ds, stats.max_bits),
        ],
    }


def cmd_hyperplane(args) -> dict:
    if args.counterexample:
        return _hyperplane_counterexample(args)
    if args.l2 is None or args.l3 is None:
        raise PreconditionError("hyperplane needs --l2 and --l3 (or --counterexample)")
    l2, l3 = _rational_arg(args.l2), _rational_arg(args.l3)
    kind = classify_params(l2, l3)
    back2, back3 = lambda_closed_form(kind, 2), lambda_closed_form(kind, 3)
    certs = [
        {"inequality": "3*l2^2 - 4*l3", "value": str(discriminant(l2, l3))},
        {"inequality": "closed-form lambda_2 = l2", "value": "ok" if back2 == l2 else "mismatch"},
        {"inequality": "closed-form lambda_3 = l3", "value": "ok" if back3 == l3 else "mismatch"},
    ]
    inp = {"command": "hyperplane", "l2": str(l2), "l3": str(l3)}
    result = kind_to_dict(kind)
    if args.member:
        p = parse_poly(args.member)
        k = args.prefix if args.prefix is not None else p.degree + 1
        seq = LambdaSeq.of_kind(kind, max(k, p.degree + 1, 2))
        inp["member"] = to_text(p)
        result["member"] = "yes" if membership(p, kind) else "no"
        result["lambda_prefix"] = [str(v) for v in seq.values]
        result["pairing"] = str(seq.pair(p))
    return {"input": inp, "result": result, "certificates": certs}


def _hyperplane_counterexample(args) -> dict:
    alpha = parse_alpha(args.alpha, args.max_bits)
    fam = args.counterexample
    inp = {"command": "hyperplane", "counterexample": fam, "alpha": args.alpha}
    if fam == "two-point":
        if args.b is None or args.c is None:
            raise PreconditionError("two-point counterexample needs --b and --c")
        c = alpha if args.c == "alpha" else _rational_arg(args.c)
        ce = counterexample_twopoint(alpha, _rational_arg(args.b), c)
        inp.update(b=args.b, c=args.c)
    elif fam == "complex-pair":
        if args.u is None or args.v is None:
            raise PreconditionError("complex-pair counterexample needs --u and --v")
        ce = counterexample_complex(alpha, _rational_arg(args.u), _rational_arg(args.v))
        inp.update(u=args.u, v=args.v)
    else:
        if args.delta is None:
            raise PreconditionError("derivation counterexample needs --delta")
        ce = counterexample_derivation(alpha, _rational_arg(args.delta))
        inp.update(delta=args.delta)
    d = ce.as_dict()
    certs = d.pop("certificates")
    d["reverified"] = "ok" if ce.reverify() else "failed"
    return {"input": inp, "result": d, "certificates": certs}


def cmd_witness(args) -> dict:
    m = parse_poly(args.field)
    lo, hi = _rational_arg(args.root[0]), _rational_arg(args.root[1])
    fld = NumberField(m, lo, hi, trusted=args.trusted, max_bits=args.max_bits)
    w = indecomposability_witness(fld)
    return {
        "input": {"command": "witness", "field": to_text(fld.minpoly),
                  "root": [str(lo), str(hi)]},
        "result": w.as_dict(),
        "certificates": w.certificates(),
    }


def _parse_points(text: str, max_bits: int) -> PointTuple:
    pts = tuple(parse_alpha(s, max_bits) for s in text.split(","))
    return PointTuple(pts, independence_promise=True)


def _parse_derivs(text: str):
    out = []
    for chunk in text.split(";"):
        out.append(DerivationSpec(tuple(_rational_arg(c) for c in chunk.split(","))))
    return out


def cmd_plan(args) -> dict:
    pts = _parse_points(args.points, args.max_bits)
    derivs = _parse_derivs(args.derivs)
    targets = [int(t) for t in args.targets.split(",")] if args.targets else None
    sides = [ZeroSide(s) for s in args.zero_sides.split(",")] if args.zero_sides else None
    with track_precision() as stats:
        plan = build_plan(derivs, pts, zero_sides=sides, targets=targets,
                          height=args.height, seed=args.seed)
    result = {
        "pieces": str(plan.pieces),
        "steps": [{"derivation": [str(c) for c in s.derivation.coefficients],
                   "target": str(s.target), "zero_side": s.zero_side.value,
                   "new_piece": str(s.new_piece)} for s in plan.steps],
        "witnesses": {str(k): to_text(v) for k, v in plan.witnesses.items()},
    }
    inp = {"command": "plan", "points": args.points, "derivs": args.derivs,
           "independence": "promised"}
    if args.expr:
        r = parse_expr(args.expr, len(pts))
        inp["expr"] = to_text(r)
        result["piece"] = str(classify_n(r, pts, plan))
    certs = [_cert(f"witness {k} lands in piece {k}", "+", stats.max_bits)
             for k in plan.witnesses]
    return {"input": inp, "result": result, "certificates": certs}


def cmd_verify(args) -> dict:
    from . import oracle
    from .algext import NumberField as NF

    suite = args.suite
    seed = args.seed
    if suite in ("closure", "translation", "partition", "degree-one", "lift", "separating",
                 "counterexamples", "generator"):
        alpha = parse_alpha(args.alpha, args.max_bits)
    if suite == "closure":
        rep = oracle.verify_closure(alpha, oracle.Corpus(args.degree, args.height,
                                                         integer_only=args.integer_only))
    elif suite == "translation":
        shifts = [Fraction(k, 2) for k in range(-6, 7) if k]
        rep = oracle.verify_translation(alpha, oracle.Corpus(args.degree, args.height,
                                                             integer_only=args.integer_only), shifts)
    elif suite == "partition":
        import random

        rng = random.Random(seed)
        rep = oracle.verify_partition(alpha, [oracle.random_positive_rf(rng, alpha)
                                              for _ in range(args.samples)])
    elif suite == "degree-one":
        rep = oracle.verify_degree_one(alpha, oracle.enumerate_corpus(
            oracle.Corpus(1, args.height, integer_only=args.integer_only)))
    elif suite == "lift":
        rep = oracle.verify_lift_agreement(alpha, args.samples, seed)
    elif suite == "separating":
        rep = oracle.verify_separating(alpha, args.samples, seed)
    elif suite == "recursion":
        from .hyperplane import ComplexPair, Derivation, TwoPoint

        kinds = [TwoPoint(1, 2), Derivation(Fraction(3, 2)), ComplexPair(1, 2)]
        rep = oracle.verify_recursion(kinds, args.k)
    elif suite == "product":
        from .hyperplane import ComplexPair, Derivation, TwoPoint

        polys = list(oracle.enumerate_corpus(oracle.Corpus(2, 1, integer_only=True)))
        rep = oracle.verify_product_closure([TwoPoint(1, 2), Derivation(1), ComplexPair(0, 1)], polys)
    elif suite == "counterexamples":
        rep = oracle.verify_counterexamples(alpha, args.samples, seed)
    elif suite == "generator":
        rep = oracle.verify_generator(alpha, args.samples, seed)
    elif suite == "witnesses":
        fields = [NF(parse_poly(m), 1, 2) for m in ("x^2-2", "x^2-x-1", "x^3-2", "x^4-x-1")]
        rep = oracle.verify_witnesses(fields, args.samples, seed)
    elif suite == "plan":
        pts = _parse_points(args.points, args.max_bits)
        rep = oracle.verify_plan(pts, _parse_derivs(args.derivs), args.samples, seed)
    else:  # pragma: no cover - argparse restricts choices
        raise PreconditionError(f"unknown suite {suite!r}")
    d = rep.as_dict()
    return {
        "input": {"command": "verify", "suite": suite, "seed": str(seed)},
        "result": "pass" if rep.passed else "fail",
        "certificates": [],
        "suite": d,
        "_exit": 0 if rep.passed else 1,
    }


SUITES = ["closure", "translation", "partition", "degree-one", "lift", "separating", "recursion",
          "product", "counterexamples", "generator", "witnesses", "plan"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-bits", type=int, default=DEFAULT_MAX_BITS,
                        help="precision cap for sign queries (default 65536)")
    common.add_argument("--seed", type=int, default=0)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="json", action="store_true", default=True,
                     help="print JSON (default)")
    out.add_argument("--text", dest="json", action="store_false",
                     help="print flattened key: value lines instead of JSON")

    ap = argparse.ArgumentParser(prog="posdecomp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="piece of a positive element of Q(alpha)")
    p.add_argument("--alpha", default="pi")
    p.add_argument("--expr", required=True)
    p.add_argument("--policy", choices=[t.value for t in TwoPolicy], default="zero-with-plus")
    p.add_argument("--pieces", type=int, choices=[2, 3], default=3)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hyperplane", parents=[common], help="hyperplane families and counterexamples")
    p.add_argument("--l2")
    p.add_argument("--l3")
    p.add_argument("--member", help="polynomial to test for membership")
    p.add_argument("--prefix", type=int, help="lambda prefix length (default: degree + 1)")
    p.add_argument("--counterexample", choices=["two-point", "complex-pair", "derivation"])
    p.add_argument("--alpha", default="pi")
    p.add_argument("--b")
    p.add_argument("--c", help="rational, or 'alpha'")
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--delta")
    p.set_defaults(func=cmd_hyperplane)

    p = sub.add_parser("witness", parents=[common], help="indecomposability witness for Q(a)")
    p.add_argument("--field", required=True, help="minimal polynomial, e.g. x^2-2")
    p.add_argument("--root", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--trusted", action="store_true", help="skip the irreducibility certificate")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--alpha", default="pi")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--height", type=int, default=2)
    p.add_argument("--integer-only", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--points", default="pi,e")
    p.add_argument("--derivs", default="1,0;0,1")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plan", parents=[common], help="multivariate split plan")
    p.add_argument("--points", default="pi,e",
                   help="comma-separated points; their algebraic independence is promised")
    p.add_argument("--derivs", required=True, help="e.g. '1,0;0,1'")
    p.add_argument("--targets", help="piece split by each step, e.g. '1,2'")
    p.add_argument("--zero-sides", help="plus|minus per step, e.g. 'minus,minus'")
    p.add_argument("--height", type=int, default=8)
    p.add_argument("--expr", help="element to classify with the plan")
    p.set_defaults(func=cmd_plan)
    return ap


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield f"{prefix[:-1]}: {obj}"


def render(obj, as_json: bool = True) -> str:
    if as_json:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return "\n".join(_flatten(obj)) + "\n"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        payload = args.func(args)
    except DecompError as exc:
        out.write(render({"error": {"code": exc.code, "message": str(exc)}}, args.json))
        return exc.exit_code
    code = payload.pop("_exit", 0)
    out.write(render(payload, args.json))
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
