"""Command-line surface.

Exit codes: 0 for success or a true verdict, 1 for a false verdict, a found
countermodel or a rejected proof, 2 for input errors.  Report styling honors
HYML_COLOR in {auto, always, never}.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bridge import check_prop_equiv, extend_signature, hmodl_of_ml, ml_of_hmodl, translate_formula
from .errors import HymlError
from .fixtures import desk_signature, m0_signature
from .matching import Valuation
from .proofs import check_proof
from .semantics import Assignment, random_model
from .soundness import (
    enumerate_ml_models,
    enumerate_patterns,
    sample_tautologies,
    split_seed,
    validate_axiom_schemes,
    validate_rules,
)
from .syntax import Signature, SystemId
from .textio import (
    assignment_for_model,
    parse_document,
    render_assignment,
    render_formula,
    render_model,
    render_ml_model,
    render_signature,
)
from .proofs import is_prop_tautology

_SYSTEMS = {s.value: s for s in SystemId}


def _want_color() -> bool:
    mode = os.environ.get("HYML_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stdout.isatty()


def _style(text: str, code: str) -> str:
    if _want_color():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _good(text: str) -> str:
    return _style(text, "32")


def _bad(text: str) -> str:
    return _style(text, "31")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_sig(args) -> Signature | None:
    if getattr(args, "sig", None):
        return parse_document("signature", _read(args.sig))
    return None


def _load_model(args, sig: Signature | None):
    return parse_document("model", _read(args.model), sig)


def _load_assignment(args, model) -> Assignment:
    if getattr(args, "assign", None):
        mapping = parse_document("assignment", _read(args.assign))
    else:
        mapping = {}
    return assignment_for_model(mapping, model)


def _system(args) -> SystemId:
    return _SYSTEMS[args.system]


def cmd_check(args) -> int:
    sig = _load_sig(args)
    model = _load_model(args, sig)
    phi = parse_document("formula", _read(args.formula), model.sig)
    g = _load_assignment(args, model)
    from .semantics import satisfies

    verdict = satisfies(model, g, args.world, phi, _system(args))
    print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_valid(args) -> int:
    sig = _load_sig(args)
    model = _load_model(args, sig)
    phi = parse_document("formula", _read(args.formula), model.sig)
    from .semantics import valid_in_model

    verdict = valid_in_model(model, phi, _system(args))
    print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_translate(args) -> int:
    sig = _load_sig(args)
    if args.dir == "hmodl2ml":
        model = _load_model(args, sig)
        g = _load_assignment(args, model)
        mlmodel, rho = ml_of_hmodl(model.frame(), g)
        print(render_ml_model(mlmodel))
        print(render_assignment(rho.map))
        if args.formula:
            phi = parse_document("formula", _read(args.formula), model.sig)
            ext = extend_signature(model.sig)
            translated = translate_formula(phi, ext)
            print(render_signature(ext.extended))
            print(render_formula(translated, ext.extended))
        return 0
    mlmodel = parse_document("ml-model", _read(args.model), sig)
    mapping = (
        parse_document("assignment", _read(args.assign)) if args.assign else {}
    )
    frame, g = hmodl_of_ml(mlmodel, Valuation(mlmodel.sig, mapping))
    print(render_model(frame))
    print(render_assignment(g.map))
    return 0


def cmd_equiv(args) -> int:
    sig = _load_sig(args) or m0_signature()
    patterns = enumerate_patterns(sig, args.max_depth, args.include_top)
    total = sum(len(v) for v in patterns.values())
    checks = 0
    mismatches = 0
    for model in _enumerate_ml_models_guarded(sig, args.max_size):
        for sort_patterns in patterns.values():
            for phi in sort_patterns:
                report = check_prop_equiv(phi, model)
                checks += report.checked
                if not report.agree:
                    mismatches += len(report.mismatches)
    pct = 100.0 if mismatches == 0 else 100.0 * (checks - mismatches) / checks
    word = _good("agreement") if mismatches == 0 else _bad("disagreement")
    print(f"{word} {pct:.0f}% ({total} patterns, {checks} checks)")
    return 0 if mismatches == 0 else 1


def _enumerate_ml_models_guarded(sig: Signature, max_size: int):
    if len(sig.sorts) * max_size > 8 or len(sig.ops) > 3:
        raise HymlError(
            "the exhaustive sweep is only feasible for small signatures and sizes"
        )
    return enumerate_ml_models(sig, max_size)


def cmd_prove_check(args) -> int:
    sig = parse_document("signature", _read(args.sig))
    script = parse_document("proof", _read(args.proof), sig)
    report = check_proof(script, sig)
    for result in report.results:
        mark = _good("ok") if result.ok else _bad("FAIL")
        print(f"step {result.index}: {mark} {result.detail}")
    print(_good(str(report)) if report.ok else _bad(str(report)))
    return 0 if report.ok else 1


def cmd_validate_axioms(args) -> int:
    sig = _load_sig(args) or desk_signature()
    rows = []
    ok = True

    def show(report):
        status = _good("pass") if report.ok else _bad("FAIL")
        rows.append(
            f"{report.scheme:<12} {report.instances:>5} {report.checks:>7} "
            f"{len(report.failures):>4}  {status}"
        )

    print(f"{'scheme':<12} {'inst':>5} {'checks':>7} {'fail':>4}")
    axiom_reports = validate_axiom_schemes(
        sig,
        samples=args.samples,
        model_count=args.models,
        size_bound=args.max_size,
        seed=args.seed,
        on_progress=show,
    )
    import random as _random

    rng = _random.Random(split_seed(args.seed, 3))
    taut_failures = 0
    tauts = sample_tautologies(sig, rng, max(10, args.samples // 10))
    from .semantics import valid_in_model

    models = [
        random_model(sig, args.max_size, split_seed(args.seed, 7, i))[0]
        for i in range(min(args.models, 10))
    ]
    for phi in tauts:
        if not is_prop_tautology(phi):
            taut_failures += 1
        for model in models:
            if not valid_in_model(model, phi):
                taut_failures += 1
    status = _good("pass") if taut_failures == 0 else _bad("FAIL")
    rows.append(
        f"{'taut':<12} {len(tauts):>5} {len(tauts) * len(models):>7} {taut_failures:>4}  {status}"
    )
    rule_reports = validate_rules(
        sig,
        samples=max(10, args.samples // 2),
        model_count=args.models,
        size_bound=args.max_size,
        seed=args.seed,
        on_progress=show,
    )
    for row in rows:
        print(row)
    ok = (
        all(r.ok for r in axiom_reports)
        and all(r.ok for r in rule_reports)
        and taut_failures == 0
    )
    print(_good("all schemes sound") if ok else _bad("soundness failures found"))
    return 0 if ok else 1


def cmd_gen_model(args) -> int:
    sig = _load_sig(args) or desk_signature()
    model, g = random_model(sig, args.max_size, args.seed)
    if args.kind == "ml-model":
        mlmodel, rho = ml_of_hmodl(model.frame(), g)
        print(render_ml_model(mlmodel))
        if args.with_assignment:
            print(render_assignment(rho.map))
    else:
        print(render_model(model))
        if args.with_assignment:
            print(render_assignment(g.map))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyml",
        description="Many-sorted hybrid modal logic and Matching Logic toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_system(p):
        p.add_argument(
            "--system",
            choices=sorted(_SYSTEMS),
            default=SystemId.HYBRID_AT_FORALL.value,
        )

    p = sub.add_parser("check", help="satisfaction at one world")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--assign")
    p.add_argument("--sig")
    add_system(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("valid", help="validity in a model (sweeps worlds and assignments)")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--sig")
    add_system(p)
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("translate", help="translate models between the two readings")
    p.add_argument("--dir", required=True, choices=("hmodl2ml", "ml2hmodl"))
    p.add_argument("--model", required=True)
    p.add_argument("--assign")
    p.add_argument("--formula", help="with hmodl2ml, also translate this formula")
    p.add_argument("--sig")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("equiv", help="exhaustive pattern/frame agreement sweep")
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--include-top", action="store_true")
    p.add_argument("--sig")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("prove-check", help="check a proof script")
    p.add_argument("--proof", required=True)
    p.add_argument("--sig", required=True)
    p.set_defaults(func=cmd_prove_check)

    p = sub.add_parser("validate-axioms", help="randomized soundness sweep")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--models", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--sig")
    p.set_defaults(func=cmd_validate_axioms)

    p = sub.add_parser("gen-model", help="emit a random standard model")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--kind", choices=("model", "ml-model"), default="model")
    p.add_argument("--with-assignment", action="store_true")
    p.add_argument("--sig")
    p.set_defaults(func=cmd_gen_model)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except HymlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
