"""Randomized soundness sweeps and brute-force enumeration helpers.

Instances are generated from explicit witnesses through the same builder the
proof checker uses, then validated on random standard models.  Rule sweeps
mix fully random instances (often vacuous, since random premises are rarely
valid) with constructed ones whose premises are valid by design, so every
rule gets exercised in earnest.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .matching import MLModel
from .proofs import AXIOM_SCHEMES, RULES, Scheme, build_axiom_instance
from .semantics import Assignment, KripkeStructure, random_model, valid_in_model
from .syntax import (
    App,
    At,
    Forall,
    Formula,
    Hole,
    Neg,
    Nom,
    Or,
    SVar,
    Signature,
    SystemId,
    Top,
    and_,
    dual_app,
    implies,
)


def split_seed(seed: int, *indices: int) -> int:
    """Deterministic per-task seed derivation."""
    out = seed & 0xFFFFFFFF
    for index in indices:
        out = (out * 1000003 + index + 1) & 0xFFFFFFFF
    return out


# --- random syntax -----------------------------------------------------------

def random_formula(
    sig: Signature,
    rng: random.Random,
    sort: str | None = None,
    depth: int = 2,
    system: SystemId = SystemId.HYBRID_AT_FORALL,
    avoid: frozenset[str] = frozenset(),
) -> Formula:
    """A random well-sorted formula admissible in the system.  State variables
    named in `avoid` are never used, in any role."""
    if sort is None:
        sort = rng.choice(sig.sorts)
    leaves: list[Formula] = [Top(sort)]
    leaves.extend(sig.props_of_sort(sort))
    if system is not SystemId.BASE_K:
        leaves.extend(sig.noms_of_sort(sort))
        leaves.extend(v for v in sig.svars_of_sort(sort) if v.name not in avoid)
    if depth <= 0:
        return rng.choice(leaves)
    usable_vars = [SVar(n, s) for n, s in sig.svars.items() if n not in avoid]
    kinds = ["leaf", "leaf", "neg", "or"]
    result_ops = [d for d in sig.ops.values() if d.result == sort]
    if result_ops:
        kinds.append("app")
    if system is not SystemId.BASE_K and usable_vars:
        kinds.append("forall")
    if system is SystemId.HYBRID_AT_FORALL:
        symbols: list[Nom | SVar] = list(usable_vars)
        symbols.extend(Nom(n, s) for n, s in sig.noms.items())
        if symbols:
            kinds.append("at")
    kind = rng.choice(kinds)
    sub = lambda s: random_formula(sig, rng, s, depth - 1, system, avoid)  # noqa: E731
    if kind == "leaf":
        return rng.choice(leaves)
    if kind == "neg":
        return Neg(sub(sort))
    if kind == "or":
        return Or(sub(sort), sub(sort))
    if kind == "app":
        decl = rng.choice(result_ops)
        return App(decl.name, tuple(sub(s) for s in decl.arg_sorts))
    if kind == "forall":
        return Forall(rng.choice(usable_vars), sub(sort))
    symbol = rng.choice(symbols)
    return At(sort, symbol, sub(symbol.sort))


def random_pattern(
    sig: Signature,
    rng: random.Random,
    sort: str | None = None,
    depth: int = 2,
) -> Formula:
    """A random matching-logic pattern (no props, nominals or jumps)."""
    if sort is None:
        sort = rng.choice(sig.sorts)
    leaves: list[Formula] = [Top(sort)]
    leaves.extend(sig.svars_of_sort(sort))
    if depth <= 0:
        return rng.choice(leaves)
    kinds = ["leaf", "leaf", "neg", "or"]
    result_ops = [d for d in sig.ops.values() if d.result == sort]
    if result_ops:
        kinds.append("app")
    if sig.svars:
        kinds.append("forall")
    kind = rng.choice(kinds)
    sub = lambda s: random_pattern(sig, rng, s, depth - 1)  # noqa: E731
    if kind == "leaf":
        return rng.choice(leaves)
    if kind == "neg":
        return Neg(sub(sort))
    if kind == "or":
        return Or(sub(sort), sub(sort))
    if kind == "app":
        decl = rng.choice(result_ops)
        return App(decl.name, tuple(sub(s) for s in decl.arg_sorts))
    var = SVar(*rng.choice(sorted(sig.svars.items())))
    return Forall(var, sub(sort))


def _context_reach(sig: Signature, max_depth: int) -> list[set[tuple[str, str]]]:
    """reach[k] holds (result, hole) pairs buildable with a context of depth <= k."""
    reach = [{(s, s) for s in sig.sorts}]
    for _ in range(max_depth):
        step = set(reach[-1])
        for decl in sig.ops.values():
            for arg in decl.arg_sorts:
                step.update((decl.result, h) for r, h in reach[-1] if r == arg)
        reach.append(step)
    return reach


def random_context_formula(
    sig: Signature,
    rng: random.Random,
    result_sort: str,
    hole_sort: str,
    depth: int = 2,
) -> Formula | None:
    """A random single-hole NC formula, or None when the sorts are unreachable."""
    reach = _context_reach(sig, depth)

    def build(result: str, k: int) -> Formula | None:
        options: list[tuple] = []
        if result == hole_sort:
            options.append(("hole",))
        if k > 0:
            for decl in sig.ops.values():
                if decl.result != result:
                    continue
                spots = [
                    i
                    for i, arg in enumerate(decl.arg_sorts)
                    if (arg, hole_sort) in reach[k - 1]
                ]
                if spots:
                    options.append(("op", decl, spots))
        if not options:
            return None
        choice = rng.choice(options)
        if choice[0] == "hole":
            return Hole(hole_sort)
        _, decl, spots = choice
        spot = rng.choice(spots)
        args = []
        for i, arg_sort in enumerate(decl.arg_sorts):
            if i == spot:
                inner = build(arg_sort, k - 1)
                if inner is None:
                    return None
                args.append(inner)
            else:
                args.append(Top(arg_sort))
        return App(decl.name, tuple(args))

    if (result_sort, hole_sort) not in reach[depth]:
        return None
    return build(result_sort, depth)


# --- axiom witnesses -----------------------------------------------------------

def _pick_svar(sig: Signature, rng: random.Random, sort: str | None = None) -> SVar | None:
    pool = [SVar(n, s) for n, s in sig.svars.items() if sort is None or s == sort]
    return rng.choice(pool) if pool else None


def _pick_symbol(sig: Signature, rng: random.Random, sort: str | None = None) -> Nom | SVar | None:
    pool: list[Nom | SVar] = [SVar(n, s) for n, s in sig.svars.items() if sort is None or s == sort]
    pool.extend(Nom(n, s) for n, s in sig.noms.items() if sort is None or s == sort)
    return rng.choice(pool) if pool else None


def random_axiom_witness(
    scheme: Scheme, sig: Signature, rng: random.Random, depth: int = 2
) -> dict | None:
    """A witness for the scheme satisfying its side conditions, or None when
    the signature lacks the material after a bounded number of attempts."""
    sub = lambda s=None, avoid=frozenset(): random_formula(  # noqa: E731
        sig, rng, s, depth, SystemId.HYBRID_AT_FORALL, avoid
    )
    for _ in range(40):
        if scheme in (Scheme.K_SIGMA, Scheme.DUAL_SIGMA, Scheme.BARCAN, Scheme.BACK):
            if not sig.ops:
                return None
            decl = rng.choice(sorted(sig.ops.values(), key=lambda d: d.name))
            if scheme is Scheme.DUAL_SIGMA:
                return {"op": decl.name, "args": tuple(sub(s) for s in decl.arg_sorts)}
            if not decl.arg_sorts:
                continue
            pos = rng.randint(1, len(decl.arg_sorts))
            sides = tuple(
                sub(s) for i, s in enumerate(decl.arg_sorts, 1) if i != pos
            )
            if scheme is Scheme.K_SIGMA:
                want = decl.arg_sorts[pos - 1]
                return {"op": decl.name, "pos": pos, "sides": sides,
                        "phi": sub(want), "chi": sub(want)}
            if scheme is Scheme.BACK:
                z = _pick_symbol(sig, rng)
                if z is None:
                    return None
                return {"op": decl.name, "pos": pos, "sides": sides,
                        "z": z, "psi": sub(z.sort)}
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            args = tuple(
                sub(s) if i == pos else sub(s, avoid=frozenset((var.name,)))
                for i, s in enumerate(decl.arg_sorts, 1)
            )
            return {"op": decl.name, "pos": pos, "var": var, "args": args}

        if scheme is Scheme.Q1:
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            sort = rng.choice(sig.sorts)
            return {"var": var, "phi": sub(sort, avoid=frozenset((var.name,))),
                    "psi": sub(sort)}

        if scheme is Scheme.Q2:
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            target = _pick_symbol(sig, rng, var.sort)
            phi = sub()
            from .syntax import is_substitutable

            if target is not None and is_substitutable(phi, var, target):
                return {"var": var, "target": target, "phi": phi}
            continue

        if scheme is Scheme.NAME:
            var = _pick_svar(sig, rng)
            return None if var is None else {"var": var}

        if scheme is Scheme.NOM:
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            result = rng.choice(sig.sorts)
            eta = random_context_formula(sig, rng, result, var.sort, rng.randint(0, depth))
            theta = random_context_formula(sig, rng, result, var.sort, rng.randint(0, depth))
            if eta is None or theta is None:
                continue
            return {"var": var, "eta": eta, "theta": theta, "phi": sub(var.sort)}

        if scheme in (Scheme.K_AT, Scheme.SELF_DUAL):
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            witness = {"at-sort": rng.choice(sig.sorts), "z": z, "phi": sub(z.sort)}
            if scheme is Scheme.K_AT:
                witness["psi"] = sub(z.sort)
            return witness

        if scheme is Scheme.AGREE:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            y = _pick_symbol(sig, rng)
            if y is None:
                return None
            return {"at-sort": rng.choice(sig.sorts), "inner-sort": y.sort,
                    "y": y, "z": z, "phi": sub(z.sort)}

        if scheme is Scheme.INTRO:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            return {"z": z, "phi": sub(z.sort)}

        if scheme is Scheme.REF:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            return {"at-sort": rng.choice(sig.sorts), "z": z}

        if scheme is Scheme.BARCAN_AT:
            var = _pick_svar(sig, rng)
            z = _pick_symbol(sig, rng)
            if var is None or z is None:
                return None
            if isinstance(z, SVar) and z.name == var.name:
                continue
            return {"at-sort": rng.choice(sig.sorts), "var": var, "z": z,
                    "phi": sub(z.sort)}

        if scheme is Scheme.NOM_X:
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            z = _pick_symbol(sig, rng, var.sort)
            y = _pick_symbol(sig, rng, var.sort)
            if z is None or y is None:
                return None
            return {"at-sort": rng.choice(sig.sorts), "var": var, "z": z, "y": y}

        raise ValueError(f"{scheme.value!r} is not an axiom scheme")
    return None


# --- rule instances --------------------------------------------------------------

def _valid_leaning(sig: Signature, rng: random.Random, sort: str, depth: int) -> Formula:
    """A formula valid in every model: an excluded middle over a random body."""
    body = random_formula(sig, rng, sort, depth)
    return Or(body, Neg(body))


@dataclass
class RuleInstance:
    rule: Scheme
    witness: dict
    premises: tuple[Formula, ...]
    conclusion: Formula


def random_rule_instance(
    rule: Scheme, sig: Signature, rng: random.Random, depth: int = 2
) -> RuleInstance | None:
    """One rule application; roughly half the draws make the premises valid by
    construction so preservation checks are not vacuous."""
    constructed = rng.random() < 0.5
    sub = lambda s=None, avoid=frozenset(): random_formula(  # noqa: E731
        sig, rng, s, depth, SystemId.HYBRID_AT_FORALL, avoid
    )
    for _ in range(40):
        if rule is Scheme.MP:
            sort = rng.choice(sig.sorts)
            if constructed:
                phi = _valid_leaning(sig, rng, sort, depth)
                psi = Or(sub(sort), phi)
            else:
                phi = sub(sort)
                psi = sub(sort)
            return RuleInstance(rule, {}, (phi, implies(phi, psi)), psi)

        if rule is Scheme.UG:
            pool = [d for d in sig.ops.values() if d.arg_sorts]
            if not pool:
                return None
            decl = rng.choice(sorted(pool, key=lambda d: d.name))
            pos = rng.randint(1, len(decl.arg_sorts))
            sides = tuple(sub(s) for i, s in enumerate(decl.arg_sorts, 1) if i != pos)
            want = decl.arg_sorts[pos - 1]
            phi = _valid_leaning(sig, rng, want, depth) if constructed else sub(want)
            witness = {"op": decl.name, "pos": pos, "sides": sides}
            return RuleInstance(rule, witness, (phi,),
                                dual_app(decl.name, _insert_at(sides, pos, phi)))

        if rule is Scheme.GEN:
            var = _pick_svar(sig, rng)
            if var is None:
                return None
            sort = rng.choice(sig.sorts)
            phi = _valid_leaning(sig, rng, sort, depth) if constructed else sub(sort)
            return RuleInstance(rule, {"var": var}, (phi,), Forall(var, phi))

        if rule is Scheme.GEN_AT:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            sort = rng.choice(sig.sorts)
            phi = _valid_leaning(sig, rng, z.sort, depth) if constructed else sub(z.sort)
            return RuleInstance(rule, {"at-sort": sort, "z": z}, (phi,), At(sort, z, phi))

        if rule is Scheme.BROADCAST_S:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            from_sort = rng.choice(sig.sorts)
            to_sort = rng.choice(sig.sorts)
            body = _valid_leaning(sig, rng, z.sort, depth) if constructed else sub(z.sort)
            premise = At(from_sort, z, body)
            return RuleInstance(rule, {"to-sort": to_sort}, (premise,),
                                At(to_sort, z, body))

        if rule is Scheme.PASTE0:
            z = _pick_symbol(sig, rng)
            if z is None:
                return None
            candidates = [
                v for v in sig.svars_of_sort(z.sort)
                if not (isinstance(z, SVar) and z.name == v.name)
            ]
            if not candidates:
                return None
            y = rng.choice(candidates)
            sort = rng.choice(sig.sorts)
            phi = sub(z.sort, avoid=frozenset((y.name,)))
            psi = At(sort, z, phi) if constructed else sub(sort, avoid=frozenset((y.name,)))
            premise = implies(At(sort, z, and_(y, phi)), psi)
            conclusion = implies(At(sort, z, phi), psi)
            witness = {"at-sort": sort, "z": z, "y": y, "phi": phi, "psi": psi}
            return RuleInstance(rule, witness, (premise,), conclusion)

        if rule is Scheme.PASTE1:
            pool = [d for d in sig.ops.values() if d.arg_sorts]
            if not pool:
                return None
            decl = rng.choice(sorted(pool, key=lambda d: d.name))
            pos = rng.randint(1, len(decl.arg_sorts))
            want = decl.arg_sorts[pos - 1]
            z = _pick_symbol(sig, rng, decl.result)
            vars_ = [v for v in sig.svars_of_sort(want)
                     if not (isinstance(z, SVar) and z and z.name == v.name)]
            if z is None or not vars_:
                return None
            y = rng.choice(vars_)
            avoid = frozenset((y.name,))
            sides = tuple(sub(s, avoid) for i, s in enumerate(decl.arg_sorts, 1) if i != pos)
            phi = sub(want, avoid)
            sort = rng.choice(sig.sorts)
            plain = App(decl.name, _insert_at(sides, pos, phi))
            psi = At(sort, z, plain) if constructed else sub(sort, avoid)
            premise = implies(
                At(sort, z, App(decl.name, _insert_at(sides, pos, and_(y, phi)))), psi
            )
            conclusion = implies(At(sort, z, plain), psi)
            witness = {"at-sort": sort, "z": z, "y": y, "op": decl.name,
                       "pos": pos, "sides": sides, "phi": phi, "psi": psi}
            return RuleInstance(rule, witness, (premise,), conclusion)

        raise ValueError(f"{rule.value!r} is not a deduction rule")
    return None


def _insert_at(sides: Sequence[Formula], pos: int, phi: Formula) -> tuple[Formula, ...]:
    out = list(sides)
    out.insert(pos - 1, phi)
    return tuple(out)


# --- sweeps -----------------------------------------------------------------------

@dataclass
class SchemeReport:
    scheme: str
    instances: int
    checks: int
    failures: list = field(default_factory=list)
    nonvacuous: int | None = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.instances > 0


def sample_models(
    sig: Signature, count: int, size_bound: int, seed: int
) -> list[tuple[KripkeStructure, Assignment]]:
    return [random_model(sig, size_bound, split_seed(seed, 7, i)) for i in range(count)]


def validate_axiom_schemes(
    sig: Signature,
    samples: int = 100,
    model_count: int = 50,
    size_bound: int = 4,
    seed: int = 0,
    depth: int = 2,
    schemes: Iterable[Scheme] = AXIOM_SCHEMES,
    on_progress: Callable[[SchemeReport], None] | None = None,
) -> list[SchemeReport]:
    """Per scheme: generate witness instantiations and check the instances
    are valid in every sampled model."""
    models = [m for m, _ in sample_models(sig, model_count, size_bound, seed)]
    reports = []
    for scheme_index, scheme in enumerate(schemes):
        start = time.perf_counter()
        rng = random.Random(split_seed(seed, 11, scheme_index))
        report = SchemeReport(scheme.value, 0, 0)
        for _ in range(samples):
            witness = random_axiom_witness(scheme, sig, rng, depth)
            if witness is None:
                continue
            instance = build_axiom_instance(scheme, witness, sig)
            report.instances += 1
            for model_index, model in enumerate(models):
                report.checks += 1
                if not valid_in_model(model, instance, SystemId.HYBRID_AT_FORALL):
                    report.failures.append((instance, model_index))
        report.elapsed = time.perf_counter() - start
        reports.append(report)
        if on_progress:
            on_progress(report)
    return reports


def validate_rules(
    sig: Signature,
    samples: int = 40,
    model_count: int = 50,
    size_bound: int = 4,
    seed: int = 0,
    depth: int = 2,
    rules: Iterable[Scheme] = RULES,
    on_progress: Callable[[SchemeReport], None] | None = None,
) -> list[SchemeReport]:
    """Per rule: whenever an instance's premises are valid in a model, the
    conclusion must be valid there too."""
    models = [m for m, _ in sample_models(sig, model_count, size_bound, seed)]
    reports = []
    for rule_index, rule in enumerate(rules):
        start = time.perf_counter()
        rng = random.Random(split_seed(seed, 13, rule_index))
        report = SchemeReport(rule.value, 0, 0, nonvacuous=0)
        for _ in range(samples):
            instance = random_rule_instance(rule, sig, rng, depth)
            if instance is None:
                continue
            report.instances += 1
            for model_index, model in enumerate(models):
                report.checks += 1
                if all(
                    valid_in_model(model, p, SystemId.HYBRID_AT_FORALL)
                    for p in instance.premises
                ):
                    report.nonvacuous += 1
                    if not valid_in_model(model, instance.conclusion, SystemId.HYBRID_AT_FORALL):
                        report.failures.append((instance, model_index))
        report.elapsed = time.perf_counter() - start
        reports.append(report)
        if on_progress:
            on_progress(report)
    return reports


def enumerate_patterns(
    sig: Signature, max_depth: int, include_top: bool = False
) -> dict[str, list[Formula]]:
    """Every distinct pattern AST of depth up to the bound, grouped by sort."""
    leaves: dict[str, list[Formula]] = {s: [] for s in sig.sorts}
    for s in sig.sorts:
        leaves[s].extend(sig.svars_of_sort(s))
        if include_top:
            leaves[s].append(Top(s))
    exact: list[dict[str, list[Formula]]] = [leaves]
    svars = [SVar(n, s) for n, s in sig.svars.items()]
    for depth in range(1, max_depth + 1):
        prev_exact = exact[depth - 1]
        cum: dict[str, list[Formula]] = {
            s: [f for level in exact for f in level[s]] for s in sig.sorts
        }
        prev_sets = {s: set(prev_exact[s]) for s in sig.sorts}
        level: dict[str, list[Formula]] = {s: [] for s in sig.sorts}
        for s in sig.sorts:
            level[s].extend(Neg(c) for c in prev_exact[s])
            for left in cum[s]:
                for right in cum[s]:
                    if left in prev_sets[s] or right in prev_sets[s]:
                        level[s].append(Or(left, right))
            for var in svars:
                level[s].extend(Forall(var, c) for c in prev_exact[s])
        for decl in sig.ops.values():
            if not decl.arg_sorts:
                continue
            pools = [cum[a] for a in decl.arg_sorts]
            for combo in itertools.product(*pools):
                if any(c in prev_sets[a] for c, a in zip(combo, decl.arg_sorts)):
                    level[decl.result].append(App(decl.name, combo))
        exact.append(level)
    return {s: [f for lvl in exact for f in lvl[s]] for s in sig.sorts}


def enumerate_ml_models(sig: Signature, max_size: int) -> Iterator[MLModel]:
    """Every ML model over the signature with carriers up to the bound."""
    sorts = sig.sorts
    for sizes in itertools.product(range(1, max_size + 1), repeat=len(sorts)):
        carriers = {
            s: tuple(f"{s}{i}" for i in range(n)) for s, n in zip(sorts, sizes)
        }
        op_names = sorted(sig.ops)
        domains = []
        subset_space = []
        for op in op_names:
            decl = sig.ops[op]
            domain = list(itertools.product(*[carriers[s] for s in decl.arg_sorts]))
            outs = carriers[decl.result]
            subsets = [
                frozenset(c for c, keep in zip(outs, mask) if keep)
                for mask in itertools.product((False, True), repeat=len(outs))
            ]
            domains.append(domain)
            subset_space.append(subsets)
        choice_spaces = [
            itertools.product(subsets, repeat=len(domain))
            for domain, subsets in zip(domains, subset_space)
        ]
        for combo in itertools.product(*choice_spaces):
            interp = {
                op: dict(zip(domain, outputs))
                for op, domain, outputs in zip(op_names, domains, combo)
            }
            yield MLModel(sig, carriers, interp)


def sample_tautologies(
    sig: Signature, rng: random.Random, count: int, depth: int = 2
) -> list[Formula]:
    """Random propositional-tautology instances over arbitrary subformulas."""
    out = []
    for _ in range(count):
        sort = rng.choice(sig.sorts)
        a = random_formula(sig, rng, sort, depth)
        b = random_formula(sig, rng, sort, depth)
        shape = rng.randrange(3)
        if shape == 0:
            out.append(Or(a, Neg(a)))
        elif shape == 1:
            out.append(implies(and_(a, b), a))
        else:
            out.append(implies(a, Or(b, a)))
    return out
