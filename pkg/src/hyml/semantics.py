"""Finite Kripke structures, assignments, satisfaction and model validity.

Models are finite and immutable after construction.  Nominal valuations are
singletons ("standard" models) unless construction explicitly relaxes that,
which only happens for frames and generated submodels.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Mapping

from .errors import SortMismatchError, UnboundVariableError, ValidationError, NotForm0Error
from .syntax import (
    App,
    At,
    Defined,
    Forall,
    Formula,
    Hole,
    Neg,
    Nom,
    Or,
    Prop,
    SVar,
    Signature,
    SystemId,
    Top,
    check_admissible,
    free_svars,
    sort_of,
    subformulas,
)


class KripkeStructure:
    """Per-sort worlds, one polyadic relation per operation symbol, valuation.

    Relation tuples are stored head first: (w, w1, ..., wn) meaning the head
    w of the result sort is related to the argument worlds.  The valuation
    maps propositional variables and nominals to world sets; symbols missing
    from `val` denote the empty set.
    """

    __slots__ = ("sig", "worlds", "rels", "val", "padded", "_by_head")

    def __init__(
        self,
        sig: Signature,
        worlds: Mapping[str, Iterable[str]],
        rels: Mapping[str, Iterable[tuple[str, ...]]] = {},
        val: Mapping[str, Iterable[str]] = {},
        padded: Iterable[str] = (),
        require_standard: bool = True,
    ):
        self.sig = sig
        self.worlds: dict[str, frozenset[str]] = {
            s: frozenset(worlds.get(s, ())) for s in sig.sorts
        }
        self.rels: dict[str, frozenset[tuple[str, ...]]] = {
            op: frozenset(tuple(t) for t in rels.get(op, ())) for op in sig.ops
        }
        self.val: dict[str, frozenset[str]] = {
            name: frozenset(ws) for name, ws in sorted(val.items())
        }
        self.padded = frozenset(padded)
        self._validate(require_standard)
        by_head: dict[str, dict[str, list[tuple[str, ...]]]] = {}
        for op, tuples in self.rels.items():
            index: dict[str, list[tuple[str, ...]]] = {}
            for t in sorted(tuples):
                index.setdefault(t[0], []).append(t[1:])
            by_head[op] = index
        self._by_head = by_head

    def _validate(self, require_standard: bool) -> None:
        for s in self.sig.sorts:
            if not self.worlds[s]:
                raise ValidationError(f"sort {s!r} has no worlds")
        for extra in set(self.rels) - set(self.sig.ops):
            raise ValidationError(f"relation for undeclared operation {extra!r}")
        for op, tuples in self.rels.items():
            decl = self.sig.ops[op]
            profile = (decl.result, *decl.arg_sorts)
            for t in tuples:
                if len(t) != len(profile):
                    raise ValidationError(f"relation tuple for {op!r} has wrong length: {t}")
                for w, s in zip(t, profile):
                    if w not in self.worlds[s]:
                        raise ValidationError(
                            f"relation tuple for {op!r} mentions {w!r} outside sort {s!r}"
                        )
        for name, ws in self.val.items():
            kind = self.sig.kind_of(name)
            if kind not in ("prop", "nom"):
                raise ValidationError(f"valuation for {name!r}, which is not a prop or nominal")
            sort = self.sig.props[name] if kind == "prop" else self.sig.noms[name]
            if not ws <= self.worlds[sort]:
                raise ValidationError(f"valuation of {name!r} lies outside sort {sort!r}")
        if require_standard:
            for name in self.sig.noms:
                if len(self.val.get(name, ())) != 1:
                    raise ValidationError(
                        f"nominal {name!r} must denote exactly one world in a standard model"
                    )

    @property
    def is_standard(self) -> bool:
        return all(len(self.val.get(n, ())) == 1 for n in self.sig.noms)

    def frame(self) -> "KripkeStructure":
        """The frame part: same worlds and relations, empty valuation."""
        return KripkeStructure(self.sig, self.worlds, self.rels, {}, self.padded,
                               require_standard=False)

    def nominal_world(self, name: str) -> str:
        ws = self.val.get(name, frozenset())
        if len(ws) != 1:
            raise ValidationError(f"nominal {name!r} does not denote a single world here")
        return next(iter(ws))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KripkeStructure)
            and self.sig == other.sig
            and self.worlds == other.worlds
            and self.rels == other.rels
            and {k: v for k, v in self.val.items() if v}
            == {k: v for k, v in other.val.items() if v}
        )

    def __hash__(self):
        return hash((self.sig, tuple(sorted((s, tuple(sorted(w))) for s, w in self.worlds.items()))))

    def __repr__(self) -> str:
        ws = {s: sorted(w) for s, w in self.worlds.items()}
        return f"KripkeStructure(worlds={ws}, rels={{{', '.join(sorted(self.rels))}}})"


class Assignment:
    """Total per-sort map from state variables to worlds."""

    __slots__ = ("sig", "map")

    def __init__(self, sig: Signature, mapping: Mapping[str, str]):
        self.sig = sig
        self.map: dict[str, str] = dict(sorted(mapping.items()))
        missing = set(sig.svars) - set(self.map)
        if missing:
            raise UnboundVariableError(f"assignment misses state variables: {sorted(missing)}")
        extra = set(self.map) - set(sig.svars)
        if extra:
            raise ValidationError(f"assignment mentions undeclared names: {sorted(extra)}")

    def with_value(self, var: SVar, world: str) -> "Assignment":
        out = dict(self.map)
        out[var.name] = world
        return Assignment(self.sig, out)

    def __getitem__(self, name: str) -> str:
        return self.map[name]

    def __eq__(self, other) -> bool:
        return isinstance(other, Assignment) and self.sig == other.sig and self.map == other.map

    def __repr__(self) -> str:
        return f"Assignment({self.map})"


def default_assignment(model: KripkeStructure) -> Assignment:
    """Map every state variable to the least world of its sort."""
    mapping = {name: min(model.worlds[sort]) for name, sort in model.sig.svars.items()}
    return Assignment(model.sig, mapping)


def _check_assignment(model: KripkeStructure, g: Assignment) -> None:
    if g.sig != model.sig:
        raise ValidationError("assignment was built for a different signature")
    for name, world in g.map.items():
        if world not in model.worlds[model.sig.svars[name]]:
            raise ValidationError(f"assignment sends {name!r} to {world!r}, not a world of its sort")


class _Evaluator:
    """Satisfaction recursion over one model; mutates a private assignment dict."""

    __slots__ = ("m", "g")

    def __init__(self, model: KripkeStructure, gmap: dict[str, str]):
        self.m = model
        self.g = gmap

    def sat(self, w: str, phi: Formula) -> bool:
        m = self.m
        if isinstance(phi, Prop) or isinstance(phi, Nom):
            return w in m.val.get(phi.name, ())
        if isinstance(phi, SVar):
            return w == self.g[phi.name]
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Neg):
            return not self.sat(w, phi.body)
        if isinstance(phi, Or):
            return self.sat(w, phi.left) or self.sat(w, phi.right)
        if isinstance(phi, App):
            args = phi.args
            for tail in m._by_head[phi.op].get(w, ()):
                if all(self.sat(tail[i], args[i]) for i in range(len(args))):
                    return True
            return False
        if isinstance(phi, Forall):
            var = phi.var
            g = self.g
            old = g[var.name]
            try:
                for v in sorted(m.worlds[var.sort]):
                    g[var.name] = v
                    if not self.sat(w, phi.body):
                        return False
                return True
            finally:
                g[var.name] = old
        if isinstance(phi, At):
            sym = phi.symbol
            target = self.g[sym.name] if isinstance(sym, SVar) else m.nominal_world(sym.name)
            return self.sat(target, phi.body)
        if isinstance(phi, Defined):
            bsort = sort_of(phi.body, m.sig)
            return any(self.sat(v, phi.body) for v in sorted(m.worlds[bsort]))
        if isinstance(phi, Hole):
            raise ValidationError("context holes cannot be evaluated")
        raise ValidationError(f"not a formula node: {phi!r}")


def satisfies(
    model: KripkeStructure,
    g: Assignment,
    world: str,
    phi: Formula,
    system: SystemId = SystemId.HYBRID_AT_FORALL,
) -> bool:
    """The satisfaction relation at one world under one assignment."""
    check_admissible(phi, system)
    sort = sort_of(phi, model.sig)
    if world not in model.worlds[sort]:
        raise SortMismatchError(f"{world!r} is not a world of sort {sort!r}")
    _check_assignment(model, g)
    return _Evaluator(model, dict(g.map)).sat(world, phi)


def _free_sweeps(model: KripkeStructure, phi: Formula, base: dict[str, str]):
    """All assignment dicts extending `base` over the free variables of phi."""
    frees = sorted(free_svars(phi), key=lambda v: v.name)
    domains = [sorted(model.worlds[v.sort]) for v in frees]
    for combo in itertools.product(*domains):
        gmap = dict(base)
        for var, world in zip(frees, combo):
            gmap[var.name] = world
        yield gmap


def valid_in_model(
    model: KripkeStructure,
    phi: Formula,
    system: SystemId = SystemId.HYBRID_AT_FORALL,
) -> bool:
    """Validity: satisfied at every world under every assignment of the free
    state variables (the rest of the assignment is irrelevant by agreement)."""
    check_admissible(phi, system)
    sort = sort_of(phi, model.sig)
    base = default_assignment(model).map
    worlds = sorted(model.worlds[sort])
    for gmap in _free_sweeps(model, phi, base):
        ev = _Evaluator(model, gmap)
        for w in worlds:
            if not ev.sat(w, phi):
                return False
    return True


def generated_submodel(
    model: KripkeStructure, seeds: Mapping[str, Iterable[str]]
) -> KripkeStructure:
    """Least substructure containing the seeds and closed under every relation
    from tuple head to arguments.  Sorts that end up empty are padded with one
    fresh isolated world carrying no valuation; such sorts are flagged in
    `padded` on the result.
    """
    keep: dict[str, set[str]] = {s: set() for s in model.sig.sorts}
    for s, ws in seeds.items():
        ws = set(ws)
        if not ws <= model.worlds[s]:
            raise ValidationError(f"seed worlds {sorted(ws - model.worlds[s])} not in sort {s!r}")
        keep[s] |= ws
    changed = True
    while changed:
        changed = False
        for op, tuples in model.rels.items():
            decl = model.sig.ops[op]
            for t in tuples:
                if t[0] in keep[decl.result]:
                    for w, s in zip(t[1:], decl.arg_sorts):
                        if w not in keep[s]:
                            keep[s].add(w)
                            changed = True
    padded = []
    for s in model.sig.sorts:
        if not keep[s]:
            fresh = f"{s}!pad"
            while fresh in model.worlds[s]:
                fresh += "!"
            keep[s].add(fresh)
            padded.append(s)
    rels = {
        op: {
            t
            for t in tuples
            if all(w in keep[s] for w, s in zip(t, (model.sig.ops[op].result, *model.sig.ops[op].arg_sorts)))
        }
        for op, tuples in model.rels.items()
    }
    val = {}
    for name, ws in model.val.items():
        kind = model.sig.kind_of(name)
        sort = model.sig.props[name] if kind == "prop" else model.sig.noms[name]
        val[name] = ws & keep[sort]
    return KripkeStructure(model.sig, keep, rels, val, padded, require_standard=False)


def is_form0(phi: Formula) -> bool:
    """Whether the formula has no propositional variables and no nominals."""
    return not any(isinstance(node, (Prop, Nom)) for node in subformulas(phi))


def frame_satisfies(
    frame: KripkeStructure,
    g: Assignment,
    phi: Formula,
    system: SystemId = SystemId.HYBRID_AT_FORALL,
) -> bool:
    """Frame-level satisfaction: true at every world of the formula's sort,
    with the valuation irrelevant because the formula is valuation-free."""
    if not is_form0(phi):
        raise NotForm0Error("frame satisfaction needs a formula without props and nominals")
    check_admissible(phi, system)
    sort = sort_of(phi, frame.sig)
    _check_assignment(frame, g)
    ev = _Evaluator(frame, dict(g.map))
    return all(ev.sat(w, phi) for w in sorted(frame.worlds[sort]))


def random_model(
    sig: Signature,
    size_bounds: int | Mapping[str, int],
    seed: int,
) -> tuple[KripkeStructure, Assignment]:
    """Deterministic random standard model and assignment.

    World counts are drawn uniformly from 1..bound per sort; each relation is
    a uniform subset of its sort product; propositional valuations are uniform
    subsets and every nominal denotes one uniform world.
    """
    rng = random.Random(seed)
    bounds = (
        {s: size_bounds for s in sig.sorts}
        if isinstance(size_bounds, int)
        else dict(size_bounds)
    )
    for s, b in bounds.items():
        if b < 1:
            raise ValidationError(f"size bound for sort {s!r} must be at least 1")
    worlds: dict[str, list[str]] = {}
    for s in sig.sorts:
        n = rng.randint(1, bounds[s])
        worlds[s] = [f"{s}{i}" for i in range(n)]
    rels: dict[str, set[tuple[str, ...]]] = {}
    for op in sorted(sig.ops):
        decl = sig.ops[op]
        space = itertools.product(worlds[decl.result], *(worlds[s] for s in decl.arg_sorts))
        rels[op] = {t for t in space if rng.random() < 0.5}
    val: dict[str, set[str]] = {}
    for p in sorted(sig.props):
        val[p] = {w for w in worlds[sig.props[p]] if rng.random() < 0.5}
    for j in sorted(sig.noms):
        val[j] = {rng.choice(worlds[sig.noms[j]])}
    model = KripkeStructure(sig, worlds, rels, val)
    gmap = {x: rng.choice(worlds[sig.svars[x]]) for x in sorted(sig.svars)}
    return model, Assignment(sig, gmap)
