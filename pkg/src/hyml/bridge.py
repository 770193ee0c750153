"""Correspondences between Kripke models and Matching Logic models.

Covers both model translations, the pattern/frame equivalence checker, the
encodings between the satisfaction operator and definedness, and the semantic
half of the full-language translation with its constant axioms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from .errors import NotForm0Error, ValidationError
from .matching import MLModel, Valuation, check_pattern, evaluate, ml_satisfies
from .semantics import (
    Assignment,
    KripkeStructure,
    frame_satisfies,
    is_form0,
    valid_in_model,
)
from .syntax import (
    App,
    At,
    Defined,
    Forall,
    Formula,
    Neg,
    Nom,
    OpDecl,
    Or,
    Prop,
    Signature,
    SystemId,
    and_,
    equals,
    exists,
    free_svars,
    fresh_svar,
    sort_of,
)


class ExtendedSignature:
    """The base signature extended with one fresh constant per propositional
    variable and per nominal, plus the functional-pattern axioms that force
    nominal constants to denote singletons."""

    __slots__ = ("base", "extended", "prop_consts", "nom_consts", "gamma_prime")

    def __init__(self, base: Signature):
        self.base = base
        taken = set(base.ops) | set(base.props) | set(base.noms) | set(base.svars)

        def freshen(name: str) -> str:
            cand = f"c_{name}"
            while cand in taken:
                cand += "_"
            taken.add(cand)
            return cand

        self.prop_consts = {p: freshen(p) for p in base.props}
        self.nom_consts = {j: freshen(j) for j in base.noms}
        ops = dict(base.ops)
        for p, c in self.prop_consts.items():
            ops[c] = OpDecl(c, (), base.props[p])
        for j, c in self.nom_consts.items():
            ops[c] = OpDecl(c, (), base.noms[j])
        self.extended = Signature(base.sorts, ops.values(), {}, {}, base.svars)
        gamma = []
        for j in sorted(base.noms):
            sort = base.noms[j]
            pool = self.extended.svars_of_sort(sort)
            if not pool:
                raise ValidationError(
                    f"no state variable of sort {sort!r} to state the functional axiom for {j!r}"
                )
            x = pool[0]
            c = App(self.nom_consts[j], ())
            gamma.append(exists(x, equals(sort, x, c)))
        self.gamma_prime: tuple[Formula, ...] = tuple(gamma)


def extend_signature(base: Signature) -> ExtendedSignature:
    return ExtendedSignature(base)


def hmodl_of_ml(
    model: MLModel, rho: Valuation | None = None
) -> tuple[KripkeStructure, Assignment]:
    """Read an ML model as a frame: same carriers, and a relation tuple
    (w, w1..wn) exactly when w is in the interpretation at (w1..wn).  The
    valuation part is left empty; the valuation of variables becomes the
    assignment, completed with least elements where unspecified."""
    rels = {
        op: {(w, *args) for args, out in entries.items() for w in out}
        for op, entries in model.interp.items()
    }
    frame = KripkeStructure(
        model.sig, model.carriers, rels, {}, require_standard=False
    )
    base = {name: min(model.carriers[sort]) for name, sort in model.sig.svars.items()}
    if rho is not None:
        base.update(rho.map)
    return frame, Assignment(model.sig, base)


def ml_of_hmodl(
    frame: KripkeStructure, g: Assignment | None = None
) -> tuple[MLModel, Valuation]:
    """Inverse reading: interpretation outputs collect the relation heads."""
    interp: dict[str, dict[tuple[str, ...], set[str]]] = {op: {} for op in frame.sig.ops}
    for op, tuples in frame.rels.items():
        table = interp[op]
        for t in tuples:
            table.setdefault(t[1:], set()).add(t[0])
    model = MLModel(frame.sig, frame.worlds, interp)
    rho = Valuation(frame.sig, g.map if g is not None else {})
    return model, rho


@dataclass
class PropEquivReport:
    """Agreement record for the pattern/frame equivalence on one model."""

    agree: bool
    checked: int
    mismatches: list[tuple[dict, bool, bool]] = field(default_factory=list)

    def __str__(self) -> str:
        if self.agree:
            return f"agreement on {self.checked} valuation(s)"
        rho, ml, hy = self.mismatches[0]
        return (
            f"disagreement at valuation {rho}: pattern side {ml}, frame side {hy}"
            f" ({len(self.mismatches)} mismatch(es) of {self.checked})"
        )


def check_prop_equiv(
    phi: Formula, model: MLModel, rho: Valuation | None = None
) -> PropEquivReport:
    """Compare global pattern satisfaction with frame satisfaction on the
    translated frame.  With no valuation given, sweeps every valuation of the
    pattern's free variables; any disagreement is reported with a witness."""
    if not is_form0(phi):
        raise NotForm0Error("the equivalence is stated for formulas without props and nominals")
    check_pattern(phi)
    sort = sort_of(phi, model.sig)
    carrier = model.carriers[sort]
    frame, g0 = hmodl_of_ml(model, rho)
    if rho is not None:
        sweeps = [dict(rho.map)]
    else:
        frees = sorted(free_svars(phi), key=lambda v: v.name)
        domains = [sorted(model.carriers[v.sort]) for v in frees]
        sweeps = []
        for combo in itertools.product(*domains):
            sweeps.append({v.name: e for v, e in zip(frees, combo)})
    mismatches = []
    for rmap in sweeps:
        ml_side = evaluate(model, Valuation(model.sig, rmap), phi) == carrier
        gmap = dict(g0.map)
        gmap.update(rmap)
        hy_side = frame_satisfies(frame, Assignment(model.sig, gmap), phi)
        if ml_side != hy_side:
            mismatches.append((rmap, ml_side, hy_side))
    return PropEquivReport(not mismatches, len(sweeps), mismatches)


def encode_at(phi: Formula, sig: Signature) -> Formula:
    """Rewrite every satisfaction operator into its definedness form:
    jump at z becomes definedness of (z and body)."""

    def walk(node: Formula) -> Formula:
        if isinstance(node, At):
            return Defined(node.sort, and_(node.symbol, walk(node.body)))
        if isinstance(node, Neg):
            return Neg(walk(node.body))
        if isinstance(node, Or):
            return Or(walk(node.left), walk(node.right))
        if isinstance(node, App):
            return App(node.op, tuple(walk(a) for a in node.args))
        if isinstance(node, Forall):
            return Forall(node.var, walk(node.body))
        if isinstance(node, Defined):
            return Defined(node.sort, walk(node.body))
        return node

    sort_of(phi, sig)
    return walk(phi)


def encode_definedness(phi: Formula, sig: Signature) -> Formula:
    """Rewrite every definedness node into its satisfaction-operator form:
    existence of a fresh variable jumped at."""

    def walk(node: Formula) -> Formula:
        if isinstance(node, Defined):
            body = walk(node.body)
            var = fresh_svar(sig, sort_of(body, sig), free_svars(body))
            return exists(var, At(node.sort, var, body))
        if isinstance(node, Neg):
            return Neg(walk(node.body))
        if isinstance(node, Or):
            return Or(walk(node.left), walk(node.right))
        if isinstance(node, App):
            return App(node.op, tuple(walk(a) for a in node.args))
        if isinstance(node, Forall):
            return Forall(node.var, walk(node.body))
        if isinstance(node, At):
            return At(node.sort, node.symbol, walk(node.body))
        return node

    sort_of(phi, sig)
    return walk(phi)


def translate_formula(phi: Formula, ext: ExtendedSignature) -> Formula:
    """Translate a hybrid formula into a pattern over the extended signature:
    satisfaction operators become definedness, then propositional variables
    and nominals become their constants."""
    encoded = encode_at(phi, ext.base)

    def walk(node: Formula) -> Formula:
        if isinstance(node, Prop):
            return App(ext.prop_consts[node.name], ())
        if isinstance(node, Nom):
            return App(ext.nom_consts[node.name], ())
        if isinstance(node, Neg):
            return Neg(walk(node.body))
        if isinstance(node, Or):
            return Or(walk(node.left), walk(node.right))
        if isinstance(node, App):
            return App(node.op, tuple(walk(a) for a in node.args))
        if isinstance(node, Forall):
            return Forall(node.var, walk(node.body))
        if isinstance(node, Defined):
            return Defined(node.sort, walk(node.body))
        return node

    return walk(encoded)


def ml_model_of_kripke(model: KripkeStructure, ext: ExtendedSignature) -> MLModel:
    """The extended-signature ML model induced by a standard model: base
    operations read off the relations and each constant denotes the valuation
    of its propositional variable or nominal."""
    interp: dict[str, dict[tuple[str, ...], set[str]]] = {}
    for op, tuples in model.rels.items():
        table: dict[tuple[str, ...], set[str]] = {}
        for t in tuples:
            table.setdefault(t[1:], set()).add(t[0])
        interp[op] = table
    for p, c in ext.prop_consts.items():
        interp[c] = {(): set(model.val.get(p, ()))}
    for j, c in ext.nom_consts.items():
        interp[c] = {(): set(model.val.get(j, ()))}
    return MLModel(ext.extended, model.worlds, interp)


@dataclass
class TranslationReport:
    """Outcome of the semantic translation check on one model and formula."""

    gamma_ok: bool
    hybrid_valid: bool
    ml_valid: bool
    pointwise_agree: bool
    translated: Formula

    @property
    def agree(self) -> bool:
        return self.gamma_ok and self.hybrid_valid == self.ml_valid and self.pointwise_agree

    def __str__(self) -> str:
        bits = [
            f"constant axioms {'hold' if self.gamma_ok else 'FAIL'}",
            f"hybrid valid={self.hybrid_valid}",
            f"pattern valid={self.ml_valid}",
            f"per-assignment agreement {'holds' if self.pointwise_agree else 'FAILS'}",
        ]
        return "; ".join(bits)


def check_thm_ml2_semantic(
    model: KripkeStructure, g: Assignment | None, phi: Formula
) -> TranslationReport:
    """Build the extended ML model of a standard model, check the constant
    axioms hold there, and compare validity of the formula with global
    satisfaction of its translation, both swept and at the given assignment."""
    if not model.is_standard:
        raise ValidationError("the translation check needs a standard model")
    ext = extend_signature(model.sig)
    mprime = ml_model_of_kripke(model, ext)
    gamma_ok = all(ml_satisfies(mprime, ax) for ax in ext.gamma_prime)
    translated = translate_formula(phi, ext)
    hybrid_valid = valid_in_model(model, phi, SystemId.HYBRID_AT_FORALL)
    ml_valid = ml_satisfies(mprime, translated)
    pointwise = True
    if g is not None:
        sort = sort_of(phi, model.sig)
        ev_rho = Valuation(ext.extended, g.map)
        ml_here = evaluate(mprime, ev_rho, translated) == mprime.carriers[sort]
        hy_here = all(
            _sat_with(model, g, w, phi) for w in sorted(model.worlds[sort])
        )
        pointwise = ml_here == hy_here
    return TranslationReport(gamma_ok, hybrid_valid, ml_valid, pointwise, translated)


def _sat_with(model: KripkeStructure, g: Assignment, w: str, phi: Formula) -> bool:
    from .semantics import satisfies

    return satisfies(model, g, w, phi, SystemId.HYBRID_AT_FORALL)
