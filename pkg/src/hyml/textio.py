"""S-expression documents for every artifact kind.

`parse ∘ render` is the identity on canonical form; non-canonical but legal
input normalizes after one render.  Canonical output is single-line, single
space separated, lowercase tags, with every keyed collection sorted.

Models and ML models may embed their signature; canonical rendering always
does.  When neither an embedded nor an explicit signature is available, the
parser infers one from the document (without state variables), which is
enough for closed formulas on the command line.
"""

from __future__ import annotations

from typing import Mapping

from .errors import HymlError, ValidationError
from .matching import MLModel, Valuation
from .proofs import (
    AxiomStep,
    PremiseStep,
    ProofScript,
    RuleStep,
    Step,
    TautStep,
    scheme_from_token,
)
from .semantics import Assignment, KripkeStructure
from .sexpr import SAtom, SExpr, SList, parse_sexpr, render_sexpr
from .syntax import (
    App,
    At,
    Defined,
    Forall,
    Formula,
    Hole,
    Neg,
    Nom,
    OpDecl,
    Or,
    Prop,
    SVar,
    Signature,
    SystemId,
    Top,
    and_,
    dual_app,
    equals,
    exist_mod,
    exists,
    iff,
    implies,
    sort_of,
    total,
    univ_mod,
)

DOCUMENT_KINDS = ("signature", "formula", "model", "ml-model", "assignment", "proof")


def _err(message: str, node: SExpr | None = None) -> ValidationError:
    if node is not None:
        return ValidationError(message, node.line, node.col)
    return ValidationError(message)


def _atom(node: SExpr, what: str) -> str:
    if not isinstance(node, SAtom):
        raise _err(f"expected {what}", node)
    return node.text


def _list(node: SExpr, what: str) -> SList:
    if not isinstance(node, SList):
        raise _err(f"expected {what}", node)
    return node


def _tagged(node: SExpr, tag: str) -> SList:
    lst = _list(node, f"({tag} ...)")
    if not lst.items or _atom(lst[0], "a tag") != tag:
        raise _err(f"expected ({tag} ...)", node)
    return lst


def _int(node: SExpr, what: str) -> int:
    text = _atom(node, what)
    try:
        return int(text)
    except ValueError:
        raise _err(f"expected {what}, got {text!r}", node) from None


# --- signature ---------------------------------------------------------------

def parse_signature(node: SExpr) -> Signature:
    lst = _tagged(node, "signature")
    sorts: list[str] = []
    ops: list[OpDecl] = []
    pools: dict[str, dict[str, str]] = {"props": {}, "noms": {}, "svars": {}}
    for section in lst.items[1:]:
        sec = _list(section, "a signature section")
        if not sec.items:
            raise _err("empty signature section", section)
        tag = _atom(sec[0], "a section tag")
        if tag == "sorts":
            sorts.extend(_atom(s, "a sort name") for s in sec.items[1:])
        elif tag == "ops":
            for entry in sec.items[1:]:
                ent = _list(entry, "(name (argsorts) result)")
                if len(ent) != 3:
                    raise _err("operation entries are (name (argsorts) result)", entry)
                name = _atom(ent[0], "an operation name")
                args = tuple(_atom(a, "a sort name") for a in _list(ent[1], "argument sorts"))
                ops.append(OpDecl(name, args, _atom(ent[2], "a result sort")))
        elif tag in pools:
            for entry in sec.items[1:]:
                ent = _list(entry, "(name sort)")
                if len(ent) != 2:
                    raise _err(f"{tag} entries are (name sort)", entry)
                pools[tag][_atom(ent[0], "a name")] = _atom(ent[1], "a sort")
        else:
            raise _err(f"unknown signature section {tag!r}", section)
    try:
        return Signature(sorts, ops, pools["props"], pools["noms"], pools["svars"])
    except HymlError as exc:
        raise _err(str(exc), node) from None


def render_signature(sig: Signature) -> str:
    parts = ["signature", ("sorts", *sig.sorts)]
    parts.append(
        ("ops", *[(d.name, tuple(d.arg_sorts), d.result) for d in sig.ops.values()])
    )
    parts.append(("props", *[(n, s) for n, s in sig.props.items()]))
    parts.append(("noms", *[(n, s) for n, s in sig.noms.items()]))
    parts.append(("svars", *[(n, s) for n, s in sig.svars.items()]))
    return render_sexpr(parts)


# --- formulas ----------------------------------------------------------------

def parse_formula_body(node: SExpr, sig: Signature, allow_hole: bool = False) -> Formula:
    lst = _list(node, "a formula")
    if not lst.items:
        raise _err("empty formula", node)
    tag = _atom(lst[0], "a formula tag")
    items = lst.items[1:]

    def arity(n: int) -> None:
        if len(items) != n:
            raise _err(f"{tag!r} takes {n} argument(s), got {len(items)}", node)

    def sub(child: SExpr) -> Formula:
        return parse_formula_body(child, sig, allow_hole)

    try:
        if tag == "top":
            arity(1)
            return _checked(Top(_atom(items[0], "a sort")), sig, node)
        if tag == "bot":
            arity(1)
            return _checked(Neg(Top(_atom(items[0], "a sort"))), sig, node)
        if tag == "hole":
            arity(1)
            if not allow_hole:
                raise _err("context holes are only legal inside context formulas", node)
            return _checked(Hole(_atom(items[0], "a sort")), sig, node)
        if tag in ("prop", "nom", "svar"):
            arity(1)
            name = _atom(items[0], "a name")
            pool = {"prop": sig.props, "nom": sig.noms, "svar": sig.svars}[tag]
            if name not in pool:
                raise _err(f"{name!r} is not a declared {tag}", items[0])
            cls = {"prop": Prop, "nom": Nom, "svar": SVar}[tag]
            return cls(name, pool[name])
        if tag == "neg":
            arity(1)
            return Neg(sub(items[0]))
        if tag in ("or", "and", "implies", "iff"):
            arity(2)
            left, right = sub(items[0]), sub(items[1])
            build = {"or": Or, "and": and_, "implies": implies, "iff": iff}[tag]
            return _checked(build(left, right), sig, node)
        if tag == "app":
            if not items:
                raise _err("app needs an operation symbol", node)
            op = _atom(items[0], "an operation symbol")
            return _checked(App(op, tuple(sub(a) for a in items[1:])), sig, node)
        if tag == "dualapp":
            if not items:
                raise _err("dualapp needs an operation symbol", node)
            op = _atom(items[0], "an operation symbol")
            return _checked(dual_app(op, tuple(sub(a) for a in items[1:])), sig, node)
        if tag in ("forall", "exists"):
            arity(2)
            binder = _list(items[0], "(variable sort)")
            if len(binder) != 2:
                raise _err("binders are written (variable sort)", items[0])
            name = _atom(binder[0], "a variable")
            sort = _atom(binder[1], "a sort")
            if sig.svars.get(name) != sort:
                raise _err(f"{name!r} is not a declared state variable of sort {sort!r}", binder)
            var = SVar(name, sort)
            body = sub(items[1])
            return _checked(Forall(var, body) if tag == "forall" else exists(var, body), sig, node)
        if tag == "at":
            arity(3)
            sort = _atom(items[0], "a sort")
            name = _atom(items[1], "a state symbol")
            if sig.kind_of(name) not in ("nom", "svar"):
                raise _err(f"{name!r} is not a declared state symbol", items[1])
            return _checked(At(sort, sig.state_symbol(name), sub(items[2])), sig, node)
        if tag == "defined":
            arity(2)
            return _checked(Defined(_atom(items[0], "a sort"), sub(items[1])), sig, node)
        if tag in ("univ", "exist"):
            arity(2)
            sort = _atom(items[0], "a sort")
            build = univ_mod if tag == "univ" else exist_mod
            return _checked(build(sort, sub(items[1]), sig), sig, node)
        if tag == "total":
            arity(2)
            return _checked(total(_atom(items[0], "a sort"), sub(items[1])), sig, node)
        if tag == "equals":
            arity(3)
            return _checked(
                equals(_atom(items[0], "a sort"), sub(items[1]), sub(items[2])), sig, node
            )
    except ValidationError:
        raise
    except HymlError as exc:
        raise _err(str(exc), node) from None
    raise _err(f"unknown formula tag {tag!r}", node)


def _checked(phi: Formula, sig: Signature, node: SExpr) -> Formula:
    try:
        sort_of(phi, sig)
    except HymlError as exc:
        raise _err(str(exc), node) from None
    return phi


def render_formula_body(phi: Formula) -> str:
    return render_sexpr(_formula_tree(phi))


def _formula_tree(phi: Formula):
    if isinstance(phi, Top):
        return ("top", phi.sort)
    if isinstance(phi, Hole):
        return ("hole", phi.sort)
    if isinstance(phi, Prop):
        return ("prop", phi.name)
    if isinstance(phi, Nom):
        return ("nom", phi.name)
    if isinstance(phi, SVar):
        return ("svar", phi.name)
    if isinstance(phi, Neg):
        return ("neg", _formula_tree(phi.body))
    if isinstance(phi, Or):
        return ("or", _formula_tree(phi.left), _formula_tree(phi.right))
    if isinstance(phi, App):
        return ("app", phi.op, *[_formula_tree(a) for a in phi.args])
    if isinstance(phi, Forall):
        return ("forall", (phi.var.name, phi.var.sort), _formula_tree(phi.body))
    if isinstance(phi, At):
        return ("at", phi.sort, phi.symbol.name, _formula_tree(phi.body))
    if isinstance(phi, Defined):
        return ("defined", phi.sort, _formula_tree(phi.body))
    raise ValidationError(f"cannot render {phi!r}")


def parse_formula(node: SExpr, sig: Signature) -> Formula:
    lst = _tagged(node, "formula")
    if len(lst) != 3:
        raise _err("formula documents are (formula sort body)", node)
    sort = _atom(lst[1], "a sort")
    phi = parse_formula_body(lst[2], sig)
    got = sort_of(phi, sig)
    if got != sort:
        raise _err(f"document claims sort {sort!r} but the body has sort {got!r}", node)
    return phi


def render_formula(phi: Formula, sig: Signature) -> str:
    return render_sexpr(("formula", sort_of(phi, sig), _formula_tree(phi)))


# --- models --------------------------------------------------------------------

def _world_sort(worlds: Mapping[str, tuple[str, ...]], name: str, node: SExpr) -> str:
    hits = [s for s, ws in worlds.items() if name in ws]
    if len(hits) != 1:
        raise _err(
            f"cannot infer the sort of world {name!r}"
            + (" (missing)" if not hits else " (ambiguous)"),
            node,
        )
    return hits[0]


def parse_model(node: SExpr, sig: Signature | None = None) -> KripkeStructure:
    lst = _tagged(node, "model")
    worlds: dict[str, tuple[str, ...]] = {}
    rel_secs: list[tuple[str, list[tuple[str, ...]], SExpr]] = []
    val_secs: list[tuple[str, str, tuple[str, ...]]] = []
    nom_secs: list[tuple[str, str, tuple[str, ...]]] = []
    embedded: Signature | None = None
    for section in lst.items[1:]:
        sec = _list(section, "a model section")
        if not sec.items:
            raise _err("empty model section", section)
        tag = _atom(sec[0], "a section tag")
        if tag == "signature":
            embedded = parse_signature(sec)
        elif tag == "worlds":
            for entry in sec.items[1:]:
                ent = _list(entry, "(sort worlds...)")
                if len(ent) < 2:
                    raise _err("world entries are (sort w1 w2 ...)", entry)
                sort = _atom(ent[0], "a sort")
                worlds[sort] = tuple(_atom(w, "a world") for w in ent.items[1:])
        elif tag == "rel":
            if len(sec) < 2:
                raise _err("relation sections are (rel op (tuple)...)", section)
            op = _atom(sec[1], "an operation symbol")
            tuples = []
            for entry in sec.items[2:]:
                ent = _list(entry, "a relation tuple")
                tuples.append(tuple(_atom(w, "a world") for w in ent.items))
            rel_secs.append((op, tuples, section))
        elif tag in ("val", "nom"):
            if len(sec) != 3:
                raise _err(f"{tag} sections are ({tag} name (sort worlds...))", section)
            name = _atom(sec[1], "a symbol")
            ent = _list(sec[2], "(sort worlds...)")
            if len(ent) < 1:
                raise _err("valuation entries are (sort w1 ...)", sec[2])
            sort = _atom(ent[0], "a sort")
            ws = tuple(_atom(w, "a world") for w in ent.items[1:])
            (val_secs if tag == "val" else nom_secs).append((name, sort, ws))
        else:
            raise _err(f"unknown model section {tag!r}", section)
    if not worlds:
        raise _err("model lacks a worlds section", node)
    if sig is not None and embedded is not None and sig != embedded:
        raise _err("explicit and embedded signatures disagree", node)
    sig = sig or embedded
    if sig is None:
        sig = _infer_model_signature(worlds, rel_secs, val_secs, nom_secs, node)
    val = {name: ws for name, _, ws in val_secs}
    val.update({name: ws for name, _, ws in nom_secs})
    require_standard = bool(val_secs or nom_secs)
    try:
        return KripkeStructure(
            sig,
            worlds,
            {op: tuples for op, tuples, _ in rel_secs},
            val,
            require_standard=require_standard,
        )
    except HymlError as exc:
        raise _err(str(exc), node) from None


def _infer_model_signature(worlds, rel_secs, val_secs, nom_secs, node) -> Signature:
    ops = {}
    for op, tuples, sec in rel_secs:
        if not tuples:
            raise _err(f"cannot infer the arity of {op!r} from an empty relation", sec)
        profiles = {tuple(_world_sort(worlds, w, sec) for w in t) for t in tuples}
        if len(profiles) != 1:
            raise _err(f"relation {op!r} mixes sort profiles", sec)
        profile = profiles.pop()
        ops[op] = OpDecl(op, profile[1:], profile[0])
    props = {name: sort for name, sort, _ in val_secs}
    noms = {name: sort for name, sort, _ in nom_secs}
    try:
        return Signature(worlds.keys(), ops.values(), props, noms, {})
    except HymlError as exc:
        raise _err(str(exc), node) from None


def render_model(model: KripkeStructure) -> str:
    parts: list = ["model", parse_sexpr(render_signature(model.sig))]
    parts.append(
        ("worlds", *[(s, *sorted(model.worlds[s])) for s in model.sig.sorts])
    )
    for op in sorted(model.rels):
        tuples = sorted(model.rels[op])
        if tuples:
            parts.append(("rel", op, *[tuple(t) for t in tuples]))
    for name in sorted(model.val):
        ws = model.val[name]
        if not ws:
            continue
        kind = model.sig.kind_of(name)
        sort = model.sig.props[name] if kind == "prop" else model.sig.noms[name]
        tag = "val" if kind == "prop" else "nom"
        parts.append((tag, name, (sort, *sorted(ws))))
    return render_sexpr(parts)


# --- matching-logic models ---------------------------------------------------

def parse_ml_model(node: SExpr, sig: Signature | None = None) -> MLModel:
    lst = _tagged(node, "ml-model")
    carriers: dict[str, tuple[str, ...]] = {}
    interp_secs: list[tuple[str, list[tuple[tuple[str, ...], tuple[str, ...]]], SExpr]] = []
    embedded: Signature | None = None
    for section in lst.items[1:]:
        sec = _list(section, "an ml-model section")
        if not sec.items:
            raise _err("empty ml-model section", section)
        tag = _atom(sec[0], "a section tag")
        if tag == "signature":
            embedded = parse_signature(sec)
        elif tag == "carriers":
            for entry in sec.items[1:]:
                ent = _list(entry, "(sort elements...)")
                if len(ent) < 2:
                    raise _err("carrier entries are (sort m1 m2 ...)", entry)
                sort = _atom(ent[0], "a sort")
                carriers[sort] = tuple(_atom(m, "an element") for m in ent.items[1:])
        elif tag == "interp":
            if len(sec) < 2:
                raise _err("interp sections are (interp op ((args) (out))...)", section)
            op = _atom(sec[1], "an operation symbol")
            entries = []
            for entry in sec.items[2:]:
                ent = _list(entry, "((args) (out))")
                if len(ent) != 2:
                    raise _err("interp entries are ((args) (out))", entry)
                args = tuple(_atom(a, "an element") for a in _list(ent[0], "arguments"))
                out = tuple(_atom(o, "an element") for o in _list(ent[1], "outputs"))
                entries.append((args, out))
            interp_secs.append((op, entries, section))
        else:
            raise _err(f"unknown ml-model section {tag!r}", section)
    if not carriers:
        raise _err("ml-model lacks a carriers section", node)
    if sig is not None and embedded is not None and sig != embedded:
        raise _err("explicit and embedded signatures disagree", node)
    sig = sig or embedded
    if sig is None:
        sig = _infer_ml_signature(carriers, interp_secs, node)
    interp = {
        op: {args: out for args, out in entries} for op, entries, _ in interp_secs
    }
    try:
        return MLModel(sig, carriers, interp)
    except HymlError as exc:
        raise _err(str(exc), node) from None


def _infer_ml_signature(carriers, interp_secs, node) -> Signature:
    ops = {}
    for op, entries, sec in interp_secs:
        if not entries:
            raise _err(f"cannot infer the arity of {op!r} from an empty table", sec)
        profiles = set()
        for args, out in entries:
            argsorts = tuple(_world_sort(carriers, a, sec) for a in args)
            outsorts = {_world_sort(carriers, o, sec) for o in out}
            if len(outsorts) > 1:
                raise _err(f"interpretation of {op!r} mixes result sorts", sec)
            profiles.add((argsorts, outsorts.pop() if outsorts else None))
        argsorts = {p[0] for p in profiles}
        results = {p[1] for p in profiles if p[1] is not None}
        if len(argsorts) != 1 or len(results) != 1:
            raise _err(f"cannot infer a unique profile for {op!r}", sec)
        ops[op] = OpDecl(op, argsorts.pop(), results.pop())
    try:
        return Signature(carriers.keys(), ops.values(), {}, {}, {})
    except HymlError as exc:
        raise _err(str(exc), node) from None


def render_ml_model(model: MLModel) -> str:
    parts: list = ["ml-model", parse_sexpr(render_signature(model.sig))]
    parts.append(
        ("carriers", *[(s, *sorted(model.carriers[s])) for s in model.sig.sorts])
    )
    for op in sorted(model.interp):
        entries = {args: out for args, out in model.interp[op].items() if out}
        if entries:
            parts.append(
                (
                    "interp",
                    op,
                    *[
                        (tuple(args), tuple(sorted(out)))
                        for args, out in sorted(entries.items())
                    ],
                )
            )
    return render_sexpr(parts)


# --- assignments / valuations ---------------------------------------------------

def parse_assignment(node: SExpr) -> dict[str, str]:
    lst = _tagged(node, "assign")
    out: dict[str, str] = {}
    for entry in lst.items[1:]:
        ent = _list(entry, "(variable world)")
        if len(ent) != 2:
            raise _err("assignment entries are (variable world)", entry)
        out[_atom(ent[0], "a variable")] = _atom(ent[1], "a world")
    return out


def render_assignment(mapping: Mapping[str, str]) -> str:
    return render_sexpr(("assign", *[(k, v) for k, v in sorted(mapping.items())]))


def assignment_for_model(mapping: Mapping[str, str], model: KripkeStructure) -> Assignment:
    """Complete a partial document assignment to a total one over the model."""
    full = {name: min(model.worlds[sort]) for name, sort in model.sig.svars.items()}
    for name, world in mapping.items():
        if name not in model.sig.svars:
            raise ValidationError(f"{name!r} is not a declared state variable")
        full[name] = world
    return Assignment(model.sig, full)


def valuation_for_model(mapping: Mapping[str, str], model: MLModel) -> Valuation:
    return Valuation(model.sig, mapping)


# --- proofs -----------------------------------------------------------------------

_WITNESS_TYPES = {
    "phi": "formula",
    "psi": "formula",
    "chi": "formula",
    "sides": "formulas",
    "args": "formulas",
    "var": "symbol",
    "target": "symbol",
    "z": "symbol",
    "y": "symbol",
    "op": "name",
    "pos": "pos",
    "at-sort": "name",
    "inner-sort": "name",
    "to-sort": "name",
    "eta": "context",
    "theta": "context",
}

_SYSTEM_TOKENS = {system.value: system for system in SystemId}


def _parse_witness(node: SExpr, sig: Signature) -> dict:
    lst = _list(node, "a witness list")
    out: dict = {}
    for entry in lst.items:
        ent = _list(entry, "a witness entry")
        if not ent.items:
            raise _err("empty witness entry", entry)
        key = _atom(ent[0], "a witness key")
        kind = _WITNESS_TYPES.get(key)
        if kind is None:
            raise _err(f"unknown witness key {key!r}", ent)
        if kind == "formula":
            if len(ent) != 2:
                raise _err(f"({key} body)", ent)
            out[key] = parse_formula_body(ent[1], sig)
        elif kind == "formulas":
            out[key] = tuple(parse_formula_body(b, sig) for b in ent.items[1:])
        elif kind == "symbol":
            if len(ent) != 2:
                raise _err(f"({key} name)", ent)
            name = _atom(ent[1], "a state symbol")
            if sig.kind_of(name) not in ("nom", "svar"):
                raise _err(f"{name!r} is not a declared state symbol", ent[1])
            out[key] = sig.state_symbol(name)
        elif kind == "name":
            if len(ent) != 2:
                raise _err(f"({key} name)", ent)
            out[key] = _atom(ent[1], "a name")
        elif kind == "pos":
            if len(ent) != 2:
                raise _err("(pos n)", ent)
            out[key] = _int(ent[1], "a position")
        elif kind == "context":
            if len(ent) != 2:
                raise _err(f"({key} body)", ent)
            out[key] = parse_formula_body(ent[1], sig, allow_hole=True)
    return out


def _witness_tree(witness: Mapping) -> tuple:
    entries = []
    for key in sorted(witness):
        value = witness[key]
        kind = _WITNESS_TYPES.get(key)
        if kind == "formula":
            entries.append((key, _formula_tree(value)))
        elif kind == "formulas":
            entries.append((key, *[_formula_tree(v) for v in value]))
        elif kind == "symbol":
            entries.append((key, value.name))
        elif kind == "context":
            formula = value.formula if hasattr(value, "formula") else value
            entries.append((key, _formula_tree(formula)))
        else:
            entries.append((key, value))
    return tuple(entries)


def parse_proof(node: SExpr, sig: Signature) -> ProofScript:
    lst = _tagged(node, "proof")
    system: SystemId | None = None
    premises: list[Formula] = []
    steps: list[Step] = []
    for section in lst.items[1:]:
        sec = _list(section, "a proof section")
        if not sec.items:
            raise _err("empty proof section", section)
        tag = _atom(sec[0], "a section tag")
        if tag == "system":
            if len(sec) != 2:
                raise _err("(system name)", section)
            token = _atom(sec[1], "a system name")
            system = _SYSTEM_TOKENS.get(token)
            if system is None:
                raise _err(f"unknown system {token!r}", sec[1])
        elif tag == "premises":
            premises.extend(parse_formula_body(b, sig) for b in sec.items[1:])
        elif tag == "steps":
            for raw in sec.items[1:]:
                steps.append(_parse_step(raw, sig, len(steps) + 1))
        else:
            raise _err(f"unknown proof section {tag!r}", section)
    if system is None:
        raise _err("proof lacks a system section", node)
    return ProofScript(system, tuple(premises), tuple(steps))


def _parse_step(node: SExpr, sig: Signature, expected_index: int) -> Step:
    lst = _tagged(node, "step")
    if len(lst) < 3:
        raise _err("steps are (step n kind ...)", node)
    index = _int(lst[1], "a step number")
    if index != expected_index:
        raise _err(f"step numbered {index}, expected {expected_index}", lst[1])
    kind = _atom(lst[2], "a step kind")
    rest = lst.items[3:]
    if kind == "taut":
        if len(rest) != 1:
            raise _err("(step n taut body)", node)
        return TautStep(parse_formula_body(rest[0], sig))
    if kind == "premise":
        if len(rest) != 1:
            raise _err("(step n premise k)", node)
        return PremiseStep(_int(rest[0], "a premise index"))
    if kind == "axiom":
        if len(rest) not in (2, 3):
            raise _err("(step n axiom scheme (witness...) body)", node)
        try:
            scheme = scheme_from_token(_atom(rest[0], "a scheme"))
        except HymlError as exc:
            raise _err(str(exc), rest[0]) from None
        witness = _parse_witness(rest[1], sig) if len(rest) == 3 else {}
        body = rest[-1]
        return AxiomStep(scheme, witness, parse_formula_body(body, sig))
    if kind == "rule":
        if len(rest) not in (3, 4):
            raise _err("(step n rule name (from ...) (witness...) body)", node)
        try:
            rule = scheme_from_token(_atom(rest[0], "a rule"))
        except HymlError as exc:
            raise _err(str(exc), rest[0]) from None
        frm = _tagged(rest[1], "from")
        refs = tuple(_int(r, "a step reference") for r in frm.items[1:])
        witness = _parse_witness(rest[2], sig) if len(rest) == 4 else {}
        return RuleStep(rule, refs, witness, parse_formula_body(rest[-1], sig))
    raise _err(f"unknown step kind {kind!r}", node)


def render_proof(script: ProofScript) -> str:
    parts: list = ["proof", ("system", script.system.value)]
    parts.append(("premises", *[_formula_tree(p) for p in script.premises]))
    steps = []
    for index, step in enumerate(script.steps, start=1):
        if isinstance(step, TautStep):
            steps.append(("step", index, "taut", _formula_tree(step.formula)))
        elif isinstance(step, PremiseStep):
            steps.append(("step", index, "premise", step.ref))
        elif isinstance(step, AxiomStep):
            steps.append(
                (
                    "step",
                    index,
                    "axiom",
                    step.scheme.value,
                    _witness_tree(step.witness),
                    _formula_tree(step.formula),
                )
            )
        elif isinstance(step, RuleStep):
            steps.append(
                (
                    "step",
                    index,
                    "rule",
                    step.rule.value,
                    ("from", *step.refs),
                    _witness_tree(step.witness),
                    _formula_tree(step.formula),
                )
            )
        else:
            raise ValidationError(f"cannot render step {step!r}")
    parts.append(("steps", *steps))
    return render_sexpr(parts)


# --- umbrella ----------------------------------------------------------------

def parse_document(kind: str, text: str, sig: Signature | None = None):
    """Parse one document of the given kind.  Formula, assignment and proof
    documents require a signature; models accept one for validation."""
    if kind not in DOCUMENT_KINDS:
        raise ValidationError(f"unknown document kind {kind!r}")
    node = parse_sexpr(text)
    if kind == "signature":
        return parse_signature(node)
    if kind == "model":
        return parse_model(node, sig)
    if kind == "ml-model":
        return parse_ml_model(node, sig)
    if kind == "assignment":
        return parse_assignment(node)
    if sig is None:
        raise ValidationError(f"{kind} documents require a signature")
    if kind == "formula":
        return parse_formula(node, sig)
    return parse_proof(node, sig)


def render_document(kind: str, obj, sig: Signature | None = None) -> str:
    if kind == "signature":
        return render_signature(obj)
    if kind == "formula":
        if sig is None:
            raise ValidationError("rendering a formula document requires a signature")
        return render_formula(obj, sig)
    if kind == "model":
        return render_model(obj)
    if kind == "ml-model":
        return render_ml_model(obj)
    if kind == "assignment":
        return render_assignment(obj)
    if kind == "proof":
        return render_proof(obj)
    raise ValidationError(f"unknown document kind {kind!r}")
