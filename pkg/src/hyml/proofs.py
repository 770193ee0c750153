"""Hilbert-style proof checking for the three deductive systems.

Every axiom step carries an explicit instantiation witness; the checker never
searches for instantiations.  Side conditions are enforced syntactically,
including two tightenings needed for the schemes to preserve validity on
arbitrary standard models: the quantified variable of a Barcan instance must
not occur free in the untouched argument positions, and the pasted variable
of the Paste rules must be a state variable that occurs nowhere in the other
constituents.  Violations cite the side condition by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import (
    BadReferenceError,
    NotInSystemError,
    RuleShapeMismatchError,
    SchemeMismatchError,
    SideConditionViolatedError,
    ValidationError,
)
from .syntax import (
    App,
    At,
    Forall,
    Formula,
    Neg,
    Nom,
    NomContext,
    Or,
    SVar,
    Signature,
    SystemId,
    Top,
    and_,
    check_admissible,
    dual_app,
    exists,
    free_svars,
    iff,
    implies,
    is_substitutable,
    nomc_apply,
    nomc_apply_dual,
    occurs_svar,
    sort_of,
    substitute,
)


class Scheme(Enum):
    K_SIGMA = "k-sigma"
    DUAL_SIGMA = "dual-sigma"
    Q1 = "q1"
    Q2 = "q2"
    NAME = "name"
    BARCAN = "barcan"
    NOM = "nom"
    K_AT = "k-at"
    SELF_DUAL = "selfdual"
    BACK = "back"
    AGREE = "agree"
    INTRO = "intro"
    REF = "ref"
    BARCAN_AT = "barcan-at"
    NOM_X = "nom-x"
    MP = "mp"
    UG = "ug"
    GEN = "gen"
    GEN_AT = "gen-at"
    BROADCAST_S = "broadcast-s"
    PASTE0 = "paste0"
    PASTE1 = "paste1"


AXIOM_SCHEMES = (
    Scheme.K_SIGMA,
    Scheme.DUAL_SIGMA,
    Scheme.Q1,
    Scheme.Q2,
    Scheme.NAME,
    Scheme.BARCAN,
    Scheme.NOM,
    Scheme.K_AT,
    Scheme.SELF_DUAL,
    Scheme.BACK,
    Scheme.AGREE,
    Scheme.INTRO,
    Scheme.REF,
    Scheme.BARCAN_AT,
    Scheme.NOM_X,
)

RULES = (
    Scheme.MP,
    Scheme.UG,
    Scheme.GEN,
    Scheme.GEN_AT,
    Scheme.BROADCAST_S,
    Scheme.PASTE0,
    Scheme.PASTE1,
)

_BASE = frozenset({Scheme.K_SIGMA, Scheme.DUAL_SIGMA, Scheme.MP, Scheme.UG})
_FORALL_EXTRA = frozenset(
    {Scheme.Q1, Scheme.Q2, Scheme.NAME, Scheme.BARCAN, Scheme.NOM, Scheme.GEN}
)
_AT_EXTRA = frozenset(
    {
        Scheme.K_AT,
        Scheme.SELF_DUAL,
        Scheme.BACK,
        Scheme.AGREE,
        Scheme.INTRO,
        Scheme.REF,
        Scheme.BARCAN_AT,
        Scheme.NOM_X,
        Scheme.GEN_AT,
        Scheme.BROADCAST_S,
        Scheme.PASTE0,
        Scheme.PASTE1,
    }
)

ADMISSIBLE: dict[SystemId, frozenset[Scheme]] = {
    SystemId.BASE_K: _BASE,
    SystemId.HYBRID_FORALL: _BASE | _FORALL_EXTRA,
    SystemId.HYBRID_AT_FORALL: _BASE | _FORALL_EXTRA | _AT_EXTRA,
}


def scheme_from_token(token: str) -> Scheme:
    if token == "bridge":
        raise ValidationError(
            "the Bridge axiom is not part of any of the implemented systems; "
            "scripts citing it are rejected"
        )
    try:
        return Scheme(token)
    except ValueError:
        raise ValidationError(f"unknown scheme or rule {token!r}") from None


# --- witness helpers --------------------------------------------------------

def _need(witness: Mapping, key: str, kind):
    try:
        value = witness[key]
    except KeyError:
        raise SchemeMismatchError(f"witness misses {key!r}") from None
    if kind is not None and not isinstance(value, kind):
        raise SchemeMismatchError(
            f"witness entry {key!r} has the wrong kind ({type(value).__name__})"
        )
    return value


def _formula_list(witness: Mapping, key: str) -> tuple[Formula, ...]:
    value = _need(witness, key, (tuple, list))
    out = tuple(value)
    for item in out:
        if not isinstance(item, Formula):
            raise SchemeMismatchError(f"witness entry {key!r} must hold formulas")
    return out


def _op_decl(sig: Signature, witness: Mapping):
    name = _need(witness, "op", str)
    decl = sig.ops.get(name)
    if decl is None:
        raise SchemeMismatchError(f"unknown operation symbol {name!r}")
    return decl


def _position(witness: Mapping, decl) -> int:
    pos = _need(witness, "pos", int)
    if not 1 <= pos <= len(decl.arg_sorts):
        raise SchemeMismatchError(
            f"position {pos} out of range for {decl.name!r} with arity {len(decl.arg_sorts)}"
        )
    return pos


def _insert(sides: Sequence[Formula], pos: int, phi: Formula) -> tuple[Formula, ...]:
    out = list(sides)
    out.insert(pos - 1, phi)
    return tuple(out)


def _check_sides(sig: Signature, decl, pos: int, sides: Sequence[Formula]) -> None:
    if len(sides) != len(decl.arg_sorts) - 1:
        raise SchemeMismatchError(
            f"{decl.name!r} needs {len(decl.arg_sorts) - 1} side formulas, got {len(sides)}"
        )
    wanted = [s for i, s in enumerate(decl.arg_sorts, start=1) if i != pos]
    for formula, want in zip(sides, wanted):
        got = sort_of(formula, sig)
        if got != want:
            raise SchemeMismatchError(f"side formula has sort {got!r}, expected {want!r}")


def _state_symbol(witness: Mapping, key: str) -> Nom | SVar:
    value = _need(witness, key, (Nom, SVar))
    return value


def _svar(witness: Mapping, key: str) -> SVar:
    value = _need(witness, key, None)
    if not isinstance(value, SVar):
        raise SideConditionViolatedError(
            "state-variable-required", f"witness entry {key!r} must be a state variable"
        )
    return value


def _sort_name(witness: Mapping, key: str, sig: Signature) -> str:
    value = _need(witness, key, str)
    if value not in sig.sorts:
        raise SchemeMismatchError(f"undeclared sort {value!r} in witness entry {key!r}")
    return value


def _context(witness: Mapping, key: str) -> NomContext:
    value = _need(witness, key, (NomContext, Formula))
    if isinstance(value, NomContext):
        return value
    try:
        return NomContext.of(value)
    except ValidationError as exc:
        raise SideConditionViolatedError("nomc-context", str(exc)) from None


# --- axiom instantiation ----------------------------------------------------

def build_axiom_instance(scheme: Scheme, witness: Mapping, sig: Signature) -> Formula:
    """Instantiate an axiom scheme from its witness, enforcing all side
    conditions.  Returns the instance in primitive normal form."""
    if scheme is Scheme.K_SIGMA:
        decl = _op_decl(sig, witness)
        pos = _position(witness, decl)
        sides = _formula_list(witness, "sides")
        _check_sides(sig, decl, pos, sides)
        phi = _need(witness, "phi", Formula)
        chi = _need(witness, "chi", Formula)
        want = decl.arg_sorts[pos - 1]
        for f in (phi, chi):
            got = sort_of(f, sig)
            if got != want:
                raise SchemeMismatchError(f"formula at position {pos} has sort {got!r}, expected {want!r}")
        head = dual_app(decl.name, _insert(sides, pos, implies(phi, chi)))
        left = dual_app(decl.name, _insert(sides, pos, phi))
        right = dual_app(decl.name, _insert(sides, pos, chi))
        return implies(head, implies(left, right))

    if scheme is Scheme.DUAL_SIGMA:
        decl = _op_decl(sig, witness)
        args = _formula_list(witness, "args")
        if len(args) != len(decl.arg_sorts):
            raise SchemeMismatchError(f"{decl.name!r} expects {len(decl.arg_sorts)} arguments")
        for f, want in zip(args, decl.arg_sorts):
            got = sort_of(f, sig)
            if got != want:
                raise SchemeMismatchError(f"argument has sort {got!r}, expected {want!r}")
        return iff(App(decl.name, args), Neg(dual_app(decl.name, tuple(Neg(a) for a in args))))

    if scheme is Scheme.Q1:
        var = _svar(witness, "var")
        phi = _need(witness, "phi", Formula)
        psi = _need(witness, "psi", Formula)
        if sort_of(phi, sig) != sort_of(psi, sig):
            raise SchemeMismatchError("antecedent and consequent must share a sort")
        if var in free_svars(phi):
            raise SideConditionViolatedError(
                "no-free-occurrence", f"{var.name!r} occurs free in the antecedent"
            )
        return implies(Forall(var, implies(phi, psi)), implies(phi, Forall(var, psi)))

    if scheme is Scheme.Q2:
        var = _svar(witness, "var")
        target = _state_symbol(witness, "target")
        phi = _need(witness, "phi", Formula)
        if target.sort != var.sort:
            raise SchemeMismatchError(
                f"target {target.name!r} has sort {target.sort!r}, variable has {var.sort!r}"
            )
        if not is_substitutable(phi, var, target):
            raise SideConditionViolatedError(
                "substitutable", f"{target.name!r} is not substitutable for {var.name!r}"
            )
        return implies(Forall(var, phi), substitute(phi, var, target))

    if scheme is Scheme.NAME:
        var = _svar(witness, "var")
        sort_of(var, sig)
        return exists(var, var)

    if scheme is Scheme.BARCAN:
        decl = _op_decl(sig, witness)
        pos = _position(witness, decl)
        var = _svar(witness, "var")
        args = _formula_list(witness, "args")
        if len(args) != len(decl.arg_sorts):
            raise SchemeMismatchError(f"{decl.name!r} expects {len(decl.arg_sorts)} arguments")
        for f, want in zip(args, decl.arg_sorts):
            got = sort_of(f, sig)
            if got != want:
                raise SchemeMismatchError(f"argument has sort {got!r}, expected {want!r}")
        for i, f in enumerate(args, start=1):
            if i != pos and var in free_svars(f):
                raise SideConditionViolatedError(
                    "barcan-side-free",
                    f"{var.name!r} occurs free in untouched argument {i}",
                )
        boxed = dual_app(decl.name, args)
        moved = dual_app(decl.name, _insert([a for i, a in enumerate(args, 1) if i != pos],
                                            pos, Forall(var, args[pos - 1])))
        return implies(Forall(var, boxed), moved)

    if scheme is Scheme.NOM:
        var = _svar(witness, "var")
        eta = _context(witness, "eta")
        theta = _context(witness, "theta")
        phi = _need(witness, "phi", Formula)
        if eta.hole_sort != var.sort or theta.hole_sort != var.sort:
            raise SideConditionViolatedError(
                "nom-hole-sort",
                "the checker assumes both context holes share the bound variable's sort",
            )
        if sort_of(eta.formula, sig) != sort_of(theta.formula, sig):
            raise SideConditionViolatedError(
                "nom-context-sort", "both contexts must produce the same sort"
            )
        if sort_of(phi, sig) != var.sort:
            raise SchemeMismatchError("the plugged formula must share the variable's sort")
        lhs = nomc_apply(eta, and_(var, phi), sig)
        rhs = nomc_apply_dual(theta, implies(var, phi), sig)
        return Forall(var, implies(lhs, rhs))

    if scheme is Scheme.K_AT:
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        phi = _need(witness, "phi", Formula)
        psi = _need(witness, "psi", Formula)
        for f in (phi, psi):
            if sort_of(f, sig) != z.sort:
                raise SchemeMismatchError("jump body must share the state symbol's sort")
        return implies(
            At(sort, z, implies(phi, psi)),
            implies(At(sort, z, phi), At(sort, z, psi)),
        )

    if scheme is Scheme.SELF_DUAL:
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        phi = _need(witness, "phi", Formula)
        if sort_of(phi, sig) != z.sort:
            raise SchemeMismatchError("jump body must share the state symbol's sort")
        return iff(At(sort, z, phi), Neg(At(sort, z, Neg(phi))))

    if scheme is Scheme.BACK:
        decl = _op_decl(sig, witness)
        pos = _position(witness, decl)
        sides = _formula_list(witness, "sides")
        _check_sides(sig, decl, pos, sides)
        z = _state_symbol(witness, "z")
        psi = _need(witness, "psi", Formula)
        if sort_of(psi, sig) != z.sort:
            raise SchemeMismatchError("jump body must share the state symbol's sort")
        inner = At(decl.arg_sorts[pos - 1], z, psi)
        return implies(App(decl.name, _insert(sides, pos, inner)), At(decl.result, z, psi))

    if scheme is Scheme.AGREE:
        sort = _sort_name(witness, "at-sort", sig)
        inner_sort = _sort_name(witness, "inner-sort", sig)
        y = _state_symbol(witness, "y")
        z = _state_symbol(witness, "z")
        phi = _need(witness, "phi", Formula)
        if y.sort != inner_sort:
            raise SchemeMismatchError("outer jump symbol must have the inner result sort")
        if sort_of(phi, sig) != z.sort:
            raise SchemeMismatchError("jump body must share the state symbol's sort")
        return iff(At(sort, y, At(inner_sort, z, phi)), At(sort, z, phi))

    if scheme is Scheme.INTRO:
        z = _state_symbol(witness, "z")
        phi = _need(witness, "phi", Formula)
        if sort_of(phi, sig) != z.sort:
            raise SchemeMismatchError("the formula must share the state symbol's sort")
        return implies(z, iff(phi, At(z.sort, z, phi)))

    if scheme is Scheme.REF:
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        sort_of(z, sig)
        return At(sort, z, z)

    if scheme is Scheme.BARCAN_AT:
        sort = _sort_name(witness, "at-sort", sig)
        var = _svar(witness, "var")
        z = _state_symbol(witness, "z")
        phi = _need(witness, "phi", Formula)
        if sort_of(phi, sig) != z.sort:
            raise SchemeMismatchError("jump body must share the state symbol's sort")
        if isinstance(z, SVar) and z.name == var.name:
            raise SideConditionViolatedError(
                "distinct-from-jump", "the bound variable must differ from the jump symbol"
            )
        return implies(Forall(var, At(sort, z, phi)), At(sort, z, Forall(var, phi)))

    if scheme is Scheme.NOM_X:
        sort = _sort_name(witness, "at-sort", sig)
        var = _svar(witness, "var")
        z = _state_symbol(witness, "z")
        y = _state_symbol(witness, "y")
        if not (var.sort == z.sort == y.sort):
            raise SchemeMismatchError("the variable and both state symbols must share a sort")
        return implies(and_(At(sort, z, var), At(sort, y, var)), At(sort, z, y))

    raise SchemeMismatchError(f"{scheme.value!r} is not an axiom scheme")


def match_axiom(
    scheme: Scheme,
    witness: Mapping,
    formula: Formula,
    sig: Signature,
    system: SystemId | None = None,
) -> None:
    """Verify that the formula is exactly the scheme instance the witness
    describes.  Raises one of the proof errors otherwise."""
    if system is not None and scheme not in ADMISSIBLE[system]:
        raise NotInSystemError(f"{scheme.value} is not available in {system.value}")
    built = build_axiom_instance(scheme, witness, sig)
    if built != formula:
        raise SchemeMismatchError(
            f"the step formula is not the stated instance of {scheme.value}"
        )


# --- propositional tautologies ----------------------------------------------

_MAX_TAUT_ATOMS = 20


def is_prop_tautology(phi: Formula) -> bool:
    """Decide propositional validity after abstracting every maximal
    non-Boolean subformula as a propositional letter."""
    atoms: dict[Formula, int] = {}

    def abstract(node: Formula):
        if isinstance(node, Top):
            return True
        if isinstance(node, Neg):
            return ("not", abstract(node.body))
        if isinstance(node, Or):
            return ("or", abstract(node.left), abstract(node.right))
        index = atoms.setdefault(node, len(atoms))
        return ("atom", index)

    tree = abstract(phi)
    if len(atoms) > _MAX_TAUT_ATOMS:
        raise ValidationError(
            f"tautology check limited to {_MAX_TAUT_ATOMS} distinct subformulas"
        )

    def value(node, row: int) -> bool:
        if node is True:
            return True
        tag = node[0]
        if tag == "not":
            return not value(node[1], row)
        if tag == "or":
            return value(node[1], row) or value(node[2], row)
        return bool(row >> node[1] & 1)

    return all(value(tree, row) for row in range(1 << len(atoms)))


# --- rules -------------------------------------------------------------------

def apply_rule(
    rule: Scheme,
    witness: Mapping,
    premises: Sequence[Formula],
    conclusion: Formula,
    sig: Signature,
    system: SystemId | None = None,
) -> None:
    """Verify one rule application; raises a proof error when the shape or a
    side condition fails."""
    if system is not None and rule not in ADMISSIBLE[system]:
        raise NotInSystemError(f"{rule.value} is not available in {system.value}")

    if rule is Scheme.MP:
        if len(premises) != 2:
            raise RuleShapeMismatchError("modus ponens takes two premises")
        minor, major = premises
        if major != implies(minor, conclusion):
            raise RuleShapeMismatchError(
                "the second premise must be the implication from the first to the conclusion"
            )
        return

    if rule is Scheme.UG:
        if len(premises) != 1:
            raise RuleShapeMismatchError("generalization takes one premise")
        decl = _op_decl(sig, witness)
        pos = _position(witness, decl)
        sides = _formula_list(witness, "sides")
        _check_sides(sig, decl, pos, sides)
        got = sort_of(premises[0], sig)
        want = decl.arg_sorts[pos - 1]
        if got != want:
            raise RuleShapeMismatchError(f"premise has sort {got!r}, position needs {want!r}")
        if conclusion != dual_app(decl.name, _insert(sides, pos, premises[0])):
            raise RuleShapeMismatchError("conclusion is not the boxed premise at the stated position")
        return

    if rule is Scheme.GEN:
        if len(premises) != 1:
            raise RuleShapeMismatchError("generalization takes one premise")
        var = _svar(witness, "var")
        sort_of(var, sig)
        if conclusion != Forall(var, premises[0]):
            raise RuleShapeMismatchError("conclusion is not the universal closure of the premise")
        return

    if rule is Scheme.GEN_AT:
        if len(premises) != 1:
            raise RuleShapeMismatchError("jump generalization takes one premise")
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        if sort_of(premises[0], sig) != z.sort:
            raise RuleShapeMismatchError("premise must share the jump symbol's sort")
        if conclusion != At(sort, z, premises[0]):
            raise RuleShapeMismatchError("conclusion is not the premise under the stated jump")
        return

    if rule is Scheme.BROADCAST_S:
        if len(premises) != 1:
            raise RuleShapeMismatchError("sort broadcast takes one premise")
        sort = _sort_name(witness, "to-sort", sig)
        premise = premises[0]
        if not isinstance(premise, At):
            raise RuleShapeMismatchError("sort broadcast applies to a jump formula")
        if conclusion != At(sort, premise.symbol, premise.body):
            raise RuleShapeMismatchError(
                "conclusion must be the premise with only the jump's result sort changed"
            )
        return

    if rule is Scheme.PASTE0:
        if len(premises) != 1:
            raise RuleShapeMismatchError("paste takes one premise")
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        y = _svar(witness, "y")
        phi = _need(witness, "phi", Formula)
        psi = _need(witness, "psi", Formula)
        if y.sort != z.sort or sort_of(phi, sig) != z.sort:
            raise RuleShapeMismatchError("the pasted variable, jump symbol and body must share a sort")
        if isinstance(z, SVar) and z.name == y.name:
            raise SideConditionViolatedError("paste-distinct", "the pasted variable must differ from the jump symbol")
        for name, f in (("body", phi), ("consequent", psi)):
            if occurs_svar(f, y.name):
                raise SideConditionViolatedError(
                    "paste-fresh", f"{y.name!r} occurs in the {name}"
                )
        if premises[0] != implies(At(sort, z, and_(y, phi)), psi):
            raise RuleShapeMismatchError("premise does not match the paste shape")
        if conclusion != implies(At(sort, z, phi), psi):
            raise RuleShapeMismatchError("conclusion does not match the paste shape")
        return

    if rule is Scheme.PASTE1:
        if len(premises) != 1:
            raise RuleShapeMismatchError("paste takes one premise")
        sort = _sort_name(witness, "at-sort", sig)
        z = _state_symbol(witness, "z")
        y = _svar(witness, "y")
        decl = _op_decl(sig, witness)
        pos = _position(witness, decl)
        sides = _formula_list(witness, "sides")
        _check_sides(sig, decl, pos, sides)
        phi = _need(witness, "phi", Formula)
        psi = _need(witness, "psi", Formula)
        want = decl.arg_sorts[pos - 1]
        if y.sort != want or sort_of(phi, sig) != want:
            raise RuleShapeMismatchError("pasted variable and body must fit the argument sort")
        if z.sort != decl.result:
            raise RuleShapeMismatchError("jump symbol must have the operation's result sort")
        if isinstance(z, SVar) and z.name == y.name:
            raise SideConditionViolatedError("paste-distinct", "the pasted variable must differ from the jump symbol")
        for name, f in (("pasted body", phi), ("consequent", psi)):
            if occurs_svar(f, y.name):
                raise SideConditionViolatedError("paste-fresh", f"{y.name!r} occurs in the {name}")
        for f in sides:
            if occurs_svar(f, y.name):
                raise SideConditionViolatedError(
                    "paste-fresh-sides", f"{y.name!r} occurs in an untouched argument"
                )
        pasted = App(decl.name, _insert(sides, pos, and_(y, phi)))
        plain = App(decl.name, _insert(sides, pos, phi))
        if premises[0] != implies(At(sort, z, pasted), psi):
            raise RuleShapeMismatchError("premise does not match the paste shape")
        if conclusion != implies(At(sort, z, plain), psi):
            raise RuleShapeMismatchError("conclusion does not match the paste shape")
        return

    raise RuleShapeMismatchError(f"{rule.value!r} is not a deduction rule")


# --- proof scripts ------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TautStep:
    formula: Formula


@dataclass(frozen=True, slots=True)
class AxiomStep:
    scheme: Scheme
    witness: Mapping
    formula: Formula


@dataclass(frozen=True, slots=True)
class RuleStep:
    rule: Scheme
    refs: tuple[int, ...]
    witness: Mapping
    formula: Formula


@dataclass(frozen=True, slots=True)
class PremiseStep:
    ref: int


Step = TautStep | AxiomStep | RuleStep | PremiseStep


@dataclass(frozen=True, slots=True)
class ProofScript:
    system: SystemId
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]


@dataclass
class StepResult:
    index: int
    ok: bool
    formula: Formula | None
    detail: str


@dataclass
class ProofReport:
    ok: bool
    results: list[StepResult] = field(default_factory=list)
    failed_step: int | None = None
    reason: str | None = None

    def __str__(self) -> str:
        if self.ok:
            return f"ok ({len(self.results)} steps)"
        return f"rejected at step {self.failed_step}: {self.reason}"


def _step_formula(script: ProofScript, step: Step) -> Formula:
    if isinstance(step, PremiseStep):
        if not 1 <= step.ref <= len(script.premises):
            raise BadReferenceError(f"premise {step.ref} does not exist")
        return script.premises[step.ref - 1]
    return step.formula


def check_proof(script: ProofScript, sig: Signature) -> ProofReport:
    """Validate every step in order; the report stops at the first failure."""
    report = ProofReport(ok=True)
    try:
        for premise in script.premises:
            sort_of(premise, sig)
            check_admissible(premise, script.system)
    except Exception as exc:  # noqa: BLE001 - reported, not propagated
        return ProofReport(ok=False, failed_step=0, reason=f"bad premise list: {exc}")

    established: list[Formula] = []
    for index, step in enumerate(script.steps, start=1):
        try:
            formula = _step_formula(script, step)
            sort_of(formula, sig)
            check_admissible(formula, script.system)
            if isinstance(step, TautStep):
                if not is_prop_tautology(formula):
                    raise SchemeMismatchError("not a propositional tautology under abstraction")
                detail = "tautology"
            elif isinstance(step, AxiomStep):
                match_axiom(step.scheme, step.witness, formula, sig, script.system)
                detail = f"axiom {step.scheme.value}"
            elif isinstance(step, RuleStep):
                used = []
                for ref in step.refs:
                    if not 1 <= ref < index:
                        raise BadReferenceError(
                            f"step {index} cites step {ref}, which is not an earlier step"
                        )
                    used.append(established[ref - 1])
                apply_rule(step.rule, step.witness, used, formula, sig, script.system)
                detail = f"rule {step.rule.value} from {list(step.refs)}"
            elif isinstance(step, PremiseStep):
                detail = f"premise {step.ref}"
            else:
                raise ValidationError(f"unknown step kind: {step!r}")
        except Exception as exc:  # noqa: BLE001 - reported, not propagated
            report.results.append(StepResult(index, False, None, str(exc)))
            report.ok = False
            report.failed_step = index
            report.reason = str(exc)
            return report
        established.append(formula)
        report.results.append(StepResult(index, True, formula, detail))
    return report
