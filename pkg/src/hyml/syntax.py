"""Many-sorted signatures, formula ASTs, substitution, and hole contexts.

Formulas are stored in primitive normal form: the only stored node types are
Top, Prop, Nom, SVar, Neg, Or, App, Forall, At, Defined and (in contexts only)
Hole.  Conjunction, implication, equivalence, the existential binder, dual
applications, the universal modality, totality and equality are constructor
level sugar that expands on the spot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import (
    ArityMismatchError,
    FeatureNotInSystemError,
    NotSubstitutableError,
    SortMismatchError,
    UnknownSymbolError,
    ValidationError,
)


@dataclass(frozen=True, slots=True)
class OpDecl:
    """Arity profile of an operation symbol: arg sorts and result sort."""

    name: str
    arg_sorts: tuple[str, ...]
    result: str


class Signature:
    """Sorts, operation symbols and the three disjoint sorted symbol pools.

    Symbol identity is (name, sort, kind).  Pools are finite and declared up
    front; names must not be shared between kinds, between sorts, or with
    operation symbols.
    """

    __slots__ = ("sorts", "ops", "props", "noms", "svars")

    def __init__(
        self,
        sorts: Iterable[str],
        ops: Mapping[str, tuple[Iterable[str], str]] | Iterable[OpDecl] = (),
        props: Mapping[str, str] = {},
        noms: Mapping[str, str] = {},
        svars: Mapping[str, str] = {},
    ):
        self.sorts: tuple[str, ...] = tuple(sorted(set(sorts)))
        if not self.sorts:
            raise ValidationError("a signature needs at least one sort")
        decls: dict[str, OpDecl] = {}
        if isinstance(ops, Mapping):
            for name, (arg_sorts, result) in ops.items():
                decls[name] = OpDecl(name, tuple(arg_sorts), result)
        else:
            for decl in ops:
                decls[decl.name] = decl
        self.ops: dict[str, OpDecl] = dict(sorted(decls.items()))
        self.props: dict[str, str] = dict(sorted(props.items()))
        self.noms: dict[str, str] = dict(sorted(noms.items()))
        self.svars: dict[str, str] = dict(sorted(svars.items()))
        self._validate()

    def _validate(self) -> None:
        known = set(self.sorts)
        for decl in self.ops.values():
            for s in (*decl.arg_sorts, decl.result):
                if s not in known:
                    raise ValidationError(f"operation {decl.name!r} uses undeclared sort {s!r}")
        pools = [("prop", self.props), ("nom", self.noms), ("svar", self.svars)]
        for kind, pool in pools:
            for name, sort in pool.items():
                if sort not in known:
                    raise ValidationError(f"{kind} {name!r} has undeclared sort {sort!r}")
        seen: dict[str, str] = {name: "op" for name in self.ops}
        for kind, pool in pools:
            for name in pool:
                if name in seen:
                    raise ValidationError(
                        f"symbol {name!r} declared both as {seen[name]} and as {kind}"
                    )
                seen[name] = kind

    def kind_of(self, name: str) -> str | None:
        """Return 'op', 'prop', 'nom' or 'svar', or None if undeclared."""
        if name in self.ops:
            return "op"
        if name in self.props:
            return "prop"
        if name in self.noms:
            return "nom"
        if name in self.svars:
            return "svar"
        return None

    def state_symbol(self, name: str) -> "Nom | SVar":
        """Resolve a nominal or state-variable name to its leaf node."""
        if name in self.noms:
            return Nom(name, self.noms[name])
        if name in self.svars:
            return SVar(name, self.svars[name])
        raise UnknownSymbolError(f"{name!r} is not a state symbol")

    def svars_of_sort(self, sort: str) -> tuple["SVar", ...]:
        return tuple(SVar(n, s) for n, s in self.svars.items() if s == sort)

    def noms_of_sort(self, sort: str) -> tuple["Nom", ...]:
        return tuple(Nom(n, s) for n, s in self.noms.items() if s == sort)

    def props_of_sort(self, sort: str) -> tuple["Prop", ...]:
        return tuple(Prop(n, s) for n, s in self.props.items() if s == sort)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Signature)
            and self.sorts == other.sorts
            and self.ops == other.ops
            and self.props == other.props
            and self.noms == other.noms
            and self.svars == other.svars
        )

    def __hash__(self):
        return hash((self.sorts, tuple(self.ops.items()), tuple(self.props.items()),
                     tuple(self.noms.items()), tuple(self.svars.items())))

    def __repr__(self) -> str:
        return (f"Signature(sorts={list(self.sorts)}, ops={list(self.ops)}, "
                f"props={list(self.props)}, noms={list(self.noms)}, svars={list(self.svars)})")


class Formula:
    """Abstract base for all AST nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    name: str
    sort: str


@dataclass(frozen=True, slots=True)
class Nom(Formula):
    name: str
    sort: str


@dataclass(frozen=True, slots=True)
class SVar(Formula):
    name: str
    sort: str


@dataclass(frozen=True, slots=True)
class Top(Formula):
    sort: str


@dataclass(frozen=True, slots=True)
class Hole(Formula):
    """Context hole; only legal inside NC/NomC context formulas."""

    sort: str


@dataclass(frozen=True, slots=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class App(Formula):
    op: str
    args: tuple[Formula, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: SVar
    body: Formula


@dataclass(frozen=True, slots=True)
class At(Formula):
    """Satisfaction operator: evaluate body at the world named by symbol.

    sort is the result sort (the superscript); the subscript symbol and the
    body must share a sort of their own.
    """

    sort: str
    symbol: Nom | SVar
    body: Formula


@dataclass(frozen=True, slots=True)
class Defined(Formula):
    """Reserved definedness symbol: full result carrier iff body is nonempty."""

    sort: str
    body: Formula


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Neg):
        return (phi.body,)
    if isinstance(phi, Or):
        return (phi.left, phi.right)
    if isinstance(phi, App):
        return phi.args
    if isinstance(phi, At):
        # the subscript is itself an atomic formula occurrence
        return (phi.symbol, phi.body)
    if isinstance(phi, (Forall, Defined)):
        return (phi.body,)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Yield phi and all of its subformulas, preorder."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def sort_of(phi: Formula, sig: Signature) -> str:
    """Compute the unique sort of a well-sorted formula, or raise.

    Raises UnknownSymbolError for symbols outside the signature,
    ArityMismatchError for misapplied operations, and SortMismatchError
    where sibling sorts disagree (disjunction, At subscript vs body).
    """
    if isinstance(phi, Prop):
        if sig.props.get(phi.name) != phi.sort:
            raise UnknownSymbolError(f"{phi.name!r} is not a propositional variable of sort {phi.sort!r}")
        return phi.sort
    if isinstance(phi, Nom):
        if sig.noms.get(phi.name) != phi.sort:
            raise UnknownSymbolError(f"{phi.name!r} is not a nominal of sort {phi.sort!r}")
        return phi.sort
    if isinstance(phi, SVar):
        if sig.svars.get(phi.name) != phi.sort:
            raise UnknownSymbolError(f"{phi.name!r} is not a state variable of sort {phi.sort!r}")
        return phi.sort
    if isinstance(phi, (Top, Hole)):
        if phi.sort not in sig.sorts:
            raise UnknownSymbolError(f"undeclared sort {phi.sort!r}")
        return phi.sort
    if isinstance(phi, Neg):
        return sort_of(phi.body, sig)
    if isinstance(phi, Or):
        left = sort_of(phi.left, sig)
        right = sort_of(phi.right, sig)
        if left != right:
            raise SortMismatchError(f"disjuncts have sorts {left!r} and {right!r}")
        return left
    if isinstance(phi, App):
        decl = sig.ops.get(phi.op)
        if decl is None:
            raise UnknownSymbolError(f"unknown operation symbol {phi.op!r}")
        if len(phi.args) != len(decl.arg_sorts):
            raise ArityMismatchError(
                f"{phi.op!r} expects {len(decl.arg_sorts)} arguments, got {len(phi.args)}"
            )
        for arg, want in zip(phi.args, decl.arg_sorts):
            got = sort_of(arg, sig)
            if got != want:
                raise SortMismatchError(f"argument of {phi.op!r} has sort {got!r}, expected {want!r}")
        return decl.result
    if isinstance(phi, Forall):
        sort_of(phi.var, sig)
        return sort_of(phi.body, sig)
    if isinstance(phi, At):
        if phi.sort not in sig.sorts:
            raise UnknownSymbolError(f"undeclared sort {phi.sort!r}")
        zsort = sort_of(phi.symbol, sig)
        bsort = sort_of(phi.body, sig)
        if zsort != bsort:
            raise SortMismatchError(
                f"@ subscript has sort {zsort!r} but its body has sort {bsort!r}"
            )
        return phi.sort
    if isinstance(phi, Defined):
        if phi.sort not in sig.sorts:
            raise UnknownSymbolError(f"undeclared sort {phi.sort!r}")
        sort_of(phi.body, sig)
        return phi.sort
    raise ValidationError(f"not a formula node: {phi!r}")


# --- derived constructors -------------------------------------------------

def bot(sort: str) -> Formula:
    return Neg(Top(sort))


def and_(left: Formula, right: Formula) -> Formula:
    return Neg(Or(Neg(left), Neg(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return Or(Neg(left), right)


def iff(left: Formula, right: Formula) -> Formula:
    return and_(implies(left, right), implies(right, left))


def exists(var: SVar, body: Formula) -> Formula:
    return Neg(Forall(var, Neg(body)))


def dual_app(op: str, args: Iterable[Formula]) -> Formula:
    """Dual application: negate the operation of the negated arguments."""
    return Neg(App(op, tuple(Neg(a) for a in args)))


def total(sort: str, body: Formula) -> Formula:
    """Totality: dual of definedness."""
    return Neg(Defined(sort, Neg(body)))


def equals(sort: str, left: Formula, right: Formula) -> Formula:
    """Equality of extensions, read in context sort `sort`."""
    return total(sort, iff(left, right))


def fresh_svar(sig: Signature, sort: str, avoid: Iterable[SVar]) -> SVar:
    """First declared state variable of the sort that is not in `avoid`."""
    names = {v.name for v in avoid}
    for cand in sig.svars_of_sort(sort):
        if cand.name not in names:
            return cand
    raise ValidationError(f"no fresh state variable of sort {sort!r} available")


def univ_mod(sort: str, body: Formula, sig: Signature) -> Formula:
    """Universal modality: quantify a fresh variable under a satisfaction jump."""
    var = fresh_svar(sig, sort_of(body, sig), free_svars(body))
    return Forall(var, At(sort, var, body))


def exist_mod(sort: str, body: Formula, sig: Signature) -> Formula:
    """Dual of the universal modality."""
    return Neg(univ_mod(sort, Neg(body), sig))


_DERIVED = {
    "bot": lambda args, sig: bot(*args),
    "and": lambda args, sig: and_(*args),
    "implies": lambda args, sig: implies(*args),
    "iff": lambda args, sig: iff(*args),
    "exists": lambda args, sig: exists(*args),
    "dualapp": lambda args, sig: dual_app(args[0], args[1]),
    "univ": lambda args, sig: univ_mod(args[0], args[1], sig),
    "exist": lambda args, sig: exist_mod(args[0], args[1], sig),
    "total": lambda args, sig: total(*args),
    "equals": lambda args, sig: equals(*args),
}


def expand_derived(kind: str, args: Iterable, sig: Signature | None = None) -> Formula:
    """Expand a derived construct into primitive normal form."""
    try:
        build = _DERIVED[kind]
    except KeyError:
        raise ValidationError(f"unknown derived construct {kind!r}") from None
    return build(tuple(args), sig)


# --- variables and substitution -------------------------------------------

def free_svars(phi: Formula) -> frozenset[SVar]:
    """Free state variables. An @ subscript variable counts as free."""
    if isinstance(phi, SVar):
        return frozenset((phi,))
    if isinstance(phi, Forall):
        return free_svars(phi.body) - {phi.var}
    if isinstance(phi, At):
        inner = free_svars(phi.body)
        if isinstance(phi.symbol, SVar):
            inner = inner | {phi.symbol}
        return inner
    out: frozenset[SVar] = frozenset()
    for child in children(phi):
        out = out | free_svars(child)
    return out


def occurs_svar(phi: Formula, name: str) -> bool:
    """Whether the state variable occurs at all: free, bound, binder or subscript."""
    for node in subformulas(phi):
        if isinstance(node, SVar) and node.name == name:
            return True
        if isinstance(node, Forall) and node.var.name == name:
            return True
        if isinstance(node, At) and isinstance(node.symbol, SVar) and node.symbol.name == name:
            return True
    return False


def is_substitutable(phi: Formula, var: SVar, target: Nom | SVar) -> bool:
    """Whether `target` can replace free `var` in phi without capture.

    Nominals are never bound, so they are always substitutable.
    """
    if isinstance(target, Nom):
        return True

    def walk(node: Formula) -> bool:
        if isinstance(node, Forall):
            if node.var == var:
                return True
            if node.var.name == target.name and var in free_svars(node.body):
                return False
            return walk(node.body)
        return all(walk(c) for c in children(node))

    return walk(phi)


def substitute(phi: Formula, var: SVar, target: Nom | SVar) -> Formula:
    """Replace the free occurrences of `var` (including @ subscripts) by `target`."""
    if target.sort != var.sort:
        raise SortMismatchError(
            f"cannot substitute {target.name!r}:{target.sort} for {var.name!r}:{var.sort}"
        )
    if not is_substitutable(phi, var, target):
        raise NotSubstitutableError(
            f"{target.name!r} is not substitutable for {var.name!r}: capture"
        )

    def walk(node: Formula) -> Formula:
        if isinstance(node, SVar):
            return target if node == var else node
        if isinstance(node, (Prop, Nom, Top, Hole)):
            return node
        if isinstance(node, Neg):
            return Neg(walk(node.body))
        if isinstance(node, Or):
            return Or(walk(node.left), walk(node.right))
        if isinstance(node, App):
            return App(node.op, tuple(walk(a) for a in node.args))
        if isinstance(node, Forall):
            if node.var == var:
                return node
            return Forall(node.var, walk(node.body))
        if isinstance(node, At):
            sym = node.symbol
            if isinstance(sym, SVar) and sym == var:
                sym = target
            return At(node.sort, sym, walk(node.body))
        if isinstance(node, Defined):
            return Defined(node.sort, walk(node.body))
        raise ValidationError(f"not a formula node: {node!r}")

    return walk(phi)


# --- NC / NomC contexts ---------------------------------------------------

class NCClass(Enum):
    NC = "nc"
    NOMC = "nomc"
    NEITHER = "neither"


def _count_holes(phi: Formula) -> int:
    return sum(1 for node in subformulas(phi) if isinstance(node, Hole))


def nomc_classify(phi: Formula) -> NCClass:
    """Classify a context formula: NC (holes, Top and applications only),
    NomC (additionally exactly one hole occurrence), or neither."""
    for node in subformulas(phi):
        if not isinstance(node, (Hole, Top, App)):
            return NCClass.NEITHER
    return NCClass.NOMC if _count_holes(phi) == 1 else NCClass.NC


@dataclass(frozen=True, slots=True)
class NomContext:
    """A single-hole context formula together with its hole sort."""

    formula: Formula
    hole_sort: str

    @staticmethod
    def of(formula: Formula) -> "NomContext":
        if nomc_classify(formula) is not NCClass.NOMC:
            raise ValidationError("not a single-hole NC context formula")
        hole = next(n for n in subformulas(formula) if isinstance(n, Hole))
        return NomContext(formula, hole.sort)


def nomc_apply(ctx: NomContext, phi: Formula, sig: Signature) -> Formula:
    """Plug phi into the context's unique hole."""
    got = sort_of(phi, sig)
    if got != ctx.hole_sort:
        raise SortMismatchError(
            f"context hole has sort {ctx.hole_sort!r}, formula has sort {got!r}"
        )

    def walk(node: Formula) -> Formula:
        if isinstance(node, Hole):
            return phi
        if isinstance(node, App):
            return App(node.op, tuple(walk(a) for a in node.args))
        return node

    return walk(ctx.formula)


def nomc_apply_dual(ctx: NomContext, phi: Formula, sig: Signature) -> Formula:
    """Plug phi into the dual context: negation of the context on the negation."""
    return Neg(nomc_apply(ctx, Neg(phi), sig))


# --- systems ----------------------------------------------------------------

class SystemId(Enum):
    BASE_K = "base-k"
    HYBRID_FORALL = "hybrid-forall"
    HYBRID_AT_FORALL = "hybrid-at-forall"


_ALLOWED_NODES = {
    SystemId.BASE_K: (Prop, Top, Neg, Or, App),
    SystemId.HYBRID_FORALL: (Prop, Top, Neg, Or, App, Nom, SVar, Forall),
    SystemId.HYBRID_AT_FORALL: (Prop, Top, Neg, Or, App, Nom, SVar, Forall, At, Defined),
}


def is_admissible(phi: Formula, system: SystemId) -> bool:
    allowed = _ALLOWED_NODES[system]
    return all(isinstance(node, allowed) for node in subformulas(phi))


def check_admissible(phi: Formula, system: SystemId) -> None:
    allowed = _ALLOWED_NODES[system]
    for node in subformulas(phi):
        if not isinstance(node, allowed):
            raise FeatureNotInSystemError(
                f"{type(node).__name__} nodes are not part of system {system.value}"
            )
