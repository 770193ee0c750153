"""Matching Logic pattern semantics over finite powerset models.

A pattern denotes a subset of the carrier of its sort.  Definedness is a
reserved construct with fixed semantics and never appears in a model's
interpretation table.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from .errors import (
    SortMismatchError,
    UnboundVariableError,
    ValidationError,
)
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
    Top,
    equals,
    free_svars,
    sort_of,
    subformulas,
)


class MLModel:
    """Finite carriers plus a powerset interpretation per operation symbol.

    `interp` maps each operation to a table from argument tuples to output
    subsets; argument tuples with empty output may be omitted and are dropped
    on normalization.  Constants are the zero-arity case, keyed by ().
    """

    __slots__ = ("sig", "carriers", "interp")

    def __init__(
        self,
        sig: Signature,
        carriers: Mapping[str, Iterable[str]],
        interp: Mapping[str, Mapping[tuple[str, ...], Iterable[str]]] = {},
    ):
        self.sig = sig
        self.carriers: dict[str, frozenset[str]] = {
            s: frozenset(carriers.get(s, ())) for s in sig.sorts
        }
        table: dict[str, dict[tuple[str, ...], frozenset[str]]] = {}
        for op in sig.ops:
            entries = {}
            for args, out in interp.get(op, {}).items():
                out = frozenset(out)
                if out:
                    entries[tuple(args)] = out
            table[op] = entries
        self.interp = table
        self._validate()

    def _validate(self) -> None:
        for s in self.sig.sorts:
            if not self.carriers[s]:
                raise ValidationError(f"carrier of sort {s!r} is empty")
        for extra in set(self.interp) - set(self.sig.ops):
            raise ValidationError(f"interpretation for undeclared operation {extra!r}")
        for op, entries in self.interp.items():
            decl = self.sig.ops[op]
            for args, out in entries.items():
                if len(args) != len(decl.arg_sorts):
                    raise ValidationError(f"interpretation of {op!r} keyed by wrong arity: {args}")
                for a, s in zip(args, decl.arg_sorts):
                    if a not in self.carriers[s]:
                        raise ValidationError(
                            f"interpretation of {op!r} keyed outside carrier {s!r}: {a!r}"
                        )
                if not out <= self.carriers[decl.result]:
                    raise ValidationError(
                        f"interpretation of {op!r} produces elements outside sort {decl.result!r}"
                    )

    def interp_of(self, op: str, args: tuple[str, ...]) -> frozenset[str]:
        return self.interp[op].get(tuple(args), frozenset())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MLModel)
            and self.sig == other.sig
            and self.carriers == other.carriers
            and self.interp == other.interp
        )

    def __repr__(self) -> str:
        cs = {s: sorted(c) for s, c in self.carriers.items()}
        return f"MLModel(carriers={cs})"


class Valuation:
    """Map from state variables (playing element variables) to carrier elements.

    Totality is only required on the variables an evaluation actually reads.
    """

    __slots__ = ("sig", "map")

    def __init__(self, sig: Signature, mapping: Mapping[str, str] = {}):
        self.sig = sig
        self.map: dict[str, str] = dict(sorted(mapping.items()))
        extra = set(self.map) - set(sig.svars)
        if extra:
            raise ValidationError(f"valuation mentions undeclared variables: {sorted(extra)}")

    def with_value(self, var: SVar, element: str) -> "Valuation":
        out = dict(self.map)
        out[var.name] = element
        return Valuation(self.sig, out)

    def __getitem__(self, name: str) -> str:
        return self.map[name]

    def __eq__(self, other) -> bool:
        return isinstance(other, Valuation) and self.sig == other.sig and self.map == other.map

    def __repr__(self) -> str:
        return f"Valuation({self.map})"


_PATTERN_FORBIDDEN = (Prop, Nom, At, Hole)


def is_pattern(phi: Formula) -> bool:
    """Patterns carry no propositional variables, nominals, @ or holes."""
    return not any(isinstance(node, _PATTERN_FORBIDDEN) for node in subformulas(phi))


def check_pattern(phi: Formula) -> None:
    for node in subformulas(phi):
        if isinstance(node, _PATTERN_FORBIDDEN):
            raise ValidationError(
                f"{type(node).__name__} nodes cannot appear in a matching-logic pattern"
            )


def pointwise_extend(
    model: MLModel, op: str, arg_sets: Iterable[Iterable[str]]
) -> frozenset[str]:
    """Union of the interpretation over all argument choices from the sets."""
    decl = model.sig.ops.get(op)
    if decl is None:
        raise ValidationError(f"unknown operation symbol {op!r}")
    sets = [frozenset(a) for a in arg_sets]
    if len(sets) != len(decl.arg_sorts):
        raise SortMismatchError(f"{op!r} expects {len(decl.arg_sorts)} argument sets")
    for a, s in zip(sets, decl.arg_sorts):
        if not a <= model.carriers[s]:
            raise SortMismatchError(f"argument set {sorted(a)} is not within carrier {s!r}")
    out: set[str] = set()
    for combo in itertools.product(*sets):
        out |= model.interp_of(op, combo)
    return frozenset(out)


def _extension(model: MLModel, rho: dict[str, str], phi: Formula) -> frozenset[str]:
    if isinstance(phi, SVar):
        try:
            return frozenset((rho[phi.name],))
        except KeyError:
            raise UnboundVariableError(f"valuation does not cover {phi.name!r}") from None
    if isinstance(phi, Top):
        return model.carriers[phi.sort]
    if isinstance(phi, Neg):
        sort = sort_of(phi.body, model.sig)
        return model.carriers[sort] - _extension(model, rho, phi.body)
    if isinstance(phi, Or):
        return _extension(model, rho, phi.left) | _extension(model, rho, phi.right)
    if isinstance(phi, App):
        return pointwise_extend(
            model, phi.op, [_extension(model, rho, a) for a in phi.args]
        )
    if isinstance(phi, Forall):
        # Derived from the existential clause: complement of the union of
        # complements over all values of the bound variable.
        var = phi.var
        bsort = sort_of(phi.body, model.sig)
        carrier = model.carriers[bsort]
        old = rho.get(var.name)
        try:
            failing: set[str] = set()
            for a in sorted(model.carriers[var.sort]):
                rho[var.name] = a
                failing |= carrier - _extension(model, rho, phi.body)
            return carrier - failing
        finally:
            if old is None:
                rho.pop(var.name, None)
            else:
                rho[var.name] = old
    if isinstance(phi, Defined):
        body = _extension(model, rho, phi.body)
        return model.carriers[phi.sort] if body else frozenset()
    raise ValidationError(f"not a pattern node: {phi!r}")


def evaluate(model: MLModel, rho: Valuation, phi: Formula) -> frozenset[str]:
    """The extension of a pattern under one valuation."""
    check_pattern(phi)
    sort_of(phi, model.sig)
    for name, element in rho.map.items():
        if element not in model.carriers[model.sig.svars[name]]:
            raise ValidationError(f"valuation sends {name!r} outside its carrier")
    return _extension(model, dict(rho.map), phi)


def _free_sweeps(model: MLModel, phi: Formula, base: Mapping[str, str]):
    frees = sorted(free_svars(phi), key=lambda v: v.name)
    domains = [sorted(model.carriers[v.sort]) for v in frees]
    for combo in itertools.product(*domains):
        rho = dict(base)
        for var, element in zip(frees, combo):
            rho[var.name] = element
        yield rho


def ml_satisfies(model: MLModel, phi: Formula) -> bool:
    """Global satisfaction: the extension is the full carrier under every
    valuation of the pattern's free variables."""
    check_pattern(phi)
    sort = sort_of(phi, model.sig)
    carrier = model.carriers[sort]
    for rho in _free_sweeps(model, phi, {}):
        if _extension(model, rho, phi) != carrier:
            return False
    return True


def totality_eval(model: MLModel, rho: Valuation, phi: Formula, context_sort: str) -> frozenset[str]:
    """Totality of a pattern, evaluated through its definedness expansion."""
    from .syntax import total

    return evaluate(model, rho, total(context_sort, phi))


def equality_eval(
    model: MLModel,
    rho: Valuation,
    left: Formula,
    right: Formula,
    context_sort: str,
) -> frozenset[str]:
    """Equality of two same-sorted patterns, read in the context sort: the
    full carrier when the extensions coincide and empty otherwise."""
    ls = sort_of(left, model.sig)
    rs = sort_of(right, model.sig)
    if ls != rs:
        raise SortMismatchError(f"compared patterns have sorts {ls!r} and {rs!r}")
    return evaluate(model, rho, equals(context_sort, left, right))
