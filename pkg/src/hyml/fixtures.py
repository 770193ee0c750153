"""Built-in signatures and the small two-sorted reference model.

The desk signature has enough material to instantiate every axiom scheme:
a cross-sort unary operation each way, a binary operation, a constant, and
two symbols of every pool kind per sort.
"""

from __future__ import annotations

from .matching import MLModel, Valuation
from .semantics import Assignment, KripkeStructure
from .syntax import Signature


def m0_signature() -> Signature:
    """Signature of the reference model: one unary cross-sort operation."""
    return Signature(
        sorts=("s", "t"),
        ops={"f": (("t",), "s")},
        props={"p": "s"},
        noms={"j": "s"},
        svars={"x": "s", "u": "t"},
    )


def fixture_m0() -> tuple[KripkeStructure, Assignment]:
    """The reference model: two worlds per sort, one relation edge."""
    sig = m0_signature()
    model = KripkeStructure(
        sig,
        worlds={"s": ("a", "b"), "t": ("c", "d")},
        rels={"f": {("a", "c")}},
        val={"p": {"a"}, "j": {"b"}},
    )
    g = Assignment(sig, {"x": "a", "u": "c"})
    return model, g


def fixture_m0_ml() -> tuple[MLModel, Valuation]:
    """The matching-logic image of the reference model."""
    sig = m0_signature()
    model = MLModel(
        sig,
        carriers={"s": ("a", "b"), "t": ("c", "d")},
        interp={"f": {("c",): {"a"}}},
    )
    return model, Valuation(sig, {"x": "a", "u": "c"})


def desk_signature() -> Signature:
    """Default signature for randomized sweeps and the CLI."""
    return Signature(
        sorts=("s", "t"),
        ops={
            "f": (("t",), "s"),
            "g": (("s", "s"), "s"),
            "h": (("s",), "t"),
            "c": ((), "t"),
        },
        props={"p": "s", "q": "t"},
        noms={"j": "s", "k": "t"},
        svars={"x": "s", "y": "s", "u": "t", "v": "t"},
    )
