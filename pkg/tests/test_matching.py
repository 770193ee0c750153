import itertools
import random

import pytest

from hyml import (
    App,
    Defined,
    Forall,
    MLModel,
    Neg,
    Or,
    Prop,
    SVar,
    Signature,
    SortMismatchError,
    Top,
    UnboundVariableError,
    ValidationError,
    Valuation,
    and_,
    bot,
    equality_eval,
    equals,
    evaluate,
    exists,
    free_svars,
    is_pattern,
    ml_satisfies,
    pointwise_extend,
    sort_of,
    total,
    totality_eval,
)
from hyml.fixtures import desk_signature, fixture_m0_ml, m0_signature
from hyml.soundness import enumerate_ml_models, random_pattern, split_seed

X = SVar("x", "s")
U = SVar("u", "t")


def oracle_membership(model, rho, phi, element):
    """Independent pointwise evaluator: decide membership directly instead of
    composing extension sets."""
    if isinstance(phi, SVar):
        return element == rho[phi.name]
    if isinstance(phi, Top):
        return element in model.carriers[phi.sort]
    if isinstance(phi, Neg):
        return not oracle_membership(model, rho, phi.body, element)
    if isinstance(phi, Or):
        return oracle_membership(model, rho, phi.left, element) or oracle_membership(
            model, rho, phi.right, element
        )
    if isinstance(phi, App):
        decl = model.sig.ops[phi.op]
        for combo in itertools.product(
            *[sorted(model.carriers[s]) for s in decl.arg_sorts]
        ):
            if element not in model.interp_of(phi.op, combo):
                continue
            if all(
                oracle_membership(model, rho, arg, value)
                for arg, value in zip(phi.args, combo)
            ):
                return True
        return False
    if isinstance(phi, Forall):
        return all(
            oracle_membership(model, dict(rho, **{phi.var.name: a}), phi.body, element)
            for a in sorted(model.carriers[phi.var.sort])
        )
    if isinstance(phi, Defined):
        bsort = sort_of(phi.body, model.sig)
        return any(
            oracle_membership(model, rho, phi.body, b)
            for b in sorted(model.carriers[bsort])
        )
    raise AssertionError(phi)


class TestModelInvariants:
    def test_empty_carrier_rejected(self, sig):
        with pytest.raises(ValidationError):
            MLModel(sig, {"s": ("a",), "t": ()})

    def test_output_outside_carrier(self, sig):
        with pytest.raises(ValidationError):
            MLModel(sig, {"s": ("a",), "t": ("c",)}, {"f": {("c",): {"zz"}}})

    def test_empty_outputs_normalized_away(self, sig):
        a = MLModel(sig, {"s": ("a",), "t": ("c",)}, {"f": {("c",): set()}})
        b = MLModel(sig, {"s": ("a",), "t": ("c",)}, {})
        assert a == b


class TestPointwiseExtension:
    def test_empty_argument(self, m0_ml):
        model, _ = m0_ml
        assert pointwise_extend(model, "f", [frozenset()]) == frozenset()

    def test_singleton(self, m0_ml):
        model, _ = m0_ml
        assert pointwise_extend(model, "f", [{"c"}]) == {"a"}

    def test_union(self, m0_ml):
        model, _ = m0_ml
        assert pointwise_extend(model, "f", [{"c", "d"}]) == {"a"}

    def test_constant(self, desk):
        model = MLModel(
            desk,
            {"s": ("a",), "t": ("c", "d")},
            {"c": {(): {"d"}}},
        )
        assert pointwise_extend(model, "c", []) == {"d"}

    def test_sort_checked(self, m0_ml):
        model, _ = m0_ml
        with pytest.raises(SortMismatchError):
            pointwise_extend(model, "f", [{"a"}])


class TestEvaluate:
    def test_variable_is_singleton(self, m0_ml):
        model, rho = m0_ml
        assert evaluate(model, rho, U) == {"c"}

    def test_application_and_complement(self, m0_ml):
        model, rho = m0_ml
        app = App("f", (Top("t"),))
        assert evaluate(model, rho, app) == {"a"}
        assert evaluate(model, rho, Neg(app)) == {"b"}

    def test_definedness(self, m0_ml):
        model, rho = m0_ml
        assert evaluate(model, rho, Defined("t", App("f", (Top("t"),)))) == {"c", "d"}
        assert evaluate(model, rho, Defined("t", bot("s"))) == frozenset()

    def test_unbound_variable(self, m0_ml):
        model, _ = m0_ml
        with pytest.raises(UnboundVariableError):
            evaluate(model, Valuation(model.sig, {}), X)

    def test_patterns_only(self, m0_ml):
        model, rho = m0_ml
        with pytest.raises(ValidationError):
            evaluate(model, rho, Prop("p", "s"))

    def test_forall_is_intersection(self, m0_ml):
        # the implementation derives the universal from the existential; the
        # intersection reading must coincide
        model, rho = m0_ml
        body = App("f", (U,))
        derived = evaluate(model, rho, Forall(U, body))
        expected = frozenset(model.carriers["s"])
        for a in sorted(model.carriers["t"]):
            expected &= evaluate(model, rho.with_value(U, a), body)
        assert derived == expected


class TestGlobalSatisfaction:
    def test_tautology(self, m0_ml):
        model, _ = m0_ml
        assert ml_satisfies(model, Or(X, Neg(X)))

    def test_variable_fails_on_larger_carriers(self, m0_ml):
        model, _ = m0_ml
        assert not ml_satisfies(model, X)

    def test_existential_covers_carrier(self, m0_ml):
        model, _ = m0_ml
        assert ml_satisfies(model, exists(X, X))


class TestEqualityAndTotality:
    def test_reflexive(self, m0_ml):
        model, rho = m0_ml
        phi = App("f", (U,))
        assert equality_eval(model, rho, phi, phi, "t") == model.carriers["t"]

    def test_variable_equals_constant(self, sig):
        ext = Signature(
            sig.sorts,
            {**{n: (d.arg_sorts, d.result) for n, d in sig.ops.items()},
             "cj": ((), "s")},
            sig.props,
            sig.noms,
            sig.svars,
        )
        model = MLModel(
            ext,
            {"s": ("a", "b"), "t": ("c",)},
            {"cj": {(): {"b"}}},
        )
        rho = Valuation(ext, {"x": "b"})
        assert equality_eval(model, rho, X, App("cj", ()), "s") == model.carriers["s"]
        rho2 = Valuation(ext, {"x": "a"})
        assert equality_eval(model, rho2, X, App("cj", ()), "s") == frozenset()

    def test_top_never_equals_bottom(self, m0_ml):
        model, rho = m0_ml
        assert equality_eval(model, rho, Top("s"), bot("s"), "t") == frozenset()

    def test_sort_mismatch(self, m0_ml):
        model, rho = m0_ml
        with pytest.raises(SortMismatchError):
            equality_eval(model, rho, Top("s"), Top("t"), "s")

    def test_totality_full_iff_body_full(self, desk):
        rng = random.Random(61)
        models = list(enumerate_ml_models(m0_signature(), 2))
        for model in models[:20]:
            phi = random_pattern(m0_signature(), rng, "s", 2)
            rho = Valuation(model.sig, {
                "x": sorted(model.carriers["s"])[0],
                "u": sorted(model.carriers["t"])[0],
            })
            full = evaluate(model, rho, phi) == model.carriers["s"]
            assert (totality_eval(model, rho, phi, "t") == model.carriers["t"]) == full


class TestAgainstOracle:
    def test_pointwise_oracle_agreement(self):
        sig = m0_signature()
        rng = random.Random(62)
        count = 0
        for index, model in enumerate(enumerate_ml_models(sig, 2)):
            for _ in range(12):
                phi = random_pattern(sig, rng, depth=4 if index % 3 else 2)
                sort = sort_of(phi, sig)
                frees = sorted(free_svars(phi), key=lambda v: v.name)
                domains = [sorted(model.carriers[v.sort]) for v in frees]
                for combo in itertools.product(*domains):
                    rho_map = {v.name: e for v, e in zip(frees, combo)}
                    ext = evaluate(model, Valuation(sig, rho_map), phi)
                    for element in sorted(model.carriers[sort]):
                        assert (element in ext) == oracle_membership(
                            model, rho_map, phi, element
                        )
                        count += 1
        assert count > 500

    def test_valuation_agreement_analog(self):
        sig = m0_signature()
        rng = random.Random(63)
        for model in itertools.islice(enumerate_ml_models(sig, 2), 10):
            for _ in range(10):
                phi = random_pattern(sig, rng, depth=3)
                frees = {v.name for v in free_svars(phi)}
                base = {
                    "x": rng.choice(sorted(model.carriers["s"])),
                    "u": rng.choice(sorted(model.carriers["t"])),
                }
                other = dict(base)
                for name in other:
                    if name not in frees:
                        other[name] = rng.choice(sorted(model.carriers[sig.svars[name]]))
                assert evaluate(model, Valuation(sig, base), phi) == evaluate(
                    model, Valuation(sig, other), phi
                )


class TestFunctionalPatternCriterion:
    def test_singleton_iff_functional(self):
        # over every interpretation of one constant, the existential equality
        # pattern holds exactly when the constant denotes a singleton
        sig = Signature(
            ("s",), {"k": ((), "s")}, {}, {}, {"x": "s"}
        )
        carrier = ("a", "b")
        x = SVar("x", "s")
        pattern = exists(x, equals("s", x, App("k", ())))
        for mask in itertools.product((False, True), repeat=len(carrier)):
            out = {c for c, keep in zip(carrier, mask) if keep}
            model = MLModel(sig, {"s": carrier}, {"k": {(): out}})
            assert ml_satisfies(model, pattern) == (len(out) == 1)


def test_is_pattern():
    assert is_pattern(Or(X, Neg(X)))
    assert not is_pattern(Prop("p", "s"))
    from hyml import At, Nom

    assert not is_pattern(At("s", Nom("j", "s"), X))
