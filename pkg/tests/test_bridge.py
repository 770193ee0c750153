import itertools
import random

import pytest

from hyml import (
    App,
    Assignment,
    At,
    Defined,
    KripkeStructure,
    MLModel,
    Neg,
    Nom,
    NotForm0Error,
    Or,
    Prop,
    SVar,
    Top,
    Valuation,
    and_,
    check_prop_equiv,
    check_thm_ml2_semantic,
    encode_at,
    encode_definedness,
    exists,
    extend_signature,
    free_svars,
    hmodl_of_ml,
    ml_of_hmodl,
    ml_satisfies,
    random_model,
    satisfies,
    sort_of,
    translate_formula,
    valid_in_model,
)
from hyml.fixtures import desk_signature, fixture_m0, fixture_m0_ml, m0_signature
from hyml.soundness import random_formula, split_seed

X = SVar("x", "s")
U = SVar("u", "t")
P = Prop("p", "s")
J = Nom("j", "s")


class TestModelMaps:
    def test_constant_becomes_unary_relation(self, desk):
        model = MLModel(desk, {"s": ("a",), "t": ("c", "d")}, {"c": {(): {"d"}}})
        frame, _ = hmodl_of_ml(model)
        assert frame.rels["c"] == {("d",)}

    def test_fixture_maps_to_reference_frame(self, m0_ml, m0):
        mlmodel, rho = m0_ml
        frame, g = hmodl_of_ml(mlmodel, rho)
        model, g0 = m0
        assert frame.rels == model.rels
        assert frame.worlds == model.worlds
        assert g == g0

    def test_empty_interpretation_gives_empty_relation(self, sig):
        model = MLModel(sig, {"s": ("a",), "t": ("c",)}, {})
        frame, _ = hmodl_of_ml(model)
        assert frame.rels["f"] == frozenset()

    def test_round_trip_from_frames(self, desk):
        for i in range(200):
            model, g = random_model(desk, 4, split_seed(101, i))
            frame = model.frame()
            back, g2 = hmodl_of_ml(*ml_of_hmodl(frame, g))
            assert back == frame and g2 == g

    def test_round_trip_from_ml_models(self, desk):
        for i in range(200):
            model, g = random_model(desk, 4, split_seed(102, i))
            mlmodel, rho = ml_of_hmodl(model.frame(), g)
            again, rho2 = ml_of_hmodl(*hmodl_of_ml(mlmodel, rho))
            assert again == mlmodel and rho2 == rho


class TestPropEquiv:
    def test_name_shape_agrees(self, m0_ml):
        model, _ = m0_ml
        report = check_prop_equiv(exists(X, X), model)
        assert report.agree and report.checked == 1

    def test_bare_variable_agrees(self, m0_ml):
        model, _ = m0_ml
        report = check_prop_equiv(X, model)
        assert report.agree

    def test_requires_form0(self, m0_ml):
        model, _ = m0_ml
        with pytest.raises(NotForm0Error):
            check_prop_equiv(P, model)

    def test_single_valuation_mode(self, m0_ml):
        model, rho = m0_ml
        report = check_prop_equiv(App("f", (U,)), model, rho)
        assert report.checked == 1 and report.agree


class TestEncodings:
    def test_encode_at_shape(self, sig):
        out = encode_at(At("s", X, P), sig)
        assert out == Defined("s", and_(X, P))

    def test_encode_at_nominal_subscript(self, sig):
        out = encode_at(At("s", J, P), sig)
        assert out == Defined("s", and_(J, P))

    def test_encode_definedness_picks_fresh_variable(self, desk):
        out = encode_definedness(Defined("s", Prop("q", "t")), desk)
        assert out == exists(U, At("s", U, Prop("q", "t")))

    def test_jump_equals_definedness_form(self, desk):
        rng = random.Random(71)
        reserve = frozenset(("y", "v"))
        for i in range(200):
            model, g = random_model(desk, 3, split_seed(71, i))
            z = rng.choice(
                [Nom("j", "s"), Nom("k", "t"), SVar("x", "s"), SVar("u", "t")]
            )
            phi = random_formula(desk, rng, z.sort, 2, avoid=reserve)
            jump = At("s", z, phi)
            encoded = encode_at(jump, desk)
            for w in sorted(model.worlds["s"]):
                assert satisfies(model, g, w, jump) == satisfies(model, g, w, encoded)

    def test_definedness_equals_jump_form(self, desk):
        rng = random.Random(72)
        reserve = frozenset(("y", "v"))
        for i in range(200):
            model, g = random_model(desk, 3, split_seed(72, i))
            body = random_formula(desk, rng, depth=2, avoid=reserve)
            sort = rng.choice(desk.sorts)
            defd = Defined(sort, body)
            encoded = encode_definedness(defd, desk)
            for w in sorted(model.worlds[sort]):
                assert satisfies(model, g, w, defd) == satisfies(model, g, w, encoded)

    def test_double_encoding_round_trip(self, desk):
        rng = random.Random(73)
        reserve = frozenset(("y", "v"))
        for i in range(150):
            model, g = random_model(desk, 3, split_seed(73, i))
            z = rng.choice([SVar("x", "s"), SVar("u", "t")])
            phi = random_formula(desk, rng, z.sort, 2, avoid=reserve)
            jump = At("s", z, phi)
            back = encode_definedness(encode_at(jump, desk), desk)
            for w in sorted(model.worlds["s"]):
                assert satisfies(model, g, w, jump) == satisfies(model, g, w, back)


class TestExtendedSignature:
    def test_shape(self, sig):
        ext = extend_signature(sig)
        assert set(ext.extended.ops) == {"f", "c_p", "c_j"}
        assert ext.extended.props == {} and ext.extended.noms == {}
        assert ext.extended.svars == sig.svars
        assert len(ext.gamma_prime) == 1

    def test_constant_names_fresh(self):
        from hyml import Signature

        clash = Signature(
            ("s",),
            {"c_p": ((), "s")},
            props={"p": "s"},
            noms={"j": "s"},
            svars={"x": "s"},
        )
        ext = extend_signature(clash)
        assert ext.prop_consts["p"] != "c_p"


class TestTranslation:
    def test_atoms_become_constants(self, sig):
        ext = extend_signature(sig)
        out = translate_formula(Or(P, J), ext)
        assert out == Or(App("c_p", ()), App("c_j", ()))

    def test_variables_untouched(self, sig):
        ext = extend_signature(sig)
        assert translate_formula(X, ext) == X

    def test_jump_translates_through_definedness(self, sig):
        ext = extend_signature(sig)
        out = translate_formula(At("s", X, P), ext)
        assert out == Defined("s", and_(X, App("c_p", ())))

    def test_preserves_sort_and_free_variables(self, desk):
        rng = random.Random(74)
        ext = extend_signature(desk)
        for _ in range(100):
            phi = random_formula(desk, rng, depth=3)
            out = translate_formula(phi, ext)
            assert sort_of(out, ext.extended) == sort_of(phi, desk)
            assert free_svars(out) == free_svars(phi)


class TestTranslationSemantics:
    def test_gamma_holds_on_fixture(self, m0):
        model, g = m0
        report = check_thm_ml2_semantic(model, g, P)
        assert report.gamma_ok

    def test_tautology_translates_to_validity(self, m0):
        model, g = m0
        report = check_thm_ml2_semantic(model, g, Or(P, Neg(P)))
        assert report.agree and report.hybrid_valid and report.ml_valid

    def test_prop_agrees_both_false(self, m0):
        model, g = m0
        report = check_thm_ml2_semantic(model, g, P)
        assert report.agree and not report.hybrid_valid

    def test_random_sweep(self, desk):
        rng = random.Random(75)
        for i in range(100):
            model, g = random_model(desk, 3, split_seed(75, i))
            phi = random_formula(desk, rng, depth=3, avoid=frozenset(("y", "v")))
            report = check_thm_ml2_semantic(model, g, phi)
            assert report.gamma_ok
            assert report.hybrid_valid == report.ml_valid
            assert report.pointwise_agree
