import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyml import (
    SexprSyntaxError,
    ValidationError,
    parse_document,
    render_document,
)
from hyml.fixtures import desk_signature, fixture_m0, m0_signature
from hyml.sexpr import SAtom, SList, parse_many, parse_sexpr, render_sexpr
from hyml.textio import (
    parse_formula_body,
    render_formula,
    render_formula_body,
    render_model,
)

from docgen import random_document

KINDS = ("signature", "formula", "model", "ml-model", "assignment", "proof")


class TestSexpr:
    def test_nesting_and_comments(self):
        node = parse_sexpr("(a (b c) ; trailing\n d)")
        assert isinstance(node, SList) and len(node) == 3

    def test_positions(self):
        node = parse_sexpr("(a\n  (b))")
        inner = node[1]
        assert (inner.line, inner.col) == (2, 3)

    def test_unclosed(self):
        with pytest.raises(SexprSyntaxError):
            parse_sexpr("(a (b)")

    def test_unmatched_close(self):
        with pytest.raises(SexprSyntaxError):
            parse_sexpr("(a))")

    def test_exactly_one_form(self):
        with pytest.raises(SexprSyntaxError):
            parse_sexpr("(a) (b)")
        assert len(parse_many("(a) (b)")) == 2

    def test_render_rejects_bad_atoms(self):
        with pytest.raises(SexprSyntaxError):
            render_sexpr(("a b",))


class TestFormulaDocuments:
    def test_spec_round_trip(self, sig):
        text = "(formula s (or (prop p) (neg (prop p))))"
        phi = parse_document("formula", text, sig)
        assert render_formula(phi, sig) == text

    def test_sugar_normalizes(self, sig):
        sweet = parse_document("formula", "(formula s (implies (prop p) (prop p)))", sig)
        plain = parse_document(
            "formula", "(formula s (or (neg (prop p)) (prop p)))", sig
        )
        assert sweet == plain

    def test_undeclared_symbol_is_validation_error(self, sig):
        with pytest.raises(ValidationError):
            parse_document("formula", "(formula s (forall (x s) (svar q)))", sig)

    def test_sort_claim_checked(self, sig):
        with pytest.raises(ValidationError):
            parse_document("formula", "(formula t (prop p))", sig)

    def test_errors_carry_position(self, sig):
        with pytest.raises(ValidationError) as info:
            parse_document("formula", "(formula s\n  (svar nope))", sig)
        assert info.value.line == 2

    def test_hole_needs_permission(self, sig):
        with pytest.raises(ValidationError):
            parse_document("formula", "(formula s (hole s))", sig)
        ctx = parse_formula_body(parse_sexpr("(app f (hole t))"), sig, allow_hole=True)
        assert render_formula_body(ctx) == "(app f (hole t))"

    def test_binder_and_jump_round_trip(self, sig):
        text = "(formula s (forall (u t) (at s j (svar x))))"
        phi = parse_document("formula", text, sig)
        assert render_formula(phi, sig) == text


class TestModelDocuments:
    def test_spec_fixture_parses(self, sig, m0):
        model, _ = m0
        text = "(model (worlds (s a b) (t c d)) (rel f (a c)) (val p (s a)) (nom j (s b)))"
        assert parse_document("model", text, sig) == model

    def test_inference_without_signature(self, m0):
        model, _ = m0
        text = "(model (worlds (s a b) (t c d)) (rel f (a c)) (val p (s a)) (nom j (s b)))"
        inferred = parse_document("model", text)
        assert inferred.worlds == model.worlds
        assert inferred.rels == model.rels
        assert inferred.val == model.val
        assert inferred.sig.svars == {}

    def test_canonical_embeds_signature(self, m0):
        model, _ = m0
        text = render_model(model)
        assert text.startswith("(model (signature ")
        assert parse_document("model", text) == model

    def test_frame_documents_skip_standardness(self, m0):
        model, _ = m0
        frame = model.frame()
        text = render_model(frame)
        assert parse_document("model", text) == frame

    def test_nonstandard_model_rejected(self, sig):
        text = "(model (worlds (s a b) (t c)) (rel f (a c)) (val p (s a)) (nom j (s a b)))"
        with pytest.raises(ValidationError):
            parse_document("model", text, sig)

    def test_missing_nominal_rejected(self, sig):
        text = "(model (worlds (s a) (t c)) (val p (s a)))"
        with pytest.raises(ValidationError):
            parse_document("model", text, sig)

    def test_ambiguous_world_inference_rejected(self):
        text = "(model (worlds (s a) (t a)) (rel f (a a)))"
        with pytest.raises(ValidationError):
            parse_document("model", text)

    def test_signature_disagreement_rejected(self, sig, desk):
        from hyml.textio import render_signature
        text = f"(model {render_signature(desk)} (worlds (s a) (t c)) (nom j (s a)) (nom k (t c)) (val p (s a)) (val q (t)))"
        with pytest.raises(ValidationError):
            parse_document("model", text, sig)


class TestRoundTrips:
    @pytest.mark.parametrize("kind", KINDS)
    def test_random_documents_reach_a_fixpoint(self, kind):
        rng = random.Random(hash(kind) & 0xFFFF)
        for _ in range(150):
            obj, sig = random_document(kind, rng)
            text = render_document(kind, obj, sig)
            parsed = parse_document(kind, text, sig)
            again = render_document(kind, parsed, sig)
            assert again == text
            assert parse_document(kind, again, sig) == parsed

    @given(st.integers(0, 100_000), st.integers(0, 3))
    @settings(max_examples=150, deadline=None)
    def test_formula_documents_round_trip(self, seed, depth):
        from hyml.soundness import random_formula

        sig = desk_signature()
        phi = random_formula(sig, random.Random(seed), depth=depth)
        text = render_formula(phi, sig)
        assert parse_document("formula", text, sig) == phi


def test_unknown_kind_rejected():
    with pytest.raises(ValidationError):
        parse_document("diagram", "(x)")


def test_formula_requires_signature():
    with pytest.raises(ValidationError):
        parse_document("formula", "(formula s (top s))")
