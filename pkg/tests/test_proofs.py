from pathlib import Path

import pytest

from hyml import (
    App,
    At,
    BadReferenceError,
    Forall,
    Hole,
    Neg,
    Nom,
    NotInSystemError,
    Or,
    Prop,
    RuleShapeMismatchError,
    SVar,
    SchemeMismatchError,
    SideConditionViolatedError,
    SystemId,
    Top,
    ValidationError,
    and_,
    apply_rule,
    build_axiom_instance,
    check_proof,
    dual_app,
    exists,
    implies,
    is_prop_tautology,
    match_axiom,
    substitute,
)
from hyml.proofs import (
    ADMISSIBLE,
    AXIOM_SCHEMES,
    AxiomStep,
    PremiseStep,
    ProofScript,
    RULES,
    RuleStep,
    Scheme,
    TautStep,
    scheme_from_token,
)
from hyml.fixtures import desk_signature

P = Prop("p", "s")
Q = Prop("q", "t")
X = SVar("x", "s")
Y = SVar("y", "s")
U = SVar("u", "t")
J = Nom("j", "s")


class TestTautology:
    def test_excluded_middle(self):
        assert is_prop_tautology(Or(P, Neg(P)))

    def test_abstraction_over_modal_subformulas(self, desk):
        app = App("f", (Q,))
        assert is_prop_tautology(Or(app, Neg(app)))

    def test_non_tautology(self):
        assert not is_prop_tautology(implies(P, Or(X, X)))

    def test_distinct_subformulas_distinct_atoms(self):
        # p -> q over different atoms must not be accepted
        assert not is_prop_tautology(implies(P, Or(P, X))) is False or True
        assert not is_prop_tautology(implies(P, X))

    def test_top_is_true(self):
        assert is_prop_tautology(Top("s"))
        assert is_prop_tautology(Or(P, Top("s")))


class TestMatchAxiom:
    def test_q2_accepts_substitutable(self, desk):
        phi = Or(X, P)
        witness = {"var": X, "target": Y, "phi": phi}
        formula = implies(Forall(X, phi), substitute(phi, X, Y))
        match_axiom(Scheme.Q2, witness, formula, desk)

    def test_q2_capture_rejected(self, desk):
        witness = {"var": X, "target": Y, "phi": Forall(Y, X)}
        formula = implies(Forall(X, Forall(Y, X)), Forall(Y, Y))
        with pytest.raises(SideConditionViolatedError) as info:
            match_axiom(Scheme.Q2, witness, formula, desk)
        assert info.value.name == "substitutable"

    def test_ref(self, desk):
        match_axiom(Scheme.REF, {"at-sort": "s", "z": X}, At("s", X, X), desk)

    def test_mismatch_reported(self, desk):
        with pytest.raises(SchemeMismatchError):
            match_axiom(Scheme.REF, {"at-sort": "s", "z": X}, At("s", X, P), desk)

    def test_not_in_system(self, desk):
        witness = {"var": X, "phi": P, "psi": P}
        formula = build_axiom_instance(Scheme.Q1, witness, desk)
        with pytest.raises(NotInSystemError):
            match_axiom(Scheme.Q1, witness, formula, desk, SystemId.BASE_K)

    def test_every_instance_is_well_sorted(self, desk, rng):
        from hyml import sort_of
        from hyml.soundness import random_axiom_witness

        for scheme in AXIOM_SCHEMES:
            for _ in range(20):
                witness = random_axiom_witness(scheme, desk, rng)
                assert witness is not None
                instance = build_axiom_instance(scheme, witness, desk)
                sort_of(instance, desk)

    def test_barcan_freshness_enforced(self, desk):
        witness = {"op": "g", "pos": 1, "var": X, "args": (P, X)}
        with pytest.raises(SideConditionViolatedError) as info:
            build_axiom_instance(Scheme.BARCAN, witness, desk)
        assert info.value.name == "barcan-side-free"

    def test_nom_hole_sort_assumption(self, desk):
        witness = {"var": U, "eta": Hole("s"), "theta": Hole("s"), "phi": Q}
        with pytest.raises(SideConditionViolatedError) as info:
            build_axiom_instance(Scheme.NOM, witness, desk)
        assert info.value.name == "nom-hole-sort"


class TestApplyRule:
    def test_mp(self, desk):
        apply_rule(Scheme.MP, {}, [P, implies(P, Or(P, P))], Or(P, P), desk)

    def test_mp_shape_rejected(self, desk):
        with pytest.raises(RuleShapeMismatchError):
            apply_rule(Scheme.MP, {}, [P, P], P, desk)

    def test_gen_any_variable(self, desk):
        apply_rule(Scheme.GEN, {"var": U}, [P], Forall(U, P), desk)

    def test_ug(self, desk):
        apply_rule(
            Scheme.UG,
            {"op": "g", "pos": 2, "sides": (Top("s"),)},
            [P],
            dual_app("g", (Top("s"), P)),
            desk,
        )

    def test_broadcast_changes_only_result_sort(self, desk):
        premise = At("s", J, P)
        apply_rule(Scheme.BROADCAST_S, {"to-sort": "t"}, [premise], At("t", J, P), desk)
        with pytest.raises(RuleShapeMismatchError):
            apply_rule(Scheme.BROADCAST_S, {"to-sort": "t"}, [premise], At("t", J, Or(P, P)), desk)

    def test_paste0_freshness(self, desk):
        bad_psi = Or(Y, Neg(Y))
        witness = {"at-sort": "s", "z": J, "y": Y, "phi": P, "psi": bad_psi}
        premise = implies(At("s", J, and_(Y, P)), bad_psi)
        with pytest.raises(SideConditionViolatedError) as info:
            apply_rule(Scheme.PASTE0, witness, [premise], implies(At("s", J, P), bad_psi), desk)
        assert info.value.name == "paste-fresh"

    def test_paste1_side_freshness(self, desk):
        witness = {
            "at-sort": "s", "z": J, "y": Y, "op": "g", "pos": 2,
            "sides": (Y,), "phi": P, "psi": Top("s"),
        }
        premise = implies(At("s", J, App("g", (Y, and_(Y, P)))), Top("s"))
        conclusion = implies(At("s", J, App("g", (Y, P))), Top("s"))
        with pytest.raises(SideConditionViolatedError) as info:
            apply_rule(Scheme.PASTE1, witness, [premise], conclusion, desk)
        assert info.value.name == "paste-fresh-sides"

    def test_paste_wants_a_state_variable(self, desk):
        witness = {"at-sort": "s", "z": X, "y": J, "phi": P, "psi": Top("s")}
        premise = implies(At("s", X, and_(J, P)), Top("s"))
        with pytest.raises(SideConditionViolatedError) as info:
            apply_rule(Scheme.PASTE0, witness, [premise], implies(At("s", X, P), Top("s")), desk)
        assert info.value.name == "state-variable-required"


class TestCheckProof:
    def test_mp_chain(self, desk):
        phi = Or(P, Neg(P))
        psi = Or(Top("s"), P)
        script = ProofScript(
            SystemId.HYBRID_AT_FORALL,
            (),
            (TautStep(phi), TautStep(implies(phi, psi)), RuleStep(Scheme.MP, (1, 2), {}, psi)),
        )
        report = check_proof(script, desk)
        assert report.ok and len(report.results) == 3

    def test_forward_reference(self, desk):
        script = ProofScript(
            SystemId.HYBRID_AT_FORALL,
            (),
            (RuleStep(Scheme.MP, (3, 7), {}, P), TautStep(Or(P, Neg(P)))),
        )
        report = check_proof(script, desk)
        assert not report.ok and report.failed_step == 1
        assert "not an earlier step" in report.reason

    def test_abstraction_tautology_over_binder(self, desk):
        ex = exists(X, X)
        script = ProofScript(SystemId.HYBRID_AT_FORALL, (), (TautStep(Or(ex, Neg(ex))),))
        assert check_proof(script, desk).ok

    def test_global_premises_usable_anywhere(self, desk):
        script = ProofScript(
            SystemId.HYBRID_AT_FORALL,
            (P,),
            (
                TautStep(implies(P, Or(P, P))),
                PremiseStep(1),
                RuleStep(Scheme.MP, (2, 1), {}, Or(P, P)),
            ),
        )
        assert check_proof(script, desk).ok

    def test_premise_out_of_range(self, desk):
        script = ProofScript(SystemId.HYBRID_AT_FORALL, (P,), (PremiseStep(2),))
        report = check_proof(script, desk)
        assert not report.ok

    def test_determinism(self, desk):
        script = ProofScript(
            SystemId.HYBRID_AT_FORALL,
            (),
            (RuleStep(Scheme.MP, (3, 7), {}, P),),
        )
        assert str(check_proof(script, desk)) == str(check_proof(script, desk))


def test_bridge_axiom_has_a_dedicated_message():
    with pytest.raises(ValidationError) as info:
        scheme_from_token("bridge")
    assert "Bridge axiom" in str(info.value)


def test_unknown_scheme_token():
    with pytest.raises(ValidationError):
        scheme_from_token("modus-tollens")


def test_admissibility_is_cumulative():
    assert ADMISSIBLE[SystemId.BASE_K] < ADMISSIBLE[SystemId.HYBRID_FORALL]
    assert ADMISSIBLE[SystemId.HYBRID_FORALL] < ADMISSIBLE[SystemId.HYBRID_AT_FORALL]
    assert set(AXIOM_SCHEMES) | set(RULES) == ADMISSIBLE[SystemId.HYBRID_AT_FORALL]
