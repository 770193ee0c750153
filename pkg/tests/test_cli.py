import pytest

from hyml import parse_document, satisfies, valid_in_model
from hyml.cli import main
from hyml.fixtures import fixture_m0, m0_signature
from hyml.textio import render_formula, render_model, render_signature

M0_TEXT = "(model (worlds (s a b) (t c d)) (rel f (a c)) (val p (s a)) (nom j (s b)))"
SIG_TEXT = "(signature (sorts s t) (ops (f (t) s)) (props (p s)) (noms (j s)) (svars (u t) (x s)))"
P_TEXT = "(formula s (prop p))"


@pytest.fixture
def files(tmp_path):
    model = tmp_path / "m0.sexp"
    model.write_text(M0_TEXT)
    sig = tmp_path / "sig.sexp"
    sig.write_text(SIG_TEXT)
    formula = tmp_path / "p.sexp"
    formula.write_text(P_TEXT)
    return {"model": str(model), "sig": str(sig), "formula": str(formula), "dir": tmp_path}


class TestCheck:
    def test_true_world(self, files, capsys):
        code = main(["check", "--model", files["model"], "--formula", files["formula"],
                     "--world", "a", "--sig", files["sig"]])
        assert code == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_false_world(self, files, capsys):
        code = main(["check", "--model", files["model"], "--formula", files["formula"],
                     "--world", "b", "--sig", files["sig"]])
        assert code == 1
        assert capsys.readouterr().out.strip() == "false"

    def test_input_error(self, files, capsys):
        code = main(["check", "--model", files["model"], "--formula", files["formula"],
                     "--world", "zz", "--sig", files["sig"]])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_matches_library(self, files, capsys):
        model, g = fixture_m0()
        phi = parse_document("formula", P_TEXT, m0_signature())
        for world in ("a", "b"):
            code = main(["check", "--model", files["model"], "--formula", files["formula"],
                         "--world", world, "--sig", files["sig"]])
            capsys.readouterr()
            assert (code == 0) == satisfies(model, g, world, phi)


class TestValid:
    def test_verdicts_match_library(self, files, tmp_path, capsys):
        sig = m0_signature()
        model, _ = fixture_m0()
        for text in ("(formula s (or (prop p) (neg (prop p))))", P_TEXT):
            f = tmp_path / "phi.sexp"
            f.write_text(text)
            code = main(["valid", "--model", files["model"], "--formula", str(f),
                         "--sig", files["sig"]])
            capsys.readouterr()
            phi = parse_document("formula", text, sig)
            assert (code == 0) == valid_in_model(model, phi)


class TestTranslate:
    def test_both_directions_compose(self, files, tmp_path, capsys):
        code = main(["translate", "--dir", "hmodl2ml", "--model", files["model"],
                     "--sig", files["sig"]])
        assert code == 0
        ml_text, assign_text = capsys.readouterr().out.strip().splitlines()
        mlfile = tmp_path / "ml.sexp"
        mlfile.write_text(ml_text)
        afile = tmp_path / "a.sexp"
        afile.write_text(assign_text)
        code = main(["translate", "--dir", "ml2hmodl", "--model", str(mlfile),
                     "--assign", str(afile)])
        assert code == 0
        frame_text, assign2 = capsys.readouterr().out.strip().splitlines()
        model, _ = fixture_m0()
        assert parse_document("model", frame_text) == model.frame()
        assert assign2 == assign_text

    def test_formula_translation(self, files, capsys):
        code = main(["translate", "--dir", "hmodl2ml", "--model", files["model"],
                     "--sig", files["sig"], "--formula", files["formula"]])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4
        assert lines[3] == "(formula s (app c_p))"


class TestEquiv:
    def test_small_sweep_agrees(self, capsys):
        code = main(["equiv", "--max-depth", "2", "--max-size", "2"])
        assert code == 0
        out = capsys.readouterr().out
        assert "agreement 100%" in out


class TestProveCheck:
    def test_accepting_script(self, files, capsys, tmp_path):
        proof = tmp_path / "proof.sexp"
        proof.write_text(
            "(proof (system hybrid-at-forall) (premises) (steps"
            " (step 1 axiom ref ((at-sort s) (z x)) (at s x (svar x)))))"
        )
        code = main(["prove-check", "--proof", str(proof), "--sig", files["sig"]])
        assert code == 0
        assert "ok" in capsys.readouterr().out

    def test_rejecting_script(self, files, capsys, tmp_path):
        proof = tmp_path / "proof.sexp"
        proof.write_text(
            "(proof (system hybrid-at-forall) (premises) (steps"
            " (step 1 axiom ref ((at-sort s) (z x)) (at s x (prop p)))))"
        )
        code = main(["prove-check", "--proof", str(proof), "--sig", files["sig"]])
        assert code == 1
        assert "rejected" in capsys.readouterr().out

    def test_parse_error(self, files, capsys, tmp_path):
        proof = tmp_path / "proof.sexp"
        proof.write_text("(proof (system hybrid-at-forall)")
        code = main(["prove-check", "--proof", str(proof), "--sig", files["sig"]])
        assert code == 2


class TestValidateAxioms:
    def test_small_run_passes(self, capsys):
        code = main(["validate-axioms", "--samples", "4", "--models", "4",
                     "--seed", "7", "--max-size", "3"])
        assert code == 0
        out = capsys.readouterr().out
        assert "all schemes sound" in out
        for token in ("k-sigma", "paste1", "taut"):
            assert token in out

    def test_seed_required(self, capsys):
        assert main(["validate-axioms", "--samples", "2"]) == 2


class TestGenModel:
    def test_deterministic(self, capsys):
        main(["gen-model", "--seed", "11"])
        first = capsys.readouterr().out
        main(["gen-model", "--seed", "11"])
        assert capsys.readouterr().out == first
        main(["gen-model", "--seed", "12"])
        assert capsys.readouterr().out != first

    def test_output_parses_and_validates(self, capsys):
        main(["gen-model", "--seed", "5", "--max-size", "3", "--with-assignment"])
        model_text, assign_text = capsys.readouterr().out.strip().splitlines()
        model = parse_document("model", model_text)
        assert model.is_standard
        mapping = parse_document("assignment", assign_text)
        assert set(mapping) == set(model.sig.svars)

    def test_ml_kind(self, capsys):
        main(["gen-model", "--seed", "5", "--kind", "ml-model"])
        out = capsys.readouterr().out
        parse_document("ml-model", out.strip())


def test_color_env(files, capsys, monkeypatch):
    monkeypatch.setenv("HYML_COLOR", "always")
    main(["equiv", "--max-depth", "1", "--max-size", "1"])
    assert "\x1b[32m" in capsys.readouterr().out
    monkeypatch.setenv("HYML_COLOR", "never")
    main(["equiv", "--max-depth", "1", "--max-size", "1"])
    assert "\x1b[" not in capsys.readouterr().out
