import pytest
from hypothesis import given, settings

import corpus
import hilbert_samples
from conftest import formulas
from efl.calculus import Label, LabelTree, TreeSequent, lf
from efl.hilbert import (
    LBG,
    MP,
    US,
    Antecedent,
    AtBox,
    Axiom,
    HilbertProof,
    Name,
    NecAt,
    NecessityForm,
    check_hilbert,
    decompose_necessity_forms,
    formulaic_translation,
    hilbert_from_data,
    hilbert_to_data,
    instantiate_necessity_form,
)
from efl.parser import parse_formula as P
from efl.syntax import At, BOT, TOP, Implies, Prop, UniformSubstitution, friend_atom

p, q = Prop("p"), Prop("q")
ROOT = Label(0)


def test_ref_is_a_one_line_proof():
    assert check_hilbert(HilbertProof([(P("@'n 'n"), Axiom("Ref"))])).ok


@pytest.mark.parametrize("name,text", sorted(corpus.AXIOM_TEXT.items()))
def test_each_axiom_instance_checks(name, text):
    assert check_hilbert(HilbertProof([(P(text), Axiom(name))])).ok


def test_axiom_with_substitution():
    phi = P("@'k (r -> q) -> @'k r -> @'k q")
    just = Axiom("K_at", UniformSubstitution({"p": Prop("r")}, {"n": "k"}))
    assert check_hilbert(HilbertProof([(phi, just)])).ok
    assert not check_hilbert(HilbertProof([(phi, Axiom("K_at"))])).ok


def test_non_tautology_rejected():
    res = check_hilbert(HilbertProof([(P("p -> q"), Axiom("Taut"))]))
    assert not res.ok and res.violations[0].line == 0


def test_name_needs_fresh_nominal():
    # 'n -> @'n 'n gives @'n 'n, but 'n occurs in it
    lines = [
        (P("@'n 'n"), Axiom("Ref")),
        (P("@'n 'n -> 'n -> @'n 'n"), Axiom("Taut")),
        (P("'n -> @'n 'n"), MP(0, 1)),
        (P("@'n 'n"), Name(2, "n")),
    ]
    res = check_hilbert(HilbertProof(lines))
    assert [v.line for v in res.violations] == [3]
    assert "fresh" in res.violations[0].message


def test_name_with_fresh_nominal():
    lines = [
        (P("p -> p"), Axiom("Taut")),
        (P("(p -> p) -> 'k -> p -> p"), Axiom("Taut")),
        (P("'k -> p -> p"), MP(0, 1)),
        (P("p -> p"), Name(2, "k")),
    ]
    assert check_hilbert(HilbertProof(lines)).ok


def test_mp_order_matters():
    lines = [(P("p -> p"), Axiom("Taut")), (P("(p -> p) -> q -> q"), Axiom("Taut")), (P("q -> q"), MP(1, 0))]
    assert not check_hilbert(HilbertProof(lines)).ok


def test_forward_reference_rejected():
    assert not check_hilbert(HilbertProof([(P("@'n (p -> p)"), NecAt(0, "n"))])).ok


def test_lbg_rejects_non_fresh_witness():
    PP = Implies(p, p)
    lines = [
        (PP, Axiom("Taut")),
        (At("n", PP), NecAt(0, "n")),
        (Implies(At("n", PP), Implies(friend_atom("n", "n"), At("n", PP))), Axiom("Taut")),
        (Implies(friend_atom("n", "n"), At("n", PP)), MP(1, 2)),
        (P("@'n F (p -> p)"), LBG(3, NecessityForm(()), "n", "n", PP)),
    ]
    res = check_hilbert(HilbertProof(lines))
    assert [v.line for v in res.violations] == [4]


@pytest.mark.parametrize("make", [
    hilbert_samples.sample_proof,
    hilbert_samples.nested_lbg_proof,
    lambda: hilbert_samples.lemma_proof("at_absorb"),
    lambda: hilbert_samples.lemma_proof("nominal_local"),
], ids=["sample", "nested", "at_absorb", "nominal_local"])
def test_sample_proofs_check(make):
    proof = make()
    res = check_hilbert(proof)
    assert res.ok, res.report()


def test_derived_item_conclusions():
    assert hilbert_samples.lemma_proof("at_absorb").conclusion == P(corpus.DERIVED_TEXT[0])
    assert hilbert_samples.lemma_proof("nominal_local").conclusion == P(corpus.DERIVED_TEXT[1])


def test_sample_proof_uses_every_rule_kind():
    kinds = {type(j).__name__ for _, j in hilbert_samples.sample_proof().lines}
    assert kinds == {"Axiom", "MP", "NecAt", "NecBox", "NecF", "LBG", "US", "Name"}


def test_necessity_form_instantiate():
    L = NecessityForm((Antecedent(P("r")), AtBox("n"), Antecedent(q), AtBox("m")))
    assert instantiate_necessity_form(L, p) == P("r -> @'n [] (q -> @'m [] p)")
    assert instantiate_necessity_form(NecessityForm(()), p) == p


def test_necessity_form_decompose():
    chi = P("r -> @'n [] (q -> @'m [] p)")
    parts = decompose_necessity_forms(chi)
    assert len(parts) == 5
    assert parts[0] == (NecessityForm(()), chi)
    assert parts[-1][1] == p
    for L, core in parts:
        assert instantiate_necessity_form(L, core) == chi


@settings(max_examples=200, deadline=None)
@given(formulas(max_leaves=8))
def test_decompose_inverts_instantiate(phi):
    for L, core in decompose_necessity_forms(phi):
        assert instantiate_necessity_form(L, core) == phi


def test_bad_necessity_step():
    with pytest.raises(TypeError):
        NecessityForm(("n",))


@pytest.mark.parametrize("make", [hilbert_samples.sample_proof, hilbert_samples.nested_lbg_proof])
def test_json_roundtrip(make):
    proof = make()
    assert hilbert_from_data(hilbert_to_data(proof)) == proof


def test_us_roundtrip_with_nominal_map():
    proof = HilbertProof([
        (P("@'n (p -> p)"), Axiom("Taut")),
        (P("@'k (q -> q)"), US(0, UniformSubstitution({"p": q}, {"n": "k"}))),
    ])
    assert hilbert_from_data(hilbert_to_data(proof)) == proof


def test_sample_tree_translation():
    assert formulaic_translation(corpus.sample_tree_sequent()) == corpus.sample_tree_translation()


def test_empty_sequent_translation():
    S = TreeSequent(frozenset(), LabelTree.single(0), frozenset())
    assert formulaic_translation(S) == Implies(TOP, BOT)


def test_leaf_translation():
    S = corpus.sample_tree_sequent()
    leaf = ROOT.child("n", 1)
    assert formulaic_translation(S, leaf) == Implies(TOP, At("k", Prop("theta")))


def test_single_formula_translation():
    x = lf(ROOT, At("n", p))
    S = TreeSequent(frozenset([x]), LabelTree.single(0), frozenset([x]))
    assert formulaic_translation(S) == Implies(At("n", p), At("n", p))
