import random

import pytest

import corpus
from conftest import random_formula, random_lf, random_sigma
from efl.admissible import substitute_derivation, substitute_sequent, weaken
from efl.calculus import Derivation, Label, LabelTree, SystemConfig, TreeSequent, check_derivation, lf
from efl.fileformats import derivations_equal
from efl.parser import parse_formula as P
from efl.search import Proved, prove_formula
from efl.syntax import At, Nominal, Prop, UniformSubstitution

ROOT = Label(0)
NOCUT = SystemConfig(allow_cut=False)


def proved_corpus(count, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        res = prove_formula(random_formula(rng, rng.randint(3, 11), noms=("n", "m", "k")), NOCUT)
        if isinstance(res, Proved):
            out.append(res.derivation)
    return out


def test_weaken_id_node():
    T = LabelTree.single(0)
    x = lf(ROOT, At("n", Prop("p")))
    d = Derivation(TreeSequent(frozenset([x]), T, frozenset([x])), "id", {"formula": x})
    out = weaken(d, lf(ROOT, At("m", Prop("q"))), "left")
    assert out.rule == "id" and out.height == 0
    assert check_derivation(out).ok


def test_weaken_rigid_derivation_keeps_height():
    d = corpus.rigid_derivation()
    extra = lf(ROOT, At("n", Prop("p")))
    out = weaken(d, extra, "left")
    assert check_derivation(out, NOCUT).ok
    assert out.height == d.height
    assert out.conclusion.ant == d.conclusion.ant | {extra}
    # the box-right step keeps its child, nothing clashes
    assert [n.rule for _, n in out.nodes()] == [n.rule for _, n in d.nodes()]


def test_weaken_rejects_foreign_label():
    with pytest.raises(ValueError):
        weaken(corpus.rigid_derivation(), lf(ROOT.child("n", 5), At("n", Prop("p"))), "left")


def test_identity_substitution():
    d = corpus.dcom_derivation()
    assert derivations_equal(substitute_derivation(d, UniformSubstitution()), d)


def test_substitution_on_id_node():
    T = LabelTree.single(0)
    x = lf(ROOT, At("n", Prop("p")))
    d = Derivation(TreeSequent(frozenset([x]), T, frozenset([x])), "id", {"formula": x})
    out = substitute_derivation(d, UniformSubstitution({"p": Prop("q")}))
    y = lf(ROOT, At("n", Prop("q")))
    assert out.rule == "id" and out.principal["formula"] == y
    assert check_derivation(out).ok


def test_substitution_renames_captured_eigen_nominal():
    # find the FR eigen name first, then map another nominal onto it
    res = prove_formula(P("F (p -> p)"), NOCUT, nom="k")
    d = res.derivation
    eigen = next(n.principal["fresh"] for _, n in d.nodes() if n.rule == "FR")
    out = substitute_derivation(d, UniformSubstitution({}, {"k": eigen}))
    assert check_derivation(out, NOCUT).ok
    new_eigen = next(n.principal["fresh"] for _, n in out.nodes() if n.rule == "FR")
    assert new_eigen != eigen
    assert out.conclusion == substitute_sequent(d.conclusion, UniformSubstitution({}, {"k": eigen}))


def test_random_weakening_and_substitution():
    rng = random.Random(11)
    for d in proved_corpus(40):
        extra = random_lf(rng, d.conclusion.tree)
        side = rng.choice(["left", "right"])
        w = weaken(d, extra, side)
        assert check_derivation(w, NOCUT).ok
        assert w.height <= d.height
        sigma = random_sigma(rng)
        s = substitute_derivation(d, sigma)
        assert check_derivation(s, NOCUT).ok
        assert s.height <= d.height
        assert s.conclusion == substitute_sequent(d.conclusion, sigma)
