from hypothesis import given

from conftest import formulas
from efl.syntax import (
    BOT,
    TOP,
    And,
    At,
    FBox,
    FDia,
    FreshNames,
    Implies,
    KBox,
    KDia,
    Nominal,
    Not,
    Prop,
    UniformSubstitution,
    apply_substitution,
    differs_by_nominal,
    friend_atom,
    match_friend_atom,
    nominals_of,
    substitute_agent,
    symbols_of,
)

p, q = Prop("p"), Prop("q")
n, m = Nominal("n"), Nominal("m")


def test_agent_substitution_examples():
    assert substitute_agent(At("k", p), "n", "k") == At("n", p)
    assert substitute_agent(Not(p), "n", "k") == Not(p)
    assert substitute_agent(At("k", FDia(Nominal("k"))), "n", "k") == At("n", FDia(n))


def test_uniform_substitution_examples():
    ident = UniformSubstitution()
    phi = Implies(At("n", p), KBox(q))
    assert apply_substitution(phi, ident) == phi
    s = UniformSubstitution({"p": KBox(q)})
    assert apply_substitution(And(p, n), s) == And(KBox(q), n)
    # simultaneous: the image of p is not rewritten again by the nominal map
    s = UniformSubstitution({"p": At("m", q)}, {"n": "m"})
    assert apply_substitution(At("n", p), s) == At("m", At("m", q))


def test_symbols():
    assert symbols_of(At("n", FDia(m))) == ({"n", "m"}, set())
    assert symbols_of(p) == (set(), {"p"})
    assert symbols_of(KBox(At("n", p))) == ({"n"}, {"p"})


def test_sugar_is_core():
    assert FDia(p) == Implies(FBox(Implies(p, BOT)), BOT)
    assert KDia(p) == Implies(KBox(Implies(p, BOT)), BOT)
    assert TOP == Implies(BOT, BOT)


def test_friend_atom_roundtrip():
    assert match_friend_atom(friend_atom("n", "m")) == ("n", "m")
    assert match_friend_atom(At("n", FBox(m))) is None


def test_differs_by_nominal():
    assert differs_by_nominal(At("n", FDia(n)), At("m", FDia(n)), "n", "m")
    assert not differs_by_nominal(At("n", p), At("m", q), "n", "m")
    assert not differs_by_nominal(At("m", p), At("n", p), "n", "m")


def test_fresh_names_avoid_used():
    f = FreshNames({"m0", "m2"})
    assert [f(), f(), f()] == ["m1", "m3", "m4"]


def test_formulas_are_immutable():
    try:
        p.name = "q"
    except AttributeError:
        return
    raise AssertionError("formula was mutated")


@given(formulas())
def test_identity_substitution_is_identity(phi):
    assert apply_substitution(phi, UniformSubstitution()) == phi


@given(formulas())
def test_renaming_removes_the_old_nominal(phi):
    out = substitute_agent(phi, "k", "n")
    assert "n" not in nominals_of(out)
    if "n" in nominals_of(phi):
        assert "k" in nominals_of(out)
    assert differs_by_nominal(phi, out, "n", "k") or phi == out


@given(formulas())
def test_size_counts_nodes(phi):
    assert phi.size() >= 1
    assert Implies(phi, phi).size() == 2 * phi.size() + 1
