import pytest
from hypothesis import given

from conftest import formulas
from efl.parser import ParseError, parse_formula, parse_nominal, render_formula, render_nominal
from efl.syntax import BOT, At, FDia, Implies, KBox, Nominal, Not, Prop

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_parse_examples():
    assert parse_formula("@'n [] p") == At("n", KBox(p))
    assert parse_formula("@'n <F> 'm") == At("n", FDia(Nominal("m")))
    assert parse_formula("p -> q -> r") == Implies(p, Implies(q, r))


def test_render_examples():
    assert render_formula(At("n", KBox(p))) == "@'n [] p"
    assert render_formula(BOT) == "false"
    assert render_formula(Not(p)) == "p -> false"
    assert render_formula(Not(p), sugar=True) == "!p"


def test_unary_binds_tighter_than_binary():
    assert parse_formula("[] p -> q") == Implies(KBox(p), q)
    assert parse_formula("@'n p -> q") == Implies(At("n", p), q)
    assert parse_formula("(p -> q) -> r") == Implies(Implies(p, q), r)


def test_nominals():
    assert parse_nominal("'abc1") == "abc1"
    assert render_nominal("abc1") == "'abc1"
    assert parse_nominal("abc") == "abc"  # the apostrophe is optional here
    with pytest.raises(ParseError):
        parse_nominal("'Abc")


@pytest.mark.parametrize("text", ["", "p ->", "(p", "p q", "@p q", "'N", "p ~ q", "[]", "@'n"])
def test_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_error_carries_span():
    with pytest.raises(ParseError) as e:
        parse_formula("p -> ~")
    assert e.value.span is not None
    assert e.value.span.start == 5


@given(formulas(max_leaves=12))
def test_core_roundtrip(phi):
    assert parse_formula(render_formula(phi)) == phi


@given(formulas(max_leaves=12))
def test_sugar_roundtrip(phi):
    assert parse_formula(render_formula(phi, sugar=True)) == phi


@given(formulas(max_leaves=12))
def test_render_is_stable(phi):
    text = render_formula(phi)
    assert render_formula(parse_formula(text)) == text
