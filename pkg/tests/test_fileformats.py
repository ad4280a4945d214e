import json
from pathlib import Path

import pytest

import corpus
from efl import fileformats as ff
from efl.calculus import Label, SystemConfig, check_derivation

GOLDEN = Path(__file__).parent / "golden"


def parse_model_file(text):
    # countermodel files carry an assignment next to the model
    if "assignment" in json.loads(text):
        return ff.parse_countermodel(text)
    return ff.parse_model(text)


def render_model_file(obj):
    return ff.render_countermodel(*obj) if isinstance(obj, tuple) else ff.render_model(obj)


KINDS = {
    "models": (parse_model_file, render_model_file),
    "sequents": (ff.parse_sequent, ff.render_sequent),
    "derivations": (ff.parse_derivation, ff.render_derivation),
    "proofs": (ff.parse_hilbert, ff.render_hilbert),
}


def golden_files():
    return sorted((k, p) for k in KINDS for p in (GOLDEN / k).glob("*.json"))


@pytest.mark.parametrize("kind,path", golden_files(), ids=lambda x: getattr(x, "stem", x))
def test_golden_roundtrip(kind, path):
    parse, render = KINDS[kind]
    text = path.read_text().rstrip("\n")
    obj = parse(text)
    assert render(obj) == text
    again = parse(render(obj))
    if kind == "derivations":
        assert ff.derivations_equal(again, obj)
    else:
        assert again == obj


def test_golden_corpus_is_complete():
    counts = {k: len(list((GOLDEN / k).glob("*.json"))) for k in KINDS}
    assert all(v > 0 for v in counts.values()), counts


def test_minimal_model():
    M = ff.parse_model('{"version": 1, "worlds": [0], "agents": ["a"]}')
    assert len(M.worlds) == 1 and len(M.agents) == 1


def test_sample_tree_sequent_file():
    S = ff.parse_sequent((GOLDEN / "sequents" / "sample_tree.json").read_text())
    root = Label(0)
    assert S.tree.labels == {root, root.child("n", 1), root.child("k", 2)}
    assert S == corpus.sample_tree_sequent()


def test_undeclared_world_error_has_path():
    text = json.dumps({"version": 1, "worlds": [0], "agents": ["a"], "R": {"a": [[0, 1]]}})
    with pytest.raises(ff.SchemaError) as e:
        ff.parse_model(text)
    assert e.value.path == "$.R.a[0][1]"


def test_missing_nominal_denotation_target():
    text = json.dumps({"version": 1, "worlds": [0], "agents": ["a"], "nominals": {"'n": "b"}})
    with pytest.raises(ff.SchemaError) as e:
        ff.parse_model(text)
    assert "nominals" in e.value.path


def test_bad_json_is_a_parse_error():
    with pytest.raises(ff.ParseError):
        ff.parse_sequent("{not json")


def test_formula_errors_report_their_location():
    text = json.dumps({"version": 1, "tree": ["0"], "ant": [], "suc": [{"label": "0", "formula": "@'n ->"}]})
    with pytest.raises(ff.ParseError) as e:
        ff.parse_sequent(text)
    assert "$.suc[0].formula" in str(e.value)


def test_label_strings():
    lab = Label(0).child("n", 1).child("k", 2)
    assert ff.render_label(lab) == "0/'n:1/'k:2"
    assert ff.parse_label("0/'n:1/'k:2") == lab
    with pytest.raises(ff.ParseError):
        ff.parse_label("0/n1")


def test_unknown_rule_in_derivation_file():
    data = json.loads((GOLDEN / "derivations" / "rigid.json").read_text())
    data["rule"] = "magic"
    with pytest.raises(ff.ParseError):
        ff.parse_derivation(json.dumps(data))


def test_hilbert_file_errors_carry_line_paths():
    data = json.loads((GOLDEN / "proofs" / "sample.json").read_text())
    data["lines"][3]["by"] = {"mp": [1]}
    with pytest.raises(ff.SchemaError) as e:
        ff.parse_hilbert(json.dumps(data))
    assert e.value.path.startswith("$.lines[3]")


@pytest.mark.parametrize("i,spec", [(5, "SYM"), (6, "IRR"), (7, "REFL")])
def test_reloaded_ri_derivations_still_check(i, spec):
    d = ff.parse_derivation((GOLDEN / "derivations" / f"extension_{i}.json").read_text())
    assert check_derivation(d, SystemConfig(getattr(corpus, spec), allow_cut=False)).ok
