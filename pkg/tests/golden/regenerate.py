"""Rebuild the golden corpus files.  Run from the repository root:

    python tests/golden/regenerate.py

The files are committed; tests only read them.
"""

import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

import corpus  # noqa: E402
import hilbert_samples  # noqa: E402
from efl import fileformats as ff  # noqa: E402
from efl.calculus import SystemConfig  # noqa: E402
from efl.hilbert import elaborate_to_hilbert  # noqa: E402
from efl.parser import parse_formula as P  # noqa: E402
from efl.search import Proved, Refuted, prove_formula  # noqa: E402
from efl.semantics import Model  # noqa: E402


def write(kind, name, text):
    d = HERE / kind
    d.mkdir(exist_ok=True)
    (d / f"{name}.json").write_text(text + "\n")


def main():
    write("models", "minimal", ff.render_model(Model([0], ["a"])))
    write("models", "box_example", ff.render_model(
        Model(["w0", "w1"], ["a0"], R={"a0": [("w0", "w1")]}, val={"p": [("w1", "a0")]}, nominals={"n": "a0"})))
    write("models", "sample_tree", ff.render_model(Model(
        [0, 1, 2], ["a", "b", "c"],
        R={"a": [(0, 1)], "c": [(0, 2), (1, 2)]},
        val={"phi": [(0, "a")], "rho": [(2, "b")], "theta": [(1, "c")]},
        nominals={"n": "a", "m": "b", "k": "c"})))
    for i, text in enumerate(corpus.REFUTE_TEXT):
        res = prove_formula(P(text))
        assert isinstance(res, Refuted)
        write("models", f"countermodel_{i}", ff.render_countermodel(res.model, res.assignment))

    write("sequents", "sample_tree", ff.render_sequent(corpus.sample_tree_sequent()))
    write("derivations", "rigid", ff.render_derivation(corpus.rigid_derivation()))
    write("derivations", "dcom", ff.render_derivation(corpus.dcom_derivation()))
    for name, text in corpus.AXIOM_TEXT.items():
        res = prove_formula(P(text), SystemConfig(allow_cut=False), nom="w")
        assert isinstance(res, Proved)
        write("sequents", f"axiom_{name}", ff.render_sequent(res.derivation.conclusion))
        write("derivations", f"axiom_{name}", ff.render_derivation(res.derivation))
    for i, (text, spec) in enumerate(corpus.EXTENSION_CASES):
        res = prove_formula(P(text), SystemConfig(spec, allow_cut=False), nom="w")
        assert isinstance(res, Proved)
        write("derivations", f"extension_{i}", ff.render_derivation(res.derivation))

    write("proofs", "sample", ff.render_hilbert(hilbert_samples.sample_proof()))
    write("proofs", "nested_lbg", ff.render_hilbert(hilbert_samples.nested_lbg_proof()))
    write("proofs", "at_absorb", ff.render_hilbert(hilbert_samples.lemma_proof("at_absorb")))
    write("proofs", "nominal_local", ff.render_hilbert(hilbert_samples.lemma_proof("nominal_local")))
    write("proofs", "rigid_elaborated", ff.render_hilbert(elaborate_to_hilbert(corpus.rigid_derivation())))


if __name__ == "__main__":
    main()
