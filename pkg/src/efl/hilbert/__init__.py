"""Hilbert system: proofs, checker, formulaic translation and both translations
between Hilbert proofs and tree-sequent derivations."""

from .proof import (
    LBG,
    MP,
    US,
    Antecedent,
    AtBox,
    Axiom,
    HilbertCheckResult,
    HilbertProof,
    Name,
    NecAt,
    NecBox,
    NecessityForm,
    NecF,
    check_hilbert,
    decompose_necessity_forms,
    hilbert_from_data,
    hilbert_to_data,
    instantiate_necessity_form,
)
from .translate import formulaic_translation
from .elaborate import elaborate_to_hilbert
from .embed import embed_hilbert, invert_rule

__all__ = [
    "Antecedent", "AtBox", "Axiom", "HilbertCheckResult", "HilbertProof", "LBG", "MP", "Name", "NecAt",
    "NecBox", "NecF", "NecessityForm", "US", "check_hilbert", "decompose_necessity_forms",
    "elaborate_to_hilbert", "embed_hilbert", "formulaic_translation", "hilbert_from_data", "hilbert_to_data",
    "instantiate_necessity_form", "invert_rule",
]
