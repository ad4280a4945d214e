"""Height-preserving admissible transformations of derivations.

* :func:`weaken` adds a labelled formula to every sequent of a derivation.
* :func:`substitute_derivation` applies a uniform substitution throughout.
* :func:`add_label` adds a label to every tree (used when weakening crosses a
  ``wlab`` node that introduced the label of the extra formula).
* :func:`relocate` moves a derivation built at the root of a one-label tree to
  an arbitrary label of an arbitrary tree.

FR eigen-nominals and fresh child indices are renamed whenever the change
would otherwise break a freshness side condition.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from typing import Callable

from .calculus import Derivation, Label, LabelledFormula, LabelTree, TreeSequent
from .syntax import FreshNames, UniformSubstitution, apply_substitution, nominals_of


@contextmanager
def deep_recursion(limit: int = 50000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def derivation_nominals(d: Derivation) -> set[str]:
    out: set[str] = set()
    for _, node in d.nodes():
        out |= node.conclusion.nominals()
        for k in ("fresh", "witness"):
            if k in node.principal:
                out.add(node.principal[k])
        if "map" in node.principal:
            out |= set(node.principal["map"].values())
    return out


def derivation_labels(d: Derivation) -> set[Label]:
    out: set[Label] = set()
    for _, node in d.nodes():
        out |= node.conclusion.tree.labels
    return out


# --- substitution --------------------------------------------------------------

def _sub_label(label: Label, sigma: UniformSubstitution) -> Label:
    return label.rename(sigma.nom_map) if sigma.nom_map else label


def _sub_lf(x: LabelledFormula, sigma: UniformSubstitution) -> LabelledFormula:
    return LabelledFormula(_sub_label(x.label, sigma), apply_substitution(x.formula, sigma))


def substitute_sequent(S: TreeSequent, sigma: UniformSubstitution) -> TreeSequent:
    tree = frozenset(_sub_label(l, sigma) for l in S.tree.labels)
    if len(tree) != len(S.tree.labels):
        raise ValueError("substitution merges two labels of the tree")
    return TreeSequent(
        frozenset(_sub_lf(x, sigma) for x in S.ant),
        LabelTree(tree),
        frozenset(_sub_lf(x, sigma) for x in S.suc),
    )


def _sub_principal(pr: dict, sigma: UniformSubstitution) -> dict:
    out = {}
    for k, v in pr.items():
        if isinstance(v, LabelledFormula):
            out[k] = _sub_lf(v, sigma)
        elif isinstance(v, Label):
            out[k] = _sub_label(v, sigma)
        elif k in ("fresh", "witness"):
            out[k] = sigma.nom(v)
        elif k == "map":
            out[k] = {a: sigma.nom(b) for a, b in v.items()}
        else:
            out[k] = v
    return out


def _sigma_touches(sigma: UniformSubstitution) -> set[str]:
    out = set(sigma.nom_map) | set(sigma.nom_map.values())
    for f in sigma.prop_map.values():
        out |= nominals_of(f)
    return out


def substitute_derivation(d: Derivation, sigma: UniformSubstitution,
                          fresh: FreshNames | None = None) -> Derivation:
    """Derivation of the sigma-image of d's root; FR eigen-nominals are renamed to avoid capture."""
    if sigma.is_identity():
        return d
    if fresh is None:
        fresh = FreshNames(derivation_nominals(d) | _sigma_touches(sigma), prefix="e")
    touched = _sigma_touches(sigma)

    def go(node: Derivation, sg: UniformSubstitution, touched: set) -> Derivation:
        conc = substitute_sequent(node.conclusion, sg)
        pr = dict(node.principal)
        if node.rule == "FR":
            m = pr["fresh"]
            if m in touched:
                m2 = fresh()
                nm = dict(sg.nom_map)
                nm[m] = m2
                sub_sg = UniformSubstitution(sg.prop_map, nm)
                prem = go(node.premises[0], sub_sg, touched | {m2})
                new_pr = _sub_principal({k: v for k, v in pr.items() if k != "fresh"}, sg)
                new_pr["fresh"] = m2
                return Derivation(conc, "FR", new_pr, [prem])
        return Derivation(conc, node.rule, _sub_principal(pr, sg), [go(p, sg, touched) for p in node.premises])

    with deep_recursion():
        return go(d, sigma, touched)


def rename_nominals_in(d: Derivation, mapping: dict[str, str]) -> Derivation:
    return substitute_derivation(d, UniformSubstitution(nom_map=dict(mapping)))


def rename_eigen(d: Derivation, avoid: set[str], fresh: FreshNames | None = None) -> Derivation:
    """Rename every FR eigen-nominal that lies in *avoid*."""
    if fresh is None:
        fresh = FreshNames(derivation_nominals(d) | set(avoid), prefix="e")

    def go(node: Derivation) -> Derivation:
        if node.rule == "FR" and node.principal["fresh"] in avoid:
            m = node.principal["fresh"]
            m2 = fresh()
            prem = substitute_derivation(node.premises[0], UniformSubstitution(nom_map={m: m2}), fresh)
            pr = dict(node.principal)
            pr["fresh"] = m2
            return Derivation(node.conclusion, "FR", pr, [go(prem)])
        if not node.premises:
            return node
        return Derivation(node.conclusion, node.rule, node.principal, [go(p) for p in node.premises])

    with deep_recursion():
        return go(d)


# --- relabelling ---------------------------------------------------------------

def relabel(d: Derivation, f: Callable[[Label], Label], extra: frozenset = frozenset()) -> Derivation:
    """Apply a label map everywhere (trees, labelled formulas, principal labels).

    *extra* labels are added to every tree.
    """
    cache: dict = {}

    def fl(l: Label) -> Label:
        r = cache.get(l)
        if r is None:
            r = cache[l] = f(l)
        return r

    def seq(S: TreeSequent) -> TreeSequent:
        return TreeSequent(
            frozenset(LabelledFormula(fl(x.label), x.formula) for x in S.ant),
            LabelTree(frozenset(fl(l) for l in S.tree.labels) | extra),
            frozenset(LabelledFormula(fl(x.label), x.formula) for x in S.suc),
        )

    def pr(p: dict) -> dict:
        out = {}
        for k, v in p.items():
            if isinstance(v, LabelledFormula):
                out[k] = LabelledFormula(fl(v.label), v.formula)
            elif isinstance(v, Label):
                out[k] = fl(v)
            else:
                out[k] = v
        return out

    def go(node: Derivation) -> Derivation:
        return Derivation(seq(node.conclusion), node.rule, pr(node.principal), [go(p) for p in node.premises])

    with deep_recursion():
        return go(d)


def _replace_prefix(old: Label, new: Label) -> Callable[[Label], Label]:
    n = len(old.path)

    def f(l: Label) -> Label:
        if old.is_prefix_of(l):
            return Label(new.root, new.path + l.path[n:])
        return l

    return f


def add_label(d: Derivation, lam: Label) -> Derivation:
    """Add *lam* to every tree of *d*; its parent must be in d's root tree."""
    if lam.parent is None or lam.parent not in d.conclusion.tree:
        raise ValueError("the parent of the new label must be in the root tree")

    def go(node: Derivation) -> Derivation:
        C = node.conclusion
        conc = C.with_(tree=C.tree.add(lam)) if lam not in C.tree else C
        if node.rule == "wlab" and node.principal["label"] == lam:
            return go(node.premises[0])
        if node.rule == "[]R":
            child = node.principal["child"]
            if child.parent == lam.parent and child.edge[1] == lam.edge[1]:
                used = {l.edge[1] for l in derivation_labels(node) if l.parent == lam.parent}
                used.add(lam.edge[1])
                j = max(used) + 1
                new_child = lam.parent.child(child.edge[0], j)
                prem = relabel(node.premises[0], _replace_prefix(child, new_child))
                pr = dict(node.principal)
                pr = {k: (LabelledFormula(v.label, v.formula) if isinstance(v, LabelledFormula) else v)
                      for k, v in pr.items()}
                pr["child"] = new_child
                return Derivation(conc, "[]R", pr, [go(prem)])
        return Derivation(conc, node.rule, node.principal, [go(p) for p in node.premises])

    with deep_recursion():
        return go(d)


# --- weakening -------------------------------------------------------------------

def weaken(d: Derivation, extra: LabelledFormula, side: str) -> Derivation:
    """Add *extra* to the antecedent (``side="left"``) or succedent (``"right"``) throughout."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if extra.label not in d.conclusion.tree:
        raise ValueError("label of the extra formula is not in the root tree")
    d = rename_eigen(d, nominals_of(extra.formula) | extra.label.nominals())

    def go(node: Derivation) -> Derivation:
        C = node.conclusion
        if node.rule == "wlab" and node.principal["label"] == extra.label:
            # the label only exists below this node: push it up instead
            return go(add_label(node.premises[0], extra.label))
        if side == "left":
            conc = C.with_(ant=C.ant | {extra})
        else:
            conc = C.with_(suc=C.suc | {extra})
        return Derivation(conc, node.rule, node.principal, [go(p) for p in node.premises])

    with deep_recursion():
        return go(d)


def weaken_many(d: Derivation, ant=(), suc=()) -> Derivation:
    for x in sorted(ant, key=str):
        d = weaken(d, x, "left")
    for x in sorted(suc, key=str):
        d = weaken(d, x, "right")
    return d


# --- moving derivations around ---------------------------------------------------

def extend_tree(d: Derivation, tree: LabelTree) -> Derivation:
    """Add the missing labels of *tree* below the root with wlab steps (parents first)."""
    have = set(d.conclusion.tree.labels)
    missing = sorted(tree.labels - have, key=lambda l: (len(l.path), l))
    if not have <= tree.labels:
        raise ValueError("target tree must contain the derivation's tree")
    for lam in missing:
        C = d.conclusion
        d = Derivation(C.with_(tree=C.tree.add(lam)), "wlab", {"label": lam}, [d])
    return d


def relocate(d: Derivation, tree: LabelTree, alpha: Label) -> Derivation:
    """Move a derivation whose root tree is ``{r}`` to label *alpha* of *tree*.

    Labels below the old root are re-rooted under *alpha* with child indices
    shifted past those already used under *alpha*; ancestors of *alpha* are
    added to every tree; the remaining labels of *tree* are added by wlab.
    """
    if alpha not in tree:
        raise ValueError("label not in tree")
    root_tree = d.conclusion.tree
    if len(root_tree) != 1:
        raise ValueError("relocate expects a derivation over a one-label tree")
    used = {l.edge[1] for l in tree.labels if l.parent == alpha}
    off = (max(used) + 1) if used else 0
    anc = alpha.ancestors()[:-1]
    d = rename_eigen(d, tree.nominals())

    def f(l: Label) -> Label:
        if l.path:
            (n, i), rest = l.path[0], l.path[1:]
            return Label(alpha.root, alpha.path + ((n, i + off),) + rest)
        return alpha

    moved = relabel(d, f, frozenset(anc))
    return extend_tree(moved, tree)
