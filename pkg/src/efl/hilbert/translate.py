"""Formulaic translation of tree sequents."""

from __future__ import annotations

from ..calculus import Label, TreeSequent, sort_lfs
from ..syntax import At, Formula, Implies, KBox, And, Not, big_and, big_or


def _children(S: TreeSequent, alpha: Label) -> list[Label]:
    return sorted(S.tree.children(alpha), key=lambda l: (l.edge[1], l.edge[0]))


def local_parts(S: TreeSequent, alpha: Label) -> tuple[list[Formula], list[Formula]]:
    """Canonically ordered formulas of Gamma_alpha and Delta_alpha."""
    g = [x.formula for x in sort_lfs(x for x in S.ant if x.label == alpha)]
    d = [x.formula for x in sort_lfs(x for x in S.suc if x.label == alpha)]
    return g, d


class Translator:
    """Memoised translations of one sequent at each of its labels."""

    def __init__(self, S: TreeSequent):
        self.S = S
        self._cache: dict[Label, Formula] = {}

    def boxed(self, child: Label) -> Formula:
        return At(child.edge[0], KBox(self.at(child)))

    def at(self, alpha: Label) -> Formula:
        hit = self._cache.get(alpha)
        if hit is not None:
            return hit
        if alpha not in self.S.tree:
            raise ValueError(f"label {alpha} is not in the tree")
        # compute children first without deep recursion
        order = []
        stack = [alpha]
        while stack:
            x = stack.pop()
            if x in self._cache:
                continue
            order.append(x)
            stack.extend(self.S.tree.children(x))
        for x in reversed(order):
            g, d = local_parts(self.S, x)
            kids = [self.boxed(c) for c in _children(self.S, x)]
            self._cache[x] = Implies(big_and(g), big_or(d + kids))
        return self._cache[alpha]

    def antecedent_form(self, alpha: Label, skip: Label | None = None) -> Formula:
        """``/\\Gamma_alpha & ~(\\/Delta_alpha | other boxed children)`` for necessity forms."""
        g, d = local_parts(self.S, alpha)
        kids = [self.boxed(c) for c in _children(self.S, alpha) if c != skip]
        return And(big_and(g), Not(big_or(d + kids)))


def formulaic_translation(S: TreeSequent, alpha: Label | None = None) -> Formula:
    if alpha is None:
        alpha = S.tree.root
    return Translator(S).at(alpha)
