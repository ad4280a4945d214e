"""Propositional tautology check over formula atoms.

Every subformula whose outermost constructor is not an implication or falsum
is treated as an opaque atom.  The decision procedure is a sequent-style
(Wang) reduction that applies non-branching steps first.
"""

from __future__ import annotations

from .syntax import Falsum, Formula, Implies


def is_tautology(phi: Formula) -> bool:
    return _valid([], [phi], frozenset(), frozenset())


def entails(hyps, concl: Formula) -> bool:
    """``hyps |- concl`` propositionally."""
    return _valid(list(hyps), [concl], frozenset(), frozenset())


def _valid(left: list, right: list, latoms: frozenset, ratoms: frozenset) -> bool:
    # Iterative on the non-branching part, recursive on splits.
    left, right = list(left), list(right)
    la, ra = set(latoms), set(ratoms)
    pending_split = []
    while left or right:
        if right:
            f = right.pop()
            if isinstance(f, Implies):
                left.append(f.lhs)
                right.append(f.rhs)
            elif isinstance(f, Falsum):
                pass
            else:
                if f in la:
                    return True
                ra.add(f)
            continue
        f = left.pop()
        if isinstance(f, Falsum):
            return True
        if isinstance(f, Implies):
            if isinstance(f.rhs, Falsum):
                right.append(f.lhs)  # negation: no split needed
            elif f.rhs in la or f.lhs in ra:
                continue  # adds nothing to this branch
            elif f.lhs in la:
                left.append(f.rhs)  # the other branch closes immediately
            elif f.rhs in ra:
                right.append(f.lhs)
            else:
                pending_split.append(f)
            continue
        if f in ra:
            return True
        la.add(f)
    if la & ra:
        return True
    if not pending_split:
        return False
    f = pending_split[0]
    rest = pending_split[1:]
    fa, fr = frozenset(la), frozenset(ra)
    return _valid(rest, [f.lhs], fa, fr) and _valid(rest + [f.rhs], [], fa, fr)
