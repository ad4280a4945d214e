"""Finite two-dimensional Kripke models and the satisfaction relation.

A model has worlds W, agents A, an epistemic relation R_a on W for every
agent, a friendship relation on A for every world, a valuation of
propositions on W x A and a denotation agent for every nominal.  Formulas are
evaluated at (world, agent) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterator, Mapping

from .calculus import Label, LabelTree, TreeSequent
from .frames import FrameClassSpec
from .syntax import At, Falsum, FBox, Formula, Implies, KBox, Nominal, Prop


class SemanticsError(ValueError):
    pass


def _pairs(rel) -> frozenset:
    return frozenset(tuple(p) for p in rel)


@dataclass
class Model:
    worlds: tuple
    agents: tuple
    R: dict = field(default_factory=dict)
    friend: dict = field(default_factory=dict)
    val: dict = field(default_factory=dict)
    nominals: dict = field(default_factory=dict)
    _ext: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.agents = tuple(self.agents)
        if not self.worlds or not self.agents:
            raise SemanticsError("a model needs at least one world and one agent")
        if len(set(self.worlds)) != len(self.worlds) or len(set(self.agents)) != len(self.agents):
            raise SemanticsError("duplicate world or agent id")
        ws, ag = set(self.worlds), set(self.agents)
        self.R = {a: _pairs(self.R.get(a, ())) for a in self.agents} | {
            a: _pairs(r) for a, r in self.R.items() if a not in ag
        }
        self.friend = {w: _pairs(self.friend.get(w, ())) for w in self.worlds} | {
            w: _pairs(r) for w, r in self.friend.items() if w not in ws
        }
        self.val = {p: _pairs(s) for p, s in self.val.items()}
        self.nominals = dict(self.nominals)
        for a, rel in self.R.items():
            if a not in ag:
                raise SemanticsError(f"R given for undeclared agent {a!r}")
            for w, v in rel:
                if w not in ws or v not in ws:
                    raise SemanticsError(f"R[{a!r}] uses undeclared world in {(w, v)!r}")
        for w, rel in self.friend.items():
            if w not in ws:
                raise SemanticsError(f"friendship given for undeclared world {w!r}")
            for a, b in rel:
                if a not in ag or b not in ag:
                    raise SemanticsError(f"friend[{w!r}] uses undeclared agent in {(a, b)!r}")
        for p, s in self.val.items():
            for w, a in s:
                if w not in ws or a not in ag:
                    raise SemanticsError(f"val[{p!r}] has a point outside W x A: {(w, a)!r}")
        for n, a in self.nominals.items():
            if a not in ag:
                raise SemanticsError(f"nominal {n!r} denotes undeclared agent {a!r}")

    def denote(self, n: str) -> Hashable:
        try:
            return self.nominals[n]
        except KeyError:
            raise SemanticsError(f"nominal {n!r} has no denotation") from None

    def valuation(self, symbol: str, nominal: bool = False) -> frozenset:
        """V(p) for a proposition, or V(n) = W x {den(n)} for a nominal."""
        if nominal:
            a = self.denote(symbol)
            return frozenset((w, a) for w in self.worlds)
        return self.val.get(symbol, frozenset())

    def extension(self, phi: Formula) -> frozenset:
        """The set of (world, agent) pairs satisfying *phi*."""
        hit = self._ext.get(phi)
        if hit is not None:
            return hit
        W, A = self.worlds, self.agents
        if isinstance(phi, Nominal):
            out = self.valuation(phi.name, nominal=True)
        elif isinstance(phi, Prop):
            out = self.val.get(phi.name, frozenset())
        elif isinstance(phi, Falsum):
            out = frozenset()
        elif isinstance(phi, Implies):
            lhs, rhs = self.extension(phi.lhs), self.extension(phi.rhs)
            out = frozenset(pt for pt in product(W, A) if pt not in lhs or pt in rhs)
        elif isinstance(phi, At):
            a = self.denote(phi.nom)
            body = self.extension(phi.body)
            out = frozenset((w, b) for w in W if (w, a) in body for b in A)
        elif isinstance(phi, FBox):
            body = self.extension(phi.body)
            out = frozenset(
                (w, a) for w, a in product(W, A)
                if all((w, b) in body for (x, b) in self.friend[w] if x == a)
            )
        elif isinstance(phi, KBox):
            body = self.extension(phi.body)
            out = frozenset(
                (w, a) for w, a in product(W, A)
                if all((v, a) in body for (x, v) in self.R[a] if x == w)
            )
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._ext[phi] = out
        return out


@dataclass(frozen=True)
class Assignment:
    """A map from the labels of a tree to worlds."""

    f: Mapping

    def __call__(self, label: Label):
        return self.f[label]

    def __eq__(self, other):
        return isinstance(other, Assignment) and dict(self.f) == dict(other.f)

    def __hash__(self):
        return hash(frozenset(self.f.items()))

    def is_valid(self, model: Model, tree: LabelTree) -> bool:
        if set(self.f) != set(tree.labels):
            return False
        for lab in tree.labels:
            p = lab.parent
            if p is not None:
                a = model.denote(lab.edge[0])
                if (self.f[p], self.f[lab]) not in model.R[a]:
                    return False
        return True


def satisfies(M: Model, w, a, phi: Formula) -> bool:
    if w not in M.worlds:
        raise SemanticsError(f"world {w!r} not in model")
    if a not in M.agents:
        raise SemanticsError(f"agent {a!r} not in model")
    return (w, a) in M.extension(phi)


def labelled_true(M: Model, f: Assignment, x) -> bool:
    """``alpha:@n phi`` is true at (M, f) iff den(n) satisfies phi at f(alpha)."""
    return satisfies(M, f(x.label), M.denote(x.nom), x.body)


def sequent_true(M: Model, f: Assignment, S: TreeSequent) -> bool:
    if set(f.f) != set(S.tree.labels):
        raise SemanticsError("assignment domain differs from the sequent's tree")
    if all(labelled_true(M, f, x) for x in S.ant):
        return any(labelled_true(M, f, x) for x in S.suc)
    return True


def enumerate_assignments(M: Model, T: LabelTree) -> Iterator[Assignment]:
    """All maps f respecting ``f(alpha) R_den(n) f(beta)`` for n-children."""
    labels = sorted(T.labels)  # parents sort before their children

    def go(i: int, acc: dict):
        if i == len(labels):
            yield Assignment(dict(acc))
            return
        lab = labels[i]
        p = lab.parent
        if p is None:
            choices = M.worlds
        else:
            rel = M.R[M.denote(lab.edge[0])]
            src = acc[p]
            choices = [v for v in M.worlds if (src, v) in rel]
        for w in choices:
            acc[lab] = w
            yield from go(i + 1, acc)
        acc.pop(lab, None)

    yield from go(0, {})


def relation_fits(rel: frozenset, domain, box: str) -> bool:
    if box == "K":
        return True
    refl = all((x, x) in rel for x in domain)
    trans = all((x, z) in rel for (x, y) in rel for (y2, z) in rel if y == y2)
    if box == "S4":
        return refl and trans
    sym = all((y, x) in rel for (x, y) in rel)
    return refl and trans and sym


def frame_in_class(M: Model, spec: FrameClassSpec) -> bool:
    if spec.box != "K":
        for a in M.agents:
            if not relation_fits(M.R[a], M.worlds, spec.box):
                return False
    for theta in spec.theta:
        for w in M.worlds:
            if not theta.holds(M.agents, M.friend[w]):
                return False
    return True


def find_countermodel(S: TreeSequent, maxW: int, maxA: int, spec: FrameClassSpec | None = None):
    """Exhaustive search for an in-class falsifying (Model, Assignment); see :mod:`efl.oracle`."""
    from .oracle import find_countermodel as _fc

    return _fc(S, maxW, maxA, spec or FrameClassSpec())
