"""Labels, tree sequents, derivations and the rule-instance checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .frames import FrameClassSpec, RegularImplication
from .syntax import (
    At,
    Falsum,
    FBox,
    Formula,
    Implies,
    KBox,
    Nominal,
    differs_by_nominal,
    friend_atom,
    nominals_of,
)


@dataclass(frozen=True, order=True)
class Label:
    """A root number followed by ``(nominal, index)`` steps: ``0 ._n 1 ._k 2``."""

    root: int
    path: tuple[tuple[str, int], ...] = ()

    @property
    def is_root(self) -> bool:
        return not self.path

    @property
    def parent(self) -> "Label | None":
        if not self.path:
            return None
        return Label(self.root, self.path[:-1])

    @property
    def edge(self) -> tuple[str, int] | None:
        return self.path[-1] if self.path else None

    def child(self, nom: str, index: int) -> "Label":
        return Label(self.root, self.path + ((nom, index),))

    def depth(self) -> int:
        return len(self.path)

    def ancestors(self) -> list["Label"]:
        """From the root down to (and including) this label."""
        return [Label(self.root, self.path[:i]) for i in range(len(self.path) + 1)]

    def is_prefix_of(self, other: "Label") -> bool:
        return self.root == other.root and other.path[: len(self.path)] == self.path

    def nominals(self) -> set[str]:
        return {n for n, _ in self.path}

    def rename(self, mapping: Mapping[str, str]) -> "Label":
        if not mapping:
            return self
        return Label(self.root, tuple((mapping.get(n, n), i) for n, i in self.path))

    def __str__(self):
        from .fileformats import render_label

        return render_label(self)


@dataclass(frozen=True)
class LabelTree:
    labels: frozenset

    def __post_init__(self):
        if not isinstance(self.labels, frozenset):
            object.__setattr__(self, "labels", frozenset(self.labels))
        roots = [l for l in self.labels if l.is_root]
        if len(roots) != 1:
            raise ValueError(f"a label tree needs exactly one root, found {len(roots)}")
        for l in self.labels:
            if l.root != roots[0].root:
                raise ValueError(f"label {l} does not descend from root {roots[0]}")
            p = l.parent
            if p is not None and p not in self.labels:
                raise ValueError(f"label tree not closed under parent: {l}")

    @classmethod
    def single(cls, root: int = 0) -> "LabelTree":
        return cls(frozenset([Label(root)]))

    @property
    def root(self) -> Label:
        for l in self.labels:
            if l.is_root:
                return l
        raise AssertionError("unreachable")

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self) -> Iterator[Label]:
        return iter(sorted(self.labels))

    def __len__(self):
        return len(self.labels)

    def children(self, alpha: Label) -> list[Label]:
        """Children of *alpha*, ordered by child index."""
        out = [l for l in self.labels if l.parent == alpha]
        return sorted(out, key=lambda l: (l.path[-1][1], l.path[-1][0]))

    def used_indices(self, alpha: Label) -> set[int]:
        return {l.path[-1][1] for l in self.labels if l.parent == alpha}

    def fresh_index(self, alpha: Label) -> int:
        used = self.used_indices(alpha)
        i = 0
        while i in used:
            i += 1
        return i

    def add(self, label: Label) -> "LabelTree":
        return LabelTree(self.labels | {label})

    def nominals(self) -> set[str]:
        out: set[str] = set()
        for l in self.labels:
            out |= l.nominals()
        return out

    def rename(self, mapping: Mapping[str, str]) -> "LabelTree":
        return LabelTree(frozenset(l.rename(mapping) for l in self.labels))


@dataclass(frozen=True)
class LabelledFormula:
    label: Label
    formula: Formula

    def __post_init__(self):
        if not isinstance(self.formula, At):
            raise ValueError("a labelled formula must be @-prefixed")

    @property
    def nom(self) -> str:
        return self.formula.nom

    @property
    def body(self) -> Formula:
        return self.formula.body

    def __str__(self):
        from .parser import render_formula

        return f"{self.label}: {render_formula(self.formula)}"


def lf(label: Label, formula: Formula) -> LabelledFormula:
    return LabelledFormula(label, formula)


def sort_lfs(items: Iterable[LabelledFormula]) -> list[LabelledFormula]:
    from .parser import render_formula

    return sorted(items, key=lambda x: (x.label, render_formula(x.formula)))


@dataclass(frozen=True)
class TreeSequent:
    ant: frozenset
    tree: LabelTree
    suc: frozenset

    def __post_init__(self):
        for name in ("ant", "suc"):
            v = getattr(self, name)
            if not isinstance(v, frozenset):
                object.__setattr__(self, name, frozenset(v))
        for x in self.ant | self.suc:
            if not isinstance(x, LabelledFormula):
                raise TypeError(f"not a labelled formula: {x!r}")
            if x.label not in self.tree:
                raise ValueError(f"label {x.label} of {x} is not in the tree")

    @classmethod
    def of_formula(cls, phi: Formula, nom: str, root: int = 0) -> "TreeSequent":
        """``=>_{root} root:@nom phi``."""
        r = Label(root)
        return cls(frozenset(), LabelTree.single(root), frozenset([LabelledFormula(r, At(nom, phi))]))

    def nominals(self) -> set[str]:
        out = self.tree.nominals()
        for x in self.ant | self.suc:
            out |= nominals_of(x.formula)
        return out

    def props(self) -> set[str]:
        from .syntax import symbols_of

        out: set[str] = set()
        for x in self.ant | self.suc:
            out |= symbols_of(x.formula)[1]
        return out

    def with_(self, ant=None, tree=None, suc=None) -> "TreeSequent":
        return TreeSequent(
            self.ant if ant is None else ant,
            self.tree if tree is None else tree,
            self.suc if suc is None else suc,
        )

    def __str__(self):
        a = ", ".join(str(x) for x in sort_lfs(self.ant))
        s = ", ".join(str(x) for x in sort_lfs(self.suc))
        return f"{a} =>[{len(self.tree)} labels] {s}"


RULES = (
    "bot", "id", "rep1", "rep2", "ref", "rigid", "->R", "->L", "@R", "@L",
    "FR", "FL", "[]R", "[]L", "wlab", "cut", "ri",
)
_ARITY = {
    "bot": 0, "id": 0, "rep1": 1, "rep2": 1, "ref": 1, "rigid": 1, "->R": 1, "->L": 2,
    "@R": 1, "@L": 1, "FR": 1, "FL": 2, "[]R": 1, "[]L": 1, "wlab": 1, "cut": 2,
}


class Derivation:
    """A proof tree node: conclusion, rule name, principal data, premises.

    ``principal`` holds the rule-instance data the checker needs (principal
    formula, fresh nominal, child label, ...).  It must not be mutated.
    """

    __slots__ = ("conclusion", "rule", "principal", "premises", "height", "_size")

    def __init__(self, conclusion: TreeSequent, rule: str, principal: Mapping | None = None,
                 premises: Iterable["Derivation"] = ()):
        if rule not in RULES:
            raise ValueError(f"unknown rule {rule!r}")
        self.conclusion = conclusion
        self.rule = rule
        self.principal = dict(principal or {})
        self.premises = tuple(premises)
        self.height = 0 if not self.premises else 1 + max(p.height for p in self.premises)
        self._size = 1 + sum(p._size for p in self.premises)

    @property
    def root(self) -> TreeSequent:
        return self.conclusion

    def size(self) -> int:
        return self._size

    def nodes(self) -> Iterator[tuple[tuple[int, ...], "Derivation"]]:
        """Pre-order walk yielding ``(path, node)``; iterative, safe for tall trees."""
        stack = [((), self)]
        while stack:
            path, d = stack.pop()
            yield path, d
            for i in reversed(range(len(d.premises))):
                stack.append((path + (i,), d.premises[i]))

    def rules_used(self) -> set[str]:
        return {d.rule for _, d in self.nodes()}

    def __repr__(self):
        return f"Derivation({self.rule}, height={self.height}, size={self._size})"


@dataclass(frozen=True)
class SystemConfig:
    spec: FrameClassSpec = field(default_factory=FrameClassSpec)
    allow_cut: bool = True


@dataclass
class Violation:
    path: tuple[int, ...]
    rule: str
    message: str

    def __str__(self):
        where = "root" if not self.path else "root/" + "/".join(map(str, self.path))
        return f"{where} [{self.rule}]: {self.message}"


@dataclass
class CheckResult:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def report(self) -> str:
        return "ok" if self.ok else "\n".join(str(v) for v in self.violations)


def reachable_box(alpha: Label, beta: Label, n: str, tree: LabelTree, box: str = "K") -> bool:
    """Side condition of the left box rule for discipline K, S4 or S5."""
    if alpha not in tree or beta not in tree:
        raise ValueError("labels not in tree")
    if box == "K":
        return beta.parent == alpha and beta.edge[0] == n
    if box == "S4":
        if not alpha.is_prefix_of(beta):
            return False
        return all(step[0] == n for step in beta.path[len(alpha.path):])
    if box == "S5":
        if alpha.root != beta.root:
            return False
        k = 0
        while k < min(len(alpha.path), len(beta.path)) and alpha.path[k] == beta.path[k]:
            k += 1
        return all(s[0] == n for s in alpha.path[k:]) and all(s[0] == n for s in beta.path[k:])
    raise ValueError(f"unknown box discipline {box!r}")


def _ctx_ok(conc: frozenset, prem: frozenset, removed: set, added: set) -> bool:
    return (
        removed <= conc
        and added <= prem
        and (conc - removed) <= prem
        and (prem - added) <= conc
    )


class _Fail(Exception):
    pass


def _req(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def _get(principal: Mapping, key: str, typ):
    v = principal.get(key)
    _req(isinstance(v, typ), f"missing or malformed principal field {key!r}")
    return v


def check_node(d: Derivation, cfg: SystemConfig) -> str | None:
    """Return None if this single inference is a correct rule instance."""
    try:
        _check_node(d, cfg)
    except _Fail as e:
        return str(e)
    return None


def _check_node(d: Derivation, cfg: SystemConfig) -> None:
    C = d.conclusion
    P = d.premises
    pr = d.principal
    rule = d.rule
    if rule in _ARITY:
        _req(len(P) == _ARITY[rule], f"expected {_ARITY[rule]} premises, got {len(P)}")
    if rule not in ("[]R", "wlab"):
        for p in P:
            _req(p.conclusion.tree == C.tree, "premise tree differs from conclusion tree")

    def same_ant(p):
        _req(p.conclusion.ant == C.ant, "antecedent must be unchanged")

    def same_suc(p):
        _req(p.conclusion.suc == C.suc, "succedent must be unchanged")

    def ant_ctx(p, removed, added):
        _req(_ctx_ok(C.ant, p.conclusion.ant, set(removed), set(added)), "antecedent does not match rule schema")

    def suc_ctx(p, removed, added):
        _req(_ctx_ok(C.suc, p.conclusion.suc, set(removed), set(added)), "succedent does not match rule schema")

    if rule == "bot":
        f = _get(pr, "formula", LabelledFormula)
        _req(f in C.ant, "principal not in antecedent")
        _req(isinstance(f.body, Falsum), "principal is not @n false")
        return
    if rule == "id":
        f = _get(pr, "formula", LabelledFormula)
        _req(f in C.ant and f in C.suc, "principal not on both sides")
        return
    if rule in ("rep1", "rep2"):
        eq = _get(pr, "eq", LabelledFormula)
        src = _get(pr, "from", LabelledFormula)
        dst = _get(pr, "to", LabelledFormula)
        _req(isinstance(eq.body, Nominal), "eq principal is not of the form @n m")
        _req(eq.label == src.label == dst.label, "eq, from and to must share a label")
        _req(eq in C.ant and src in C.ant, "eq/from not in conclusion antecedent")
        n, m = eq.nom, eq.body.name
        if rule == "rep1":
            _req(differs_by_nominal(src.formula, dst.formula, m, n), "not a rep1 rewrite (m to n)")
        else:
            _req(differs_by_nominal(src.formula, dst.formula, n, m), "not a rep2 rewrite (n to m)")
        ant_ctx(P[0], {eq, src}, {eq, dst})
        same_suc(P[0])
        return
    if rule == "ref":
        f = _get(pr, "formula", LabelledFormula)
        _req(isinstance(f.body, Nominal) and f.body.name == f.nom, "ref principal is not @n n")
        ant_ctx(P[0], set(), {f})
        same_suc(P[0])
        return
    if rule == "rigid":
        src = _get(pr, "from", LabelledFormula)
        dst = _get(pr, "to", LabelledFormula)
        _req(isinstance(src.body, Nominal), "rigid principal is not @n m")
        _req(src.formula == dst.formula, "rigid moves a formula unchanged")
        _req(src in C.ant, "principal not in antecedent")
        ant_ctx(P[0], {src}, {dst})
        same_suc(P[0])
        return
    if rule in ("->R", "->L", "@R", "@L", "FR", "FL", "[]R", "[]L"):
        f = _get(pr, "formula", LabelledFormula)
        a, n, body = f.label, f.nom, f.body
    if rule == "->R":
        _req(isinstance(body, Implies), "principal is not an implication")
        _req(f in C.suc, "principal not in succedent")
        ant_ctx(P[0], set(), {lf(a, At(n, body.lhs))})
        suc_ctx(P[0], {f}, {lf(a, At(n, body.rhs))})
        return
    if rule == "->L":
        _req(isinstance(body, Implies), "principal is not an implication")
        _req(f in C.ant, "principal not in antecedent")
        ant_ctx(P[0], {f}, set())
        suc_ctx(P[0], set(), {lf(a, At(n, body.lhs))})
        ant_ctx(P[1], {f}, {lf(a, At(n, body.rhs))})
        same_suc(P[1])
        return
    if rule == "@R":
        _req(isinstance(body, At), "principal is not @n @m phi")
        _req(f in C.suc, "principal not in succedent")
        same_ant(P[0])
        suc_ctx(P[0], {f}, {lf(a, body)})
        return
    if rule == "@L":
        _req(isinstance(body, At), "principal is not @n @m phi")
        _req(f in C.ant, "principal not in antecedent")
        ant_ctx(P[0], {f}, {lf(a, body)})
        same_suc(P[0])
        return
    if rule == "FR":
        _req(isinstance(body, FBox), "principal is not @n F phi")
        _req(f in C.suc, "principal not in succedent")
        m = _get(pr, "fresh", str)
        _req(m not in C.nominals(), f"freshness *: {m!r} occurs in the conclusion")
        ant_ctx(P[0], set(), {lf(a, friend_atom(n, m))})
        suc_ctx(P[0], {f}, {lf(a, At(m, body.body))})
        return
    if rule == "FL":
        _req(isinstance(body, FBox), "principal is not @n F phi")
        _req(f in C.ant, "principal not in antecedent")
        m = _get(pr, "witness", str)
        ant_ctx(P[0], {f}, set())
        suc_ctx(P[0], set(), {lf(a, friend_atom(n, m))})
        ant_ctx(P[1], {f}, {lf(a, At(m, body.body))})
        same_suc(P[1])
        return
    if rule == "[]R":
        _req(isinstance(body, KBox), "principal is not @n [] phi")
        _req(f in C.suc, "principal not in succedent")
        child = _get(pr, "child", Label)
        _req(child.parent == a and child.edge[0] == n, "child must be an n-child of the principal label")
        _req(child.edge[1] not in C.tree.used_indices(a), f"freshness †: index {child.edge[1]} already used under {a}")
        _req(P[0].conclusion.tree.labels == C.tree.labels | {child}, "premise tree must add exactly the new child")
        same_ant(P[0])
        suc_ctx(P[0], {f}, {lf(child, At(n, body.body))})
        return
    if rule == "[]L":
        _req(isinstance(body, KBox), "principal is not @n [] phi")
        _req(f in C.ant, "principal not in antecedent")
        beta = _get(pr, "target", Label)
        _req(beta in C.tree, "target label not in tree")
        _req(
            reachable_box(a, beta, n, C.tree, cfg.spec.box),
            f"reachability ‡ ({cfg.spec.box}) fails from {a} to {beta}",
        )
        ant_ctx(P[0], {f}, {lf(beta, At(n, body.body))})
        same_suc(P[0])
        return
    if rule == "wlab":
        new = _get(pr, "label", Label)
        pt = P[0].conclusion.tree
        _req(new not in pt, "wlab label already in premise tree")
        _req(new.parent is not None and new.parent in pt, "⋆: extended label set is not a tree")
        _req(C.tree.labels == pt.labels | {new}, "conclusion tree must be premise tree plus the label")
        same_ant(P[0])
        same_suc(P[0])
        return
    if rule == "cut":
        _req(cfg.allow_cut, "cut is not allowed in this system")
        x = _get(pr, "formula", LabelledFormula)
        p1, p2 = P[0].conclusion, P[1].conclusion
        _req(x in p1.suc and x in p2.ant, "cut formula missing from a premise")
        _req(C.ant - {x} == (p1.ant | p2.ant) - {x}, "cut antecedent mismatch")
        _req(x not in p1.ant or x in C.ant, "cut antecedent mismatch")
        _req(C.suc - {x} == (p1.suc | p2.suc) - {x}, "cut succedent mismatch")
        _req(x not in p2.suc or x in C.suc, "cut succedent mismatch")
        return
    if rule == "ri":
        theta = _get(pr, "theta", RegularImplication)
        _req(theta in cfg.spec.theta, "ri rule for a regular implication outside the system")
        a = _get(pr, "label", Label)
        _req(a in C.tree, "ri label not in tree")
        mapping = _get(pr, "map", Mapping)
        _req(all(v in mapping for v in theta.nominals), "ri instance map does not cover the rule's nominals")
        h, l = len(theta.antecedents), len(theta.consequents)
        _req(len(P) == h + l, f"ri expects {h + l} premises, got {len(P)}")
        for i, atom in enumerate(theta.antecedents):
            same_ant(P[i])
            suc_ctx(P[i], set(), {lf(a, atom.formula(mapping))})
        for j, atom in enumerate(theta.consequents):
            ant_ctx(P[h + j], set(), {lf(a, atom.formula(mapping))})
            same_suc(P[h + j])
        return
    raise _Fail(f"unknown rule {rule!r}")


def check_derivation(d: Derivation, cfg: SystemConfig | None = None) -> CheckResult:
    """Check every inference of *d*; collect all violations."""
    cfg = cfg or SystemConfig()
    result = CheckResult()
    for path, node in d.nodes():
        msg = check_node(node, cfg)
        if msg is not None:
            result.violations.append(Violation(path, node.rule, msg))
    return result
