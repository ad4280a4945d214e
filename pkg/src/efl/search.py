"""Fuel-bounded backward proof search for the cut-free tree sequent calculus.

A branch keeps its sequent cumulatively (premises always contain their
conclusion) together with a union-find over nominals fed by left-hand
equalities ``alpha:@n m``.  Saturation conditions are tested modulo class
representatives; whenever a literal rule needs two formulas to agree exactly
the search emits explicit ``rigid``/``rep`` steps, so every closed branch is a
derivation the kernel in :mod:`efl.calculus` accepts.

The first saturated open branch yields a derived model.  It is returned only
after it has been re-verified against the input sequent; otherwise the
outcome is Unknown.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field, replace
from itertools import product

from .calculus import (
    Derivation,
    Label,
    LabelledFormula,
    LabelTree,
    SystemConfig,
    TreeSequent,
    lf,
    sort_lfs,
)
from .frames import FrameClassSpec, RegularImplication
from .semantics import Assignment, Model, frame_in_class, sequent_true
from .syntax import (
    At,
    Falsum,
    FBox,
    Formula,
    FreshNames,
    Implies,
    KBox,
    Nominal,
    Prop,
    friend_atom,
    match_friend_atom,
    nominals_of,
    rename_nominals,
)


@dataclass(frozen=True)
class SearchConfig:
    fuel: int = 10000
    seed: int = 0  # the search is deterministic; kept for reproducible batch runs
    # no witness creation at labels whose content repeats an ancestor's; None means
    # on for S4/S5 (where unrestricted search need not terminate) and off for K
    blocking: bool | None = None

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")


@dataclass
class SearchStats:
    rules_fired: int = 0
    labels_created: int = 0
    nominals_created: int = 0
    branches: int = 0


@dataclass
class Proved:
    derivation: Derivation
    stats: SearchStats
    verdict: str = "proved"


@dataclass
class Refuted:
    model: Model
    assignment: Assignment
    stats: SearchStats
    saturated: TreeSequent | None = None
    verdict: str = "refuted"


@dataclass
class Unknown:
    stats: SearchStats
    reason: str = "fuel exhausted"
    verdict: str = "unknown"


SearchOutcome = Proved | Refuted | Unknown


@dataclass
class Closed:
    derivation: Derivation


@dataclass
class Saturated:
    sequent: TreeSequent
    branch: "_Branch" = field(repr=False)


@dataclass
class FuelExhausted:
    pass


class _OutOfFuel(Exception):
    pass


# --- positions of nominals inside formulas ------------------------------------

def _diff(x: Formula, y: Formula, path=(), acc=None):
    """Positions where *x* and *y* carry different nominals: list of (path, a, b)."""
    if acc is None:
        acc = []
    if x == y:
        return acc
    if type(x) is not type(y):
        raise ValueError("formulas differ in shape")
    if isinstance(x, Nominal):
        acc.append((path, x.name, y.name))
    elif isinstance(x, Implies):
        _diff(x.lhs, y.lhs, path + ("l",), acc)
        _diff(x.rhs, y.rhs, path + ("r",), acc)
    elif isinstance(x, At):
        if x.nom != y.nom:
            acc.append((path + ("s",), x.nom, y.nom))
        _diff(x.body, y.body, path + ("b",), acc)
    elif isinstance(x, (FBox, KBox)):
        _diff(x.body, y.body, path + ("b",), acc)
    else:
        raise ValueError("formulas differ in shape")
    return acc


def _replace(f: Formula, path, new: str) -> Formula:
    if not path:
        assert isinstance(f, Nominal)
        return Nominal(new)
    step, rest = path[0], path[1:]
    if isinstance(f, Implies):
        if step == "l":
            return Implies(_replace(f.lhs, rest, new), f.rhs)
        return Implies(f.lhs, _replace(f.rhs, rest, new))
    if isinstance(f, At):
        if step == "s":
            return At(new, f.body)
        return At(f.nom, _replace(f.body, rest, new))
    if isinstance(f, FBox):
        return FBox(_replace(f.body, rest, new))
    if isinstance(f, KBox):
        return KBox(_replace(f.body, rest, new))
    raise ValueError("bad position")


_NOMS: dict = {}
_CANON: dict = {}


def _noms(f: Formula) -> frozenset:
    hit = _NOMS.get(f)
    if hit is None:
        hit = _NOMS[f] = frozenset(nominals_of(f))
        if len(_NOMS) > 500_000:
            _NOMS.clear()
    return hit


# --- branch state -------------------------------------------------------------

class _Branch:
    def __init__(self):
        self.ant: dict = {}
        self.suc: dict = {}
        self.tree: dict = {}
        self.parent: dict = {}
        self.cant: dict = {}
        self.csuc: dict = {}
        self.eq_edges: list = []
        self.noms: dict = {}
        self.bot = None
        self.done: set = set()
        self._snap = None

    @classmethod
    def from_sequent(cls, S: TreeSequent) -> "_Branch":
        b = cls()
        for lab in sorted(S.tree.labels):
            b.tree[lab] = None
            for n in sorted(lab.nominals()):
                b.noms.setdefault(n, None)
        for x in sort_lfs(S.ant):
            b.add_ant(x)
        for x in sort_lfs(S.suc):
            b.add_suc(x)
        b._snap = S
        return b

    def copy(self) -> "_Branch":
        b = _Branch()
        b.ant = dict(self.ant)
        b.suc = dict(self.suc)
        b.tree = dict(self.tree)
        b.parent = dict(self.parent)
        b.cant = dict(self.cant)
        b.csuc = dict(self.csuc)
        b.eq_edges = list(self.eq_edges)
        b.noms = dict(self.noms)
        b.bot = self.bot
        b.done = set(self.done)
        b._snap = self._snap
        return b

    # union-find
    def find(self, x: str) -> str:
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while self.parent.get(x, x) != root:
            nxt = self.parent[x]
            self.parent[x] = root
            x = nxt
        return root

    def classes(self) -> list[str]:
        return sorted({self.find(n) for n in self.noms})

    def canon(self, f: Formula) -> Formula:
        mapping = {}
        for n in _noms(f):
            r = self.find(n)
            if r != n:
                mapping[n] = r
        if not mapping:
            return f
        key = (f, tuple(sorted(mapping.items())))
        hit = _CANON.get(key)
        if hit is None:
            if len(_CANON) > 500_000:
                _CANON.clear()
            hit = _CANON[key] = rename_nominals(f, mapping)
        return hit

    def key(self, label: Label, f: Formula):
        return (label, self.canon(f))

    def _rebuild(self):
        self.cant = {}
        for x in self.ant:
            self.cant.setdefault(self.key(x.label, x.formula), x)
        self.csuc = {}
        for x in self.suc:
            self.csuc.setdefault(self.key(x.label, x.formula), x)

    def add_ant(self, x: LabelledFormula) -> None:
        if x in self.ant:
            return
        self._snap = None
        self.ant[x] = None
        for n in _noms(x.formula):
            self.noms.setdefault(n, None)
        if isinstance(x.body, Falsum) and self.bot is None:
            self.bot = x
        if isinstance(x.body, Nominal) and x.body.name != x.nom:
            a, b = x.nom, x.body.name
            self.eq_edges.append((a, b, x))
            ra, rb = self.find(a), self.find(b)
            if ra != rb:
                lo, hi = sorted((ra, rb))
                self.parent[hi] = lo
                self._rebuild()
                return
        self.cant.setdefault(self.key(x.label, x.formula), x)

    def add_suc(self, x: LabelledFormula) -> None:
        if x in self.suc:
            return
        self._snap = None
        self.suc[x] = None
        for n in _noms(x.formula):
            self.noms.setdefault(n, None)
        self.csuc.setdefault(self.key(x.label, x.formula), x)

    def add_label(self, lab: Label) -> None:
        self._snap = None
        self.tree[lab] = None
        for n in lab.nominals():
            self.noms.setdefault(n, None)

    def snapshot(self) -> TreeSequent:
        if self._snap is None:
            self._snap = TreeSequent(frozenset(self.ant), LabelTree(frozenset(self.tree)), frozenset(self.suc))
        return self._snap

    def in_ant(self, label, f) -> bool:
        return self.key(label, f) in self.cant

    def in_suc(self, label, f) -> bool:
        return self.key(label, f) in self.csuc

    def children(self, alpha: Label) -> list[Label]:
        return [l for l in self.tree if l.parent == alpha]

    def used_nominals(self) -> set[str]:
        return set(self.noms)


# --- the search engine ----------------------------------------------------------

class _Engine:
    def __init__(self, cfg: SystemConfig, sc: SearchConfig, fresh: FreshNames):
        self.cfg = cfg
        self.spec: FrameClassSpec = cfg.spec
        self.sc = sc
        self.fresh = fresh
        self.stats = SearchStats()

    def spend(self, n: int = 1):
        self.stats.rules_fired += n
        if self.stats.rules_fired > self.sc.fuel:
            raise _OutOfFuel()

    # rewriting along equalities ------------------------------------------------
    def _eq_path(self, br: _Branch, a: str, b: str):
        """Shortest chain of equality atoms linking a to b: list of (from, to, atom)."""
        adj: dict = {}
        for x, y, atom in br.eq_edges:
            adj.setdefault(x, []).append((y, atom))
            adj.setdefault(y, []).append((x, atom))
        prev = {a: None}
        q = deque([a])
        while q:
            z = q.popleft()
            if z == b:
                break
            for nxt, atom in adj.get(z, ()):
                if nxt not in prev:
                    prev[nxt] = (z, atom)
                    q.append(nxt)
        if b not in prev:
            raise AssertionError(f"no equality chain from {a} to {b}")
        hops = []
        z = b
        while prev[z] is not None:
            y, atom = prev[z]
            hops.append((y, z, atom))
            z = y
        return list(reversed(hops))

    def rewrite(self, br: _Branch, steps: list, src: LabelledFormula, target: Formula) -> LabelledFormula:
        """Emit rigid/rep steps turning antecedent formula *src* into ``src.label:target``."""
        alpha = src.label
        cur = src
        for path, a, b in _diff(src.formula, target):
            for z, z2, atom in self._eq_path(br, a, b):
                x, y = atom.nom, atom.body.name
                here = lf(alpha, atom.formula)
                if here not in br.ant:
                    self.spend()
                    steps.append(("rigid", {"from": atom, "to": here}, br.snapshot()))
                    br.add_ant(here)
                new = lf(alpha, _replace(cur.formula, path, z2))
                rule = "rep1" if (z == y and z2 == x) else "rep2"
                if new not in br.ant:
                    self.spend()
                    steps.append((rule, {"eq": here, "from": cur, "to": new}, br.snapshot()))
                    br.add_ant(new)
                cur = new
        assert cur.formula == target
        return cur

    # closure --------------------------------------------------------------------
    def try_close(self, br: _Branch, steps: list) -> Derivation | None:
        if br.bot is not None:
            return Derivation(br.snapshot(), "bot", {"formula": br.bot})
        common = None
        for k, d in br.csuc.items():
            g = br.cant.get(k)
            if g is not None:
                common = (g, d)
                break
        if common is not None:
            g, d = common
            if g.formula != d.formula:
                g = self.rewrite(br, steps, g, d.formula)
            return Derivation(br.snapshot(), "id", {"formula": d})
        for d in br.suc:
            if isinstance(d.body, Nominal) and br.find(d.nom) == br.find(d.body.name):
                refl = lf(d.label, At(d.nom, Nominal(d.nom)))
                if refl not in br.ant:
                    self.spend()
                    steps.append(("ref", {"formula": refl}, br.snapshot()))
                    br.add_ant(refl)
                if refl != d:
                    self.rewrite(br, steps, refl, d.formula)
                return Derivation(br.snapshot(), "id", {"formula": d})
        return None

    # box reachability modulo classes ----------------------------------------------
    def box_targets(self, br: _Branch, alpha: Label, n: str):
        """(beta, m) pairs with reachable_box(alpha, beta, m) literally and m ~ n."""
        cls = br.find(n)
        box = self.spec.box
        out = []
        if box == "K":
            for c in br.children(alpha):
                m = c.edge[0]
                if br.find(m) == cls:
                    out.append((c, m))
            return out
        out.append((alpha, n))
        for beta in br.tree:
            if beta == alpha or beta.root != alpha.root:
                continue
            k = 0
            while k < min(len(alpha.path), len(beta.path)) and alpha.path[k] == beta.path[k]:
                k += 1
            up = alpha.path[k:]
            down = beta.path[k:]
            if box == "S4" and up:
                continue
            edge_noms = {s[0] for s in up + down}
            if len(edge_noms) == 1:
                (m,) = edge_noms
                if br.find(m) == cls:
                    out.append((beta, m))
        return out

    def _ri_holds(self, br: _Branch, alpha: Label, atom, sigma) -> bool:
        n, m = sigma[atom.n], sigma[atom.m]
        if atom.kind == "eq":
            return br.find(n) == br.find(m)
        return br.in_ant(alpha, friend_atom(n, m))

    def _blocked(self, br: _Branch, alpha: Label) -> bool:
        if not self.sc.blocking or alpha.is_root:
            return False

        def content(l):
            a = frozenset(k[1] for k in br.cant if k[0] == l)
            s = frozenset(k[1] for k in br.csuc if k[0] == l)
            return a, s

        here = content(alpha)
        for anc in alpha.ancestors()[:-1]:
            if content(anc) == here:
                return True
        return False

    # obligations ------------------------------------------------------------------
    def next_obligation(self, br: _Branch):
        # 1. non-branching, non-creating
        for d in br.suc:
            body = d.body
            if isinstance(body, Implies) and match_friend_atom(d.formula) is None:
                if not (br.in_ant(d.label, At(d.nom, body.lhs)) and br.in_suc(d.label, At(d.nom, body.rhs))):
                    return ("->R", d)
            elif isinstance(body, At):
                if not br.in_suc(d.label, body):
                    return ("@R", d)
        for g in br.ant:
            body = g.body
            if isinstance(body, At):
                if not br.in_ant(g.label, body):
                    return ("@L", g)
            elif isinstance(body, KBox):
                for beta, m in self.box_targets(br, g.label, g.nom):
                    if not br.in_ant(beta, At(g.nom, body.body)):
                        return ("[]L", g, beta, m)
        # 2. branching
        for g in br.ant:
            body = g.body
            if isinstance(body, Implies) and match_friend_atom(g.formula) is None:
                if not (br.in_suc(g.label, At(g.nom, body.lhs)) or br.in_ant(g.label, At(g.nom, body.rhs))):
                    return ("->L", g)
        classes = br.classes()
        for g in br.ant:
            body = g.body
            if isinstance(body, FBox):
                for r in classes:
                    if not (br.in_suc(g.label, friend_atom(g.nom, r)) or br.in_ant(g.label, At(r, body.body))):
                        return ("FL", g, r)
        for theta in self.spec.theta:
            noms = theta.nominals
            for alpha in br.tree:
                for values in product(classes, repeat=len(noms)):
                    sigma = dict(zip(noms, values))
                    if all(self._ri_holds(br, alpha, a, sigma) for a in theta.antecedents) and not any(
                        self._ri_holds(br, alpha, c, sigma) for c in theta.consequents
                    ):
                        return ("ri", theta, alpha, sigma)
        # 3. witness creation
        for d in br.suc:
            body = d.body
            if isinstance(body, FBox):
                key = ("FR", br.key(d.label, d.formula))
                if key in br.done or self._blocked(br, d.label):
                    continue
                if not any(
                    br.in_ant(d.label, friend_atom(d.nom, r)) and br.in_suc(d.label, At(r, body.body))
                    for r in classes
                ):
                    return ("FR", d)
            elif isinstance(body, KBox):
                key = ("[]R", br.key(d.label, d.formula))
                if key in br.done or self._blocked(br, d.label):
                    continue
                cls = br.find(d.nom)
                if not any(
                    br.find(c.edge[0]) == cls and br.in_suc(c, At(d.nom, body.body))
                    for c in br.children(d.label)
                ):
                    return ("[]R", d)
        return None

    # main loop ----------------------------------------------------------------------
    def run(self, br: _Branch):
        """Closed(derivation) or Saturated(...); raises _OutOfFuel."""
        self.stats.branches += 1
        steps: list = []
        while True:
            leaf = self.try_close(br, steps)
            if leaf is not None:
                return Closed(_fold(steps, leaf))
            ob = self.next_obligation(br)
            if ob is None:
                return Saturated(_with_ref(br.snapshot(), br), br)
            rule = ob[0]
            snap = br.snapshot()
            if rule == "->R":
                d = ob[1]
                self.spend()
                steps.append((rule, {"formula": d}, snap))
                br.add_ant(lf(d.label, At(d.nom, d.body.lhs)))
                br.add_suc(lf(d.label, At(d.nom, d.body.rhs)))
            elif rule == "@R":
                d = ob[1]
                self.spend()
                steps.append((rule, {"formula": d}, snap))
                br.add_suc(lf(d.label, d.body))
            elif rule == "@L":
                g = ob[1]
                self.spend()
                steps.append((rule, {"formula": g}, snap))
                br.add_ant(lf(g.label, g.body))
            elif rule == "[]L":
                _, g, beta, m = ob
                if m != g.nom:
                    g = self.rewrite(br, steps, g, At(m, g.body))
                self.spend()
                steps.append((rule, {"formula": g, "target": beta}, br.snapshot()))
                br.add_ant(lf(beta, At(m, g.body.body)))
            elif rule == "FR":
                d = ob[1]
                br.done.add(("FR", br.key(d.label, d.formula)))
                m = self.fresh()
                self.stats.nominals_created += 1
                self.spend()
                steps.append((rule, {"formula": d, "fresh": m}, snap))
                br.add_ant(lf(d.label, friend_atom(d.nom, m)))
                br.add_suc(lf(d.label, At(m, d.body.body)))
            elif rule == "[]R":
                d = ob[1]
                br.done.add(("[]R", br.key(d.label, d.formula)))
                used = {c.edge[1] for c in br.children(d.label)}
                i = 0
                while i in used:
                    i += 1
                child = d.label.child(d.nom, i)
                self.stats.labels_created += 1
                self.spend()
                steps.append((rule, {"formula": d, "child": child}, snap))
                br.add_label(child)
                br.add_suc(lf(child, At(d.nom, d.body.body)))
            else:
                self.spend()
                premises = self._branch_premises(br, ob)
                subs = []
                for p in premises:
                    res = self.run(p)
                    if not isinstance(res, Closed):
                        return res
                    subs.append(res.derivation)
                leaf = Derivation(snap, rule, self._principal(ob), subs)
                return Closed(_fold(steps, leaf))

    def _principal(self, ob):
        rule = ob[0]
        if rule == "->L":
            return {"formula": ob[1]}
        if rule == "FL":
            return {"formula": ob[1], "witness": ob[2]}
        _, theta, alpha, sigma = ob
        return {"theta": theta, "label": alpha, "map": dict(sigma)}

    def _branch_premises(self, br: _Branch, ob) -> list[_Branch]:
        rule = ob[0]
        if rule == "->L":
            g = ob[1]
            left, right = br.copy(), br.copy()
            left.add_suc(lf(g.label, At(g.nom, g.body.lhs)))
            right.add_ant(lf(g.label, At(g.nom, g.body.rhs)))
            return [left, right]
        if rule == "FL":
            g, r = ob[1], ob[2]
            left, right = br.copy(), br.copy()
            left.add_suc(lf(g.label, friend_atom(g.nom, r)))
            right.add_ant(lf(g.label, At(r, g.body.body)))
            return [left, right]
        _, theta, alpha, sigma = ob
        out = []
        for atom in theta.antecedents:
            b = br.copy()
            b.add_suc(lf(alpha, atom.formula(sigma)))
            out.append(b)
        for atom in theta.consequents:
            b = br.copy()
            b.add_ant(lf(alpha, atom.formula(sigma)))
            out.append(b)
        return out


def _with_ref(S: TreeSequent, br: "_Branch") -> TreeSequent:
    """Make the (ref=) closure explicit; the engine itself handles it through classes."""
    refl = {LabelledFormula(lab, At(n, Nominal(n))) for lab in br.tree for n in br.noms}
    return S.with_(ant=S.ant | refl)


def _fold(steps: list, leaf: Derivation) -> Derivation:
    d = leaf
    for rule, principal, conc in reversed(steps):
        d = Derivation(conc, rule, principal, [d])
    return d


# --- derived model -----------------------------------------------------------------

def _closure(pairs: set, domain, box: str) -> set:
    rel = set(pairs)
    if box in ("S4", "S5"):
        rel |= {(x, x) for x in domain}
    if box == "S5":
        rel |= {(y, x) for x, y in rel}
    if box in ("S4", "S5"):
        changed = True
        while changed:
            changed = False
            for x, y in list(rel):
                for y2, z in list(rel):
                    if y == y2 and (x, z) not in rel:
                        rel.add((x, z))
                        changed = True
    return rel


def _model_from_branch(br: _Branch, spec: FrameClassSpec, keep_labels=None):
    from .fileformats import render_label

    if not br.noms:
        extra = FreshNames(set(), prefix="n")()
        br.noms[extra] = None
    agents = br.classes()
    world_of = {lab: render_label(lab) for lab in br.tree}
    worlds = [world_of[l] for l in sorted(br.tree)]
    R = {a: set() for a in agents}
    for lab in br.tree:
        if lab.parent is not None:
            R[br.find(lab.edge[0])].add((world_of[lab.parent], world_of[lab]))
    R = {a: _closure(r, worlds, spec.box) for a, r in R.items()}
    friend = {w: set() for w in worlds}
    val: dict = {}
    for g in br.ant:
        fa = match_friend_atom(g.formula)
        if fa is not None:
            friend[world_of[g.label]].add((br.find(fa[0]), br.find(fa[1])))
        elif isinstance(g.body, Prop):
            val.setdefault(g.body.name, set()).add((world_of[g.label], br.find(g.nom)))
    nominals = {n: br.find(n) for n in sorted(br.noms)}
    M = Model(worlds, agents, R, friend, val, nominals)
    labels = br.tree if keep_labels is None else keep_labels
    f = Assignment({lab: world_of[lab] for lab in labels})
    return M, f


def extract_countermodel(saturated: TreeSequent, spec: FrameClassSpec | None = None,
                         original: TreeSequent | None = None):
    """Derived model of a saturated, open sequent; the assignment is the identity on labels.

    If *original* is given, the assignment is restricted to its tree.
    """
    spec = spec or FrameClassSpec()
    br = _Branch.from_sequent(saturated)
    eng = _Engine(SystemConfig(spec, False), SearchConfig(fuel=1), FreshNames(br.noms))
    if eng.try_close(br.copy(), []) is not None:
        raise ValueError("sequent is closed, not an open saturated branch")
    if eng.next_obligation(br) is not None:
        raise ValueError("sequent is not saturated")
    return _model_from_branch(br, spec, None if original is None else original.tree.labels)


def saturate_branch(S: TreeSequent, cfg: SystemConfig | None = None, sc: SearchConfig | None = None,
                    _engine: _Engine | None = None):
    """Run the saturation procedure from *S*.

    Returns Closed(derivation) when every branch closes, Saturated(sequent) for
    the first open branch reached depth-first, or FuelExhausted.
    """
    cfg = cfg or SystemConfig()
    sc = sc or SearchConfig()
    eng = _engine or _Engine(cfg, sc, FreshNames(S.nominals()))
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        return eng.run(_Branch.from_sequent(S))
    except _OutOfFuel:
        return FuelExhausted()
    finally:
        sys.setrecursionlimit(old)


def prove(S: TreeSequent, cfg: SystemConfig | None = None, sc: SearchConfig | None = None):
    cfg = cfg or SystemConfig()
    sc = sc or SearchConfig()
    if not isinstance(S, TreeSequent):
        raise TypeError("prove expects a TreeSequent")
    if sc.blocking is not None:
        return _prove(S, cfg, sc)
    if cfg.spec.box == "K":
        return _prove(S, cfg, replace(sc, blocking=False))
    res = _prove(S, cfg, replace(sc, blocking=True))
    if isinstance(res, Unknown) and res.reason != "fuel exhausted":
        # a blocked branch that does not verify says nothing; search again unblocked
        return _prove(S, cfg, replace(sc, blocking=False))
    return res


def _prove(S: TreeSequent, cfg: SystemConfig, sc: SearchConfig):
    eng = _Engine(SystemConfig(cfg.spec, False), sc, FreshNames(S.nominals()))
    res = saturate_branch(S, cfg, sc, _engine=eng)
    if isinstance(res, Closed):
        return Proved(res.derivation, eng.stats)
    if isinstance(res, FuelExhausted):
        return Unknown(eng.stats, "fuel exhausted")
    M, f = _model_from_branch(res.branch, cfg.spec, S.tree.labels)
    if frame_in_class(M, cfg.spec) and not sequent_true(M, f, S):
        return Refuted(M, f, eng.stats, res.sequent)
    return Unknown(eng.stats, "saturated branch did not verify as a countermodel")


def prove_formula(phi: Formula, cfg: SystemConfig | None = None, sc: SearchConfig | None = None,
                  nom: str | None = None):
    """Prove ``=>_{0} 0:@n phi`` for a nominal n fresh in phi."""
    n = nom or FreshNames(nominals_of(phi), prefix="n")()
    return prove(TreeSequent.of_formula(phi, n), cfg, sc)
