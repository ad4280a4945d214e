"""From Hilbert proofs to tree-sequent derivations (with cut).

Every proof line is embedded as a derivation of ``=> 0:@n phi`` over the
one-label tree ``{0}``; the result is relocated to the requested label.
"""

from __future__ import annotations

from ..admissible import (
    deep_recursion,
    relocate,
    substitute_derivation,
    weaken,
)
from ..calculus import (
    Derivation,
    Label,
    LabelledFormula,
    LabelTree,
    SystemConfig,
    TreeSequent,
    lf,
    sort_lfs,
)
from ..frames import FrameClassSpec
from ..syntax import (
    At,
    Falsum,
    FBox,
    Formula,
    FreshNames,
    Implies,
    KBox,
    Nominal,
    UniformSubstitution,
    friend_atom,
    nominals_of,
)
from .proof import (
    LBG,
    MP,
    US,
    Antecedent,
    AtBox,
    Axiom,
    HilbertProof,
    Name,
    NecAt,
    NecBox,
    NecF,
    axiom_schema,
    check_hilbert,
)


class EmbeddingError(Exception):
    pass


# --- invertibility -----------------------------------------------------------------


def _id(S: TreeSequent, x: LabelledFormula) -> Derivation:
    return Derivation(S, "id", {"formula": x})


def invert_rule(d: Derivation, rule: str, formula: LabelledFormula, child: Label | None = None) -> Derivation:
    """Derivation of the premise of *rule* applied to *formula* in d's root, built with cut."""
    S = d.conclusion
    G, D, T = S.ant, S.suc, S.tree
    a, n, body = formula.label, formula.nom, formula.body
    if rule == "->R":
        if formula not in D or not isinstance(body, Implies):
            raise ValueError("->R inversion needs an implication in the succedent")
        A, B = lf(a, At(n, body.lhs)), lf(a, At(n, body.rhs))
        C = TreeSequent(G | {A}, T, (D - {formula}) | {B})
        p2c = TreeSequent(G | {A, formula}, T, C.suc)
        p2 = Derivation(p2c, "->L", {"formula": formula}, [
            _id(p2c.with_(suc=p2c.suc | {A}), A),
            _id(p2c.with_(ant=p2c.ant | {B}), B),
        ])
        return Derivation(C, "cut", {"formula": formula}, [d, p2])
    if rule == "@R":
        if formula not in D or not isinstance(body, At):
            raise ValueError("@R inversion needs @n @m phi in the succedent")
        Y = lf(a, body)
        C = TreeSequent(G, T, (D - {formula}) | {Y})
        p2c = C.with_(ant=G | {formula})
        p2 = Derivation(p2c, "@L", {"formula": formula}, [_id(p2c.with_(ant=p2c.ant | {Y}), Y)])
        return Derivation(C, "cut", {"formula": formula}, [d, p2])
    if rule == "@L":
        if formula not in G or not isinstance(body, At):
            raise ValueError("@L inversion needs @n @m phi in the antecedent")
        Y = lf(a, body)
        C = TreeSequent((G - {formula}) | {Y}, T, D)
        p1c = C.with_(suc=D | {formula})
        p1 = Derivation(p1c, "@R", {"formula": formula}, [_id(p1c.with_(suc=p1c.suc | {Y}), Y)])
        p2 = weaken(d, Y, "left") if Y not in G else d
        return Derivation(C, "cut", {"formula": formula}, [p1, p2])
    if rule == "[]R":
        if formula not in D or not isinstance(body, KBox):
            raise ValueError("[]R inversion needs @n [] phi in the succedent")
        beta = child or a.child(n, T.fresh_index(a))
        if beta in T or beta.parent != a or beta.edge[0] != n:
            raise ValueError("[]R inversion needs a fresh n-child of the principal label")
        T2 = T.add(beta)
        Y = lf(beta, At(n, body.body))
        C = TreeSequent(G, T2, (D - {formula}) | {Y})
        p1 = Derivation(S.with_(tree=T2), "wlab", {"label": beta}, [d])
        p2c = C.with_(ant=G | {formula})
        p2 = Derivation(p2c, "[]L", {"formula": formula, "target": beta},
                        [_id(p2c.with_(ant=p2c.ant | {Y}), Y)])
        return Derivation(C, "cut", {"formula": formula}, [p1, p2])
    raise ValueError(f"rule {rule!r} is not one of ->R, []R, @R, @L")


# --- propositional derivations --------------------------------------------------------


def taut_derivation(S: TreeSequent) -> Derivation:
    """Cut-free derivation of a sequent valid by its implication structure alone."""

    def go(ant: frozenset, suc: frozenset, done: frozenset) -> Derivation:
        C = S.with_(ant=ant, suc=suc)
        for x in sort_lfs(ant):
            if isinstance(x.body, Falsum):
                return Derivation(C, "bot", {"formula": x})
        common = ant & suc
        if common:
            return _id(C, sort_lfs(common)[0])
        for x in sort_lfs(suc - done):
            if isinstance(x.body, Implies):
                A, B = lf(x.label, At(x.nom, x.body.lhs)), lf(x.label, At(x.nom, x.body.rhs))
                return Derivation(C, "->R", {"formula": x}, [go(ant | {A}, suc | {B}, done | {x})])
        for x in sort_lfs(ant - done):
            if isinstance(x.body, Implies):
                A, B = lf(x.label, At(x.nom, x.body.lhs)), lf(x.label, At(x.nom, x.body.rhs))
                d2 = done | {x}
                return Derivation(C, "->L", {"formula": x}, [go(ant, suc | {A}, d2), go(ant | {B}, suc, d2)])
        raise EmbeddingError("sequent is not propositionally valid")

    with deep_recursion():
        return go(S.ant, S.suc, frozenset())


# --- embedding -----------------------------------------------------------------------

ROOT = Label(0)
ONE = LabelTree.single(0)


def _goal(phi: Formula, n: str) -> TreeSequent:
    return TreeSequent(frozenset(), ONE, frozenset([lf(ROOT, At(n, phi))]))


class _Embedder:
    def __init__(self, proof: HilbertProof, spec: FrameClassSpec, fresh: FreshNames, fuel: int):
        self.proof = proof
        self.spec = spec
        self.fresh = fresh
        self.fuel = fuel
        self._memo: dict = {}
        self._schemas: dict = {}

    def phi(self, j: int) -> Formula:
        return self.proof.lines[j][0]

    def fresh_for(self, *fs: Formula) -> str:
        used = set()
        for f in fs:
            used |= nominals_of(f)
        while True:
            x = self.fresh()
            if x not in used:
                return x

    def rename(self, d: Derivation, a: str, b: str) -> Derivation:
        if a == b:
            return d
        return substitute_derivation(d, UniformSubstitution(nom_map={a: b}))

    def schema_derivation(self, name: str) -> tuple[Derivation, str]:
        hit = self._schemas.get(name)
        if hit is None:
            from ..search import Proved, prove

            schema = axiom_schema(name, self.spec)
            w = self.fresh_for(schema)
            res = prove(_goal(schema, w), SystemConfig(self.spec, allow_cut=False), _search_cfg(self.fuel))
            if not isinstance(res, Proved):
                raise EmbeddingError(f"could not derive axiom schema {name}")
            hit = self._schemas[name] = (res.derivation, w)
        return hit

    def emb(self, j: int, n: str) -> Derivation:
        key = (j, n)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._emb(j, n)
        return hit

    def _emb(self, j: int, n: str) -> Derivation:
        phi, just = self.proof.lines[j]
        goal = _goal(phi, n)
        if isinstance(just, Axiom):
            if just.name == "Taut":
                return taut_derivation(goal)
            d, w = self.schema_derivation(just.name)
            nm = dict(just.subst.nom_map)
            nm[w] = n
            return substitute_derivation(d, UniformSubstitution(just.subst.prop_map, nm))
        if isinstance(just, MP):
            a = self.phi(just.i)
            n2 = n if n not in nominals_of(a) else self.fresh_for(a, phi)
            d1 = self.emb(just.i, n2)
            d2 = self.emb(just.j, n2)
            inv = invert_rule(d2, "->R", lf(ROOT, At(n2, Implies(a, phi))))
            x = lf(ROOT, At(n2, a))
            out = Derivation(_goal(phi, n2), "cut", {"formula": x}, [d1, inv])
            return self.rename(out, n2, n)
        if isinstance(just, NecBox):
            beta = ROOT.child(n, 0)
            inner = relocate(self.emb(just.i, n), LabelTree(frozenset([ROOT, beta])), beta)
            return Derivation(goal, "[]R", {"formula": lf(ROOT, At(n, phi)), "child": beta}, [inner])
        if isinstance(just, NecF):
            body = self.phi(just.i)
            m = self.fresh_for(phi)
            inner = weaken(self.emb(just.i, m), lf(ROOT, friend_atom(n, m)), "left")
            return Derivation(goal, "FR", {"formula": lf(ROOT, At(n, phi)), "fresh": m}, [inner])
        if isinstance(just, NecAt):
            body = self.phi(just.i)
            m = self.fresh_for(phi)
            inner = self.rename(self.emb(just.i, m), m, just.nom)
            return Derivation(goal, "@R", {"formula": lf(ROOT, At(n, phi))}, [inner])
        if isinstance(just, US):
            src = self.phi(just.i)
            s = just.subst
            avoid = [src, phi] + list(s.prop_map.values()) + [Nominal(x) for x in list(s.nom_map) + list(s.nom_map.values())]
            w = self.fresh_for(*avoid)
            d = substitute_derivation(self.emb(just.i, w), s)
            return self.rename(d, w, n)
        if isinstance(just, Name):
            src = self.phi(just.i)
            m = self.fresh_for(src, phi, Nominal(n))
            d = substitute_derivation(self.emb(just.i, m), UniformSubstitution(nom_map={just.nom: n, m: n}))
            x = lf(ROOT, At(n, Implies(Nominal(n), phi)))
            inv = invert_rule(d, "->R", x)
            return Derivation(goal, "ref", {"formula": lf(ROOT, At(n, Nominal(n)))}, [inv])
        if isinstance(just, LBG):
            return self._lbg(j, just, n)
        raise EmbeddingError(f"unknown justification {just!r}")

    def _lbg(self, j: int, just: LBG, n: str) -> Derivation:
        src = self.phi(just.i)
        phi = self.phi(j)
        w = self.fresh_for(src, phi, Nominal(n), Nominal(just.m))
        d = self.emb(just.i, w)
        gamma, s = ROOT, w
        focus = lf(ROOT, At(w, src))
        records = []
        for step in just.form.steps:
            body = focus.body
            if isinstance(step, Antecedent):
                A = lf(gamma, At(s, body.lhs))
                was_there = A in d.conclusion.ant
                d = invert_rule(d, "->R", focus)
                records.append(("ant", gamma, s, body.lhs, was_there))
                focus = lf(gamma, At(s, body.rhs))
            else:
                x = step.nom
                d = invert_rule(d, "@R", focus)
                focus = lf(gamma, body)  # gamma: @x [] rest
                delta = gamma.child(x, d.conclusion.tree.fresh_index(gamma))
                d = invert_rule(d, "[]R", focus, delta)
                records.append(("box", gamma, s, x, delta))
                gamma, s = delta, x
                focus = lf(delta, At(x, body.body.body))
        # hole: @s (@n0 <F> m0 -> @m0 psi)
        hole = focus.body
        d = invert_rule(d, "->R", focus)
        fa = lf(gamma, At(s, hole.lhs))
        d = invert_rule(d, "@L", fa)
        d = invert_rule(d, "@R", lf(gamma, At(s, hole.rhs)))
        n0, m0, psi = just.n, just.m, just.phi
        friend = lf(gamma, friend_atom(n0, m0))
        target = lf(gamma, At(n0, FBox(psi)))
        C = d.conclusion
        conc = C.with_(ant=C.ant - {friend}, suc=(C.suc - {lf(gamma, At(m0, psi))}) | {target})
        d = Derivation(conc, "FR", {"formula": target, "fresh": m0}, [d])
        wrapped = lf(gamma, At(s, target.formula))
        C = d.conclusion
        d = Derivation(C.with_(suc=(C.suc - {target}) | {wrapped}), "@R", {"formula": wrapped}, [d])
        cur = wrapped
        for rec in reversed(records):
            C = d.conclusion
            if rec[0] == "ant":
                _, g, s2, chi, was_there = rec
                A = lf(g, At(s2, chi))
                new = lf(g, At(s2, Implies(chi, cur.body)))
                ant = C.ant if was_there else C.ant - {A}
                d = Derivation(TreeSequent(ant, C.tree, (C.suc - {cur}) | {new}), "->R", {"formula": new}, [d])
                cur = new
            else:
                _, g, s2, x, delta = rec
                boxed = lf(g, At(x, KBox(cur.body)))
                tree = LabelTree(C.tree.labels - {delta})
                d = Derivation(TreeSequent(C.ant, tree, (C.suc - {cur}) | {boxed}), "[]R",
                               {"formula": boxed, "child": delta}, [d])
                new = lf(g, At(s2, boxed.formula))
                C = d.conclusion
                d = Derivation(C.with_(suc=(C.suc - {boxed}) | {new}), "@R", {"formula": new}, [d])
                cur = new
        return self.rename(d, w, n)


def _search_cfg(fuel: int):
    from ..search import SearchConfig

    return SearchConfig(fuel=fuel)


def embed_hilbert(proof: HilbertProof, tree: LabelTree | None = None, alpha: Label | None = None,
                  n: str | None = None, spec: FrameClassSpec | None = None, check: bool = True,
                  fuel: int = 20000) -> Derivation:
    """Derivation of ``=>_T alpha:@n phi`` for the last line phi of *proof*."""
    spec = spec or FrameClassSpec()
    if not proof.lines:
        raise EmbeddingError("empty proof")
    if check:
        res = check_hilbert(proof, spec)
        if not res.ok:
            raise EmbeddingError("proof does not check:\n" + res.report())
    tree = tree or ONE
    alpha = alpha or tree.root
    if alpha not in tree:
        raise EmbeddingError("label not in tree")
    phi = proof.lines[-1][0]
    used = set(tree.nominals())
    for f, _ in proof.lines:
        used |= nominals_of(f)
    if n is None:
        n = FreshNames(used, prefix="w")()
    if n in nominals_of(phi):
        raise EmbeddingError(f"nominal {n!r} is not fresh in the formula")
    fresh = FreshNames(used | {n}, prefix="h")
    em = _Embedder(proof, spec, fresh, fuel)
    with deep_recursion():
        d = em.emb(len(proof.lines) - 1, n)
        if tree == ONE and alpha == ROOT:
            return d
        return relocate(d, tree, alpha)
