"""From tree-sequent derivations to Hilbert proofs of their formulaic translations.

Each inference is handled in two steps.  A *local* lemma relates the
translations at the label where premises and conclusion differ; it is then
*lifted* to the root through the ``@x [] (...)`` contexts of the ancestors.
Premises are first made cumulative (every conclusion formula added), which
is a monotonicity step on translations.
"""

from __future__ import annotations

from ..admissible import deep_recursion
from ..calculus import CheckResult, Derivation, Label, SystemConfig, TreeSequent, check_derivation
from ..frames import FrameClassSpec
from ..syntax import At, FBox, Formula, Implies, KBox, Nominal, Not, friend_atom
from .builder import Lemmas, ProofBuilder, implies_chain
from .proof import Antecedent, AtBox, HilbertProof, NecessityForm, instantiate_necessity_form, ri_axiom_name
from .translate import Translator


class ElaborationError(Exception):
    pass


def _lca(a: Label, b: Label) -> Label:
    k = 0
    while k < min(len(a.path), len(b.path)) and a.path[k] == b.path[k]:
        k += 1
    return Label(a.root, a.path[:k])


class _Elaborator:
    def __init__(self, spec: FrameClassSpec, verify: bool = False):
        self.b = ProofBuilder(spec, verify=verify)
        self.lm = Lemmas(self.b)
        self._tr: dict[TreeSequent, Translator] = {}

    def T(self, S: TreeSequent) -> Translator:
        t = self._tr.get(S)
        if t is None:
            t = self._tr[S] = Translator(S)
        return t

    # generic machinery -------------------------------------------------------------
    def mono(self, P: TreeSequent, Q: TreeSequent) -> int:
        """``|- T(P) -> T(Q)`` for P contained in Q over the same tree."""
        tp, tq = self.T(P), self.T(Q)

        def rec(g: Label):
            if tp.at(g) == tq.at(g):
                return None
            kids = []
            for c in P.tree.children(g):
                line = rec(c)
                if line is not None:
                    kids.append(self.b.box_at_mono(c.edge[0], line))
            return self.b.chain(kids, Implies(tp.at(g), tq.at(g)))

        return rec(P.tree.root)

    def lift(self, g: Label, line: int, prems: list[TreeSequent], C: TreeSequent) -> int:
        k = len(prems)
        tps = [self.T(P) for P in prems]
        tc = self.T(C)
        while g.parent is not None:
            lifted = self.b.box_at_mono(g.edge[0], line, k)
            g = g.parent
            line = self.b.chain([lifted], implies_chain([t.at(g) for t in tps], tc.at(g)))
        return line

    # per-node ------------------------------------------------------------------------
    def node(self, d: Derivation) -> int:
        prem_lines = [self.node(p) for p in d.premises]
        C = d.conclusion
        Ps = [p.conclusion for p in d.premises]
        cum = [P.with_(ant=P.ant | C.ant, suc=P.suc | C.suc) for P in Ps]
        lines = []
        for P, Pc, l in zip(Ps, cum, prem_lines):
            if self.T(P).at(P.tree.root) != self.T(Pc).at(Pc.tree.root):
                l = self.b.mp(l, self.mono(P, Pc))
            lines.append(l)
        if d.rule == "FR":
            return self.f_right(d, cum[0], lines[0])
        g, local = self.local(d, cum)
        out = self.lift(g, local, cum, C)
        for l in lines:
            out = self.b.mp(l, out)
        return out

    def local(self, d: Derivation, cum: list[TreeSequent]) -> tuple[Label, int]:
        b, lm = self.b, self.lm
        C = d.conclusion
        tc = self.T(C)
        tps = [self.T(P) for P in cum]
        pr = d.principal
        rule = d.rule

        def at(g: Label, facts: list[int]):
            return g, b.chain(facts, implies_chain([t.at(g) for t in tps], tc.at(g)))

        if rule in ("wlab",):
            return at(pr["label"].parent, [])
        if rule == "cut":
            return at(pr["formula"].label, [])
        if rule == "ri":
            theta = pr["theta"]
            mp = {"'" + v: pr["map"][v] for v in theta.nominals}
            return at(pr["label"], [b.axiom(ri_axiom_name(theta), mp)])
        if rule in ("rep1", "rep2"):
            return at(pr["eq"].label, [self.rep_fact(pr["eq"].formula, pr["from"].formula, pr["to"].formula)])
        if rule == "rigid":
            return self.rigid(pr["from"], pr["to"], cum[0], C)
        f = pr["formula"]
        n, body = f.nom, f.body
        if rule == "id":
            return at(f.label, [])
        if rule == "bot":
            return at(f.label, [lm.use("not_bot", {"'n": n})])
        if rule == "ref":
            return at(f.label, [b.axiom("Ref", {"'n": n})])
        if rule == "->R":
            return at(f.label, [lm.use("imp_r", {"'n": n, "p": body.lhs, "q": body.rhs})])
        if rule == "->L":
            return at(f.label, [b.axiom("K_at", {"'n": n, "p": body.lhs, "q": body.rhs})])
        if rule == "@R":
            return at(f.label, [lm.use("at_intro", {"'m": body.nom, "'n": n, "p": body.body})])
        if rule == "@L":
            return at(f.label, [b.axiom("Agree", {"'n": n, "'m": body.nom, "p": body.body})])
        if rule == "FL":
            return at(f.label, [lm.use("f_left", {"'n": n, "'m": pr["witness"], "p": body.body})])
        if rule == "[]R":
            return at(f.label, [lm.use("box_r", {"'n": n, "p": body.body})])
        if rule == "[]L":
            return self.box_left(f, pr["target"], cum[0], C)
        raise ElaborationError(f"no elaboration for rule {rule!r}")

    # two-label rules ---------------------------------------------------------------------
    def _guarded_up(self, start: Label, stop: Label, guard: Formula, line: int, tp, tc, transfer) -> int:
        """Carry ``guard -> (T_P -> T_C)`` from *start* up to *stop*."""
        b = self.b
        cur = start
        while cur != stop:
            x = cur.edge[0]
            lifted = b.box_at_mono(x, line, 2)
            tr = transfer(x, cur)
            cur = cur.parent
            line = b.chain([tr, lifted], Implies(guard, Implies(tp.at(cur), tc.at(cur))))
        return line

    def _refuted_up(self, start: Label, stop: Label, neg: Formula, tc, transfer) -> int:
        """``neg -> T_C`` at *start* (where the guard is assumed) carried up to *stop*."""
        b = self.b
        line = b.chain([], Implies(neg, tc.at(start)))
        cur = start
        while cur != stop:
            x = cur.edge[0]
            lifted = b.box_at_mono(x, line, 1)
            tr = transfer(x)
            cur = cur.parent
            line = b.chain([tr, lifted], Implies(neg, tc.at(cur)))
        return line

    def box_left(self, f, beta: Label, P: TreeSequent, C: TreeSequent):
        b, lm = self.b, self.lm
        alpha, n, phi = f.label, f.nom, f.body.body
        F0 = f.formula
        L = _lca(alpha, beta)
        tp, tc = self.T(P), self.T(C)
        at_phi = At(n, phi)
        line = b.chain([], Implies(at_phi, Implies(tp.at(beta), tc.at(beta))))
        if beta == L:
            t = lm.use("at_t", {"'n": n, "p": phi})
            down = b.chain([t, line], Implies(F0, Implies(tp.at(L), tc.at(L))))
        else:
            dcom = b.axiom("DCom", {"'n": n, "p": phi})
            lifted = b.box_at_mono(n, line, 2)
            cur = beta.parent
            line = b.chain([dcom, lifted], Implies(F0, Implies(tp.at(cur), tc.at(cur))))
            down = self._guarded_up(cur, L, F0, line, tp, tc,
                                    lambda x, c: lm.use("at_4", {"'n": n, "p": phi}))
        up = self._refuted_up(alpha, L, Not(F0), tc, lambda x: lm.use("at_5", {"'n": n, "p": phi}))
        return L, b.chain([down, up], Implies(tp.at(L), tc.at(L)))

    def rigid(self, src, dst, P: TreeSequent, C: TreeSequent):
        b, lm = self.b, self.lm
        alpha, beta = src.label, dst.label
        E = src.formula
        n, m = E.nom, E.body.name
        L = _lca(alpha, beta)
        tp, tc = self.T(P), self.T(C)
        line = b.chain([], Implies(E, Implies(tp.at(beta), tc.at(beta))))
        down = self._guarded_up(beta, L, E, line, tp, tc,
                                lambda x, c: lm.use("rigid_pos", {"'n": n, "'m": m, "'k": x}))
        up = self._refuted_up(alpha, L, Not(E), tc, lambda x: lm.use("rigid_neg", {"'n": n, "'m": m, "'k": x}))
        return L, b.chain([down, up], Implies(tp.at(L), tc.at(L)))

    # FR via bounded generalisation --------------------------------------------------------
    def f_right(self, d: Derivation, P: TreeSequent, p_line: int) -> int:
        b = self.b
        C = d.conclusion
        f = d.principal["formula"]
        m = d.principal["fresh"]
        alpha, n, phi = f.label, f.nom, f.body.body
        tp, tc = self.T(P), self.T(C)
        path = alpha.ancestors()
        steps: list = []
        starts = []
        for j, g in enumerate(path):
            nxt = path[j + 1] if j + 1 < len(path) else None
            if j:
                steps.append(AtBox(g.edge[0]))
            starts.append(len(steps))
            steps.append(Antecedent(tc.antecedent_form(g, skip=nxt)))
        form = NecessityForm(tuple(steps))

        def suffix(j: int, hole: Formula) -> Formula:
            return instantiate_necessity_form(NecessityForm(steps[starts[j]:]), hole)

        h1 = Implies(friend_atom(n, m), At(m, phi))
        h2 = At(n, FBox(phi))
        last = len(path) - 1
        line = b.chain([], Implies(tp.at(alpha), suffix(last, h1)))
        for j in range(last - 1, -1, -1):
            lifted = b.box_at_mono(path[j + 1].edge[0], line, 1)
            line = b.chain([lifted], Implies(tp.at(path[j]), suffix(j, h1)))
        pre = b.mp(p_line, line)
        post = b.lbg(pre, form, n, m, phi)
        line = b.chain([], Implies(suffix(last, h2), tc.at(alpha)))
        for j in range(last - 1, -1, -1):
            lifted = b.box_at_mono(path[j + 1].edge[0], line, 1)
            line = b.chain([lifted], Implies(suffix(j, h2), tc.at(path[j])))
        return b.mp(post, line)

    # replacement of equals -------------------------------------------------------------
    def rep_fact(self, E: Formula, X: Formula, Y: Formula) -> int:
        """``|- E -> (X -> Y)`` where E = @n m and X, Y differ only by n/m."""
        return _Replacement(self.b, self.lm, E).eqv(X, Y)[0]


class _Replacement:
    def __init__(self, b: ProofBuilder, lm: Lemmas, E: Formula):
        self.b, self.lm, self.E = b, lm, E
        self.n, self.m = E.nom, E.body.name
        self._cache: dict = {}

    def _imp(self, x, y):
        return Implies(self.E, Implies(x, y))

    def nom_step(self, a: str, c: str) -> int:
        """E -> (a -> c)."""
        b, lm, n, m = self.b, self.lm, self.n, self.m
        if (a, c) == (n, m):
            return b.axiom("Elim", {"'n": n, "p": Nominal(m)})
        sym = lm.use("eq_sym", {"'n": n, "'m": m})
        elim = b.axiom("Elim", {"'n": m, "p": Nominal(n)})
        return b.chain([sym, elim], self._imp(Nominal(m), Nominal(n)))

    def sub_step(self, c: str, d: str, Z: Formula) -> int:
        """E -> (@c Z -> @d Z)."""
        b, lm, n, m = self.b, self.lm, self.n, self.m
        if (c, d) == (n, m):
            return lm.use("eq_sub", {"'n": n, "'m": m, "p": Z})
        sym = lm.use("eq_sym", {"'n": n, "'m": m})
        sub = lm.use("eq_sub", {"'n": m, "'m": n, "p": Z})
        return b.chain([sym, sub], self._imp(At(m, Z), At(n, Z)))

    def eqv(self, X: Formula, Y: Formula) -> tuple[int, int]:
        key = (X, Y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        b, lm, E = self.b, self.lm, self.E
        if X == Y:
            t = b.taut(self._imp(X, X))
            out = (t, t)
        elif isinstance(X, Nominal) and isinstance(Y, Nominal):
            out = (self.nom_step(X.name, Y.name), self.nom_step(Y.name, X.name))
        elif isinstance(X, Implies) and isinstance(Y, Implies):
            f1, b1 = self.eqv(X.lhs, Y.lhs)
            f2, b2 = self.eqv(X.rhs, Y.rhs)
            out = (b.chain([b1, f2], self._imp(X, Y)), b.chain([f1, b2], self._imp(Y, X)))
        elif isinstance(X, KBox) and isinstance(Y, KBox):
            f, bk = self.eqv(X.body, Y.body)
            rig = b.axiom("Rigid_eq", {"'n": self.n, "'m": self.m})
            out = (b.chain([rig, b.box_mono(f, 2)], self._imp(X, Y)),
                   b.chain([rig, b.box_mono(bk, 2)], self._imp(Y, X)))
        elif isinstance(X, FBox) and isinstance(Y, FBox):
            f, bk = self.eqv(X.body, Y.body)
            back = b.axiom("Back", {"'n": self.n, "p": Nominal(self.m)})
            out = (b.chain([back, b.f_mono(f, 2)], self._imp(X, Y)),
                   b.chain([back, b.f_mono(bk, 2)], self._imp(Y, X)))
        elif isinstance(X, At) and isinstance(Y, At):
            f, bk = self.eqv(X.body, Y.body)
            c, d = X.nom, Y.nom

            def direction(line, s, t, S_body, T_body):
                # E -> (@s S -> @t T) from E -> (S -> T)
                intro = lm.use("at_intro", {"'m": self.n, "'n": s, "p": Nominal(self.m)})
                atm = b.at_mono(s, line, 2)
                prems = [intro, atm]
                if s != t:
                    prems.append(self.sub_step(s, t, T_body))
                return b.chain(prems, self._imp(At(s, S_body), At(t, T_body)))

            out = (direction(f, c, d, X.body, Y.body), direction(bk, d, c, Y.body, X.body))
        else:
            raise ElaborationError("formulas do not differ by a nominal replacement")
        self._cache[key] = out
        return out


def elaborate_to_hilbert(d: Derivation, spec: FrameClassSpec | None = None, check: bool = True,
                         verify_steps: bool = False) -> HilbertProof:
    """Hilbert proof whose last line is the root translation of d's conclusion."""
    spec = spec or FrameClassSpec()
    if check:
        res: CheckResult = check_derivation(d, SystemConfig(spec, allow_cut=True))
        if not res.ok:
            raise ElaborationError("derivation does not check:\n" + res.report())
    el = _Elaborator(spec, verify=verify_steps)
    with deep_recursion():
        last = el.node(d)
    return el.b.proof_of(last)
