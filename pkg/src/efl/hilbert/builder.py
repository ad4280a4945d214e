"""Incremental construction of Hilbert proofs plus a library of derived lemmas.

Lemma schemas are proved once per proof over the letters ``p, q`` and
``'n, 'm, 'k`` and then instantiated with a single US line.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..frames import FrameClassSpec
from ..syntax import (
    BOT,
    TOP,
    At,
    FBox,
    Formula,
    Implies,
    KBox,
    Nominal,
    Not,
    Prop,
    UniformSubstitution,
    apply_substitution,
    friend_atom,
)
from ..taut import is_tautology
from .proof import (
    LBG,
    MP,
    US,
    Axiom,
    HilbertProof,
    Name,
    NecAt,
    NecBox,
    NecessityForm,
    NecF,
    axiom_schema,
)


class ProofError(Exception):
    """Raised when a construction step would not be a correct proof line."""


def _sigma(mapping: Mapping[str, object] | None) -> UniformSubstitution:
    """Build a substitution from ``{"p": formula, "'n": "m"}``-style keys."""
    props, noms = {}, {}
    for k, v in (mapping or {}).items():
        if k.startswith("'"):
            noms[k[1:]] = v
        else:
            props[k] = v
    return UniformSubstitution(props, noms)


def implies_chain(prems: Sequence[Formula], concl: Formula) -> Formula:
    out = concl
    for a in reversed(prems):
        out = Implies(a, out)
    return out


class ProofBuilder:
    def __init__(self, spec: FrameClassSpec | None = None, verify: bool = True):
        self.spec = spec or FrameClassSpec()
        self.verify = verify
        self.lines: list = []
        self.index: dict[Formula, int] = {}

    def formula(self, i: int) -> Formula:
        return self.lines[i][0]

    def proof(self) -> HilbertProof:
        return HilbertProof(list(self.lines))

    def proof_of(self, i: int) -> HilbertProof:
        """The proof with line *i* moved to the end (all later lines dropped)."""
        if i == len(self.lines) - 1:
            return self.proof()
        lines = list(self.lines[: i + 1])
        lines.append((self.lines[i][0], MP(*self._self_mp(i, lines))))
        return HilbertProof(lines)

    def _self_mp(self, i, lines):
        # phi, phi -> phi, phi: re-derive line i as the final line
        phi = lines[i][0]
        lines.append((Implies(phi, phi), Axiom("Taut")))
        return i, len(lines) - 1

    def _add(self, phi: Formula, just) -> int:
        hit = self.index.get(phi)
        if hit is not None:
            return hit
        self.lines.append((phi, just))
        k = len(self.lines) - 1
        self.index[phi] = k
        return k

    # primitive steps
    def axiom(self, name: str, mapping: Mapping[str, object] | None = None) -> int:
        schema = axiom_schema(name, self.spec)
        if schema is None:
            raise ProofError(f"unknown axiom {name!r}")
        sigma = _sigma(mapping)
        return self._add(apply_substitution(schema, sigma), Axiom(name, sigma))

    def taut(self, phi: Formula) -> int:
        if phi in self.index:
            return self.index[phi]
        if self.verify and not is_tautology(phi):
            raise ProofError("not a tautology")
        return self._add(phi, Axiom("Taut"))

    def mp(self, i: int, j: int) -> int:
        a, b = self.formula(i), self.formula(j)
        if not (isinstance(b, Implies) and b.lhs == a):
            raise ProofError("MP premises do not match")
        return self._add(b.rhs, MP(i, j))

    def nec_box(self, i: int) -> int:
        return self._add(KBox(self.formula(i)), NecBox(i))

    def nec_f(self, i: int) -> int:
        return self._add(FBox(self.formula(i)), NecF(i))

    def nec_at(self, i: int, n: str) -> int:
        return self._add(At(n, self.formula(i)), NecAt(i, n))

    def us(self, i: int, mapping: Mapping[str, object] | UniformSubstitution) -> int:
        sigma = mapping if isinstance(mapping, UniformSubstitution) else _sigma(mapping)
        if sigma.is_identity():
            return i
        return self._add(apply_substitution(self.formula(i), sigma), US(i, sigma))

    def name(self, i: int, n: str) -> int:
        f = self.formula(i)
        if not (isinstance(f, Implies) and f.lhs == Nominal(n)):
            raise ProofError("Name premise is not n -> phi")
        return self._add(f.rhs, Name(i, n))

    def lbg(self, i: int, L: NecessityForm, n: str, m: str, phi: Formula) -> int:
        from .proof import instantiate_necessity_form

        return self._add(instantiate_necessity_form(L, At(n, FBox(phi))), LBG(i, L, n, m, phi))

    # derived steps
    def chain(self, prems: Sequence[int], target: Formula) -> int:
        """Prove *target* from earlier lines by one tautology and repeated MP."""
        if target in self.index:
            return self.index[target]
        fs = [self.formula(i) for i in prems]
        t = self.taut(implies_chain(fs, target))
        cur = t
        for i in prems:
            cur = self.mp(i, cur)
        return cur

    def _mono(self, i: int, arity: int, wrap, k_axiom) -> int:
        """From ``A1 -> ... -> Ak -> B`` get ``w(A1) -> ... -> w(Ak) -> w(B)``."""
        f = self.formula(i)
        parts = []
        cur = f
        for _ in range(arity):
            if not isinstance(cur, Implies):
                raise ProofError("monotonicity: formula has too few antecedents")
            parts.append(cur.lhs)
            cur = cur.rhs
        line = wrap(i)
        steps = []
        body = f
        for a in parts:
            ax = k_axiom(a, body.rhs)  # w(a -> r) -> (w a -> w r)
            steps.append(ax)
            body = body.rhs
        target = implies_chain([self._wrapf(wrap, a) for a in parts], self._wrapf(wrap, cur))
        return self.chain([line] + steps, target)

    def _wrapf(self, wrap, f):
        return wrap.formula(f)

    def box_mono(self, i: int, arity: int = 1) -> int:
        return self._mono(i, arity, _Wrap(self.nec_box, KBox), lambda a, r: self.axiom("K_box", {"p": a, "q": r}))

    def f_mono(self, i: int, arity: int = 1) -> int:
        return self._mono(i, arity, _Wrap(self.nec_f, FBox), lambda a, r: self.axiom("K_F", {"p": a, "q": r}))

    def at_mono(self, n: str, i: int, arity: int = 1) -> int:
        return self._mono(i, arity, _Wrap(lambda j: self.nec_at(j, n), lambda f: At(n, f)),
                          lambda a, r: self.axiom("K_at", {"'n": n, "p": a, "q": r}))

    def box_at_mono(self, x: str, i: int, arity: int = 1) -> int:
        """From ``A1 -> ... -> B`` get ``@x[]A1 -> ... -> @x[]B``."""
        return self.at_mono(x, self.box_mono(i, arity), arity)

    def iff_parts(self, i: int) -> tuple[int, int]:
        """Split a proved biconditional into both implications."""
        f = self.formula(i)
        # Iff(a, b) = not((a->b) -> not(b->a))
        ab = f.lhs.lhs
        ba = f.lhs.rhs.lhs
        return self.chain([i], ab), self.chain([i], ba)


class _Wrap:
    def __init__(self, rule, formula):
        self.rule = rule
        self.formula = formula

    def __call__(self, i):
        return self.rule(i)


# --- lemma library ----------------------------------------------------------------

P, Q = Prop("p"), Prop("q")


class Lemmas:
    """Derived schemas, each proved once per builder and then instantiated."""

    def __init__(self, b: ProofBuilder):
        self.b = b
        self._schemas: dict[str, int] = {}

    def use(self, name: str, mapping: Mapping[str, object] | None = None) -> int:
        if name not in self._schemas:
            self._schemas[name] = getattr(self, "_" + name)()
        return self.b.us(self._schemas[name], mapping or {})

    # schema proofs ------------------------------------------------------------------
    def _sd(self, n, x):
        return self.b.axiom("Selfdual", {"'n": n, "p": x})

    def _at_intro(self):
        """@m p -> @n @m p"""
        b = self.b
        agree = b.axiom("Agree", {"p": Not(P)})
        sd_m = self._sd("m", P)
        sd_n = self._sd("n", At("m", P))
        neg_to = b.chain([sd_m], Implies(Not(At("m", P)), At("m", Not(P))))
        d = b.at_mono("n", neg_to)
        return b.chain([agree, sd_m, sd_n, d], Implies(At("m", P), At("n", At("m", P))))

    def _imp_r(self):
        """(@n p -> @n q) -> @n (p -> q)"""
        b = self.b
        sd1 = self._sd("n", Implies(P, Q))
        a = b.at_mono("n", b.taut(Implies(Not(Implies(P, Q)), P)))
        c = b.at_mono("n", b.taut(Implies(Not(Implies(P, Q)), Not(Q))))
        sd2 = self._sd("n", Q)
        return b.chain([sd1, a, c, sd2], Implies(Implies(At("n", P), At("n", Q)), At("n", Implies(P, Q))))

    def _not_bot(self):
        """not @n false"""
        b = self.b
        t = b.nec_at(b.taut(Not(BOT)), "n")
        return b.chain([t, self._sd("n", BOT)], Not(At("n", BOT)))

    def _nom_intro(self):
        """n -> (p -> @n p)"""
        b = self.b
        elim = b.axiom("Elim", {"p": Not(P)})
        return b.chain([elim, self._sd("n", P)], Implies(Nominal("n"), Implies(P, At("n", P))))

    def _eq_sub(self):
        """@n m -> (@n p -> @m p)"""
        b = self.b
        intro = self.use("nom_intro", {"'n": "m"})
        lifted = b.at_mono("n", intro, 2)
        agree = b.axiom("Agree", {})
        return b.chain([lifted, agree], Implies(At("n", Nominal("m")), Implies(At("n", P), At("m", P))))

    def _eq_sym(self):
        """@n m -> @m n"""
        b = self.b
        sub = self.use("eq_sub", {"p": Nominal("n")})
        ref = b.axiom("Ref", {})
        return b.chain([sub, ref], Implies(At("n", Nominal("m")), At("m", Nominal("n"))))

    def _box_r(self):
        """@n [](true -> @n p) -> @n [] p"""
        b = self.b
        t = b.taut(Implies(Implies(TOP, At("n", P)), At("n", P)))
        m = b.box_at_mono("n", t)
        dcom = b.axiom("DCom", {})
        return b.chain([m, dcom], Implies(At("n", KBox(Implies(TOP, At("n", P)))), At("n", KBox(P))))

    def _f_left(self):
        """@n F p -> (@n <F> m -> @m p)"""
        b = self.b
        sd_m = self._sd("m", P)
        back = b.axiom("Back", {"'n": "m", "p": Not(P)})
        intro = self.use("at_intro", {"p": Not(P)})
        back_n = b.at_mono("n", back)
        a3 = b.chain([sd_m, intro, back_n], Implies(Not(At("m", P)), At("n", FBox(At("m", Not(P))))))
        elim = b.axiom("Elim", {"'n": "m", "p": Not(P)})
        a4 = b.chain([elim], Implies(P, Implies(At("m", Not(P)), Not(Nominal("m")))))
        a6 = b.at_mono("n", b.f_mono(a4, 2), 2)
        sd_f = self._sd("n", FBox(Not(Nominal("m"))))
        return b.chain([a3, a6, sd_f], Implies(At("n", FBox(P)), Implies(friend_atom("n", "m"), At("m", P))))

    def _at_neg(self):
        """not @m p -> @n not @m p"""
        b = self.b
        sd_m = self._sd("m", P)
        intro = self.use("at_intro", {"p": Not(P)})
        back = b.at_mono("n", b.chain([sd_m], Implies(At("m", Not(P)), Not(At("m", P)))))
        return b.chain([sd_m, intro, back], Implies(Not(At("m", P)), At("n", Not(At("m", P)))))

    def _rigid_pos(self):
        """@n m -> @k [] @n m"""
        b = self.b
        e = At("n", Nominal("m"))
        rig = b.at_mono("k", b.axiom("Rigid_eq", {}))
        intro = self.use("at_intro", {"'m": "n", "'n": "k", "p": Nominal("m")})
        return b.chain([intro, rig], Implies(e, At("k", KBox(e))))

    def _rigid_neg(self):
        """not @n m -> @k [] not @n m"""
        b = self.b
        e = At("n", Nominal("m"))
        rig = b.at_mono("k", b.axiom("Rigid_neq", {}))
        neg = self.use("at_neg", {"'m": "n", "'n": "k", "p": Nominal("m")})
        return b.chain([neg, rig], Implies(Not(e), At("k", KBox(Not(e)))))

    def _at_t(self):
        """@n [] p -> @n p"""
        return self.b.at_mono("n", self.b.axiom("T", {}))

    def _at_4(self):
        """@n [] p -> @n [] @n [] p"""
        b = self.b
        four = b.at_mono("n", b.axiom("4", {}))
        dcom = b.axiom("DCom", {"p": KBox(P)})
        return b.chain([four, dcom], Implies(At("n", KBox(P)), At("n", KBox(At("n", KBox(P))))))

    def _at_5(self):
        """not @n [] p -> @n [] not @n [] p"""
        b = self.b
        bp = KBox(P)
        bax = b.axiom("B", {"p": Not(bp)})  # ~[]p -> [] ~[] ~~[]p
        four = b.axiom("4", {})
        dn = b.box_mono(b.taut(Implies(bp, Not(Not(bp)))))
        step = b.chain([four, dn], Implies(Not(KBox(Not(Not(bp)))), Not(bp)))
        inner = b.box_mono(step)
        five = b.chain([bax, inner], Implies(Not(bp), KBox(Not(bp))))
        five_n = b.at_mono("n", five)
        sd = self._sd("n", bp)
        dcom = b.axiom("DCom", {"p": Not(bp)})
        back = b.chain([sd], Implies(At("n", Not(bp)), Not(At("n", bp))))
        lifted = b.box_at_mono("n", back)
        return b.chain([sd, five_n, dcom, lifted], Implies(Not(At("n", bp)), At("n", KBox(Not(At("n", bp))))))

    # derived theorems ------------------------------------------------------------------
    def _at_absorb(self):
        """@m @n p <-> @n p"""
        b = self.b
        fwd = b.axiom("Agree", {"'n": "m", "'m": "n"})
        bwd = self.use("at_intro", {"'m": "n", "'n": "m"})
        from ..syntax import Iff

        return b.chain([fwd, bwd], Iff(At("m", At("n", P)), At("n", P)))

    def _nominal_local(self):
        """n -> (@n p <-> p)"""
        b = self.b
        from ..syntax import Iff

        elim = b.axiom("Elim", {})
        intro = self.use("nom_intro", {})
        return b.chain([elim, intro], Implies(Nominal("n"), Iff(At("n", P), P)))
