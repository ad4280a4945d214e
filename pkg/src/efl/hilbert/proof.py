"""Hilbert-style proofs: necessity forms, justifications, axioms and the checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from ..frames import FrameClassSpec, RegularImplication, box_axioms, parse_ri_spec
from ..syntax import (
    At,
    FBox,
    Formula,
    Iff,
    Implies,
    KBox,
    Nominal,
    Not,
    Prop,
    UniformSubstitution,
    apply_substitution,
    friend_atom,
    nominals_of,
)
from ..taut import is_tautology

# --- necessity forms ----------------------------------------------------------------


@dataclass(frozen=True)
class Antecedent:
    formula: Formula


@dataclass(frozen=True)
class AtBox:
    nom: str


Step = Union[Antecedent, AtBox]


@dataclass(frozen=True)
class NecessityForm:
    """``psi0 -> @n1 [](psi1 -> ... #)`` as a list of steps; the hole ends the list."""

    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            if not isinstance(s, (Antecedent, AtBox)):
                raise TypeError(f"bad necessity-form step {s!r}")

    def nominals(self) -> set[str]:
        out: set[str] = set()
        for s in self.steps:
            out |= nominals_of(s.formula) if isinstance(s, Antecedent) else {s.nom}
        return out


def instantiate_necessity_form(L: NecessityForm, phi: Formula) -> Formula:
    out = phi
    for s in reversed(L.steps):
        out = Implies(s.formula, out) if isinstance(s, Antecedent) else At(s.nom, KBox(out))
    return out


def decompose_necessity_forms(chi: Formula) -> list[tuple[NecessityForm, Formula]]:
    """Every (L, core) with L(core) = chi, outermost hole first."""
    out = []
    steps: list[Step] = []
    cur = chi
    while True:
        out.append((NecessityForm(tuple(steps)), cur))
        if isinstance(cur, Implies):
            steps.append(Antecedent(cur.lhs))
            cur = cur.rhs
        elif isinstance(cur, At) and isinstance(cur.body, KBox):
            steps.append(AtBox(cur.nom))
            cur = cur.body.body
        else:
            return out


# --- justifications -----------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    name: str
    subst: UniformSubstitution = field(default_factory=UniformSubstitution)


@dataclass(frozen=True)
class MP:
    i: int  # phi
    j: int  # phi -> psi


@dataclass(frozen=True)
class NecBox:
    i: int


@dataclass(frozen=True)
class NecF:
    i: int


@dataclass(frozen=True)
class NecAt:
    i: int
    nom: str


@dataclass(frozen=True)
class US:
    i: int
    subst: UniformSubstitution


@dataclass(frozen=True)
class Name:
    i: int
    nom: str


@dataclass(frozen=True)
class LBG:
    i: int
    form: NecessityForm
    n: str
    m: str
    phi: Formula


Justification = Union[Axiom, MP, NecBox, NecF, NecAt, US, Name, LBG]


@dataclass
class HilbertProof:
    lines: list[tuple[Formula, Justification]] = field(default_factory=list)

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1][0] if self.lines else None

    def __len__(self):
        return len(self.lines)


# --- axioms -------------------------------------------------------------------------

_p, _q = Prop("p"), Prop("q")
_n, _m = Nominal("n"), Nominal("m")

AXIOMS: dict[str, Formula] = {
    "K_box": Implies(KBox(Implies(_p, _q)), Implies(KBox(_p), KBox(_q))),
    "K_F": Implies(FBox(Implies(_p, _q)), Implies(FBox(_p), FBox(_q))),
    "K_at": Implies(At("n", Implies(_p, _q)), Implies(At("n", _p), At("n", _q))),
    "Ref": At("n", _n),
    "Selfdual": Iff(Not(At("n", _p)), At("n", Not(_p))),
    "Elim": Implies(At("n", _p), Implies(_n, _p)),
    "Agree": Implies(At("n", At("m", _p)), At("m", _p)),
    "Back": Implies(At("n", _p), FBox(At("n", _p))),
    "DCom": Iff(At("n", KBox(At("n", _p))), At("n", KBox(_p))),
    "Rigid_eq": Implies(At("n", _m), KBox(At("n", _m))),
    "Rigid_neq": Implies(Not(At("n", _m)), KBox(Not(At("n", _m)))),
}

ALL_AXIOMS = ("Taut",) + tuple(AXIOMS)


def axiom_schema(name: str, spec: FrameClassSpec | None = None) -> Formula | None:
    """Schema for *name* in the system given by *spec*, or None if unknown."""
    spec = spec or FrameClassSpec()
    if name in AXIOMS:
        return AXIOMS[name]
    extra = box_axioms(spec.box)
    if name in extra:
        return extra[name]
    if name.startswith("ri:"):
        try:
            theta = parse_ri_spec(name[3:])
        except Exception:
            return None
        for t in spec.theta:
            if t.antecedents == theta.antecedents and t.consequents == theta.consequents:
                return t.formula()
    return None


def ri_axiom_name(theta: RegularImplication) -> str:
    return "ri:" + (theta.name or theta.render())


# --- checker ------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertViolation:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


@dataclass
class HilbertCheckResult:
    violations: list[HilbertViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def report(self) -> str:
        return "ok" if self.ok else "\n".join(str(v) for v in self.violations)


def _check_line(k: int, phi: Formula, just, proof: HilbertProof, spec: FrameClassSpec,
                taut_cache: dict) -> str | None:
    def prev(i):
        if not isinstance(i, int) or not 0 <= i < k:
            raise IndexError(f"bad line reference {i!r}")
        return proof.lines[i][0]

    try:
        if isinstance(just, Axiom):
            if just.name == "Taut":
                hit = taut_cache.get(phi)
                if hit is None:
                    hit = taut_cache[phi] = is_tautology(phi)
                return None if hit else "not a tautology"
            schema = axiom_schema(just.name, spec)
            if schema is None:
                return f"unknown axiom {just.name!r}"
            if apply_substitution(schema, just.subst) != phi:
                return f"wrong axiom shape for {just.name}"
            return None
        if isinstance(just, MP):
            a, b = prev(just.i), prev(just.j)
            return None if b == Implies(a, phi) else "MP premises do not match"
        if isinstance(just, NecBox):
            return None if phi == KBox(prev(just.i)) else "Nec[] does not match"
        if isinstance(just, NecF):
            return None if phi == FBox(prev(just.i)) else "NecF does not match"
        if isinstance(just, NecAt):
            return None if phi == At(just.nom, prev(just.i)) else "Nec@ does not match"
        if isinstance(just, US):
            return None if apply_substitution(prev(just.i), just.subst) == phi else "US does not match"
        if isinstance(just, Name):
            if prev(just.i) != Implies(Nominal(just.nom), phi):
                return "Name premise is not n -> phi"
            if just.nom in nominals_of(phi):
                return f"freshness violation: {just.nom!r} occurs in the conclusion"
            return None
        if isinstance(just, LBG):
            L = just.form
            pre = instantiate_necessity_form(L, Implies(friend_atom(just.n, just.m), At(just.m, just.phi)))
            post = instantiate_necessity_form(L, At(just.n, FBox(just.phi)))
            if prev(just.i) != pre:
                return "L(BG) premise does not match L(@n<F>m -> @m phi)"
            if phi != post:
                return "L(BG) conclusion does not match L(@n F phi)"
            if just.m in nominals_of(post):
                return f"freshness violation: {just.m!r} occurs in the conclusion"
            return None
        return f"unknown justification {just!r}"
    except IndexError as e:
        return str(e)


def check_hilbert(proof: HilbertProof, extra_axioms: FrameClassSpec | None = None) -> HilbertCheckResult:
    spec = extra_axioms or FrameClassSpec()
    res = HilbertCheckResult()
    cache: dict = {}
    for k, (phi, just) in enumerate(proof.lines):
        msg = _check_line(k, phi, just, proof, spec, cache)
        if msg is not None:
            res.violations.append(HilbertViolation(k, msg))
    return res


# --- JSON ---------------------------------------------------------------------------


def _subst_to_data(s: UniformSubstitution) -> dict:
    from ..parser import render_formula, render_nominal

    out = {p: render_formula(f) for p, f in sorted(s.prop_map.items())}
    out.update({render_nominal(a): render_nominal(b) for a, b in sorted(s.nom_map.items())})
    return out


def _subst_from_data(data, path: str) -> UniformSubstitution:
    from ..fileformats import SchemaError, _formula, _nominal

    if not isinstance(data, dict):
        raise SchemaError("substitution must be an object", path)
    props, noms = {}, {}
    for k, v in data.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise SchemaError("substitution entries must be strings", f"{path}.{k}")
        if k.startswith("'"):
            noms[_nominal(k, f"{path}.{k}")] = _nominal(v, f"{path}.{k}")
        else:
            props[k] = _formula(v, f"{path}.{k}")
    return UniformSubstitution(props, noms)


def _form_to_data(L: NecessityForm) -> list:
    from ..parser import render_formula, render_nominal

    return [{"ant": render_formula(s.formula)} if isinstance(s, Antecedent) else {"atbox": render_nominal(s.nom)}
            for s in L.steps]


def _form_from_data(data, path: str) -> NecessityForm:
    from ..fileformats import SchemaError, _formula, _nominal

    if not isinstance(data, list):
        raise SchemaError("necessity form must be a list of steps", path)
    steps = []
    for i, s in enumerate(data):
        p = f"{path}[{i}]"
        if isinstance(s, dict) and set(s) == {"ant"}:
            steps.append(Antecedent(_formula(s["ant"], p)))
        elif isinstance(s, dict) and set(s) == {"atbox"}:
            steps.append(AtBox(_nominal(s["atbox"], p)))
        else:
            raise SchemaError("step must be {\"ant\": formula} or {\"atbox\": nominal}", p)
    return NecessityForm(tuple(steps))


def _just_to_data(j) -> dict:
    from ..parser import render_formula, render_nominal

    if isinstance(j, Axiom):
        d = {"axiom": j.name}
        if not j.subst.is_identity() or j.subst.prop_map or j.subst.nom_map:
            d["subst"] = _subst_to_data(j.subst)
        return d
    if isinstance(j, MP):
        return {"mp": [j.i, j.j]}
    if isinstance(j, NecBox):
        return {"nec_box": j.i}
    if isinstance(j, NecF):
        return {"nec_f": j.i}
    if isinstance(j, NecAt):
        return {"nec_at": [j.i, render_nominal(j.nom)]}
    if isinstance(j, US):
        return {"us": [j.i, _subst_to_data(j.subst)]}
    if isinstance(j, Name):
        return {"name": [j.i, render_nominal(j.nom)]}
    if isinstance(j, LBG):
        return {"lbg": [j.i, _form_to_data(j.form), render_nominal(j.n), render_nominal(j.m), render_formula(j.phi)]}
    raise TypeError(f"unknown justification {j!r}")


def _int(v, path):
    from ..fileformats import SchemaError

    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError("line reference must be an integer", path)
    return v


def _pair(v, path):
    from ..fileformats import SchemaError

    if not isinstance(v, list) or len(v) != 2:
        raise SchemaError("expected a two-element list", path)
    return v


def _just_from_data(data, path: str):
    from ..fileformats import SchemaError, _formula, _nominal

    if not isinstance(data, dict) or len(data) == 0:
        raise SchemaError("justification must be a non-empty object", path)
    if "axiom" in data:
        if set(data) - {"axiom", "subst"}:
            raise SchemaError("unexpected keys in axiom justification", path)
        if not isinstance(data["axiom"], str):
            raise SchemaError("axiom name must be a string", f"{path}.axiom")
        sub = _subst_from_data(data.get("subst", {}), f"{path}.subst")
        return Axiom(data["axiom"], sub)
    if len(data) != 1:
        raise SchemaError("justification must have exactly one key", path)
    (k, v), = data.items()
    p = f"{path}.{k}"
    if k == "mp":
        a, b = _pair(v, p)
        return MP(_int(a, p), _int(b, p))
    if k == "nec_box":
        return NecBox(_int(v, p))
    if k == "nec_f":
        return NecF(_int(v, p))
    if k == "nec_at":
        a, b = _pair(v, p)
        return NecAt(_int(a, p), _nominal(b, p))
    if k == "us":
        a, b = _pair(v, p)
        return US(_int(a, p), _subst_from_data(b, p))
    if k == "name":
        a, b = _pair(v, p)
        return Name(_int(a, p), _nominal(b, p))
    if k == "lbg":
        if not isinstance(v, list) or len(v) != 5:
            raise SchemaError("lbg expects [line, form, n, m, formula]", p)
        return LBG(_int(v[0], p), _form_from_data(v[1], p), _nominal(v[2], p), _nominal(v[3], p), _formula(v[4], p))
    raise SchemaError(f"unknown justification {k!r}", path)


def hilbert_to_data(proof: HilbertProof) -> dict:
    from ..parser import render_formula

    return {"lines": [{"formula": render_formula(f), "by": _just_to_data(j)} for f, j in proof.lines]}


def hilbert_from_data(data) -> HilbertProof:
    from ..fileformats import SchemaError, _formula

    if not isinstance(data, dict) or not isinstance(data.get("lines"), list):
        raise SchemaError("Hilbert proof must have a 'lines' list", "$")
    lines = []
    for i, item in enumerate(data["lines"]):
        p = f"$.lines[{i}]"
        if not isinstance(item, dict) or set(item) != {"formula", "by"}:
            raise SchemaError("line must have exactly 'formula' and 'by'", p)
        lines.append((_formula(item["formula"], f"{p}.formula"), _just_from_data(item["by"], f"{p}.by")))
    return HilbertProof(lines)
