"""Frame classes: box discipline (K, S4, S5) plus regular implications on friendship."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .parser import ParseError, parse_nominal
from .syntax import (
    BOT,
    Formula,
    Implies,
    KBox,
    Not,
    Prop,
    big_and,
    big_or,
    eq_atom,
    friend_atom,
)

BOX_DISCIPLINES = ("K", "S4", "S5")


@dataclass(frozen=True)
class RelAtom:
    """``@n m`` (kind ``eq``) or ``@n <F> m`` (kind ``friend``)."""

    kind: str
    n: str
    m: str

    def __post_init__(self):
        if self.kind not in ("eq", "friend"):
            raise ValueError(f"bad relational atom kind {self.kind!r}")

    def formula(self, rename: Mapping[str, str] | None = None) -> Formula:
        n, m = self.n, self.m
        if rename:
            n, m = rename.get(n, n), rename.get(m, m)
        return eq_atom(n, m) if self.kind == "eq" else friend_atom(n, m)

    def render(self) -> str:
        if self.kind == "eq":
            return f"@'{self.n}'{self.m}"
        return f"@'{self.n}<F>'{self.m}"


@dataclass(frozen=True)
class RegularImplication:
    antecedents: tuple[RelAtom, ...] = ()
    consequents: tuple[RelAtom, ...] = ()
    name: str | None = field(default=None, compare=False)  # display only

    @property
    def nominals(self) -> tuple[str, ...]:
        seen: list[str] = []
        for a in self.antecedents + self.consequents:
            for x in (a.n, a.m):
                if x not in seen:
                    seen.append(x)
        return tuple(seen)

    def formula(self) -> Formula:
        """``(r1 & ... & rh) -> (r1' | ... | rl')``."""
        return Implies(
            big_and(a.formula() for a in self.antecedents),
            big_or(a.formula() for a in self.consequents),
        )

    def render(self) -> str:
        lhs = ", ".join(a.render() for a in self.antecedents)
        rhs = ", ".join(a.render() for a in self.consequents)
        return f"{lhs} => {rhs}".strip()

    def holds(self, agents, friends_at, denote_eq=None) -> bool:
        """Check the first-order frame property on one world.

        *friends_at* is a set of (a, b) pairs; quantification is over all maps
        from this implication's nominals to *agents*.
        """
        from itertools import product

        noms = self.nominals
        for values in product(agents, repeat=len(noms)):
            env = dict(zip(noms, values))

            def ev(atom: RelAtom) -> bool:
                if atom.kind == "eq":
                    return env[atom.n] == env[atom.m]
                return (env[atom.n], env[atom.m]) in friends_at

            if all(ev(a) for a in self.antecedents) and not any(ev(c) for c in self.consequents):
                return False
        return True


@dataclass(frozen=True)
class FrameClassSpec:
    box: str = "K"
    theta: tuple[RegularImplication, ...] = ()

    def __post_init__(self):
        if self.box not in BOX_DISCIPLINES:
            raise ValueError(f"box discipline must be one of {BOX_DISCIPLINES}, got {self.box!r}")


K = FrameClassSpec()


_ATOM_RE = re.compile(r"\s*@\s*('?[a-z][a-zA-Z0-9_]*)\s*(<F>)?\s*('?[a-z][a-zA-Z0-9_]*)\s*\Z")

NAMED_FRAMES = {
    "irr": "@'n<F>'n =>",
    "sym": "@'n<F>'m => @'m<F>'n",
    "refl": "=> @'n<F>'n",
}


def _parse_atom(text: str) -> RelAtom:
    m = _ATOM_RE.match(text)
    if m is None:
        raise ParseError(f"bad relational atom {text!r} (expected @'n'm or @'n<F>'m)")
    kind = "friend" if m.group(2) else "eq"
    return RelAtom(kind, parse_nominal(m.group(1)), parse_nominal(m.group(3)))


def parse_ri_spec(text: str) -> RegularImplication:
    """Parse ``"atoms => atoms"`` or a named shorthand (irr, sym, refl)."""
    name = None
    key = text.strip()
    if key in NAMED_FRAMES:
        name = key
        key = NAMED_FRAMES[key]
    if "=>" not in key:
        raise ParseError(f"regular implication needs '=>': {text!r}")
    lhs, rhs = key.split("=>", 1)

    def atoms(side: str):
        side = side.strip()
        if not side:
            return ()
        return tuple(_parse_atom(part) for part in side.split(","))

    return RegularImplication(atoms(lhs), atoms(rhs), name)


def box_axioms(box: str) -> dict[str, Formula]:
    """Extra axioms for the box discipline, stated with proposition ``p``."""
    p = Prop("p")
    out: dict[str, Formula] = {}
    if box in ("S4", "S5"):
        out["T"] = Implies(KBox(p), p)
        out["4"] = Implies(KBox(p), KBox(KBox(p)))
    if box == "S5":
        out["B"] = Implies(p, KBox(Not(KBox(Not(p)))))
    return out
