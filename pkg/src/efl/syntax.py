"""Formula language of the epistemic logic of friendship.

The core grammar has seven constructors::

    n | p | false | A -> B | @n A | F A | [] A

Everything else (negation, conjunction, disjunction, equivalence, truth and the
two diamonds) is sugar that is expanded as soon as it is built, so two formulas
compare equal exactly when their core trees are identical.

Nominal and proposition identifiers are plain strings *without* the leading
apostrophe used by the concrete syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


class Formula:
    """Base class.  Instances are immutable and hash-cached."""

    __slots__ = ("_hash",)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def _init(self, **fields):
        for k, v in fields.items():
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def _key(self) -> tuple:
        raise NotImplementedError

    def __repr__(self):
        from .parser import render_formula

        return f"<{render_formula(self)}>"

    # AST size: number of constructor nodes
    def size(self) -> int:
        raise NotImplementedError


class Nominal(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self._init(name=name)

    def _key(self):
        return (self.name,)

    def size(self):
        return 1


class Prop(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self._init(name=name)

    def _key(self):
        return (self.name,)

    def size(self):
        return 1


class Falsum(Formula):
    __slots__ = ()

    def __init__(self):
        self._init()

    def _key(self):
        return ()

    def size(self):
        return 1


class Implies(Formula):
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Formula, rhs: Formula):
        self._init(lhs=lhs, rhs=rhs)

    def _key(self):
        return (self.lhs, self.rhs)

    def size(self):
        return 1 + self.lhs.size() + self.rhs.size()


class At(Formula):
    __slots__ = ("nom", "body")

    def __init__(self, nom: str, body: Formula):
        if not isinstance(nom, str):
            raise TypeError("@ takes a nominal identifier, not a formula")
        self._init(nom=nom, body=body)

    def _key(self):
        return (self.nom, self.body)

    def size(self):
        return 1 + self.body.size()


class FBox(Formula):
    """All my friends ... (``F``)."""

    __slots__ = ("body",)

    def __init__(self, body: Formula):
        self._init(body=body)

    def _key(self):
        return (self.body,)

    def size(self):
        return 1 + self.body.size()


class KBox(Formula):
    """I know that ... (``[]``)."""

    __slots__ = ("body",)

    def __init__(self, body: Formula):
        self._init(body=body)

    def _key(self):
        return (self.body,)

    def size(self):
        return 1 + self.body.size()


BOT = Falsum()


# --- sugar -------------------------------------------------------------------

def Not(a: Formula) -> Formula:
    return Implies(a, BOT)


def Top() -> Formula:
    return Implies(BOT, BOT)


TOP = Top()


def And(a: Formula, b: Formula) -> Formula:
    return Not(Implies(a, Not(b)))


def Or(a: Formula, b: Formula) -> Formula:
    return Implies(Not(a), b)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def FDia(a: Formula) -> Formula:
    return Not(FBox(Not(a)))


def KDia(a: Formula) -> Formula:
    return Not(KBox(Not(a)))


def big_and(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is truth."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for x in reversed(items[:-1]):
        out = And(x, out)
    return out


def big_or(items: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is falsum."""
    items = list(items)
    if not items:
        return BOT
    out = items[-1]
    for x in reversed(items[:-1]):
        out = Or(x, out)
    return out


def friend_atom(n: str, m: str) -> Formula:
    """``@n <F> m``."""
    return At(n, FDia(Nominal(m)))


def eq_atom(n: str, m: str) -> Formula:
    """``@n m``."""
    return At(n, Nominal(m))


def match_friend_atom(phi: Formula) -> tuple[str, str] | None:
    """Inverse of :func:`friend_atom` on core syntax."""
    # @n ((F (m -> false)) -> false)
    if not isinstance(phi, At):
        return None
    m = match_fdia_nominal(phi.body)
    return None if m is None else (phi.nom, m)


def match_fdia_nominal(phi: Formula) -> str | None:
    if isinstance(phi, Implies) and isinstance(phi.rhs, Falsum):
        inner = phi.lhs
        if isinstance(inner, FBox):
            b = inner.body
            if isinstance(b, Implies) and isinstance(b.rhs, Falsum) and isinstance(b.lhs, Nominal):
                return b.lhs.name
    return None


def match_eq_atom(phi: Formula) -> tuple[str, str] | None:
    if isinstance(phi, At) and isinstance(phi.body, Nominal):
        return phi.nom, phi.body.name
    return None


def desugar(phi: Formula) -> Formula:
    """Sugar is expanded on construction, so the core form is the formula itself."""
    if not isinstance(phi, Formula):
        raise TypeError(f"not a formula: {phi!r}")
    return phi


# --- symbols and substitution ------------------------------------------------

def symbols_of(phi: Formula) -> tuple[set[str], set[str]]:
    """Return ``(nominals, props)`` occurring in *phi*."""
    noms: set[str] = set()
    props: set[str] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Nominal):
            noms.add(f.name)
        elif isinstance(f, Prop):
            props.add(f.name)
        elif isinstance(f, Implies):
            stack.append(f.lhs)
            stack.append(f.rhs)
        elif isinstance(f, At):
            noms.add(f.nom)
            stack.append(f.body)
        elif isinstance(f, (FBox, KBox)):
            stack.append(f.body)
    return noms, props


def nominals_of(phi: Formula) -> set[str]:
    return symbols_of(phi)[0]


@dataclass(frozen=True)
class UniformSubstitution:
    """Simultaneous substitution: props to formulas, nominals to nominals."""

    prop_map: Mapping[str, Formula] = field(default_factory=dict)
    nom_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for k, v in self.nom_map.items():
            if not isinstance(v, str):
                raise TypeError(f"nominal {k!r} must map to a nominal, got {v!r}")
        for k, v in self.prop_map.items():
            if not isinstance(v, Formula):
                raise TypeError(f"proposition {k!r} must map to a formula, got {v!r}")

    def nom(self, n: str) -> str:
        return self.nom_map.get(n, n)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.nom_map.items()) and all(
            v == Prop(k) for k, v in self.prop_map.items()
        )

    def __hash__(self):
        return hash((tuple(sorted(self.prop_map.items(), key=lambda kv: kv[0])),
                     tuple(sorted(self.nom_map.items()))))


def apply_substitution(phi: Formula, sigma: UniformSubstitution) -> Formula:
    cache: dict[Formula, Formula] = {}

    def go(f: Formula) -> Formula:
        hit = cache.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Nominal):
            out = Nominal(sigma.nom(f.name))
        elif isinstance(f, Prop):
            out = sigma.prop_map.get(f.name, f)
        elif isinstance(f, Falsum):
            out = f
        elif isinstance(f, Implies):
            out = Implies(go(f.lhs), go(f.rhs))
        elif isinstance(f, At):
            out = At(sigma.nom(f.nom), go(f.body))
        elif isinstance(f, FBox):
            out = FBox(go(f.body))
        elif isinstance(f, KBox):
            out = KBox(go(f.body))
        else:
            raise TypeError(f"not a formula: {f!r}")
        cache[f] = out
        return out

    return go(phi)


def rename_nominals(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    if not mapping:
        return phi
    return apply_substitution(phi, UniformSubstitution(nom_map=dict(mapping)))


def substitute_agent(phi: Formula, n: str, k: str) -> Formula:
    """``phi[n/k]``: every occurrence of nominal *k* becomes *n*."""
    return rename_nominals(phi, {k: n})


def differs_by_nominal(x: Formula, y: Formula, a: str, b: str) -> bool:
    """True iff some ``phi`` and ``k`` give ``x = phi[a/k]`` and ``y = phi[b/k]``.

    Equivalently *x* and *y* share their shape and, wherever they disagree,
    *x* carries nominal *a* and *y* carries nominal *b*.
    """
    stack = [(x, y)]
    while stack:
        f, g = stack.pop()
        if f is g or f == g:
            continue
        if type(f) is not type(g):
            return False
        if isinstance(f, Nominal):
            if not (f.name == a and g.name == b):
                return False
        elif isinstance(f, Implies):
            stack.append((f.lhs, g.lhs))
            stack.append((f.rhs, g.rhs))
        elif isinstance(f, At):
            if f.nom != g.nom and not (f.nom == a and g.nom == b):
                return False
            stack.append((f.body, g.body))
        elif isinstance(f, (FBox, KBox)):
            stack.append((f.body, g.body))
        else:
            return False
    return True


def subformulas(phi: Formula) -> Iterable[Formula]:
    stack = [phi]
    seen = set()
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        yield f
        if isinstance(f, Implies):
            stack.append(f.lhs)
            stack.append(f.rhs)
        elif isinstance(f, (At, FBox, KBox)):
            stack.append(f.body)


class FreshNames:
    """Deterministic supply of nominals ``prefix0, prefix1, ...`` avoiding a used set."""

    def __init__(self, used: Iterable[str] = (), prefix: str = "m"):
        self.used = set(used)
        self.prefix = prefix
        self.counter = 0

    def avoid(self, names: Iterable[str]) -> None:
        self.used.update(names)

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in self.used:
                self.used.add(name)
                return name
