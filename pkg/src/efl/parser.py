"""Concrete syntax for formulas.

Grammar (whitespace-insensitive)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | "[]" unary | "<>" unary | "F" unary | "<F>" unary
             | "@" nominal unary | atom
    atom    := "false" | "true" | prop | nominal | "(" formula ")"
    prop    := [a-z][a-zA-Z0-9_]*
    nominal := "'" [a-z][a-zA-Z0-9_]*
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    BOT,
    At,
    And,
    FBox,
    FDia,
    Falsum,
    Formula,
    Iff,
    Implies,
    KBox,
    KDia,
    Nominal,
    Not,
    Or,
    Prop,
    TOP,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan | None = None, path: str | None = None):
        self.span = span
        self.path = path
        where = ""
        if span is not None:
            where = f" at {span.start}..{span.end}"
        if path:
            where += f" (in {path})"
        super().__init__(message + where)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<F>|<>|\[\]|[!&|()@])
  | (?P<nom>'[a-z][a-zA-Z0-9_]*)
  | (?P<word>[a-zA-Z][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)

_IDENT = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


@dataclass
class _Tok:
    kind: str  # op, nom, prop, kw, eof
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unknown token {text[pos]!r}", SourceSpan(pos, pos + 1))
        span = SourceSpan(m.start(), m.end())
        kind = m.lastgroup
        val = m.group()
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "word":
            if val in ("false", "true", "F"):
                kind = "kw"
            elif _IDENT.match(val):
                kind = "prop"
            else:
                raise ParseError(f"unknown token {val!r}", span)
        toks.append(_Tok(kind, val, span))
    toks.append(_Tok("eof", "", SourceSpan(len(text), len(text))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_op(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if not self.at_op(text):
            if t.kind == "eof" and text == ")":
                raise ParseError("unbalanced parentheses: missing ')'", t.span)
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.span)
        return self.take()

    def formula(self) -> Formula:
        left = self.imp()
        while self.at_op("<->"):
            self.take()
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.or_()
        if self.at_op("->"):
            self.take()
            return Implies(left, self.imp())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        while self.at_op("|"):
            self.take()
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.at_op("&"):
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind in ("op", "kw"):
            if t.text == "!":
                self.take()
                return Not(self.unary())
            if t.text == "[]":
                self.take()
                return KBox(self.unary())
            if t.text == "<>":
                self.take()
                return KDia(self.unary())
            if t.text == "F":
                self.take()
                return FBox(self.unary())
            if t.text == "<F>":
                self.take()
                return FDia(self.unary())
            if t.text == "@":
                self.take()
                n = self.take()
                if n.kind != "nom":
                    raise ParseError("'@' must be followed by a nominal like 'n", n.span)
                return At(n.text[1:], self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.take()
        if t.kind == "kw" and t.text == "false":
            return BOT
        if t.kind == "kw" and t.text == "true":
            return TOP
        if t.kind == "prop":
            return Prop(t.text)
        if t.kind == "nom":
            return Nominal(t.text[1:])
        if t.kind == "op" and t.text == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if t.kind == "op" and t.text == ")":
            raise ParseError("unbalanced parentheses: unexpected ')'", t.span)
        if t.kind == "eof":
            raise ParseError("unexpected end of input", t.span)
        raise ParseError(f"unexpected token {t.text!r}", t.span)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    t = p.peek()
    if t.kind != "eof":
        if t.text == ")":
            raise ParseError("unbalanced parentheses: unexpected ')'", t.span)
        raise ParseError(f"trailing input {t.text!r}", t.span)
    return phi


def parse_nominal(text: str) -> str:
    """Accept ``'n`` (canonical) or bare ``n``; return the identifier."""
    s = text.strip()
    if s.startswith("'"):
        s = s[1:]
    if not _IDENT.match(s):
        raise ParseError(f"bad nominal {text!r}")
    return s


def render_nominal(n: str) -> str:
    return "'" + n


# --- rendering ----------------------------------------------------------------

# precedence levels: 0 iff, 1 imp, 2 or, 3 and, 4 unary/atom

def render_formula(phi: Formula, sugar: bool = False) -> str:
    if sugar:
        return _render_sugar(phi, 0)
    return _render_core(phi, 0)


def _render_core(phi: Formula, ctx: int) -> str:
    if isinstance(phi, Nominal):
        return "'" + phi.name
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Falsum):
        return "false"
    if isinstance(phi, Implies):
        s = f"{_render_core(phi.lhs, 2)} -> {_render_core(phi.rhs, 1)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(phi, At):
        return f"@'{phi.nom} {_render_core(phi.body, 4)}"
    if isinstance(phi, FBox):
        return f"F {_render_core(phi.body, 4)}"
    if isinstance(phi, KBox):
        return f"[] {_render_core(phi.body, 4)}"
    raise TypeError(f"not a formula: {phi!r}")


def _neg_arg(phi: Formula):
    if isinstance(phi, Implies) and isinstance(phi.rhs, Falsum):
        return phi.lhs
    return None


def _render_sugar(phi: Formula, ctx: int) -> str:
    def wrap(s, level):
        return f"({s})" if ctx > level else s

    if phi == TOP:
        return "true"
    if isinstance(phi, Implies):
        inner = _neg_arg(phi)
        if inner is not None:
            # <> a := !([] !a);  <F> a := !(F !a);  a & b := !(a -> !b)
            if isinstance(inner, KBox) and _neg_arg(inner.body) is not None:
                return f"<> {_render_sugar(_neg_arg(inner.body), 4)}"
            if isinstance(inner, FBox) and _neg_arg(inner.body) is not None:
                return f"<F> {_render_sugar(_neg_arg(inner.body), 4)}"
            if isinstance(inner, Implies) and _neg_arg(inner.rhs) is not None:
                a, b = inner.lhs, _neg_arg(inner.rhs)
                return wrap(f"{_render_sugar(a, 3)} & {_render_sugar(b, 4)}", 3)
            return f"!{_render_sugar(inner, 4)}"
        a = _neg_arg(phi.lhs)
        if a is not None:
            return wrap(f"{_render_sugar(a, 2)} | {_render_sugar(phi.rhs, 3)}", 2)
        return wrap(f"{_render_sugar(phi.lhs, 2)} -> {_render_sugar(phi.rhs, 1)}", 1)
    if isinstance(phi, At):
        return f"@'{phi.nom} {_render_sugar(phi.body, 4)}"
    if isinstance(phi, FBox):
        return f"F {_render_sugar(phi.body, 4)}"
    if isinstance(phi, KBox):
        return f"[] {_render_sugar(phi.body, 4)}"
    return _render_core(phi, ctx)
