"""JSON file formats for models, sequents, derivations and Hilbert proofs.

Every container carries ``"version": 1``.  Labels are path strings
(``"0"``, ``"0/'n:1"``), nominals are written with a leading apostrophe and
formulas use the concrete syntax of :mod:`efl.parser` in core mode.
"""

from __future__ import annotations

import json
import re
import sys
from contextlib import contextmanager
from typing import Any

from .calculus import Derivation, Label, LabelledFormula, LabelTree, TreeSequent, sort_lfs
from .frames import RegularImplication, parse_ri_spec
from .parser import ParseError, parse_formula, parse_nominal, render_formula, render_nominal
from .semantics import Assignment, Model, SemanticsError
from .syntax import At

VERSION = 1


class SchemaError(ParseError):
    """A structural problem in a file, located by a JSON path like ``$.lines[3].by``."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(message, None, path)


@contextmanager
def _deep():
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _load(text: str, path: str = "$") -> Any:
    try:
        with _deep():
            return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}", path) from None


def _dump(obj: Any) -> str:
    with _deep():
        return json.dumps(obj, indent=1, ensure_ascii=False)


def _expect(cond: bool, msg: str, path: str):
    if not cond:
        raise SchemaError(msg, path)


def _obj(data, path, required=(), optional=()):
    _expect(isinstance(data, dict), "expected an object", path)
    for k in required:
        _expect(k in data, f"missing field {k!r}", path)
    allowed = set(required) | set(optional) | {"version"}
    for k in data:
        _expect(k in allowed, f"unexpected field {k!r}", path)
    if "version" in data:
        _expect(data["version"] == VERSION, f"unsupported version {data['version']!r}", path + ".version")
    return data


def _formula(text, path):
    _expect(isinstance(text, str), "formula must be a string", path)
    try:
        return parse_formula(text)
    except ParseError as e:
        raise SchemaError(f"bad formula: {e}", path) from None


def _nominal(text, path):
    _expect(isinstance(text, str), "nominal must be a string", path)
    try:
        return parse_nominal(text)
    except ParseError as e:
        raise SchemaError(str(e), path) from None


# --- labels --------------------------------------------------------------------

_STEP = re.compile(r"'?([a-z][a-zA-Z0-9_]*):(\d+)\Z")


def render_label(label: Label) -> str:
    return "/".join([str(label.root)] + [f"'{n}:{i}" for n, i in label.path])


def parse_label(text: str, path: str = "$") -> Label:
    _expect(isinstance(text, str), "label must be a string", path)
    parts = text.strip().split("/")
    _expect(parts[0].isdigit(), f"label must start with a natural number: {text!r}", path)
    steps = []
    for p in parts[1:]:
        m = _STEP.match(p.strip())
        _expect(m is not None, f"bad label step {p!r} in {text!r}", path)
        steps.append((m.group(1), int(m.group(2))))
    return Label(int(parts[0]), tuple(steps))


# --- models --------------------------------------------------------------------

def model_to_data(M: Model) -> dict:
    def ids(xs):
        return [x if isinstance(x, (str, int)) else str(x) for x in xs]

    return {
        "version": VERSION,
        "worlds": ids(M.worlds),
        "agents": ids(M.agents),
        "R": {str(a): sorted([list(p) for p in M.R[a]]) for a in M.agents},
        "friend": {str(w): sorted([list(p) for p in M.friend[w]]) for w in M.worlds},
        "val": {p: sorted([list(x) for x in s]) for p, s in sorted(M.val.items())},
        "nominals": {render_nominal(n): a for n, a in sorted(M.nominals.items())},
    }


def model_from_data(data: dict, path: str = "$") -> Model:
    _obj(data, path, ("worlds", "agents"), ("R", "friend", "val", "nominals"))
    worlds, agents = data["worlds"], data["agents"]
    _expect(isinstance(worlds, list) and worlds, "worlds must be a non-empty list", path + ".worlds")
    _expect(isinstance(agents, list) and agents, "agents must be a non-empty list", path + ".agents")
    wkey = {str(w): w for w in worlds}
    akey = {str(a): a for a in agents}

    def pairs(v, p, left, right, what):
        _expect(isinstance(v, list), "expected a list of pairs", p)
        out = []
        for i, pr in enumerate(v):
            q = f"{p}[{i}]"
            _expect(isinstance(pr, list) and len(pr) == 2, "expected a pair", q)
            _expect(str(pr[0]) in left, f"{what[0]} {pr[0]!r} not declared", q + "[0]")
            _expect(str(pr[1]) in right, f"{what[1]} {pr[1]!r} not declared", q + "[1]")
            out.append((left[str(pr[0])], right[str(pr[1])]))
        return out

    R = {}
    for a, rel in data.get("R", {}).items():
        _expect(a in akey, f"agent {a!r} not declared", f"{path}.R")
        R[akey[a]] = pairs(rel, f"{path}.R.{a}", wkey, wkey, ("world", "world"))
    friend = {}
    for w, rel in data.get("friend", {}).items():
        _expect(w in wkey, f"world {w!r} not declared", f"{path}.friend")
        friend[wkey[w]] = pairs(rel, f"{path}.friend.{w}", akey, akey, ("agent", "agent"))
    val = {}
    for p, s in data.get("val", {}).items():
        _expect(re.match(r"[a-z][a-zA-Z0-9_]*\Z", p) is not None, f"bad proposition {p!r}", f"{path}.val")
        val[p] = pairs(s, f"{path}.val.{p}", wkey, akey, ("world", "agent"))
    noms = {}
    for n, a in data.get("nominals", {}).items():
        _expect(str(a) in akey, f"nominal {n!r} denotes undeclared agent {a!r}", f"{path}.nominals")
        noms[_nominal(n, f"{path}.nominals")] = akey[str(a)]
    try:
        return Model(worlds, agents, R, friend, val, noms)
    except SemanticsError as e:
        raise SchemaError(str(e), path) from None


def render_model(M: Model) -> str:
    return _dump(model_to_data(M))


def parse_model(text: str) -> Model:
    return model_from_data(_load(text))


def assignment_to_data(f: Assignment) -> dict:
    return {render_label(l): w for l, w in sorted(f.f.items())}


def assignment_from_data(data: dict, path: str = "$") -> Assignment:
    _expect(isinstance(data, dict), "expected an object", path)
    return Assignment({parse_label(k, path): v for k, v in data.items()})


def render_countermodel(M: Model, f: Assignment) -> str:
    data = model_to_data(M)
    data["assignment"] = assignment_to_data(f)
    return _dump(data)


def parse_countermodel(text: str):
    data = _load(text)
    f = assignment_from_data(data.pop("assignment", {}), "$.assignment")
    return model_from_data(data), f


# --- sequents ------------------------------------------------------------------

def lf_to_data(x: LabelledFormula) -> dict:
    return {"label": render_label(x.label), "formula": render_formula(x.formula)}


def lf_from_data(data, path: str) -> LabelledFormula:
    _obj(data, path, ("label", "formula"))
    f = _formula(data["formula"], path + ".formula")
    _expect(isinstance(f, At), "labelled formula must be @-prefixed", path + ".formula")
    return LabelledFormula(parse_label(data["label"], path + ".label"), f)


def sequent_to_data(S: TreeSequent, version: bool = True) -> dict:
    data = {
        "tree": [render_label(l) for l in sorted(S.tree.labels)],
        "ant": [lf_to_data(x) for x in sort_lfs(S.ant)],
        "suc": [lf_to_data(x) for x in sort_lfs(S.suc)],
    }
    if version:
        data = {"version": VERSION, **data}
    return data


def sequent_from_data(data, path: str = "$") -> TreeSequent:
    _obj(data, path, ("tree",), ("ant", "suc"))
    _expect(isinstance(data["tree"], list), "tree must be a list of labels", path + ".tree")
    labels = [parse_label(t, f"{path}.tree[{i}]") for i, t in enumerate(data["tree"])]
    try:
        tree = LabelTree(frozenset(labels))
    except ValueError as e:
        raise SchemaError(str(e), path + ".tree") from None
    sides = {}
    for side in ("ant", "suc"):
        items = data.get(side, [])
        _expect(isinstance(items, list), "expected a list", f"{path}.{side}")
        sides[side] = []
        for i, x in enumerate(items):
            q = f"{path}.{side}[{i}]"
            y = lf_from_data(x, q)
            _expect(y.label in tree, f"label {render_label(y.label)} is not in the tree", q + ".label")
            sides[side].append(y)
    return TreeSequent(frozenset(sides["ant"]), tree, frozenset(sides["suc"]))


def render_sequent(S: TreeSequent) -> str:
    return _dump(sequent_to_data(S))


def parse_sequent(text: str) -> TreeSequent:
    return sequent_from_data(_load(text))


# --- derivations -----------------------------------------------------------------

_LF_KEYS = ("formula", "eq", "from", "to")
_NOM_KEYS = ("fresh", "witness")
_LABEL_KEYS = ("child", "target", "label")


def _principal_to_data(pr: dict) -> dict:
    out = {}
    for k, v in pr.items():
        if k in _LF_KEYS:
            out[k] = lf_to_data(v)
        elif k in _NOM_KEYS:
            out[k] = render_nominal(v)
        elif k in _LABEL_KEYS:
            out[k] = render_label(v)
        elif k == "theta":
            out[k] = v.render()
        elif k == "map":
            out[k] = {render_nominal(a): render_nominal(b) for a, b in sorted(v.items())}
        else:
            raise ValueError(f"unknown principal field {k!r}")
    return out


def _principal_from_data(data, path: str) -> dict:
    _expect(isinstance(data, dict), "principal must be an object", path)
    out = {}
    for k, v in data.items():
        q = f"{path}.{k}"
        if k in _LF_KEYS:
            out[k] = lf_from_data(v, q)
        elif k in _NOM_KEYS:
            out[k] = _nominal(v, q)
        elif k in _LABEL_KEYS:
            out[k] = parse_label(v, q)
        elif k == "theta":
            _expect(isinstance(v, str), "theta must be a regular-implication string", q)
            try:
                out[k] = parse_ri_spec(v)
            except ParseError as e:
                raise SchemaError(str(e), q) from None
        elif k == "map":
            _expect(isinstance(v, dict), "map must be an object", q)
            out[k] = {_nominal(a, q): _nominal(b, q) for a, b in v.items()}
        else:
            raise SchemaError(f"unknown principal field {k!r}", path)
    return out


def derivation_to_data(d: Derivation, version: bool = True) -> dict:
    # iterative post-order so very tall derivations do not hit the recursion limit
    done: dict = {}
    stack = [(d, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in done:
            continue
        if not expanded:
            stack.append((node, True))
            for p in node.premises:
                stack.append((p, False))
            continue
        done[id(node)] = {
            "sequent": sequent_to_data(node.conclusion, version=False),
            "rule": node.rule,
            "principal": _principal_to_data(node.principal),
            "premises": [done[id(p)] for p in node.premises],
        }
    data = done[id(d)]
    if version:
        data = {"version": VERSION, **data}
    return data


def derivation_from_data(data, path: str = "$") -> Derivation:
    # explicit stack for tall inputs
    order = []
    stack = [(data, path)]
    while stack:
        node, p = stack.pop()
        _obj(node, p, ("sequent", "rule"), ("principal", "premises"))
        order.append((node, p))
        prem = node.get("premises", [])
        _expect(isinstance(prem, list), "premises must be a list", p + ".premises")
        for i, child in enumerate(prem):
            stack.append((child, f"{p}.premises[{i}]"))
    built: dict = {}
    for node, p in reversed(order):
        seq = sequent_from_data(node["sequent"], p + ".sequent")
        try:
            d = Derivation(
                seq,
                node["rule"],
                _principal_from_data(node.get("principal", {}), p + ".principal"),
                [built[id(c)] for c in node.get("premises", [])],
            )
        except ValueError as e:
            if isinstance(e, SchemaError):
                raise
            raise SchemaError(str(e), p + ".rule") from None
        built[id(node)] = d
    return built[id(data)]


def render_derivation(d: Derivation) -> str:
    return _dump(derivation_to_data(d))


def parse_derivation(text: str) -> Derivation:
    return derivation_from_data(_load(text))


def derivations_equal(a: Derivation, b: Derivation) -> bool:
    return derivation_to_data(a) == derivation_to_data(b)


# --- Hilbert proofs ------------------------------------------------------------------

def render_hilbert(proof) -> str:
    from .hilbert.proof import hilbert_to_data

    return _dump({"version": VERSION, **hilbert_to_data(proof)})


def parse_hilbert(text: str):
    from .hilbert.proof import hilbert_from_data

    data = _load(text)
    _obj(data, "$", ("lines",))
    return hilbert_from_data(data)


__all__ = [
    "SchemaError", "render_label", "parse_label", "parse_model", "render_model", "parse_sequent",
    "render_sequent", "parse_derivation", "render_derivation", "parse_hilbert", "render_hilbert",
    "render_countermodel", "parse_countermodel", "RegularImplication",
]
