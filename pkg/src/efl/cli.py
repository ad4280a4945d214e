"""Command-line front-end.

Exit codes: 0/1/2 report verdicts, 64 usage errors, 65 parse errors,
70 internal invariant failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import fileformats as ff
from .calculus import SystemConfig, TreeSequent, check_derivation
from .frames import FrameClassSpec, parse_ri_spec
from .hilbert import (
    HilbertProof,
    check_hilbert,
    elaborate_to_hilbert,
    embed_hilbert,
    formulaic_translation,
)
from .oracle import find_countermodel
from .parser import ParseError, parse_formula, render_formula
from .search import Proved, Refuted, SearchConfig, prove
from .semantics import satisfies
from .syntax import FreshNames, nominals_of

EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70

VERDICT_CODES = {"proved": 0, "refuted": 1, "unknown": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text + "\n")
        return
    try:
        Path(path).write_text(text + "\n")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _spec(args) -> FrameClassSpec:
    try:
        theta = tuple(parse_ri_spec(t) for t in args.frame)
    except ParseError as e:
        raise UsageError(f"--frame: {e}") from None
    return FrameClassSpec(args.logic.upper(), theta)


def _logic_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--logic", choices=["k", "s4", "s5"], default="k", type=str.lower)
    p.add_argument("--frame", action="append", default=[], metavar="RI-SPEC",
                   help="regular implication, e.g. \"@'n<F>'m => @'m<F>'n\", or irr/sym/refl")


def _formula_sequent(text: str) -> TreeSequent:
    phi = parse_formula(text)
    return TreeSequent.of_formula(phi, FreshNames(nominals_of(phi), prefix="n")())


def _run_prove(S: TreeSequent, args):
    cfg = SystemConfig(_spec(args), allow_cut=False)
    return prove(S, cfg, SearchConfig(fuel=args.fuel, seed=args.seed))


def _report_outcome(res, args) -> int:
    print(res.verdict)
    st = res.stats
    print(f"rules fired {st.rules_fired}, labels {st.labels_created}, branches {st.branches}",
          file=sys.stderr)
    if isinstance(res, Proved) and args.emit_derivation:
        _write(args.emit_derivation, ff.render_derivation(res.derivation))
    if isinstance(res, Refuted):
        _write(args.emit_countermodel or "-", ff.render_countermodel(res.model, res.assignment))
    return VERDICT_CODES[res.verdict]


def _batch_one(job):
    text, logic, frames, fuel, seed = job
    ns = argparse.Namespace(logic=logic, frame=frames, fuel=fuel, seed=seed)
    try:
        return _run_prove(_formula_sequent(text), ns).verdict
    except ParseError as e:
        return f"error: {e}"


def cmd_prove(args) -> int:
    if args.batch:
        if args.formula is not None:
            raise UsageError("prove: give either FORMULA or --batch, not both")
        lines = [ln.strip() for ln in _read(args.batch).splitlines()]
        queries = [ln for ln in lines if ln and not ln.startswith("#")]
        jobs = [(q, args.logic, args.frame, args.fuel, args.seed) for q in queries]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                verdicts = list(pool.map(_batch_one, jobs))
        else:
            verdicts = [_batch_one(j) for j in jobs]
        worst = 0
        for q, v in zip(queries, verdicts):
            print(f"{v}\t{q}")
            worst = max(worst, VERDICT_CODES.get(v, EX_DATAERR))
        return worst
    if args.formula is None:
        raise UsageError("prove: FORMULA is required")
    return _report_outcome(_run_prove(_formula_sequent(args.formula), args), args)


def cmd_prove_seq(args) -> int:
    S = ff.parse_sequent(_read(args.file))
    return _report_outcome(_run_prove(S, args), args)


def _lookup(ids, key: str, what: str):
    for x in ids:
        if str(x) == key:
            return x
    raise UsageError(f"unknown {what} {key!r}")


def cmd_check(args) -> int:
    phi = parse_formula(args.formula)
    M, _ = ff.parse_countermodel(_read(args.model))  # plain models and countermodels both load
    w = _lookup(M.worlds, args.world, "world")
    a = _lookup(M.agents, args.agent, "agent")
    missing = nominals_of(phi) - set(M.nominals)
    if missing:
        raise UsageError(f"model does not interpret nominal(s) {sorted(missing)}")
    ok = satisfies(M, w, a, phi)
    print("true" if ok else "false")
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    if args.max_worlds < 1 or args.max_agents < 1:
        raise UsageError("oracle: bounds must be positive")
    S = _formula_sequent(args.formula)
    found = find_countermodel(S, args.max_worlds, args.max_agents, _spec(args))
    if found is None:
        print("no countermodel")
        return 0
    print("countermodel", file=sys.stderr)
    _write(args.output, ff.render_countermodel(*found))
    return 1


def cmd_translate(args) -> int:
    S = ff.parse_sequent(_read(args.file))
    alpha = ff.parse_label(args.at) if args.at else S.tree.root
    if alpha not in S.tree:
        raise UsageError(f"label {args.at} is not in the sequent's tree")
    print(render_formula(formulaic_translation(S, alpha)))
    return 0


def cmd_check_derivation(args) -> int:
    d = ff.parse_derivation(_read(args.file))
    res = check_derivation(d, SystemConfig(_spec(args), allow_cut=not args.no_cut))
    if res.ok:
        print("ok")
        return 0
    print(res.report(), file=sys.stderr)
    return 1


def cmd_check_hilbert(args) -> int:
    proof = ff.parse_hilbert(_read(args.file))
    res = check_hilbert(proof, _spec(args))
    if res.ok:
        print("ok")
        return 0
    print(res.report(), file=sys.stderr)
    return 1


def cmd_elaborate(args) -> int:
    d = ff.parse_derivation(_read(args.file))
    spec = _spec(args)
    res = check_derivation(d, SystemConfig(spec, allow_cut=False))
    if not res.ok:
        print(res.report(), file=sys.stderr)
        return 1
    _write(args.output, ff.render_hilbert(elaborate_to_hilbert(d, spec, check=False)))
    return 0


def cmd_embed(args) -> int:
    phi = parse_formula(args.formula)
    proof = ff.parse_hilbert(_read(args.hilbert))
    spec = _spec(args)
    res = check_hilbert(proof, spec)
    if not res.ok:
        print(res.report(), file=sys.stderr)
        return 1
    hits = [k for k, (f, _) in enumerate(proof.lines) if f == phi]
    if not hits:
        print(f"no line of the proof concludes {render_formula(phi)}", file=sys.stderr)
        return 1
    # lines only cite earlier lines, so a prefix is again a proof
    prefix = HilbertProof(list(proof.lines[: hits[0] + 1]))
    d = embed_hilbert(prefix, spec=spec, fuel=args.fuel)
    _write(args.output, ff.render_derivation(d))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="efl", description="Tree-sequent prover for the epistemic logic of friendship.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def search_flags(q):
        _logic_flags(q)
        q.add_argument("--fuel", type=int, default=10000)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--emit-derivation", metavar="FILE")
        q.add_argument("--emit-countermodel", metavar="FILE")

    q = sub.add_parser("prove", help="prove or refute a formula")
    q.add_argument("formula", nargs="?")
    search_flags(q)
    q.add_argument("--batch", metavar="FILE", help="one formula per line")
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(fn=cmd_prove)

    q = sub.add_parser("prove-seq", help="prove or refute a sequent file")
    q.add_argument("file")
    search_flags(q)
    q.set_defaults(fn=cmd_prove_seq)

    q = sub.add_parser("check", help="evaluate a formula in a model")
    q.add_argument("formula")
    q.add_argument("--model", required=True)
    q.add_argument("--world", required=True)
    q.add_argument("--agent", required=True)
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("oracle", help="bounded brute-force countermodel search")
    q.add_argument("formula")
    q.add_argument("--max-worlds", type=int, required=True)
    q.add_argument("--max-agents", type=int, required=True)
    q.add_argument("-o", "--output", default="-")
    _logic_flags(q)
    q.set_defaults(fn=cmd_oracle)

    q = sub.add_parser("translate", help="formulaic translation of a sequent")
    q.add_argument("file")
    q.add_argument("--at", metavar="LABEL")
    q.set_defaults(fn=cmd_translate)

    q = sub.add_parser("check-derivation", help="check a derivation file")
    q.add_argument("file")
    _logic_flags(q)
    q.add_argument("--no-cut", action="store_true")
    q.set_defaults(fn=cmd_check_derivation)

    q = sub.add_parser("check-hilbert", help="check a Hilbert proof file")
    q.add_argument("file")
    _logic_flags(q)
    q.set_defaults(fn=cmd_check_hilbert)

    q = sub.add_parser("elaborate", help="turn a cut-free derivation into a Hilbert proof")
    q.add_argument("file")
    q.add_argument("-o", "--output", required=True)
    _logic_flags(q)
    q.set_defaults(fn=cmd_elaborate)

    q = sub.add_parser("embed", help="turn a Hilbert proof into a derivation")
    q.add_argument("--formula", required=True)
    q.add_argument("--hilbert", required=True)
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--fuel", type=int, default=20000)
    _logic_flags(q)
    q.set_defaults(fn=cmd_embed)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("efl: a subcommand is required")
        if getattr(args, "fuel", 1) < 1:
            raise UsageError("--fuel must be at least 1")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.fn(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EX_USAGE
    except (ParseError, json.JSONDecodeError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EX_DATAERR
    except Exception as e:  # any other failure is an internal invariant breaking
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EX_SOFTWARE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
