"""Command line: ``prover check | script | export | search``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import checks, kernels, workbench
from .automata import textio
from .logic.script import ScriptError, ScriptRunner, statements
from .search import SearchConfig, SearchError, grow_tree, level_counts


def cmd_check(args) -> int:
    names = list(checks.REGISTRY) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in checks.REGISTRY:
        print(f"unknown check {args.name!r}; known: {', '.join(checks.REGISTRY)}", file=sys.stderr)
        return 2
    ctx = checks.Context(args.system, args.prefix_len)
    reports = []
    for name in names:
        rep = checks.run_check(name, ctx)
        print(rep.describe(), flush=True)
        reports.append(rep)
    ok = checks.suite_passed(reports)
    summary = ", ".join(f"{r.name}={r.verdict}" for r in reports)
    print(f"\n{'ALL PASS' if ok else 'FAILURES'}: {summary}")
    if args.report:
        Path(args.report).write_text(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    return 0 if ok else 1


def cmd_script(args) -> int:
    text = Path(args.file).read_text() if args.file != "-" else sys.stdin.read()
    runner = ScriptRunner(workbench.compiler(args.system))
    try:
        runner.run(text, echo=lambda res: print(res.describe(), flush=True))
    except ScriptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _named_automaton(name: str, system: str):
    sys_ = workbench.system(system)
    if name == "addressing":
        return sys_.addressing
    if name == "dfao":
        return sys_.dfao()
    if name == "addition":
        return sys_.addition
    if system != "dt_q":
        raise KeyError(f"{name!r} is not a built-in automaton of {system}")
    runner = ScriptRunner(workbench.compiler(system))
    for line, tokens in statements(workbench.bundled_script("q_checks")):
        runner.execute(tokens, line)
        if name in runner.compiler.store:
            return runner.compiler.store[name].automaton
    raise KeyError(f"unknown automaton {name!r}")


def cmd_export(args) -> int:
    if args.automaton == "system":
        text = workbench.system(args.system).export()
    else:
        try:
            text = textio.dumps(_named_automaton(args.automaton, args.system))
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return 2
    if args.file == "-":
        sys.stdout.write(text)
    else:
        Path(args.file).write_text(text)
    return 0


def cmd_search(args) -> int:
    cfg = SearchConfig(Fraction(args.threshold), strict=not args.non_strict, max_length=args.max_length,
                       first_letter_fixed=args.first_letter_fixed, max_nodes=args.max_nodes)
    try:
        if args.counts:
            counts = level_counts(cfg, args.counts)
            print("n,count,bound_16n,ok")
            for n in range(1, args.counts + 1):
                print(f"{n},{counts[n]},{16 * n},{int(counts[n] <= 16 * n)}")
            return 0
        res = grow_tree(cfg)
    except SearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for w in sorted(res.maximal_words, key=lambda w: (-len(w), w)):
        print(w)
    print(f"# max_depth={res.max_depth} maximal={len(res.maximal_words)} "
          f"longest={len(res.longest())} truncated={res.truncated} backend={kernels.BACKEND}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prover", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run a named check or all of them")
    c.add_argument("name", help="check name or 'all'")
    c.add_argument("--system", default="dt_q", choices=["dt_q"])
    c.add_argument("--prefix-len", type=int, default=None, help="oracle prefix length (doubled for saturation)")
    c.add_argument("--report", help="write JSON reports here")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("script", help="run a proof script ('-' reads stdin)")
    s.add_argument("file")
    s.add_argument("--system", default="dt_q", choices=sorted(workbench.SYSTEMS))
    s.set_defaults(func=cmd_script)

    e = sub.add_parser("export", help="write an automaton in the text format")
    e.add_argument("automaton", help="addressing, dfao, addition, system, or a bundled predicate name")
    e.add_argument("file", help="output path or '-'")
    e.add_argument("--system", default="dt_q", choices=sorted(workbench.SYSTEMS))
    e.set_defaults(func=cmd_export)

    r = sub.add_parser("search", help="enumerate Rote words under an exponent bound")
    r.add_argument("--threshold", default="5/2")
    r.add_argument("--non-strict", action="store_true", help="forbid only exponents above the threshold")
    r.add_argument("--max-length", type=int, default=None)
    r.add_argument("--first-letter-fixed", action="store_true")
    r.add_argument("--max-nodes", type=int, default=0)
    r.add_argument("--counts", type=int, default=0, metavar="N", help="print CSV level counts up to N")
    r.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
