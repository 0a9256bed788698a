"""Command-line entry point: every pipeline stage as a unix filter.

Forms are read from a file argument or standard input, one or more
s-expressions per input; outputs are canonical printed forms, one per
line.  Metadata lines start with `#`.  The exit status is nonzero iff any
error-severity diagnostic was produced.
"""

from __future__ import annotations

import argparse
import sys

from .checker import check
from .deindex import deindex, expand_adverbial
from .diagnostics import Diagnostic, UlfError, has_errors
from .elsmatch import (
    TRIPLES_VERSION, agreement_matrix, format_report, score, to_triples,
)
from .inference import infer_all, load_default_rules, parse_kb, parse_rules
from .macros import beta_reduce, expand_all, expand_rel
from .models import eval_model, load_model
from .postproc import postprocess
from .reader import parse_all, print_expr
from .scoping import collect_unscoped, enumerate_scopings, to_scoped_form
from .typesys import infer_type, print_type


def _read_forms(path: str | None):
    text = open(path, encoding="utf-8").read() if path else sys.stdin.read()
    return parse_all(text)


def _print_diags(diags: list[Diagnostic]) -> None:
    for d in diags:
        loc = f"@{list(d.path)}" if d.path or d.offset is None else f"@offset {d.offset}"
        line = f"# {d.severity} {d.code} {loc}: {d.message}"
        if d.suggestion is not None:
            line += f" | suggest {print_expr(d.suggestion)}"
        print(line)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="ulf", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        return p

    p = add("parse", help="parse and reprint in canonical form")
    p.add_argument("file", nargs="?")

    p = add("check", help="type-check; prints the type and diagnostics")
    p.add_argument("file", nargs="?")
    p.add_argument("--fragment", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--raw", dest="mode", action="store_const", const="raw",
                      default="raw")
    mode.add_argument("--strict", dest="mode", action="store_const", const="strict")

    p = add("expand", help="relativizer processing and macro expansion")
    p.add_argument("file", nargs="?")
    p.add_argument("--rel-only", action="store_true")
    p.add_argument("--beta", action="store_true",
                   help="also reduce to beta-normal form")

    p = add("postproc", help="raw-to-postprocessed normalization")
    p.add_argument("file", nargs="?")
    p.add_argument("--stage", default="adv-s",
                   choices=("rel", "macros", "shifters", "adv-a", "adv-s"))

    p = add("scope", help="scope unscoped elements to sentential positions")
    p.add_argument("file", nargs="?")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--all", action="store_true", help="print every scoping")
    p.add_argument("--elements", action="store_true",
                   help="only list the unscoped elements")

    p = add("eval", help="evaluate a scoped form on a finite model")
    p.add_argument("file", nargs="?")
    p.add_argument("--model", required=True)
    p.add_argument("--episode", default=None)

    p = add("deindex", help="episode introduction; one formula per line")
    p.add_argument("file", nargs="?")
    p.add_argument("--no-adverbials", action="store_true",
                   help="skip adverbial expansion")

    p = add("infer", help="structural inferences")
    p.add_argument("file", nargs="?")
    p.add_argument("--rules", default=None)
    p.add_argument("--kb", default=None)

    p = add("score", help="alignment F1 between two annotation files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=4)

    p = add("ia", help="pairwise interannotator agreement")
    p.add_argument("--corpus", required=True)
    p.add_argument("--certain-only", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=4)

    p = add("stats", help="annotation counts by dataset and certainty")
    p.add_argument("--corpus", required=True)

    p = add("serve", help="run the annotation service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data", default="./annotations")

    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except UlfError as e:
        _print_diags([e.diagnostic])
        return 1


def _dispatch(args) -> int:
    failed = False
    if args.cmd == "parse":
        for form in _read_forms(args.file):
            print(print_expr(form))
    elif args.cmd == "check":
        for form in _read_forms(args.file):
            result = infer_type(form, mode=args.mode)
            diags = check(form, fragment=args.fragment, mode=args.mode)
            print(print_type(result.type))
            _print_diags(diags)
            failed = failed or has_errors(diags)
    elif args.cmd == "expand":
        for form in _read_forms(args.file):
            out = expand_rel(form)
            if not args.rel_only:
                out = expand_all(out)
            if args.beta:
                out = beta_reduce(out)
            print(print_expr(out))
    elif args.cmd == "postproc":
        for form in _read_forms(args.file):
            print(print_expr(postprocess(form, stage=args.stage)))
    elif args.cmd == "scope":
        for form in _read_forms(args.file):
            if args.elements:
                for path, kind in collect_unscoped(form):
                    print(f"# {kind} at {list(path)}")
                continue
            scopings = enumerate_scopings(form, limit=args.limit)
            if args.all:
                for s in scopings:
                    print(print_expr(s))
            else:
                print(print_expr(scopings[0]))
    elif args.cmd == "eval":
        model = load_model(args.model)
        for form in _read_forms(args.file):
            value = eval_model(to_scoped_form(form), model, episode=args.episode)
            print(1 if value else 0)
    elif args.cmd == "deindex":
        for form in _read_forms(args.file):
            formulas, diags = deindex(form)
            _print_diags(diags)
            for f in formulas:
                if not args.no_adverbials:
                    f = expand_adverbial(f)
                print(print_expr(f))
    elif args.cmd == "infer":
        rules = parse_rules(open(args.rules, encoding="utf-8").read()) \
            if args.rules else load_default_rules()
        kb = parse_kb(open(args.kb, encoding="utf-8").read()) if args.kb else []
        for form in _read_forms(args.file):
            for inf in infer_all(form, rules, kb):
                print(f"# {inf.rule_class} {inf.strength} ({inf.trigger})")
                print(print_expr(inf.conclusion))
    elif args.cmd == "score":
        print(f"# encoding {TRIPLES_VERSION}")
        graphs = []
        for path in (args.a, args.b):
            forms = _read_forms(path)
            graphs.append([to_triples(f) for f in forms])
        total_m = total = 0
        for ga, gb in zip(graphs[0], graphs[1]):
            f1, _ = score(ga, gb, restarts=args.restarts, seed=args.seed)
            total_m += f1 * (ga.size() + gb.size()) / 2.0
            total += (ga.size() + gb.size()) / 2.0
        print(f"{(total_m / total if total else 1.0):.3f}")
    elif args.cmd == "ia":
        from .service import Store
        store = Store(args.corpus)
        rep = store.agreement(certain_only=args.certain_only,
                              restarts=args.restarts, seed=args.seed)
        print(format_report(rep))
    elif args.cmd == "stats":
        from .service import Store, format_stats
        store = Store(args.corpus)
        print(format_stats(store.stats()))
    elif args.cmd == "serve":
        import uvicorn
        from .service import Store, create_app
        app = create_app(Store(args.data))
        uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
