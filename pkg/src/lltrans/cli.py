"""Command-line front end.

Exit codes: 0 success, 2 grammar error, 3 transform failure, 4 parse or
translation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import classify
from .grammar import GrammarError, parse_grammar, require_valid, serialize_grammar
from .lexer import LexError, lex
from .parsing import Ambiguous, NotLL1Error, Reject, Tree, earley_parse, ll1_parse
from .transform import DEFAULT_DEPTH_CAP, DepthCapExceeded, Mode, RuleMap, transform
from .translate import TranslationBundle, TranslationError, parse_program, translate_corpus, translate_program
from .trees import frontier, to_sexpr

EXIT_OK, EXIT_GRAMMAR, EXIT_TRANSFORM, EXIT_PARSE = 0, 2, 3, 4
SEED_ENV = "GRAMTRANS_SEED"
DEFAULT_SEED = 42


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(EXIT_GRAMMAR, f"{SEED_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _load_grammar(path: str, validate: bool = True):
    try:
        g = parse_grammar(Path(path).read_text(encoding="utf-8"))
        if validate:
            require_valid(g)
        return g
    except OSError as exc:
        raise CliError(EXIT_GRAMMAR, f"{path}: {exc.strerror}") from None
    except GrammarError as exc:
        raise CliError(EXIT_GRAMMAR, f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    g = _load_grammar(args.grammar, validate=False)
    report = classify(g, name=Path(args.grammar).name)
    _write(args.output, report.to_json() + "\n" if args.json else report.to_text())
    return EXIT_OK


def cmd_transform(args) -> int:
    g = _load_grammar(args.grammar)
    try:
        mode = Mode.parse(args.mode)
    except ValueError as exc:
        raise CliError(EXIT_TRANSFORM, str(exc)) from None
    try:
        result = transform(g, mode, reorder=not args.no_reorder, depth_cap=args.depth_cap, seed=_seed(args))
    except DepthCapExceeded as exc:
        raise CliError(EXIT_TRANSFORM, str(exc)) from None
    header = f"transformed from {Path(args.grammar).name} (mode {mode}{', no reordering' if args.no_reorder else ''})"
    grammar_text = serialize_grammar(result.grammar, header)
    trace_text = result.trace.to_json() if args.json else result.trace.to_text()
    map_path = args.map
    if map_path is None and args.output not in (None, "-"):
        map_path = str(Path(args.output).with_suffix("")) + ".map.json"
    if map_path:
        Path(map_path).write_text(result.rulemap.to_json(), encoding="utf-8")
    if args.output in (None, "-"):
        sys.stdout.write(grammar_text)
        if args.trace:
            Path(args.trace).write_text(trace_text, encoding="utf-8")
    else:
        Path(args.output).write_text(grammar_text, encoding="utf-8")
        _write(args.trace, trace_text)
    return EXIT_OK


def _bundle(args) -> TranslationBundle:
    src = _load_grammar(args.grammar_src)
    dst = _load_grammar(args.grammar_dst)
    try:
        rm = RuleMap.from_json(Path(args.map).read_text(encoding="utf-8"))
        if args.backward:
            bundle = TranslationBundle(src, dst, rm).inverse()
        else:
            bundle = TranslationBundle(src, dst, rm)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(EXIT_GRAMMAR, f"rule map {args.map}: {exc}") from None
    return bundle


def cmd_translate(args) -> int:
    bundle = _bundle(args)
    if args.corpus:
        with open(args.input, encoding="utf-8") as fh:
            out, report = translate_corpus(fh, bundle, args.field)
        lines = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in out)
        _write(args.output, lines)
        sidecar = (args.output + ".failures.jsonl") if args.output not in (None, "-") else "translate.failures.jsonl"
        Path(sidecar).write_text("".join(json.dumps(f, ensure_ascii=False) + "\n" for f in report.failures), encoding="utf-8")
        summary = report.to_dict()
        print(json.dumps(summary) if args.json else " ".join(f"{k}={v}" for k, v in report.counts.items()), file=sys.stderr)
        return EXIT_OK
    text = Path(args.input).read_text(encoding="utf-8")
    try:
        out = translate_program(text, bundle)
    except TranslationError as exc:
        raise CliError(EXIT_PARSE, f"{args.input}: {exc}") from None
    # verbatim: a trailing newline would be an extra NEWLINE token in grammars
    # whose programs end in a marker (e.g. the <eps> of an empty statement list)
    _write(args.output, out)
    return EXIT_OK


def cmd_parse(args) -> int:
    g = _load_grammar(args.grammar)
    text = Path(args.program).read_text(encoding="utf-8")
    try:
        tokens = lex(text, g)
    except LexError as exc:
        raise CliError(EXIT_PARSE, f"{args.program}: {exc}") from None
    if args.ll1:
        try:
            outcome = ll1_parse(g, tokens)
        except NotLL1Error as exc:
            raise CliError(EXIT_GRAMMAR, f"{args.grammar}: {exc}") from None
    else:
        outcome = earley_parse(g, tokens)
    if isinstance(outcome, Tree):
        if args.json:
            print(json.dumps({"schema": 1, "result": "tree", "tree": to_sexpr(outcome.tree)}))
        else:
            print(to_sexpr(outcome.tree))
        return EXIT_OK
    if isinstance(outcome, Ambiguous):
        trees = [to_sexpr(outcome.first), to_sexpr(outcome.second)]
        if args.ambiguity:
            if args.json:
                print(json.dumps({"schema": 1, "result": "ambiguous", "trees": trees}))
            else:
                print("ambiguous input; two parses:")
                for t in trees:
                    print("  " + t)
            return EXIT_OK
        raise CliError(EXIT_PARSE, "ambiguous input; two parses:\n  " + "\n  ".join(trees))
    assert isinstance(outcome, Reject)
    where = repr(tokens[outcome.position].lexeme) if outcome.position < len(tokens) else "end of input"
    raise CliError(EXIT_PARSE, f"{args.program}: syntax error at token {outcome.position} ({where}); "
                               f"expected {', '.join(outcome.expected) or 'nothing'}")


def cmd_stats(args) -> int:
    from .sampler import sample
    from .transform import grammar_rule_transform, sbt_transform
    from .trees import linearize

    g = _load_grammar(args.grammar)
    seed = _seed(args)
    reps: list[tuple[str, TranslationBundle]] = []
    identity = TranslationBundle(g, g, RuleMap.identity(g))
    reps.append(("original", identity))
    try:
        for label, mode in (("layers-1", Mode.layers(1)), ("full", Mode("full"))):
            r = transform(g, mode, seed=seed)
            reps.append((label, TranslationBundle(g, r.grammar, r.rulemap)))
    except DepthCapExceeded as exc:
        raise CliError(EXIT_TRANSFORM, str(exc)) from None
    if args.baselines:
        for label, fn in (("sbt", sbt_transform), ("grammar-rule", grammar_rule_transform)):
            tg, rm = fn(g)
            reps.append((label, TranslationBundle(g, tg, rm)))
    if args.grammar_dst:
        args.grammar_src = args.grammar
        args.backward = False
        reps.append((Path(args.grammar_dst).stem, _bundle(args)))

    programs: list[str] = []
    if args.corpus:
        with open(args.corpus, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    try:
                        programs.append(json.loads(line)[args.field])
                    except (ValueError, KeyError, TypeError):
                        programs.append(None)
    else:
        programs = [linearize(sample(g, args.depth, seed + i), g) for i in range(args.samples)]

    from .translate import translate_tree

    totals = {label: 0 for label, _ in reps}
    ok = failed = 0
    for text in programs:
        if text is None:
            failed += 1
            continue
        try:
            tree = parse_program(text, g)
        except TranslationError:
            failed += 1
            continue
        ok += 1
        for label, b in reps:
            totals[label] += len(frontier(translate_tree(tree, b)))
    base = totals["original"] or 1
    rows = [{"representation": label, "average": totals[label] / ok if ok else 0.0,
             "ratio": totals[label] / base} for label, _ in reps]
    note = None
    by = {r["representation"]: r for r in rows}
    if "layers-1" in by and "full" in by:
        note = "layers-1 <= full" if by["layers-1"]["ratio"] <= by["full"]["ratio"] else "layers-1 > full"
    if args.json:
        print(json.dumps({"schema": 1, "unit": "grammar terminals", "programs": ok, "failures": failed,
                          "representations": rows, "monotonicity": note}, indent=2))
    else:
        print("# unit: grammar terminals per program (frontier length), not subword tokens")
        print(f"# programs: {ok} parsed, {failed} failed (excluded)")
        for r in rows:
            print(f"{r['representation']:<16} {r['average']:10.2f} {100 * r['ratio']:8.1f}%")
        if note:
            print(f"# monotonicity: {note}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lltrans", description="Grammar classification, LL(1) transformation and program translation.")
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="classify a grammar (LL(1), LL(2), LR(1), left recursion)")
    c.add_argument("grammar")
    c.add_argument("-o", "--output")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("transform", help="transform a grammar towards LL(1)")
    t.add_argument("grammar")
    t.add_argument("--mode", default="full", help="full (default) or layers=K")
    t.add_argument("--no-reorder", action="store_true", help="skip the symbol reordering pass")
    t.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    t.add_argument("-o", "--output", help="transformed grammar file (default: stdout)")
    t.add_argument("--map", help="rule map file (default: next to --output)")
    t.add_argument("--trace", help="trace report file (default: stdout when --output is given)")
    t.add_argument("--json", action="store_true", help="machine-readable trace")
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("translate", help="translate a program or JSONL corpus between grammars")
    r.add_argument("--grammar-src", required=True)
    r.add_argument("--grammar-dst", required=True)
    r.add_argument("--map", required=True)
    r.add_argument("--backward", action="store_true", help="translate from the destination grammar back to the source")
    r.add_argument("--corpus", action="store_true", help="input is JSONL")
    r.add_argument("--field", default="code")
    r.add_argument("--json", action="store_true")
    r.add_argument("input")
    r.add_argument("output", nargs="?")
    r.set_defaults(func=cmd_translate)

    s = sub.add_parser("stats", help="frontier-length statistics per representation")
    s.add_argument("grammar")
    s.add_argument("--corpus", help="JSONL corpus (default: sampled programs)")
    s.add_argument("--field", default="code")
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--baselines", action="store_true", help="also report SBT and grammar-rule representations")
    s.add_argument("--grammar-dst", help="an extra transformed grammar (needs --map)")
    s.add_argument("--map")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    q = sub.add_parser("parse", help="parse a program and print its tree")
    q.add_argument("grammar")
    q.add_argument("program")
    q.add_argument("--ll1", action="store_true", help="use the predictive LL(1) parser")
    q.add_argument("--ambiguity", action="store_true", help="print both parses of an ambiguous input")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_parse)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "stats" and args.grammar_dst and not args.map:
        parser.error("--grammar-dst needs --map")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"lltrans: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
