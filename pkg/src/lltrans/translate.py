"""Tree-level translation between a grammar and a transformed counterpart."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .analysis import ll1_table
from .grammar import Grammar
from .lexer import LexError, Token, lex
from .parsing import Ambiguous, Reject, Tree, earley_parse, ll1_parse
from .transform.rulemap import RuleMap
from .trees import Interior, Leaf, SyntaxTree, interiors, linearize, to_sexpr


class TranslationError(ValueError):
    """A program that cannot be translated; ``kind`` is one of
    ``lex``, ``parse``, ``ambiguous`` or ``lineage``."""

    def __init__(self, kind: str, message: str, witness: tuple[SyntaxTree, SyntaxTree] | None = None):
        self.kind = kind
        self.witness = witness
        super().__init__(message)


@dataclass(frozen=True)
class TranslationBundle:
    source: Grammar
    target: Grammar
    rulemap: RuleMap  # oriented source -> target
    direction: str = "forward"

    def __post_init__(self):
        self.rulemap.check_lineage(self.source, self.target)

    def inverse(self) -> "TranslationBundle":
        return TranslationBundle(
            self.target, self.source, self.rulemap.inverted(),
            "backward" if self.direction == "forward" else "forward",
        )


def translate_tree(t: SyntaxTree, bundle: TranslationBundle) -> SyntaxTree:
    """Rewrite every interior node's terminal children per the rule map; the
    production id and nonterminal children (translated recursively) stay."""
    rm = bundle.rulemap
    symbols = bundle.target.symbols

    def go(node: SyntaxTree) -> SyntaxTree:
        if isinstance(node, Leaf):
            return node
        if node.production not in rm:
            raise TranslationError("lineage", f"rule {node.production} is not in the rule map")
        e = rm[node.production]
        if len(node.children) != len(e.source):
            raise TranslationError("lineage", f"node of rule {node.production} does not match the map")
        kids = []
        for j, i in enumerate(e.align):
            if i is None:
                sym = symbols[e.target[j]]
                kids.append(Leaf(Token(sym.name, sym.lexeme)))
            else:
                kids.append(go(node.children[i]))
        return Interior(node.production, tuple(kids))

    return go(t)


def parse_program(text: str, g: Grammar) -> SyntaxTree:
    """Lex and parse; predictive when ``g`` is LL(1), Earley otherwise."""
    try:
        tokens = lex(text, g)
    except LexError as exc:
        raise TranslationError("lex", str(exc)) from None
    outcome = ll1_parse(g, tokens) if ll1_table(g) is not None else earley_parse(g, tokens)
    if isinstance(outcome, Tree):
        return outcome.tree
    if isinstance(outcome, Ambiguous):
        raise TranslationError(
            "ambiguous",
            "input is ambiguous:\n  " + to_sexpr(outcome.first) + "\n  " + to_sexpr(outcome.second),
            (outcome.first, outcome.second),
        )
    assert isinstance(outcome, Reject)
    where = tokens[outcome.position].lexeme if outcome.position < len(tokens) else "end of input"
    exp = ", ".join(outcome.expected[:8])
    raise TranslationError("parse", f"syntax error at token {outcome.position} ({where!r}); expected {exp}")


def translate_program(text: str, bundle: TranslationBundle) -> str:
    return linearize(translate_tree(parse_program(text, bundle.source), bundle), bundle.target)


def predicted_delta(t: SyntaxTree, rulemap: RuleMap) -> int:
    """Frontier-length change the rule map predicts for translating ``t``."""
    return sum(rulemap[n.production].delta for n in interiors(t))


# ---------------------------------------------------------------------------
# corpora


@dataclass
class CorpusReport:
    total: int = 0
    translated: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(f["kind"] for f in self.failures)
        return {
            "total": self.total,
            "translated": self.translated,
            "lex-fail": c.get("lex", 0),
            "parse-fail": c.get("parse", 0),
            "ambiguous": c.get("ambiguous", 0),
            "malformed": c.get("malformed", 0),
        }

    def to_dict(self) -> dict:
        return {"schema": 1, **self.counts}


def translate_corpus(
    records: Iterable[str | dict], bundle: TranslationBundle, field_name: str = "code"
) -> tuple[list[dict], CorpusReport]:
    """Translate the ``field_name`` of every record, preserving order and all
    other fields.  Records may be JSONL lines or dicts; failures are collected
    in the report (with the 0-based record index) and left out of the output."""
    report = CorpusReport()
    out: list[dict] = []
    for index, rec in enumerate(_records(records)):
        report.total += 1
        if isinstance(rec, Exception) or not isinstance(rec, dict) or not isinstance(rec.get(field_name), str):
            msg = str(rec) if isinstance(rec, Exception) else f"record lacks a string field {field_name!r}"
            report.failures.append({"index": index, "kind": "malformed", "message": msg})
            continue
        try:
            translated = translate_program(rec[field_name], bundle)
        except TranslationError as exc:
            report.failures.append({"index": index, "kind": exc.kind, "message": str(exc)})
            continue
        new = dict(rec)
        new[field_name] = translated
        out.append(new)
        report.translated += 1
    return out, report


def _records(records: Iterable[str | dict]) -> Iterator[dict | Exception]:
    for rec in records:
        if isinstance(rec, str):
            if not rec.strip():
                continue
            try:
                yield json.loads(rec)
            except json.JSONDecodeError as exc:
                yield ValueError(f"malformed JSON: {exc}")
        else:
            yield rec
