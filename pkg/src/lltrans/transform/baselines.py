"""Baseline representations: structure-based traversal (SBT) brackets and
grammar-rule sequences."""

from __future__ import annotations

from ..grammar import CLASS, LITERAL, NEWLINE, Grammar, Production, literal, quote, require_valid
from .rulemap import RuleEntry, RuleMap


def _unique(lexeme: str, taken: set[str], sep: str = "#") -> str:
    if lexeme not in taken:
        return lexeme
    n = 2
    while f"{lexeme}{sep}{n}" in taken:
        n += 1
    return f"{lexeme}{sep}{n}"


def sbt_transform(g: Grammar) -> tuple[Grammar, RuleMap]:
    """Wrap every production ``A -> B`` as ``A -> (_A B )_A``; the brackets
    are literal terminals shared by all productions of ``A``."""
    require_valid(g)
    taken = set(g.literal_lexemes)
    brackets: dict[str, tuple[str, str]] = {}
    extra = []
    for nt in g.nonterminals:
        op = _unique(f"(_{nt}", taken)
        taken.add(op)
        cl = _unique(f")_{nt}", taken)
        taken.add(cl)
        brackets[nt] = (quote(op), quote(cl))
        extra += [literal(op), literal(cl)]
    prods, entries = [], []
    for p in g.productions:
        op, cl = brackets[p.lhs]
        rhs = (op,) + p.rhs + (cl,)
        prods.append(Production(p.id, p.lhs, rhs, p.origin))
        entries.append(RuleEntry(p.id, p.lhs, p.rhs, rhs, (None,) + tuple(range(len(p.rhs))) + (None,)))
    return g.with_productions(prods, extra), RuleMap(entries, "sbt")


def _display(g: Grammar, sym: str) -> str:
    s = g.symbols[sym]
    if s.kind == LITERAL and sym != NEWLINE:
        return s.lexeme
    return sym


def grammar_rule_transform(g: Grammar) -> tuple[Grammar, RuleMap]:
    """Replace every production ``A -> B`` by ``A -> <A->B> B'`` where ``B'``
    keeps the nonterminals and content-bearing class terminals of ``B`` and
    drops its literal terminals; the rule-name marker is a fresh literal."""
    require_valid(g)
    taken = set(g.literal_lexemes)
    prods, entries, extra = [], [], []
    for p in g.productions:
        name = _unique("<" + p.lhs + "->" + "".join(_display(g, s) for s in p.rhs) + ">", taken)
        taken.add(name)
        sym = literal(name)
        extra.append(sym)
        keep = [i for i, s in enumerate(p.rhs) if g.is_nonterminal(s) or g.symbols[s].kind == CLASS]
        rhs = (sym.name,) + tuple(p.rhs[i] for i in keep)
        prods.append(Production(p.id, p.lhs, rhs, p.origin))
        entries.append(RuleEntry(p.id, p.lhs, p.rhs, rhs, (None,) + tuple(keep)))
    return g.with_productions(prods, extra), RuleMap(entries, "grammar-rule")
