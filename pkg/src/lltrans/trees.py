"""Syntax trees, their S-expression debug form, and linearization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

from .grammar import NEWLINE, Grammar
from .lexer import Token


@dataclass(frozen=True)
class Leaf:
    token: Token


@dataclass(frozen=True)
class Interior:
    production: int
    children: tuple["SyntaxTree", ...]


SyntaxTree = Union[Interior, Leaf]


def frontier(t: SyntaxTree) -> list[Token]:
    out: list[Token] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.token)
        else:
            stack.extend(reversed(node.children))
    return out


def interiors(t: SyntaxTree) -> Iterator[Interior]:
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Interior):
            yield node
            stack.extend(reversed(node.children))


def conforms(t: SyntaxTree, g: Grammar) -> bool:
    """Children of every interior node match its production's rhs."""
    for node in interiors(t):
        p = g.by_id.get(node.production)
        if p is None or len(p.rhs) != len(node.children):
            return False
        for sym, child in zip(p.rhs, node.children):
            if g.is_nonterminal(sym):
                if not isinstance(child, Interior) or g.by_id[child.production].lhs != sym:
                    return False
            elif not isinstance(child, Leaf) or child.token.terminal != sym:
                return False
    return True


def to_sexpr(t: SyntaxTree) -> str:
    if isinstance(t, Leaf):
        return json.dumps(t.token.lexeme, ensure_ascii=False)
    inner = " ".join(to_sexpr(c) for c in t.children)
    return f"(p{t.production} {inner})" if inner else f"(p{t.production})"


def render_tokens(tokens: list[Token], g: Grammar | None = None) -> str:
    tight = set(g.lexical.tight) if g is not None else set()
    parts: list[str] = []
    prev: Token | None = None
    for tok in tokens:
        if prev is not None and NEWLINE not in (prev.terminal, tok.terminal) and tok.terminal not in tight:
            parts.append(" ")
        parts.append(tok.lexeme)
        prev = tok
    return "".join(parts)


def linearize(t: SyntaxTree, g: Grammar | None = None) -> str:
    """Frontier lexemes separated by single spaces; no space before the
    grammar's tight punctuation or after a NEWLINE."""
    return render_tokens(frontier(t), g)
