"""Longest-match tokenizer driven by a grammar's lexical configuration."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .grammar import CLASS, LITERAL, NEWLINE, Grammar


class LexError(ValueError):
    def __init__(self, offset: int, text: str):
        self.offset = offset
        self.snippet = text[offset:offset + 20]
        super().__init__(f"no token matches at offset {offset}: {self.snippet!r}")


@dataclass(frozen=True)
class Token:
    terminal: str
    lexeme: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    def __repr__(self) -> str:
        return f"Token({self.terminal}, {self.lexeme!r})"


class Lexer:
    def __init__(self, g: Grammar):
        self.newline = g.lexical.newline_significant
        # without declared skip patterns, blanks separate tokens (linearize emits them)
        skip = g.lexical.skip or ((r"[ \t\r]+",) if self.newline else (r"\s+",))
        self.skip = [re.compile(p) for p in skip]
        lits = sorted(
            ((s.lexeme, s.name) for s in g.symbols.values() if s.kind == LITERAL and s.name != NEWLINE),
            key=lambda x: (-len(x[0]), x[0]),
        )
        self.literal_names = dict(lits)
        self.literal_re = (
            re.compile("|".join(re.escape(lx) for lx, _ in lits)) if lits else None
        )
        self.classes = [
            (s.name, re.compile(s.pattern)) for s in g.symbols.values() if s.kind == CLASS
        ]

    def _match(self, text: str, pos: int) -> tuple[str, int] | None:
        """Longest match at pos; literal wins ties, then declaration order."""
        best: tuple[str, int] | None = None
        if self.literal_re is not None:
            m = self.literal_re.match(text, pos)
            if m:
                best = (self.literal_names[m.group()], m.end())
        for name, rx in self.classes:
            m = rx.match(text, pos)
            if m and m.end() > pos and (best is None or m.end() > best[1]):
                best = (name, m.end())
        return best

    def classify(self, lexeme: str) -> str | None:
        """Terminal that lexes ``lexeme`` as exactly one token, if any."""
        hit = self._match(lexeme, 0)
        if hit is None or hit[1] != len(lexeme):
            return None
        return hit[0]

    def tokens(self, text: str) -> list[Token]:
        out: list[Token] = []
        pos = 0
        n = len(text)
        while pos < n:
            if self.newline and text[pos] == "\n":
                # blank lines and leading newlines carry no structure
                if out and out[-1].terminal != NEWLINE:
                    out.append(Token(NEWLINE, "\n", (pos, pos + 1)))
                pos += 1
                continue
            skipped = False
            for rx in self.skip:
                m = rx.match(text, pos)
                if m and m.end() > pos:
                    end = m.end()
                    if self.newline:
                        nl = text.find("\n", pos, end)
                        if nl == pos:
                            continue
                        if nl != -1:
                            end = nl
                    pos = end
                    skipped = True
                    break
            if skipped:
                continue
            hit = self._match(text, pos)
            if hit is None:
                raise LexError(pos, text)
            name, end = hit
            out.append(Token(name, text[pos:end], (pos, end)))
            pos = end
        return out


@lru_cache(maxsize=64)
def _lexer_for(g: Grammar) -> Lexer:
    return Lexer(g)


def lexer_for(g: Grammar) -> Lexer:
    return _lexer_for(g)


def lex(text: str, g: Grammar) -> list[Token]:
    """Tokenize ``text`` against ``g``; NEWLINE tokens only when the grammar asks."""
    return lexer_for(g).tokens(text)
