"""Grammar data model, grammar file reader/writer, validation and
epsilon normalization.

Symbols are referred to by name everywhere.  Nonterminal and class-terminal
names are bare identifiers; a literal terminal's name is its quoted lexeme
(``"'+'"``), so names never collide across kinds.  The one exception is
``NEWLINE``, a literal terminal with lexeme ``"\\n"`` that exists only when the
grammar declares ``newline significant``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

NONTERMINAL = "nonterminal"
LITERAL = "literal"
CLASS = "class"

USER = "user"
EPSILON_MARKER = "epsilon-marker"
TRANSFORM_INSERTED = "transform-inserted"

NEWLINE = "NEWLINE"
EPS_LEXEME = "<eps>"


class GrammarError(ValueError):
    """Raised for malformed grammar files and invalid grammar construction."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


def quote(lexeme: str) -> str:
    """Name of the literal terminal with the given lexeme."""
    return "'" + lexeme.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n") + "'"


def unquote(name: str) -> str:
    body = name[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


@dataclass(frozen=True)
class Symbol:
    kind: str
    name: str
    lexeme: str | None = None
    pattern: str | None = None
    content: bool = False

    @property
    def is_terminal(self) -> bool:
        return self.kind != NONTERMINAL

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL


@dataclass(frozen=True)
class Production:
    id: int
    lhs: str
    rhs: tuple[str, ...]
    origin: str = field(default=USER, compare=False)

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs)}".rstrip()


@dataclass(frozen=True)
class LexicalConfig:
    skip: tuple[str, ...] = ()
    newline_significant: bool = False
    tight: tuple[str, ...] = ()


class Grammar:
    """An immutable context-free grammar plus the lexical configuration of its terminals."""

    def __init__(
        self,
        symbols: Iterable[Symbol],
        productions: Sequence[Production],
        start: str,
        lexical: LexicalConfig = LexicalConfig(),
    ):
        self.symbols: dict[str, Symbol] = {}
        for s in symbols:
            if s.name in self.symbols:
                raise GrammarError(f"duplicate symbol name {s.name!r}")
            self.symbols[s.name] = s
        self.productions: tuple[Production, ...] = tuple(productions)
        self.start = start
        self.lexical = lexical
        if start not in self.symbols or self.symbols[start].kind != NONTERMINAL:
            raise GrammarError(f"start symbol {start!r} is not a nonterminal")
        seen_ids = set()
        for p in self.productions:
            if p.id in seen_ids:
                raise GrammarError(f"duplicate production id {p.id}")
            seen_ids.add(p.id)
            if self.symbols.get(p.lhs, None) is None or self.symbols[p.lhs].kind != NONTERMINAL:
                raise GrammarError(f"production {p.id}: lhs {p.lhs!r} is not a nonterminal")
            for s in p.rhs:
                if s not in self.symbols:
                    raise GrammarError(f"production {p.id}: undeclared symbol {s!r}")

    # -- derived views ----------------------------------------------------

    @cached_property
    def nonterminals(self) -> tuple[str, ...]:
        return tuple(n for n, s in self.symbols.items() if s.kind == NONTERMINAL)

    @cached_property
    def terminals(self) -> tuple[str, ...]:
        return tuple(n for n, s in self.symbols.items() if s.kind != NONTERMINAL)

    @cached_property
    def by_id(self) -> dict[int, Production]:
        return {p.id: p for p in self.productions}

    @cached_property
    def _by_lhs(self) -> dict[str, tuple[Production, ...]]:
        out: dict[str, list[Production]] = {n: [] for n in self.nonterminals}
        for p in self.productions:
            out[p.lhs].append(p)
        return {k: tuple(v) for k, v in out.items()}

    def productions_of(self, nt: str) -> tuple[Production, ...]:
        return self._by_lhs.get(nt, ())

    def is_nonterminal(self, name: str) -> bool:
        return self.symbols[name].kind == NONTERMINAL

    def is_terminal(self, name: str) -> bool:
        return self.symbols[name].kind != NONTERMINAL

    @cached_property
    def nt_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nonterminals)}

    @cached_property
    def nullable(self) -> frozenset[str]:
        nullable: set[str] = set()
        changed = True
        while changed:
            changed = False
            for p in self.productions:
                if p.lhs not in nullable and all(s in nullable for s in p.rhs):
                    nullable.add(p.lhs)
                    changed = True
        return frozenset(nullable)

    @cached_property
    def literal_lexemes(self) -> frozenset[str]:
        return frozenset(s.lexeme for s in self.symbols.values() if s.kind == LITERAL)

    def is_epsilon_free(self) -> bool:
        return all(p.rhs for p in self.productions)

    # -- construction helpers ---------------------------------------------

    def with_productions(self, productions: Sequence[Production], extra: Iterable[Symbol] = ()) -> "Grammar":
        """Copy with a new production list; literal terminals no rule uses are dropped."""
        pool = dict(self.symbols)
        for s in extra:
            pool[s.name] = s
        used = {s for p in productions for s in p.rhs}
        symbols = [
            s for s in pool.values()
            if s.kind != LITERAL or s.name in used or s.name == NEWLINE and self.lexical.newline_significant
        ]
        return Grammar(symbols, productions, self.start, self.lexical)

    def structurally_equal(self, other: "Grammar") -> bool:
        return (
            self.start == other.start
            and self.symbols == other.symbols
            and [(p.id, p.lhs, p.rhs) for p in self.productions]
            == [(p.id, p.lhs, p.rhs) for p in other.productions]
            and self.lexical == other.lexical
        )

    def __repr__(self) -> str:
        return f"<Grammar start={self.start} {len(self.nonterminals)} nonterminals, {len(self.productions)} productions>"


def literal(lexeme: str) -> Symbol:
    return Symbol(LITERAL, quote(lexeme), lexeme=lexeme)


# ---------------------------------------------------------------------------
# grammar file format

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<punct>[;|])
  | (?P<string>'(?:[^'\\\n]|\\.)*')
  | (?P<regex>/(?:[^/\\\n]|\\.)+/)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GrammarError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            yield kind, value, line, col
        nl = value.count("\n")
        if nl:
            line += nl
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    yield "eof", "", line, col


def parse_grammar(text: str) -> Grammar:
    """Read a grammar file.  Production ids are 1..n in file order."""
    toks = list(_tokenize(text))
    i = 0
    start: str | None = None
    classes: dict[str, Symbol] = {}
    skip: list[str] = []
    tight: list[str] = []
    newline = False
    raw_rules: list[tuple[str, list[tuple[str, str, int, int]], int, int]] = []

    def expect(kind, value=None):
        nonlocal i
        k, v, ln, cl = toks[i]
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise GrammarError(f"expected {want!r}, found {v or k!r}", ln, cl)
        i += 1
        return v

    while toks[i][0] != "eof":
        kind, value, ln, cl = toks[i]
        nxt = toks[i + 1] if i + 1 < len(toks) else ("eof", "", ln, cl)
        if kind == "name" and nxt[0] == "arrow":
            i += 2
            rhs: list[tuple[str, str, int, int]] = []
            while True:
                k, v, l2, c2 = toks[i]
                if k in ("name", "string"):
                    rhs.append((k, v, l2, c2))
                    i += 1
                elif k == "punct" and v == "|":
                    raw_rules.append((value, rhs, ln, cl))
                    rhs = []
                    i += 1
                elif k == "punct" and v == ";":
                    raw_rules.append((value, rhs, ln, cl))
                    i += 1
                    break
                else:
                    raise GrammarError(f"unexpected {v or k!r} in production", l2, c2)
        elif kind == "name" and value == "start":
            if start is not None:
                raise GrammarError("duplicate start declaration", ln, cl)
            i += 1
            start = expect("name")
            expect("punct", ";")
        elif kind == "name" and value == "terminal":
            i += 1
            name = expect("name")
            if name in classes:
                raise GrammarError(f"duplicate symbol name {name!r}", ln, cl)
            pattern = expect("regex")[1:-1].replace("\\/", "/")
            content = False
            if toks[i][0] == "name" and toks[i][1] == "content":
                content = True
                i += 1
            expect("punct", ";")
            try:
                re.compile(pattern)
            except re.error as exc:
                raise GrammarError(f"bad pattern for {name}: {exc}", ln, cl) from None
            classes[name] = Symbol(CLASS, name, pattern=pattern, content=content)
        elif kind == "name" and value == "skip":
            i += 1
            skip.append(expect("regex")[1:-1].replace("\\/", "/"))
            expect("punct", ";")
        elif kind == "name" and value == "newline":
            i += 1
            expect("name", "significant")
            expect("punct", ";")
            newline = True
        elif kind == "name" and value == "tight":
            i += 1
            while toks[i][0] in ("string", "name"):
                k, v, _, _ = toks[i]
                tight.append(quote(unquote(v)) if k == "string" else v)
                i += 1
            expect("punct", ";")
        else:
            raise GrammarError(f"unexpected {value or kind!r}", ln, cl)

    if start is None:
        raise GrammarError("missing start declaration")

    nts: dict[str, Symbol] = {}
    for lhs, _, ln, cl in raw_rules:
        if lhs in classes or lhs == NEWLINE and newline:
            raise GrammarError(f"duplicate symbol name {lhs!r}", ln, cl)
        nts.setdefault(lhs, Symbol(NONTERMINAL, lhs))
    if start not in nts:
        raise GrammarError(f"start symbol {start!r} has no productions")

    literals: dict[str, Symbol] = {}
    productions = []
    for pid, (lhs, rhs, _, _) in enumerate(raw_rules, start=1):
        names = []
        for k, v, l2, c2 in rhs:
            if k == "string":
                lexeme = unquote(v)
                if not lexeme:
                    raise GrammarError("empty literal", l2, c2)
                sym = literal(lexeme)
                literals.setdefault(sym.name, sym)
                names.append(sym.name)
            elif v in nts or v in classes:
                names.append(v)
            elif v == NEWLINE and newline:
                names.append(NEWLINE)
            else:
                raise GrammarError(f"undeclared symbol {v!r}", l2, c2)
        origin = EPSILON_MARKER if names == [quote(EPS_LEXEME)] else USER
        productions.append(Production(pid, lhs, tuple(names), origin))

    symbols = list(nts.values()) + list(classes.values())
    if newline:
        symbols.append(Symbol(LITERAL, NEWLINE, lexeme="\n"))
    symbols += list(literals.values())
    return Grammar(symbols, productions, start, LexicalConfig(tuple(skip), newline, tuple(tight)))


def serialize_grammar(g: Grammar, header: str | None = None) -> str:
    """Write the canonical file form; ``parse_grammar`` reads it back unchanged."""
    lines = []
    if header:
        lines += [f"# {h}" for h in header.splitlines()]
    lines.append(f"start {g.start} ;")
    if g.lexical.newline_significant:
        lines.append("newline significant ;")
    for pat in g.lexical.skip:
        lines.append(f"skip /{pat.replace('/', chr(92) + '/')}/ ;")
    for s in g.symbols.values():
        if s.kind == CLASS:
            flag = " content" if s.content else ""
            lines.append(f"terminal {s.name} /{s.pattern.replace('/', chr(92) + '/')}/{flag} ;")
    if g.lexical.tight:
        lines.append("tight " + " ".join(g.lexical.tight) + " ;")
    lines.append("")
    for p in g.productions:
        lines.append(f"{p.lhs} -> {' '.join(p.rhs)} ;" if p.rhs else f"{p.lhs} -> ;")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    symbol: str | None = None
    production: int | None = None


@dataclass
class ValidationReport:
    errors: list[Diagnostic] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(g: Grammar) -> ValidationReport:
    report = ValidationReport()
    nts = g.nonterminals
    first_pid = {}
    for p in g.productions:
        first_pid.setdefault(p.lhs, p.id)

    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in productive and all(g.is_terminal(s) or s in productive for s in p.rhs):
                productive.add(p.lhs)
                changed = True

    reachable = {g.start}
    stack = [g.start]
    while stack:
        a = stack.pop()
        for p in g.productions_of(a):
            for s in p.rhs:
                if g.is_nonterminal(s) and s not in reachable:
                    reachable.add(s)
                    stack.append(s)

    diags: list[tuple[int, bool, Diagnostic]] = []
    for n in nts:
        pid = first_pid.get(n, 0)
        if not g.productions_of(n):
            diags.append((pid, True, Diagnostic("no-productions", f"{n} has no productions", n)))
        elif n not in productive:
            diags.append((pid, True, Diagnostic("nonproductive", f"{n} derives no terminal string", n, pid)))
        if n not in reachable:
            diags.append((pid, False, Diagnostic("unreachable", f"{n} is unreachable from {g.start}", n, pid)))
    seen: dict[tuple[str, tuple[str, ...]], int] = {}
    for p in g.productions:
        key = (p.lhs, p.rhs)
        if key in seen:
            diags.append((p.id, True, Diagnostic(
                "duplicate-production", f"production {p.id} duplicates {seen[key]}: {p}", p.lhs, p.id)))
        else:
            seen[key] = p.id
    for s in g.symbols.values():
        if s.kind == LITERAL and not s.lexeme:
            diags.append((0, True, Diagnostic("empty-literal", "literal terminal with empty lexeme", s.name)))
        if s.kind == CLASS and not s.pattern:
            diags.append((0, True, Diagnostic("empty-pattern", f"{s.name} has an empty pattern", s.name)))
    diags.sort(key=lambda d: (d[0], d[2].code, d[2].symbol or ""))
    for _, is_error, d in diags:
        (report.errors if is_error else report.warnings).append(d)
    return report


def require_valid(g: Grammar) -> None:
    report = validate(g)
    if report.errors:
        raise GrammarError("; ".join(d.message for d in report.errors))


# ---------------------------------------------------------------------------
# epsilon normalization

EPS_NAME = quote(EPS_LEXEME)


def epsilon_normalize(g: Grammar) -> Grammar:
    """Rewrite every empty right-hand side to the shared ``<eps>`` terminal."""
    if g.is_epsilon_free():
        return g
    if EPS_NAME in g.symbols and not any(p.origin == EPSILON_MARKER for p in g.productions):
        raise GrammarError(f"grammar already uses the reserved terminal {EPS_LEXEME}")
    prods = [
        Production(p.id, p.lhs, (EPS_NAME,), EPSILON_MARKER) if not p.rhs else p
        for p in g.productions
    ]
    return g.with_productions(prods, extra=[literal(EPS_LEXEME)])
