"""General (Earley) and predictive LL(1) parsing over grammars.

The Earley chart is built by a recognizer kernel, compiled when the extension
is available and pure Python otherwise (``LLTRANS_PURE=1`` forces the latter).
Trees, parse counts and ambiguity witnesses are recovered from the completed
items in Python.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from .grammar import Grammar
from .lexer import Token
from .trees import Interior, Leaf, SyntaxTree

from . import _earley_py

if os.environ.get("LLTRANS_PURE") == "1":
    _recognize = _earley_py.recognize
    KERNEL = "python"
else:
    try:
        from ._earley_ext import recognize as _recognize

        KERNEL = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _recognize = _earley_py.recognize
        KERNEL = "python"

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


@dataclass(frozen=True)
class Tree:
    tree: SyntaxTree


@dataclass(frozen=True)
class Ambiguous:
    first: SyntaxTree
    second: SyntaxTree


@dataclass(frozen=True)
class Reject:
    position: int
    expected: tuple[str, ...] = field(default=(), compare=False)


ParseOutcome = Union[Tree, Ambiguous, Reject]


class CompiledGrammar:
    """Integer coding of a grammar for the recognizer kernels."""

    def __init__(self, g: Grammar):
        self.grammar = g
        self.names = list(g.symbols)
        self.sym_id = {n: i for i, n in enumerate(self.names)}
        self.rules = list(g.productions)
        self.rule_lhs = [self.sym_id[p.lhs] for p in self.rules]
        self.rule_rhs = [tuple(self.sym_id[s] for s in p.rhs) for p in self.rules]
        by = [[] for _ in self.names]
        for r, p in enumerate(self.rules):
            by[self.sym_id[p.lhs]].append(r)
        self.rules_by_lhs = by
        self.is_nt = [g.is_nonterminal(n) for n in self.names]
        self.nullable = [n in g.nullable for n in self.names]
        self.start = self.sym_id[g.start]

    def encode(self, tokens: Sequence[Token]) -> list[int]:
        return [self.sym_id.get(t.terminal, -2) for t in tokens]


@lru_cache(maxsize=64)
def compiled(g: Grammar) -> CompiledGrammar:
    return CompiledGrammar(g)


def recognize(g: Grammar, tokens: Sequence[Token], kernel=None):
    cg = compiled(g)
    fn = kernel or _recognize
    return fn(cg.rule_lhs, cg.rule_rhs, cg.rules_by_lhs, cg.is_nt, cg.nullable, cg.start, cg.encode(tokens))


def _mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return min(2, a * b)


class _Forest:
    """Parse counts (capped at 2) and up to two distinct trees per span."""

    def __init__(self, g: Grammar, tokens: Sequence[Token], completed):
        self.g = g
        self.cg = compiled(g)
        self.tokens = tokens
        self.done: set[tuple[int, int, int]] = set()
        ends: dict[tuple[int, int], set[int]] = {}
        for r, o, j in completed:
            self.done.add((r, o, j))
            ends.setdefault((self.cg.rule_lhs[r], o), set()).add(j)
        self.ends = {k: sorted(v) for k, v in ends.items()}
        self._count: dict = {}
        self._counting: set = set()
        self._active: set = set()
        self._trees: dict = {}
        self._cut = False

    # -- counting ----------------------------------------------------------

    def count_sym(self, s: int, i: int, j: int) -> int:
        cg = self.cg
        if not cg.is_nt[s]:
            return 1 if j == i + 1 and cg.sym_id.get(self.tokens[i].terminal) == s else 0
        key = (s, i, j)
        if key in self._count:
            return self._count[key]
        if key in self._counting:
            # a derivation of this span reaches itself: infinitely many trees
            return 2 if j in self.ends.get((s, i), ()) else 0
        self._counting.add(key)
        total = 0
        for r in cg.rules_by_lhs[s]:
            if (r, i, j) in self.done:
                total = min(2, total + self.count_seq(r, 0, i, j))
                if total >= 2:
                    break
        self._counting.discard(key)
        self._count[key] = total
        return total

    def _splits(self, s: int, i: int, j: int):
        if not self.cg.is_nt[s]:
            return (i + 1,) if i < j else ()
        return [k for k in self.ends.get((s, i), ()) if k <= j]

    def count_seq(self, r: int, d: int, i: int, j: int) -> int:
        rhs = self.cg.rule_rhs[r]
        if d == len(rhs):
            return 1 if i == j else 0
        key = (r, d, i, j, "seq")
        if key in self._count:
            return self._count[key]
        total = 0
        s = rhs[d]
        for k in self._splits(s, i, j):
            a = self.count_sym(s, i, k)
            if a:
                total = min(2, total + _mul(a, self.count_seq(r, d + 1, k, j)))
                if total >= 2:
                    break
        self._count[key] = total
        return total

    # -- tree extraction ---------------------------------------------------

    def trees_sym(self, s: int, i: int, j: int, unroll: bool = False) -> list[SyntaxTree]:
        cg = self.cg
        if not cg.is_nt[s]:
            if j == i + 1 and cg.sym_id.get(self.tokens[i].terminal) == s:
                return [Leaf(self.tokens[i])]
            return []
        key = (s, i, j)
        if key in self._trees:
            return self._trees[key]
        if key in self._active:
            self._cut = True
            if unroll and j in self.ends.get((s, i), ()):
                sub = _Forest(self.g, self.tokens, ())
                sub.done, sub.ends = self.done, self.ends
                return sub.trees_sym(s, i, j)[:1]
            return []
        self._active.add(key)
        outer_cut = self._cut
        self._cut = False
        out: list[SyntaxTree] = []
        for r in cg.rules_by_lhs[s]:
            if (r, i, j) not in self.done:
                continue
            for kids in self.trees_seq(r, 0, i, j, unroll):
                out.append(Interior(self.cg.rules[r].id, tuple(kids)))
                if len(out) >= 2:
                    break
            if len(out) >= 2:
                break
        self._active.discard(key)
        if not self._cut:
            self._trees[key] = out
        self._cut = self._cut or outer_cut
        return out

    def trees_seq(self, r: int, d: int, i: int, j: int, unroll: bool) -> list[list[SyntaxTree]]:
        rhs = self.cg.rule_rhs[r]
        if d == len(rhs):
            return [[]] if i == j else []
        out: list[list[SyntaxTree]] = []
        s = rhs[d]
        for k in self._splits(s, i, j):
            if not (self.count_sym(s, i, k) and self.count_seq(r, d + 1, k, j)):
                continue
            heads = self.trees_sym(s, i, k, unroll)
            if not heads:
                continue
            tails = self.trees_seq(r, d + 1, k, j, unroll)
            for h in heads:
                for t in tails:
                    out.append([h] + t)
                    if len(out) >= 2:
                        return out
        return out


def earley_parse(g: Grammar, tokens: Sequence[Token], kernel=None) -> ParseOutcome:
    """Parse with an Earley chart; reports ambiguity with two distinct trees."""
    completed, furthest, expected = recognize(g, tokens, kernel)
    n = len(tokens)
    cg = compiled(g)
    start = cg.start
    if not any(o == 0 and j == n and cg.rule_lhs[r] == start for r, o, j in completed):
        return Reject(furthest, tuple(cg.names[e] for e in expected))
    forest = _Forest(g, tokens, completed)
    count = forest.count_sym(start, 0, n)
    trees = forest.trees_sym(start, 0, n)
    if count >= 2 and len(trees) < 2:
        forest._trees.clear()
        forest._active.clear()
        trees = forest.trees_sym(start, 0, n, unroll=True)
    if count >= 2 and len(trees) >= 2:
        return Ambiguous(trees[0], trees[1])
    return Tree(trees[0])


# ---------------------------------------------------------------------------
# predictive LL(1)


class NotLL1Error(ValueError):
    pass


def ll1_parse(g: Grammar, tokens: Sequence[Token]) -> ParseOutcome:
    """Table-driven single-lookahead parse.  Raises NotLL1Error if ``g`` has table conflicts."""
    from .analysis import ll1_table

    table = ll1_table(g)
    if table is None:
        raise NotLL1Error("grammar is not LL(1)")
    n = len(tokens)
    root: list = []
    # stack entries: (symbol, sink list for the produced node)
    stack: list[tuple[str, list]] = [(g.start, root)]
    pos = 0
    while stack:
        sym, sink = stack.pop()
        look = tokens[pos].terminal if pos < n else None
        if g.is_terminal(sym):
            if look != sym:
                return Reject(pos, (sym,))
            sink.append(Leaf(tokens[pos]))
            pos += 1
            continue
        p = table.get((sym, look))
        if p is None:
            return Reject(pos, tuple(sorted(a or "$" for (x, a) in table if x == sym)))
        kids: list = []
        sink.append((p.id, kids))
        for s in reversed(p.rhs):
            stack.append((s, kids))
    if pos != n:
        return Reject(pos, ("$",))
    return Tree(_freeze(root[0]))


def _freeze(node) -> SyntaxTree:
    if isinstance(node, Leaf):
        return node
    pid, kids = node
    return Interior(pid, tuple(_freeze(k) for k in kids))
