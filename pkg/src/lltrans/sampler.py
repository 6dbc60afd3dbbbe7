"""Seeded random derivations, used as a fuzzing substrate."""

from __future__ import annotations

import random
import sre_constants as C
import sre_parse
import string
from functools import lru_cache

from .grammar import CLASS, Grammar
from .lexer import Token, lexer_for
from .trees import Interior, Leaf, SyntaxTree

_PRINTABLE = [c for c in string.printable if c not in "\t\n\r\x0b\x0c"]
_CATEGORIES = {
    C.CATEGORY_DIGIT: string.digits,
    C.CATEGORY_NOT_DIGIT: string.ascii_letters + "_",
    C.CATEGORY_SPACE: " ",
    C.CATEGORY_NOT_SPACE: string.ascii_letters + string.digits,
    C.CATEGORY_WORD: string.ascii_letters + string.digits + "_",
    C.CATEGORY_NOT_WORD: "+-*/.,;:!?",
}


class BudgetInfeasible(ValueError):
    pass


@lru_cache(maxsize=64)
def min_heights(g: Grammar) -> dict[str, int]:
    """Height of the shallowest complete derivation tree of each nonterminal
    (a terminal leaf has height 0, an interior node 1 + its tallest child)."""
    inf = float("inf")
    h = {n: inf for n in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            v = 1 + max((h[s] if g.is_nonterminal(s) else 0 for s in p.rhs), default=0)
            if v < h[p.lhs]:
                h[p.lhs] = v
                changed = True
    return h


def _set_chars(items) -> list[str]:
    chars: list[str] = []
    negate = False
    for op, av in items:
        if op == C.NEGATE:
            negate = True
        elif op == C.LITERAL:
            chars.append(chr(av))
        elif op == C.RANGE:
            lo, hi = av
            chars.extend(chr(c) for c in range(lo, min(hi, lo + 200) + 1))
        elif op == C.CATEGORY:
            chars.extend(_CATEGORIES.get(av, ""))
    if negate:
        excluded = set(chars)
        return [c for c in _PRINTABLE if c not in excluded]
    return chars


def _gen(parsed, rng: random.Random, out: list[str]) -> None:
    for op, av in parsed:
        if op == C.LITERAL:
            out.append(chr(av))
        elif op == C.NOT_LITERAL:
            out.append(rng.choice([c for c in _PRINTABLE if c != chr(av)]))
        elif op == C.ANY:
            out.append(rng.choice(string.ascii_letters))
        elif op == C.IN:
            chars = _set_chars(av)
            if chars:
                out.append(rng.choice(chars))
        elif op == C.CATEGORY:
            out.append(rng.choice(_CATEGORIES.get(av, "x")))
        elif op in (C.MAX_REPEAT, C.MIN_REPEAT, getattr(C, "POSSESSIVE_REPEAT", None)):
            lo, hi, sub = av
            top = lo + 3 if hi == C.MAXREPEAT else min(hi, lo + 3)
            for _ in range(rng.randint(lo, top)):
                _gen(sub, rng, out)
        elif op == C.SUBPATTERN:
            _gen(av[-1], rng, out)
        elif op == C.BRANCH:
            _gen(rng.choice(av[1]), rng, out)
        # anchors and other zero-width ops produce nothing


def random_lexeme(pattern: str, rng: random.Random) -> str:
    out: list[str] = []
    _gen(sre_parse.parse(pattern), rng, out)
    return "".join(out)


def class_lexeme(g: Grammar, terminal: str, rng: random.Random, attempts: int = 200) -> str:
    """A random string the lexer reads back as exactly one ``terminal`` token."""
    sym = g.symbols[terminal]
    lexer = lexer_for(g)
    for _ in range(attempts):
        lx = random_lexeme(sym.pattern, rng)
        if lx and lexer.classify(lx) == terminal:
            return lx
    raise ValueError(f"could not generate a lexeme for {terminal}")


def sample(g: Grammar, max_depth: int, seed: int) -> SyntaxTree:
    """Random derivation tree of height <= ``max_depth``: at each nonterminal a
    production is drawn uniformly among those whose shallowest completion fits
    the remaining budget.  Deterministic in ``seed``."""
    heights = min_heights(g)
    if heights[g.start] > max_depth:
        raise BudgetInfeasible(f"no derivation of {g.start} fits depth {max_depth} (needs {heights[g.start]})")
    rng = random.Random(seed)

    def ph(p):
        return 1 + max((heights[s] if g.is_nonterminal(s) else 0 for s in p.rhs), default=0)

    fits_cache: dict[tuple[str, int], list] = {}

    def choices(nt: str, budget: int):
        key = (nt, budget)
        got = fits_cache.get(key)
        if got is None:
            got = [p for p in g.productions_of(nt) if ph(p) <= budget]
            fits_cache[key] = got
        return got

    def leaf(sym: str) -> Leaf:
        s = g.symbols[sym]
        if s.kind == CLASS:
            return Leaf(Token(sym, class_lexeme(g, sym, rng)))
        return Leaf(Token(sym, s.lexeme))

    # iterative construction: (symbol, budget, sink)
    root: list = []
    stack: list = [(g.start, max_depth, root)]
    while stack:
        sym, budget, sink = stack.pop()
        if not g.is_nonterminal(sym):
            sink.append(leaf(sym))
            continue
        p = rng.choice(choices(sym, budget))
        kids: list = []
        sink.append((p.id, kids))
        for s in reversed(p.rhs):
            stack.append((s, budget - 1, kids))
    return _freeze(root[0])


def _freeze(node) -> SyntaxTree:
    if isinstance(node, Leaf):
        return node
    pid, kids = node
    return Interior(pid, tuple(_freeze(k) for k in kids))
