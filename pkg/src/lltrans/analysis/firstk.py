"""FIRST_k / FOLLOW_k fixpoints and the strong-LL(k) test (k = 1, 2)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import networkx as nx

from ..grammar import Grammar, Production

Strings = frozenset  # frozenset[tuple[str, ...]]


def concat_k(a, b, k: int) -> frozenset:
    out = set()
    for x in a:
        if len(x) >= k:
            out.add(x[:k])
            continue
        for y in b:
            out.add((x + y)[:k])
    return frozenset(out)


@lru_cache(maxsize=128)
def first_k_table(g: Grammar, k: int) -> dict[str, frozenset]:
    table: dict[str, frozenset] = {n: frozenset() for n in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            new = _first_of(g, table, k, p.rhs)
            if not new <= table[p.lhs]:
                table[p.lhs] = table[p.lhs] | new
                changed = True
    return table


def _first_of(g: Grammar, table, k: int, seq: Sequence[str]) -> frozenset:
    acc = frozenset({()})
    for s in seq:
        if all(len(x) >= k for x in acc):
            break
        part = table[s] if g.is_nonterminal(s) else frozenset({(s,)})
        acc = concat_k(acc, part, k)
        if not acc:
            break
    return acc


def first_k(g: Grammar, k: int, seq: Sequence[str]) -> frozenset:
    """Terminal strings of length <= k that begin some derivation of ``seq``
    (strings shorter than k are complete derivations)."""
    return _first_of(g, first_k_table(g, k), k, tuple(seq))


@lru_cache(maxsize=128)
def follow_k_table(g: Grammar, k: int) -> dict[str, frozenset]:
    first = first_k_table(g, k)
    follow: dict[str, frozenset] = {n: frozenset() for n in g.nonterminals}
    follow[g.start] = frozenset({()})
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            for idx, s in enumerate(p.rhs):
                if not g.is_nonterminal(s):
                    continue
                tail = _first_of(g, first, k, p.rhs[idx + 1:])
                new = concat_k(tail, follow[p.lhs], k)
                if not new <= follow[s]:
                    follow[s] = follow[s] | new
                    changed = True
    return follow


def follow_k(g: Grammar, k: int, nt: str) -> frozenset:
    return follow_k_table(g, k)[nt]


def left_recursion_cycle(g: Grammar) -> list[str] | None:
    """A nonterminal cycle A =>+ A... through nullable prefixes, or None."""
    graph = nx.DiGraph()
    graph.add_nodes_from(g.nonterminals)
    for p in g.productions:
        for s in p.rhs:
            if g.is_nonterminal(s):
                graph.add_edge(p.lhs, s)
            if s not in g.nullable:
                break
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return [u for u, _ in cycle] + [cycle[0][0]]


@dataclass(frozen=True)
class LLVerdict:
    holds: bool
    nonterminal: str | None = None
    productions: tuple[int, int] | None = None
    lookahead: tuple[str, ...] | None = None
    left_recursion: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return "yes"
        if self.left_recursion:
            return "no (left recursion " + " -> ".join(self.left_recursion) + ")"
        la = " ".join(self.lookahead) if self.lookahead else "end of input"
        p, q = self.productions
        return f"no ({self.nonterminal}: productions {p} and {q} share lookahead {la})"


def is_ll_k(g: Grammar, k: int) -> LLVerdict:
    """Strong-LL(k) test; left-recursive grammars always fail."""
    if k < 1:
        raise ValueError("k must be positive")
    cycle = left_recursion_cycle(g)
    if cycle is not None:
        return LLVerdict(False, cycle[0], left_recursion=tuple(cycle))
    first = first_k_table(g, k)
    follow = follow_k_table(g, k)
    for nt in g.nonterminals:
        prods = g.productions_of(nt)
        sets = [concat_k(_first_of(g, first, k, p.rhs), follow[nt], k) for p in prods]
        for a in range(len(prods)):
            for b in range(a + 1, len(prods)):
                shared = sets[a] & sets[b]
                if shared:
                    return LLVerdict(False, nt, (prods[a].id, prods[b].id), min(shared))
    return LLVerdict(True)


@lru_cache(maxsize=128)
def ll1_table(g: Grammar) -> dict[tuple[str, str | None], Production] | None:
    """Predictive table keyed by (nonterminal, lookahead terminal or None for
    end of input); None when the grammar is not LL(1)."""
    if left_recursion_cycle(g) is not None:
        return None
    first = first_k_table(g, 1)
    follow = follow_k_table(g, 1)
    table: dict[tuple[str, str | None], Production] = {}
    for p in g.productions:
        for la in concat_k(_first_of(g, first, 1, p.rhs), follow[p.lhs], 1):
            key = (p.lhs, la[0] if la else None)
            if key in table:
                return None
            table[key] = p
    return table
