"""Leading symbols, expansion trees and LL(1) conflict detection.

The input grammar must be epsilon-free (see ``grammar.epsilon_normalize``),
so each production's leading symbol is simply ``rhs[0]``.

Conflict detection compares the *symbol sets* of expansion trees up to a
depth.  The set of symbols in a production's tree up to depth ``i`` equals the
union of the breadth-first "leading graph" levels ``0..i`` from its root
(cutting a path at a repeated symbol only drops symbols already on the path),
so it is computed without materialising the trees.  Left recursion appears
as a cycle of the leading graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import networkx as nx

from ..grammar import Grammar, GrammarError, Production


def _require_eps_free(g: Grammar) -> None:
    if not g.is_epsilon_free():
        raise GrammarError("leading-symbol analysis needs an epsilon-free grammar (run epsilon_normalize)")


def leading_symbols(g: Grammar, nt: str) -> set[tuple[int, str]]:
    """``{(production id, rhs[0])}`` for every production of ``nt``."""
    _require_eps_free(g)
    return {(p.id, p.rhs[0]) for p in g.productions_of(nt)}


@lru_cache(maxsize=64)
def _leads(g: Grammar) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for nt in g.nonterminals:
        seen: dict[str, None] = {}
        for p in g.productions_of(nt):
            seen[p.rhs[0]] = None
        out[nt] = tuple(seen)
    return out


# ---------------------------------------------------------------------------
# explicit expansion trees


@dataclass(frozen=True)
class ExpansionNode:
    symbol: str
    depth: int
    path: tuple[str, ...]  # symbols from the root down to and including this node
    children: tuple["ExpansionNode", ...] = ()
    repetition: bool = False  # leaf because ``symbol`` already occurs on its path

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class ExpansionTree:
    production: int
    depth: int
    root: ExpansionNode
    truncated: bool = False  # node cap reached; the tree is incomplete

    def nodes(self):
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def symbols(self) -> set[str]:
        return {n.symbol for n in self.nodes()}

    def leaves(self) -> list[ExpansionNode]:
        return [n for n in self.nodes() if n.is_leaf]

    def repetitions(self) -> list[ExpansionNode]:
        return [n for n in self.nodes() if n.repetition]


def expand(g: Grammar, production: Production | int, depth: int, max_nodes: int = 100_000) -> ExpansionTree:
    """Expansion tree of a production's leading symbol to ``depth`` levels.

    A nonterminal node above the depth budget is replaced by every member of
    its leading-symbol set, unless it repeats a symbol on its own path, in
    which case it is a repetition leaf (left recursion)."""
    _require_eps_free(g)
    p = g.by_id[production] if isinstance(production, int) else production
    leads = _leads(g)
    budget = [max_nodes]

    def build(sym: str, d: int, path: tuple[str, ...]) -> ExpansionNode:
        budget[0] -= 1
        here = path + (sym,)
        if sym in path:
            return ExpansionNode(sym, d, here, (), True)
        if d >= depth or not g.is_nonterminal(sym) or budget[0] <= 0:
            return ExpansionNode(sym, d, here)
        kids = tuple(build(s, d + 1, here) for s in leads[sym])
        return ExpansionNode(sym, d, here, kids)

    root = build(p.rhs[0], 0, ())
    return ExpansionTree(p.id, depth, root, budget[0] <= 0)


# ---------------------------------------------------------------------------
# conflicts


@dataclass(frozen=True)
class SharedLeading:
    nonterminal: str
    witness: str
    productions: tuple[int, ...]
    depth: int

    @property
    def production_ids(self) -> frozenset[int]:
        return frozenset(self.productions)

    def describe(self) -> str:
        ids = ", ".join(map(str, self.productions))
        return f"shared leading {self.witness} in {self.nonterminal} rules {ids}"


@dataclass(frozen=True)
class LeftRecursion:
    production: int  # lowest-id production on the cycle
    symbol: str  # the repeated symbol
    path: tuple[str, ...]  # symbol path that starts and ends with ``symbol``
    cycle: tuple[int, ...]  # productions along the cycle, in path order
    depth: int

    @property
    def production_ids(self) -> frozenset[int]:
        return frozenset(self.cycle)

    def describe(self) -> str:
        rules = ", ".join(map(str, self.cycle))
        return f"left recursion {' -> '.join(self.path)} via rule{'s' if len(self.cycle) > 1 else ''} {rules}"


Conflict = Union[SharedLeading, LeftRecursion]


def level_sets(g: Grammar, root: str, depth: int) -> list[frozenset[str]]:
    """Breadth-first levels ``0..depth`` of the leading graph from ``root``."""
    leads = _leads(g)
    levels = [frozenset({root})]
    for _ in range(depth):
        nxt: set[str] = set()
        for s in levels[-1]:
            if g.is_nonterminal(s):
                nxt.update(leads[s])
        levels.append(frozenset(nxt))
    return levels


@lru_cache(maxsize=256)
def _tree_symbols(g: Grammar, depth: int) -> dict[int, frozenset[str]]:
    out = {}
    for p in g.productions:
        acc: set[str] = set()
        for level in level_sets(g, p.rhs[0], depth):
            acc |= level
        out[p.id] = frozenset(acc)
    return out


@lru_cache(maxsize=64)
def leading_cycles(g: Grammar) -> tuple[tuple[tuple[str, ...], tuple[int, ...]], ...]:
    """Every simple cycle of the leading graph as (symbol path, production ids).

    The symbol path starts at the cycle's smallest production's lhs and repeats
    it at the end."""
    graph = nx.MultiDiGraph()
    for p in g.productions:
        if g.is_nonterminal(p.rhs[0]):
            graph.add_edge(p.lhs, p.rhs[0], key=p.id)
    found = set()
    order = g.nt_index
    for nodes in nx.simple_cycles(nx.DiGraph(graph)):
        # one cycle per choice of parallel edge
        options = [[]]
        for a, b in zip(nodes, nodes[1:] + nodes[:1]):
            options = [o + [k] for o in options for k in sorted(graph[a][b])]
        for ids in options:
            # rotate so the cycle begins at its lowest production id
            start = ids.index(min(ids))
            ids = ids[start:] + ids[:start]
            syms = [g.by_id[i].lhs for i in ids]
            found.add((tuple(syms + [syms[0]]), tuple(ids)))
    return tuple(sorted(found, key=lambda c: (order[c[0][0]], c[1])))


def has_leading_cycle(g: Grammar) -> bool:
    return bool(leading_cycles(g))


def left_recursions(g: Grammar, depth: int) -> list[LeftRecursion]:
    """Repetition paths visible in some expansion tree of depth ``depth``.

    A cycle of length ``L`` first shows as a repetition in the tree of one of
    its own productions at depth ``L``."""
    _require_eps_free(g)
    out = []
    for path, ids in leading_cycles(g):
        if len(ids) <= depth:
            out.append(LeftRecursion(ids[0], path[0], path, ids, len(ids)))
    return out


def detect_conflicts(g: Grammar, depth: int) -> list[Conflict]:
    """LL(1) conflicts visible in expansion trees up to ``depth``.

    A shared-leading conflict is reported per nonterminal and set of clashing
    productions (witnessed by the first shared symbol in grammar order).  A
    clash is not reported when all but one of its productions sit on a
    direct (single-rule) left recursion: those rules receive a marker anyway,
    which clears the clash."""
    _require_eps_free(g)
    trees = _tree_symbols(g, depth)
    recursions = left_recursions(g, depth)
    mandatory = {lr.cycle[0] for lr in recursions if len(lr.cycle) == 1}
    sym_order = {s: i for i, s in enumerate(g.symbols)}
    shared: list[SharedLeading] = []
    for nt in g.nonterminals:
        prods = g.productions_of(nt)
        if len(prods) < 2:
            continue
        holders: dict[str, list[int]] = {}
        for p in prods:
            for s in trees[p.id]:
                holders.setdefault(s, []).append(p.id)
        groups: dict[tuple[int, ...], str] = {}
        for s in sorted(holders, key=sym_order.__getitem__):
            ids = tuple(sorted(holders[s]))
            if len(ids) < 2 or len([i for i in ids if i not in mandatory]) < 2:
                continue
            groups.setdefault(ids, s)
        for ids, s in sorted(groups.items()):
            shared.append(SharedLeading(nt, s, ids, _first_depth(g, nt, s, ids, depth)))
    order = g.nt_index
    out: list[Conflict] = list(shared)
    out.extend(recursions)

    def key(c: Conflict):
        lhs = c.nonterminal if isinstance(c, SharedLeading) else g.by_id[c.production].lhs
        return (order[lhs], tuple(sorted(c.production_ids)), isinstance(c, LeftRecursion))

    out.sort(key=key)
    return out


def _first_depth(g: Grammar, nt: str, witness: str, ids: tuple[int, ...], depth: int) -> int:
    for d in range(depth + 1):
        trees = _tree_symbols(g, d)
        if sum(witness in trees[i] for i in ids) >= 2:
            return d
    return depth


def leaves_terminal(g: Grammar, depth: int) -> bool:
    """Whether every level-``depth`` node of every expansion tree is a terminal
    (equivalently, every tree is fully expanded within ``depth`` levels)."""
    _require_eps_free(g)
    for p in g.productions:
        if any(g.is_nonterminal(s) for s in level_sets(g, p.rhs[0], depth)[-1]):
            return False
    return True


def conflict_sets(conflicts: list[Conflict]) -> list[frozenset[int]]:
    """Hitting-set instance for a conflict list.

    Shared-leading conflicts among ``n`` rules are satisfied only when at most
    one rule keeps its leading symbol, so each contributes every pair of its
    rules; a left-recursive cycle needs at least one of its rules."""
    out: list[frozenset[int]] = []
    for c in conflicts:
        if isinstance(c, SharedLeading):
            ids = c.productions
            for a in range(len(ids)):
                for b in range(a + 1, len(ids)):
                    out.append(frozenset({ids[a], ids[b]}))
        else:
            out.append(frozenset(c.cycle))
    dedup: dict[frozenset[int], None] = {}
    for s in out:
        dedup[s] = None
    return list(dedup)
