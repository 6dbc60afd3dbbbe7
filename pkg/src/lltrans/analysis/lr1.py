"""Canonical LR(1) item-set construction and conflict check."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..grammar import Grammar
from .firstk import concat_k, first_k_table, _first_of

END = "$"


class StateLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LRVerdict:
    holds: bool
    state: int | None = None
    kind: str | None = None  # "shift/reduce" or "reduce/reduce"
    lookahead: str | None = None
    items: tuple[str, ...] = ()  # the conflicting state's item set, rendered
    states: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return "yes"
        return f"no ({self.kind} conflict on {self.lookahead} in state {self.state})"


def _render(g: Grammar, rules, item) -> str:
    r, d, la = item
    lhs, rhs = rules[r]
    body = list(rhs[:d]) + ["."] + list(rhs[d:])
    return f"[{lhs} -> {' '.join(body)}, {la}]"


@lru_cache(maxsize=32)
def is_lr1(g: Grammar, max_states: int = 100_000) -> LRVerdict:
    """Build the canonical LR(1) collection; report the first conflicting
    state (in construction order) or ``holds=True``."""
    first = first_k_table(g, 1)
    aug = "<start>"
    rules = [(aug, (g.start,))] + [(p.lhs, p.rhs) for p in g.productions]
    by_lhs: dict[str, list[int]] = {}
    for i, (lhs, _) in enumerate(rules):
        by_lhs.setdefault(lhs, []).append(i)
    first_cache: dict = {}

    def first_after(rhs, d, la):
        key = (rhs[d + 1:], la)
        got = first_cache.get(key)
        if got is None:
            tail = _first_of(g, first, 1, rhs[d + 1:])
            got = tuple(sorted(x[0] if x else la for x in concat_k(tail, frozenset({(la,)}), 1)))
            first_cache[key] = got
        return got

    def closure(kernel):
        items = set(kernel)
        work = list(kernel)
        while work:
            r, d, la = work.pop()
            rhs = rules[r][1]
            if d < len(rhs) and g.is_nonterminal(rhs[d]):
                for b in first_after(rhs, d, la):
                    for r2 in by_lhs[rhs[d]]:
                        it = (r2, 0, b)
                        if it not in items:
                            items.add(it)
                            work.append(it)
        return frozenset(items)

    start = closure(frozenset({(0, 0, END)}))
    index = {start: 0}
    states = [start]
    k = 0
    while k < len(states):
        items = states[k]
        verdict = _check(g, rules, k, items)
        if verdict is not None:
            return LRVerdict(False, k, verdict[0], verdict[1], tuple(sorted(_render(g, rules, it) for it in items)), len(states))
        moves: dict[str, set] = {}
        for r, d, la in items:
            rhs = rules[r][1]
            if d < len(rhs):
                moves.setdefault(rhs[d], set()).add((r, d + 1, la))
        for sym in sorted(moves):
            nxt = closure(frozenset(moves[sym]))
            if nxt not in index:
                if len(states) >= max_states:
                    raise StateLimitExceeded(f"LR(1) construction exceeded {max_states} states")
                index[nxt] = len(states)
                states.append(nxt)
        k += 1
    return LRVerdict(True, states=len(states))


def _check(g: Grammar, rules, k, items):
    reduce_on: dict[str, int] = {}
    shifts = set()
    for r, d, la in items:
        rhs = rules[r][1]
        if d < len(rhs):
            if not g.is_nonterminal(rhs[d]):
                shifts.add(rhs[d])
        elif r != 0:
            if la in reduce_on and reduce_on[la] != r:
                return ("reduce/reduce", la)
            reduce_on[la] = r
    clash = sorted(shifts & set(reduce_on))
    if clash:
        return ("shift/reduce", clash[0])
    return None
