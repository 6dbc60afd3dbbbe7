"""Minimum hitting set over conflict groups of production ids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

EXACT_LIMIT = 20


@dataclass(frozen=True)
class HittingSet:
    chosen: tuple[int, ...]
    optimal: bool  # False when the greedy fallback was used

    def __iter__(self):
        return iter(self.chosen)

    def __len__(self):
        return len(self.chosen)


def min_hitting_set(sets: Iterable[Iterable[int]], exact_limit: int = EXACT_LIMIT) -> HittingSet:
    """Smallest set of ids meeting every input set.

    Exact (branch and bound) when at most ``exact_limit`` distinct ids occur;
    among the minimum solutions the lexicographically smallest sorted id
    tuple is returned.  Beyond the limit a deterministic greedy cover is used
    (largest coverage first, lowest id on ties)."""
    groups = [frozenset(s) for s in sets]
    if any(not s for s in groups):
        raise ValueError("every conflict set must be nonempty")
    groups = list(dict.fromkeys(groups))
    if not groups:
        return HittingSet((), True)
    universe = sorted(set().union(*groups))
    if len(universe) > exact_limit:
        return HittingSet(_greedy(groups), False)
    size = _min_size(groups, universe)
    return HittingSet(_lex_smallest(groups, universe, size), True)


def _greedy(groups: list[frozenset[int]]) -> tuple[int, ...]:
    open_ = list(groups)
    chosen: list[int] = []
    while open_:
        counts: dict[int, int] = {}
        for s in open_:
            for x in s:
                counts[x] = counts.get(x, 0) + 1
        best = min(counts, key=lambda x: (-counts[x], x))
        chosen.append(best)
        open_ = [s for s in open_ if best not in s]
    return tuple(sorted(chosen))


def _feasible(groups: list[frozenset[int]], picked: frozenset[int], allowed: list[int], k: int) -> bool:
    """Can ``picked`` plus at most ``k`` ids from ``allowed`` hit every group?"""
    open_ = [s for s in groups if not (s & picked)]
    if not open_:
        return True
    if k == 0:
        return False
    allowed_set = set(allowed)
    # branch on the elements of the smallest unhit group
    target = min(open_, key=lambda s: (len(s & allowed_set), sorted(s)))
    cands = sorted(target & allowed_set)
    if not cands:
        return False
    # lower bound: disjoint open groups each need their own element
    disjoint, used = 0, set()
    for s in sorted(open_, key=len):
        if not (s & used):
            disjoint += 1
            used |= s
    if disjoint > k:
        return False
    for x in cands:
        if _feasible(groups, picked | {x}, allowed, k - 1):
            return True
    return False


def _min_size(groups, universe) -> int:
    k = 0
    while not _feasible(groups, frozenset(), universe, k):
        k += 1
    return k


def _lex_smallest(groups, universe, size) -> tuple[int, ...]:
    picked: list[int] = []
    for _ in range(size):
        if not [s for s in groups if not (s & set(picked))]:
            break
        for x in universe:
            if x in picked or (picked and x < picked[-1]):
                continue
            later = [y for y in universe if y > x]
            if _feasible(groups, frozenset(picked) | {x}, later, size - len(picked) - 1):
                picked.append(x)
                break
    return tuple(picked)
