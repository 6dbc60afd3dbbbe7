"""Iterative conflict elimination towards LL(1).

The loop expands every production's leading symbol to increasing depths,
detects conflicts, fixes them by prepending fresh marker terminals to a
minimum hitting set of productions and restarts from depth 0.  Full mode
stops once a depth is conflict-free and every expansion tree is fully
expanded; ``layers(k)`` stops once depths ``0..k-1`` are conflict-free.  A
reordering pass then tries to replace markers by terminals the rule already
contains, moved to the front.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import NamedTuple

from ..analysis import Conflict, LeftRecursion, SharedLeading, conflict_sets, detect_conflicts, is_ll_k, leaves_terminal
from ..grammar import (
    LITERAL,
    EPS_NAME,
    NEWLINE,
    TRANSFORM_INSERTED,
    Grammar,
    Production,
    epsilon_normalize,
    literal,
    quote,
    require_valid,
)
from .hitting_set import min_hitting_set
from .rulemap import RuleEntry, RuleMap

DEFAULT_DEPTH_CAP = 32
AMBIGUITY_SAMPLES = 24


class DepthCapExceeded(RuntimeError):
    def __init__(self, depth: int, conflicts: list[Conflict]):
        self.depth = depth
        self.conflicts = conflicts
        live = "; ".join(c.describe() for c in conflicts) or "expansion trees not fully expanded"
        super().__init__(f"depth cap {depth} exceeded; live conflicts: {live}")


@dataclass(frozen=True)
class Mode:
    kind: str  # "full" or "layers"
    k: int = 0

    @classmethod
    def parse(cls, text) -> "Mode":
        if isinstance(text, Mode):
            return text
        if text in (None, "full"):
            return cls("full")
        if isinstance(text, str) and text.startswith("layers"):
            k = int(text.split("=", 1)[1]) if "=" in text else int(text[len("layers"):].strip("()") or 1)
            return cls.layers(k)
        raise ValueError(f"unknown mode {text!r}")

    @classmethod
    def layers(cls, k: int) -> "Mode":
        if k < 1:
            raise ValueError("layers k must be >= 1")
        return cls("layers", k)

    def __str__(self) -> str:
        return "full" if self.kind == "full" else f"layers={self.k}"


FULL = Mode("full")


# ---------------------------------------------------------------------------
# trace


@dataclass(frozen=True)
class Iteration:
    depth: int
    conflicts: tuple[Conflict, ...]
    hitting_set: tuple[int, ...]
    optimal: bool
    inserted: tuple[tuple[int, str], ...]  # (production id, marker lexeme)


@dataclass(frozen=True)
class ReorderStep:
    production: int
    terminal: str
    scenario: int  # 1: unique grammar-wide, 2: shared, fronted in one rule only
    applied: bool
    retired: str  # the marker the move deletes
    position: int = 0  # index of the terminal in the marked rhs
    reason: str = ""


@dataclass(frozen=True)
class TransformTrace:
    mode: str
    iterations: tuple[Iteration, ...]
    clean_depth: int | None  # depth at which the loop found no conflicts and stopped
    reorder: tuple[ReorderStep, ...]
    introduced_before_reorder: int
    introduced_final: int

    @property
    def empty(self) -> bool:
        return not self.iterations and not self.reorder

    def to_dict(self) -> dict:
        def conflict(c: Conflict) -> dict:
            if isinstance(c, SharedLeading):
                return {"kind": "shared-leading", "nonterminal": c.nonterminal, "witness": c.witness,
                        "productions": list(c.productions), "depth": c.depth}
            return {"kind": "left-recursion", "production": c.production, "symbol": c.symbol,
                    "path": list(c.path), "cycle": list(c.cycle), "depth": c.depth}

        return {
            "schema": 1,
            "mode": self.mode,
            "iterations": [
                {"depth": it.depth, "conflicts": [conflict(c) for c in it.conflicts],
                 "hitting_set": list(it.hitting_set), "optimal": it.optimal,
                 "inserted": [{"production": p, "terminal": t} for p, t in it.inserted]}
                for it in self.iterations
            ],
            "clean_depth": self.clean_depth,
            "reorder": [
                {"production": s.production, "terminal": s.terminal, "scenario": s.scenario,
                 "applied": s.applied, "retired": s.retired, "position": s.position, "reason": s.reason}
                for s in self.reorder
            ],
            "introduced_before_reorder": self.introduced_before_reorder,
            "introduced_final": self.introduced_final,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        out = [f"mode: {self.mode}", "", "iterations:"]
        if not self.iterations:
            out.append("  (none: no conflicts)")
        for n, it in enumerate(self.iterations):
            out.append(f"  iteration {n}  depth {it.depth}")
            for c in it.conflicts:
                out.append(f"    conflict   {c.describe()}")
            flag = "" if it.optimal else "  (greedy, may be non-minimal)"
            out.append(f"    hit set    {{{', '.join(map(str, it.hitting_set))}}}{flag}")
            for p, t in it.inserted:
                out.append(f"    inserted   {t} at the front of rule {p}")
        if self.clean_depth is not None:
            out.append(f"  clean at depth {self.clean_depth}")
        out += ["", "reordering:"]
        if not self.reorder:
            out.append("  (no candidates)")
        for s in self.reorder:
            verdict = f"applied, removes {s.retired}" if s.applied else f"reverted ({s.reason})"
            out.append(f"  rule {s.production}: front {s.terminal} [scenario {s.scenario}] {verdict}")
        out += ["", f"introduced terminals: {self.introduced_before_reorder} inserted, {self.introduced_final} remaining"]
        return "\n".join(out) + "\n"


class TransformResult(NamedTuple):
    grammar: Grammar
    rulemap: RuleMap
    trace: TransformTrace


# ---------------------------------------------------------------------------
# resolution


def _fresh_marker(lhs: str, taken: set[str]) -> str:
    base = f"<{lhs}>"
    if base not in taken:
        return base
    n = 2
    while f"<{lhs}_{n}>" in taken:
        n += 1
    return f"<{lhs}_{n}>"


def resolve_conflicts(
    g: Grammar, conflicts: list[Conflict], hit: tuple[int, ...] | set[int], taken: set[str] | None = None
) -> tuple[Grammar, dict[int, str]]:
    """Prepend a fresh marker terminal to each production in ``hit``.

    Returns the new grammar and ``{production id: marker lexeme}``.  ``taken``
    holds lexemes that must not be reused (defaults to the grammar's own)."""
    hit = set(hit)
    for c in conflicts:
        if isinstance(c, SharedLeading) and len(set(c.productions) - hit) > 1:
            raise ValueError(f"hit set leaves conflict unresolved: {c.describe()}")
        if isinstance(c, LeftRecursion) and not (set(c.cycle) & hit):
            raise ValueError(f"hit set misses left recursion: {c.describe()}")
    if not hit:
        return g, {}
    taken = set(g.literal_lexemes) | set(taken or ())
    markers: dict[int, str] = {}
    prods = []
    extra = []
    for p in g.productions:
        if p.id in hit:
            lex = _fresh_marker(p.lhs, taken)
            taken.add(lex)
            markers[p.id] = lex
            sym = literal(lex)
            extra.append(sym)
            prods.append(Production(p.id, p.lhs, (sym.name,) + p.rhs, TRANSFORM_INSERTED))
        else:
            prods.append(p)
    return g.with_productions(prods, extra), markers


def _base_map(original: Grammar, normalized: Grammar) -> RuleMap:
    entries = []
    for p in original.productions:
        q = normalized.by_id[p.id]
        align = tuple(range(len(p.rhs))) if p.rhs else (None,) * len(q.rhs)
        entries.append(RuleEntry(p.id, p.lhs, p.rhs, q.rhs, align))
    return RuleMap(entries, "transform")


def _prepend(e: RuleEntry, marker_name: str) -> RuleEntry:
    return replace(e, target=(marker_name,) + e.target, align=(None,) + e.align,
                   moved=tuple((i, j + 1) for i, j in e.moved))


def transform(
    g: Grammar,
    mode: Mode | str = FULL,
    reorder: bool = True,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    seed: int = 42,
) -> TransformResult:
    """Transform ``g`` into an LL(1) grammar (full mode) or a grammar whose
    first ``k`` expansion layers are conflict-free (``layers(k)``)."""
    mode = Mode.parse(mode)
    require_valid(g)
    cur = epsilon_normalize(g)
    rulemap = _base_map(g, cur)
    taken = set(cur.literal_lexemes)
    markers: dict[int, str] = {}  # production id -> marker lexeme it currently starts with
    iterations: list[Iteration] = []
    depth = 0
    clean_depth = None
    while True:
        if depth > depth_cap:
            raise DepthCapExceeded(depth_cap, detect_conflicts(cur, depth_cap))
        conflicts = detect_conflicts(cur, depth)
        if conflicts:
            hs = min_hitting_set(conflict_sets(conflicts))
            cur, added = resolve_conflicts(cur, conflicts, hs.chosen, taken)
            taken.update(added.values())
            markers.update(added)
            rulemap = rulemap.updated({pid: _prepend(rulemap[pid], quote(lx)) for pid, lx in added.items()})
            iterations.append(Iteration(depth, tuple(conflicts), hs.chosen, hs.optimal, tuple(sorted(added.items()))))
            depth = 0  # restart the expansion from the beginning
            continue
        if mode.kind == "layers" and depth + 1 >= mode.k:
            clean_depth = depth
            break
        if mode.kind == "full" and leaves_terminal(cur, depth):
            clean_depth = depth
            break
        depth += 1
    before = len(markers)
    steps: tuple[ReorderStep, ...] = ()
    if reorder and markers:
        cur, rulemap, steps = reorder_symbols(cur, rulemap, markers, mode, seed)
    final = sum(1 for e in rulemap for j in e.inserted if e.target[j] != EPS_NAME)
    trace = TransformTrace(str(mode), tuple(iterations), clean_depth, steps, before, final)
    return TransformResult(cur, rulemap, trace)


# ---------------------------------------------------------------------------
# reordering


def _movable(g: Grammar, sym: str, marker_names: set[str]) -> bool:
    s = g.symbols[sym]
    return s.kind == LITERAL and not s.content and sym not in marker_names and sym not in (NEWLINE, EPS_NAME)


def _layers_ok(g: Grammar, k: int, seed: int) -> str:
    """Empty string when the candidate grammar is acceptable in layers mode."""
    for d in range(k):
        if detect_conflicts(g, d):
            return f"conflict at depth {d}"
    from ..lexer import lex
    from ..parsing import Ambiguous, earley_parse
    from ..sampler import BudgetInfeasible, min_heights, sample
    from ..trees import linearize

    depth = max(min_heights(g)[g.start] + 4, 8)
    for i in range(AMBIGUITY_SAMPLES):
        try:
            t = sample(g, depth, seed + i)
        except BudgetInfeasible:
            break
        if isinstance(earley_parse(g, lex(linearize(t, g), g)), Ambiguous):
            return "ambiguity witness found"
    return ""


def reorder_symbols(
    g: Grammar, rulemap: RuleMap, markers: dict[int, str], mode: Mode | str = FULL, seed: int = 42
) -> tuple[Grammar, RuleMap, tuple[ReorderStep, ...]]:
    """Move a terminal a marked rule already contains to its front and drop
    the marker, when the result keeps the mode's guarantee.

    Scenario 1 uses a terminal that occurs in no other production; scenario 2
    a terminal shared with other rules, fronted in at most one rule (the
    lowest id that succeeds).  Content-bearing terminals, NEWLINE and the
    epsilon marker are never moved."""
    mode = Mode.parse(mode)
    marker_names = {quote(m) for m in markers.values()}
    occurrences: dict[str, set[int]] = {}
    for p in g.productions:
        for s in p.rhs:
            occurrences.setdefault(s, set()).add(p.id)
    fronted_shared: set[str] = set()
    steps: list[ReorderStep] = []
    cur = g
    for pid in sorted(markers):
        p = cur.by_id[pid]
        if not p.rhs or p.rhs[0] != quote(markers[pid]):
            continue
        positions = [i for i in range(1, len(p.rhs)) if _movable(cur, p.rhs[i], marker_names)]
        unique = [i for i in positions if occurrences[p.rhs[i]] == {pid} and p.rhs.count(p.rhs[i]) == 1]
        shared = [i for i in positions if i not in unique and p.rhs[i] not in fronted_shared]
        for scenario, cands in ((1, unique), (2, shared)):
            done = False
            for i in cands:
                sym = p.rhs[i]
                rest = list(p.rhs[1:])
                rest.pop(i - 1)
                new_p = replace(p, rhs=(sym,) + tuple(rest))
                trial = cur.with_productions([new_p if q.id == pid else q for q in cur.productions])
                if mode.kind == "full":
                    verdict = is_ll_k(trial, 1)
                    reason = "" if verdict else "breaks LL(1): " + verdict.describe()
                else:
                    reason = _layers_ok(trial, mode.k, seed)
                ok = not reason
                steps.append(ReorderStep(pid, sym, scenario, ok, quote(markers[pid]), i, reason))
                if ok:
                    cur = trial
                    e = rulemap[pid]
                    # target position i (in the marked rhs) holds the moved terminal
                    src = e.align[i]
                    kept = [j for j in range(1, len(e.target)) if j != i]
                    align = (src,) + tuple(e.align[j] for j in kept)
                    rulemap = rulemap.updated({pid: RuleEntry(
                        e.id, e.lhs, e.source, new_p.rhs, align,
                        e.moved + ((src, 0),) if src is not None else e.moved,
                        e.retired + (quote(markers[pid]),),
                    )})
                    if scenario == 2:
                        fronted_shared.add(sym)
                    done = True
                    break
            if done:
                break
    return cur, rulemap, tuple(steps)


def replay(g: Grammar, trace: TransformTrace) -> Grammar:
    """Rebuild the transformed grammar from the original and a trace."""
    cur = epsilon_normalize(g)
    for it in trace.iterations:
        inserted = dict(it.inserted)
        prods = []
        extra = []
        for p in cur.productions:
            if p.id in inserted:
                sym = literal(inserted[p.id])
                extra.append(sym)
                prods.append(Production(p.id, p.lhs, (sym.name,) + p.rhs, TRANSFORM_INSERTED))
            else:
                prods.append(p)
        cur = cur.with_productions(prods, extra)
    for s in trace.reorder:
        if not s.applied:
            continue
        p = cur.by_id[s.production]
        rest = list(p.rhs[1:])
        rest.pop(s.position - 1)
        new_p = replace(p, rhs=(s.terminal,) + tuple(rest))
        cur = cur.with_productions([new_p if q.id == p.id else q for q in cur.productions])
    return cur
