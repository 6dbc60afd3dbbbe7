"""Grammar-class report combining the LL(1), LL(2) and LR(1) checks."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from ..grammar import Grammar, serialize_grammar
from .firstk import LLVerdict, is_ll_k, left_recursion_cycle
from .lr1 import LRVerdict, StateLimitExceeded, is_lr1

LL2_NOTE = "ll2 is the strong-LL(2) test"


def grammar_id(g: Grammar) -> str:
    """Short content hash of the grammar's canonical text."""
    return hashlib.sha256(serialize_grammar(g).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ClassReport:
    grammar: str
    ll1: LLVerdict
    ll2: LLVerdict
    lr1: LRVerdict | None  # None when the state cap was hit
    left_recursion: tuple[str, ...] | None
    notes: tuple[str, ...] = (LL2_NOTE,)

    @property
    def has_left_recursion(self) -> bool:
        return self.left_recursion is not None

    GRADES = ("LL(1)", "LL(2)", "LR(1)", "non-LR(1)")

    @property
    def grade(self) -> str:
        """Smallest class in the LL(1) ⊂ LL(2) ⊂ LR(1) order that holds."""
        if self.ll1:
            return "LL(1)"
        if self.ll2:
            return "LL(2)"
        if self.lr1:
            return "LR(1)"
        return "non-LR(1)" if self.lr1 is not None else "unknown"

    def to_dict(self) -> dict:
        def ll(v: LLVerdict) -> dict:
            d = {"holds": v.holds}
            if not v.holds:
                if v.left_recursion:
                    d["left_recursion"] = list(v.left_recursion)
                else:
                    d["nonterminal"] = v.nonterminal
                    d["productions"] = list(v.productions)
                    d["lookahead"] = list(v.lookahead)
            return d

        if self.lr1 is None:
            lr = {"holds": None, "error": "state limit exceeded"}
        else:
            lr = {"holds": self.lr1.holds, "states": self.lr1.states}
            if not self.lr1.holds:
                lr.update(state=self.lr1.state, kind=self.lr1.kind, lookahead=self.lr1.lookahead, items=list(self.lr1.items))
        return {
            "schema": 1,
            "grammar": self.grammar,
            "class": self.grade,
            "ll1": ll(self.ll1),
            "ll2": ll(self.ll2),
            "lr1": lr,
            "left_recursion": list(self.left_recursion) if self.left_recursion else None,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [
            f"grammar: {self.grammar}",
            f"class: {self.grade}",
            f"ll1: {self.ll1.describe()}",
            f"ll2: {self.ll2.describe()}",
            f"lr1: {self.lr1.describe() if self.lr1 is not None else 'unknown (state limit exceeded)'}",
            f"left-recursion: {'yes (' + ' -> '.join(self.left_recursion) + ')' if self.left_recursion else 'no'}",
        ]
        if self.lr1 is not None and not self.lr1.holds:
            lines.append("lr1-conflict-state:")
            lines.extend("  " + it for it in self.lr1.items)
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def classify(g: Grammar, name: str | None = None, max_states: int = 100_000) -> ClassReport:
    try:
        lr1 = is_lr1(g, max_states)
    except StateLimitExceeded:
        lr1 = None
    cycle = left_recursion_cycle(g)
    return ClassReport(
        grammar=name or grammar_id(g),
        ll1=is_ll_k(g, 1),
        ll2=is_ll_k(g, 2),
        lr1=lr1,
        left_recursion=tuple(cycle) if cycle else None,
    )
