"""Grammar-class analyses: FIRST/FOLLOW, strong LL(k), canonical LR(1),
leading symbols, expansion trees and conflict detection."""

from .firstk import LLVerdict, concat_k, first_k, follow_k, is_ll_k, left_recursion_cycle, ll1_table
from .leading import (
    Conflict,
    ExpansionNode,
    ExpansionTree,
    LeftRecursion,
    SharedLeading,
    conflict_sets,
    detect_conflicts,
    expand,
    leading_cycles,
    leading_symbols,
    leaves_terminal,
    level_sets,
)
from .lr1 import LRVerdict, StateLimitExceeded, is_lr1
from .report import ClassReport, classify, grammar_id

__all__ = [
    "LLVerdict", "concat_k", "first_k", "follow_k", "is_ll_k", "left_recursion_cycle", "ll1_table",
    "Conflict", "ExpansionNode", "ExpansionTree", "LeftRecursion", "SharedLeading", "conflict_sets",
    "detect_conflicts", "expand", "leading_cycles", "leading_symbols", "leaves_terminal", "level_sets",
    "LRVerdict", "StateLimitExceeded", "is_lr1", "ClassReport", "classify", "grammar_id",
]
