"""Grammar transforms: conflict elimination towards LL(1) and the SBT /
grammar-rule baselines."""

from .baselines import grammar_rule_transform, sbt_transform
from .core import (
    DEFAULT_DEPTH_CAP,
    FULL,
    DepthCapExceeded,
    Iteration,
    Mode,
    ReorderStep,
    TransformResult,
    TransformTrace,
    reorder_symbols,
    replay,
    resolve_conflicts,
    transform,
)
from .hitting_set import HittingSet, min_hitting_set
from .rulemap import RuleEntry, RuleMap

__all__ = [
    "grammar_rule_transform", "sbt_transform", "DEFAULT_DEPTH_CAP", "FULL", "DepthCapExceeded", "Iteration",
    "Mode", "ReorderStep", "TransformResult", "TransformTrace", "reorder_symbols", "replay", "resolve_conflicts",
    "transform", "HittingSet", "min_hitting_set", "RuleEntry", "RuleMap",
]
