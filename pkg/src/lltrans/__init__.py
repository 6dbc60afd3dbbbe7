"""Grammar classification, LL(1) conflict elimination and bidirectional
program translation between a grammar and its transformed counterpart."""

from .analysis import ClassReport, classify, detect_conflicts, expand, first_k, follow_k, is_ll_k, is_lr1, leading_symbols
from .grammar import Grammar, GrammarError, Production, Symbol, epsilon_normalize, parse_grammar, serialize_grammar, validate
from .lexer import LexError, Token, lex
from .parsing import KERNEL, Ambiguous, Reject, Tree, earley_parse, ll1_parse
from .sampler import sample
from .transform import (
    DepthCapExceeded,
    Mode,
    RuleMap,
    TransformTrace,
    grammar_rule_transform,
    min_hitting_set,
    reorder_symbols,
    resolve_conflicts,
    sbt_transform,
    transform,
)
from .translate import TranslationBundle, TranslationError, translate_corpus, translate_program, translate_tree
from .trees import Interior, Leaf, SyntaxTree, linearize, to_sexpr

__version__ = "0.1.0"

__all__ = [
    "ClassReport",
    "classify",
    "detect_conflicts",
    "expand",
    "first_k",
    "follow_k",
    "is_ll_k",
    "is_lr1",
    "leading_symbols",
    "Grammar",
    "GrammarError",
    "Production",
    "Symbol",
    "epsilon_normalize",
    "parse_grammar",
    "serialize_grammar",
    "validate",
    "LexError",
    "Token",
    "lex",
    "KERNEL",
    "Ambiguous",
    "Reject",
    "Tree",
    "earley_parse",
    "ll1_parse",
    "sample",
    "DepthCapExceeded",
    "Mode",
    "RuleMap",
    "TransformTrace",
    "grammar_rule_transform",
    "min_hitting_set",
    "reorder_symbols",
    "resolve_conflicts",
    "sbt_transform",
    "transform",
    "TranslationBundle",
    "TranslationError",
    "translate_corpus",
    "translate_program",
    "translate_tree",
    "Interior",
    "Leaf",
    "SyntaxTree",
    "linearize",
    "to_sexpr",
]
