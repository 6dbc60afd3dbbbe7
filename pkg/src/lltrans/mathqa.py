"""The MathQA-style DSL in four representations.

* ``lr1``: the base grammar (LR(1), not LL(2));
* ``ll1``: the full-mode LL(1) transform of the base grammar;
* ``ll2``: the LL(1) variant with a shared ``<exp>`` terminal prepended to
  every ``primary_expression`` rule, so those rules differ in the second
  token only (LL(2), not LL(1));
* ``ncfg``: the base syntax with each assignment's variable repeated after
  the assigned expression.  That language is not context-free, so it is a
  codec over base-grammar trees rather than a grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .grammar import Grammar, Production, TRANSFORM_INSERTED, literal, parse_grammar, serialize_grammar
from .lexer import lex
from .parsing import Ambiguous, Reject, earley_parse
from .transform import RuleEntry, RuleMap, TransformTrace, transform
from .translate import TranslationBundle
from .trees import Interior, Leaf, SyntaxTree, linearize

EXP = "<exp>"
PRIMARY = "primary_expression"
ASSIGNMENT = "assignment"
VARIABLE = "identifier"

FIXTURE_FILES = {
    "lr1": "mathqa_lr1.grammar",
    "ll1": "mathqa_ll1.grammar",
    "ll2": "mathqa_ll2.grammar",
}


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("lltrans") / "fixtures" / name))


def load_fixture(name: str) -> Grammar:
    """Read a shipped fixture grammar by file name (e.g. ``fig4.grammar``)."""
    return parse_grammar(fixture_path(name).read_text(encoding="utf-8"))


def sample_programs() -> dict[str, str]:
    folder = fixture_path("samples")
    return {p.stem: p.read_text(encoding="utf-8") for p in sorted(folder.glob("*.txt"))}


def ll2_variant(ll1: Grammar) -> tuple[Grammar, RuleMap]:
    """Prepend the shared ``<exp>`` terminal to every primary-expression rule."""
    exp = literal(EXP)
    if exp.name in ll1.symbols:
        raise ValueError(f"grammar already uses {EXP}")
    prods, entries = [], []
    for p in ll1.productions:
        if p.lhs == PRIMARY:
            rhs = (exp.name,) + p.rhs
            prods.append(Production(p.id, p.lhs, rhs, TRANSFORM_INSERTED))
            entries.append(RuleEntry(p.id, p.lhs, p.rhs, rhs, (None,) + tuple(range(len(p.rhs)))))
        else:
            prods.append(p)
            entries.append(RuleEntry(p.id, p.lhs, p.rhs, p.rhs, tuple(range(len(p.rhs)))))
    return ll1.with_productions(prods, [exp]), RuleMap(entries, "exp-prefix")


@dataclass(frozen=True)
class NcfgCodec:
    """Repeats the assigned variable after every assignment."""

    base: Grammar
    assignment_rule: int
    variable: str = VARIABLE

    @property
    def augmented(self) -> Grammar:
        return _augmented(self.base, self.assignment_rule, self.variable)

    def encode(self, t: SyntaxTree) -> str:
        return linearize(self._extend(t), self.base)

    def _extend(self, node: SyntaxTree) -> SyntaxTree:
        if isinstance(node, Leaf):
            return node
        kids = tuple(self._extend(c) for c in node.children)
        if node.production == self.assignment_rule:
            kids = kids + (Leaf(self._target(node).token),)
        return Interior(node.production, kids)

    def _target(self, node: Interior) -> Leaf:
        first = node.children[0]
        if not isinstance(first, Leaf) or first.token.terminal != self.variable:
            raise ValueError("assignment rule does not start with the variable terminal")
        return first

    def decode(self, text: str) -> SyntaxTree:
        g = self.augmented
        tokens = lex(text, g)
        outcome = earley_parse(g, tokens)
        if isinstance(outcome, Reject):
            raise NcfgError(f"not a valid encoded program (syntax error at token {outcome.position})")
        if isinstance(outcome, Ambiguous):
            raise NcfgError("encoded program is ambiguous")
        return self._strip(outcome.tree)

    def _strip(self, node: SyntaxTree) -> SyntaxTree:
        if isinstance(node, Leaf):
            return node
        kids = tuple(self._strip(c) for c in node.children)
        if node.production == self.assignment_rule:
            want = self._target(node).token.lexeme
            got = kids[-1].token.lexeme
            if got != want:
                raise NcfgMismatch(want, got)
            kids = kids[:-1]
        return Interior(node.production, kids)


class NcfgError(ValueError):
    pass


class NcfgMismatch(NcfgError):
    def __init__(self, expected: str, found: str):
        self.expected = expected
        self.found = found
        super().__init__(f"assignment to {expected} is followed by {found}, not by {expected}")


@lru_cache(maxsize=8)
def _augmented(base: Grammar, rule: int, variable: str) -> Grammar:
    prods = [replace(p, rhs=p.rhs + (variable,)) if p.id == rule else p for p in base.productions]
    return base.with_productions(prods)


def _assignment_rule(base: Grammar) -> int:
    (p,) = [p for p in base.productions if p.lhs == ASSIGNMENT]
    return p.id


@dataclass(frozen=True)
class DslSuite:
    lr1: Grammar
    ll1: Grammar
    ll2: Grammar
    to_ll1: TranslationBundle
    to_ll2: TranslationBundle
    ll1_trace: TransformTrace
    ncfg: NcfgCodec

    def grammars(self) -> dict[str, Grammar]:
        return {"lr1": self.lr1, "ll1": self.ll1, "ll2": self.ll2}


def ncfg_encode(t: SyntaxTree, suite: "DslSuite | None" = None) -> str:
    return (suite or build_dsl_suite()).ncfg.encode(t)


def ncfg_decode(text: str, suite: "DslSuite | None" = None) -> SyntaxTree:
    return (suite or build_dsl_suite()).ncfg.decode(text)


@lru_cache(maxsize=1)
def build_dsl_suite() -> DslSuite:
    """Build the four representations from the shipped base grammar and
    assert their grammar classes."""
    from .analysis import is_ll_k, is_lr1

    base = load_fixture(FIXTURE_FILES["lr1"])
    ll1, to_ll1_map, trace = transform(base)
    ll2, prefix = ll2_variant(ll1)
    suite = DslSuite(
        lr1=base,
        ll1=ll1,
        ll2=ll2,
        to_ll1=TranslationBundle(base, ll1, to_ll1_map),
        to_ll2=TranslationBundle(base, ll2, to_ll1_map.then(prefix)),
        ll1_trace=trace,
        ncfg=NcfgCodec(base, _assignment_rule(base)),
    )
    checks = {
        "lr1 is LR(1)": bool(is_lr1(base)),
        "lr1 is not LL(2)": not is_ll_k(base, 2),
        "ll1 is LL(1)": bool(is_ll_k(ll1, 1)),
        "ll2 is LL(2)": bool(is_ll_k(ll2, 2)),
        "ll2 is not LL(1)": not is_ll_k(ll2, 1),
    }
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise AssertionError("DSL suite class checks failed: " + ", ".join(failed))
    return suite


def write_fixtures(folder: Path | None = None) -> list[Path]:
    """(Re)write the derived LL(1)/LL(2) grammar files and their rule maps."""
    suite = build_dsl_suite()
    folder = folder or fixture_path("")
    out = []
    for key, g, rm in (("ll1", suite.ll1, suite.to_ll1.rulemap), ("ll2", suite.ll2, suite.to_ll2.rulemap)):
        path = folder / FIXTURE_FILES[key]
        header = f"MathQA-style DSL, {key.upper()[:2]}({key[2]}) representation.\nGenerated from {FIXTURE_FILES['lr1']}; do not edit."
        path.write_text(serialize_grammar(g, header), encoding="utf-8")
        mpath = folder / FIXTURE_FILES[key].replace(".grammar", ".map.json")
        mpath.write_text(rm.to_json(), encoding="utf-8")
        out += [path, mpath]
    return out
