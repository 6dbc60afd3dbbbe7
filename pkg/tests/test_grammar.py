import pytest

from helpers import FIXTURES, fixture, random_cfg
from lltrans.grammar import (
    EPS_NAME,
    EPSILON_MARKER,
    GrammarError,
    epsilon_normalize,
    literal,
    parse_grammar,
    quote,
    require_valid,
    serialize_grammar,
    unquote,
    validate,
)


def test_parse_basic_fig4():
    g = fixture("fig4")
    assert g.start == "S"
    assert [p.id for p in g.productions] == list(range(1, 9))
    assert g.nonterminals == ("S", "X", "A", "B")
    assert str(g.by_id[1]) == "S -> 'a' 'b' X"
    assert g.by_id[7].rhs == ("A", "'a'")


def test_alternatives_get_consecutive_ids():
    g = parse_grammar("start E ; E -> E '+' T | T ; T -> 'n' ;")
    assert [(p.id, p.lhs) for p in g.productions] == [(1, "E"), (2, "E"), (3, "T")]


def test_class_terminals_and_lexical_directives():
    g = fixture("mathqa")
    ident = g.symbols["identifier"]
    assert ident.kind == "class" and ident.content
    assert g.lexical.newline_significant
    assert "NEWLINE" in g.symbols
    assert g.symbols["NEWLINE"].lexeme == "\n"


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_serialize_round_trip(name):
    g = fixture(name)
    h = parse_grammar(serialize_grammar(g))
    assert h.structurally_equal(g)
    assert serialize_grammar(h) == serialize_grammar(g)


@pytest.mark.parametrize("seed", range(20))
def test_serialize_round_trip_random(seed):
    g = random_cfg(seed)
    assert parse_grammar(serialize_grammar(g)).structurally_equal(g)


def test_quote_unquote():
    for lx in ["+", "'", "\\", "\n", "a'b\\c"]:
        assert unquote(quote(lx)) == lx
    assert literal("+").name == "'+'"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("start S ; S -> 'a' ", "expected"),
        ("S -> 'a' ;", "start"),
        ("start S ; S -> T ;", "T"),
        ("start S ; S -> 'a' ; S -> 'a' $ ;", "unexpected character"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(GrammarError) as info:
        g = parse_grammar(text)
        require_valid(g)
    assert fragment in str(info.value)


def test_parse_error_has_position():
    with pytest.raises(GrammarError) as info:
        parse_grammar("start S ;\nS -> 'a' $ ;")
    assert info.value.line == 2


def test_validation_diagnostics():
    g = parse_grammar("start S ; S -> 'a' | 'a' ; T -> 'b' ; U -> U 'c' ; S -> U ;")
    rep = validate(g)
    codes = {d.code for d in rep.errors}
    assert "duplicate-production" in codes
    assert "nonproductive" in codes
    assert {d.code for d in rep.warnings} == {"unreachable"}
    with pytest.raises(GrammarError):
        require_valid(g)


def test_valid_fixtures():
    for name in FIXTURES:
        assert validate(fixture(name)).ok, name


def test_epsilon_normalize():
    g = fixture("epsilon")
    assert not g.is_epsilon_free()
    assert g.nullable == frozenset({"B"})
    h = epsilon_normalize(g)
    assert h.is_epsilon_free()
    (p,) = [p for p in h.productions if p.rhs == (EPS_NAME,)]
    assert p.origin == EPSILON_MARKER and p.id == 2
    assert epsilon_normalize(h) is h


def test_serialized_epsilon_marker_reads_back_as_marker():
    h = epsilon_normalize(fixture("epsilon"))
    back = parse_grammar(serialize_grammar(h))
    assert back.structurally_equal(h)
    assert [p.origin for p in back.productions if p.rhs == (EPS_NAME,)] == [EPSILON_MARKER]
