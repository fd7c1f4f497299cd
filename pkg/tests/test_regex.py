import re

import pytest
from hypothesis import given, settings, strategies as st

from kblock.automaton import accepts, isomorphic, words
from kblock.regex import (
    BlockLit,
    Concat,
    Empty,
    Epsilon,
    RegexSyntaxError,
    Star,
    Sum,
    blocks,
    glushkov,
    is_deterministic_expr,
    is_trim,
    member,
    parse,
    simplify,
)
from support import load

EXPR = "[aa]*([ab]b+ba)b*"


def to_python_regex(e) -> str:
    """Independent translation to a Python ``re`` pattern."""
    if isinstance(e, Empty):
        return "(?!)"
    if isinstance(e, Epsilon):
        return "(?:)"
    if isinstance(e, BlockLit):
        return f"(?:{re.escape(e.block)})"
    if isinstance(e, Sum):
        return f"(?:{to_python_regex(e.left)}|{to_python_regex(e.right)})"
    if isinstance(e, Concat):
        return f"(?:{to_python_regex(e.left)}{to_python_regex(e.right)})"
    return f"(?:{to_python_regex(e.child)})*"


class TestParse:
    def test_running_expression(self):
        e = parse(EXPR)
        assert e == Concat(
            Concat(Star(BlockLit("aa")), Sum(Concat(BlockLit("ab"), BlockLit("b")), Concat(BlockLit("b"), BlockLit("a")))),
            Star(BlockLit("b")),
        )
        assert set(blocks(e)) == {"aa", "ab", "b", "a"}

    def test_single_letter(self):
        assert parse("a") == BlockLit("a")

    def test_print_parse_round_trip(self):
        for text in (EXPR, "a+b*c", "(a+b)*[abc]", "@eps+a", "((ab)*)*"):
            e = parse(text)
            assert parse(str(e)) == e

    def test_whitespace(self):
        assert parse(" [aa] * ( a + b ) ") == parse("[aa]*(a+b)")

    @pytest.mark.parametrize(
        "text, pos",
        [("[]", 0), ("(a", 2), ("a+", 2), ("[ab", 0), ("a)", 1), ("@foo", 0), ("*a", 0), ("[a b]", 2)],
    )
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(RegexSyntaxError) as info:
            parse(text)
        assert info.value.pos == pos

    def test_alphabet_check(self):
        with pytest.raises(RegexSyntaxError, match="alphabet"):
            parse("a+c", alphabet="ab")

    def test_empty_simplification(self):
        assert parse("@empty+a") == BlockLit("a")
        assert parse("a@empty") == Empty()
        assert parse("@empty*") == Epsilon()
        assert is_trim(parse("(a@empty)+b"))
        assert not is_trim(Sum(Empty(), BlockLit("a")))
        assert simplify(Sum(Empty(), BlockLit("a"))) == BlockLit("a")


class TestMember:
    def test_running_expression(self):
        assert member(parse(EXPR), "aaabb")
        assert not member(parse(EXPR), "aab")

    def test_epsilon(self):
        assert member(Epsilon(), "")
        assert not member(Epsilon(), "a")

    def test_empty(self):
        assert not any(member(Empty(), w) for w in ("", "a", "ab"))


class TestGlushkov:
    def test_fixture(self):
        a = glushkov(parse(EXPR))
        assert isomorphic(a, load("glushkov_example"))
        assert len(a.states) == 7 and len(a.transitions) == 11
        assert {a.name(q) for q in a.finals} == {"b_3", "a_5", "b_6"}

    def test_epsilon(self):
        a = glushkov(Epsilon())
        assert a.states == (0,) and a.finals == {0} and not a.transitions

    def test_star(self):
        a = glushkov(parse("a*"))
        assert a.finals == {0, 1}
        assert a.transitions == {(0, "a", 1), (1, "a", 1)}

    def test_empty(self):
        assert not accepts(glushkov(Empty()), "")

    def test_non_trim_rejected(self):
        with pytest.raises(ValueError):
            glushkov(Sum(Empty(), BlockLit("a")))

    def test_determinism(self):
        assert is_deterministic_expr(parse(EXPR))
        assert not is_deterministic_expr(parse("a+[ab]"))
        assert is_deterministic_expr(parse("a*"))
        assert not is_deterministic_expr(parse("a*a"))


# -- random expressions ----------------------------------------------------------------

block_strategy = st.text(alphabet="ab", min_size=1, max_size=3).map(BlockLit)


def _extend(children):
    return st.one_of(
        st.builds(Sum, children, children),
        st.builds(Concat, children, children),
        st.builds(Star, children),
    )


expressions = st.recursive(
    st.one_of(block_strategy, st.just(Epsilon())), _extend, max_leaves=7
)


def _operators(e) -> int:
    if isinstance(e, (Sum, Concat)):
        return 1 + _operators(e.left) + _operators(e.right)
    if isinstance(e, Star):
        return 1 + _operators(e.child)
    return 0


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_glushkov_language(e):
    if _operators(e) > 6:
        return
    a = glushkov(e)
    pattern = re.compile(to_python_regex(e))
    for w in words("ab", 8):
        expected = pattern.fullmatch(w) is not None
        assert member(e, w) == expected
        assert accepts(a, w) == expected, w


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_glushkov_shape(e):
    a = glushkov(e)
    assert len(a.states) == 1 + len(blocks(e))
    # homogeneous: every transition into a position carries that position's block
    for p, b, q in a.transitions:
        assert b == blocks(e)[q - 1]
    assert parse(str(e)) == e


def _rename(e, table):
    if isinstance(e, BlockLit):
        return BlockLit(table[e.block])
    if isinstance(e, (Sum, Concat)):
        return type(e)(_rename(e.left, table), _rename(e.right, table))
    if isinstance(e, Star):
        return Star(_rename(e.child, table))
    return e


@settings(max_examples=100, deadline=None)
@given(expressions)
def test_determinism_survives_alphabetic_renaming(e):
    # give every distinct block a fresh single letter: an alphabetic image
    distinct = sorted(set(blocks(e)))
    if not is_deterministic_expr(e) or len(distinct) > 20:
        return
    table = {b: chr(ord("c") + i) for i, b in enumerate(distinct)}
    assert is_deterministic_expr(_rename(e, table))
