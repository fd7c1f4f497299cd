"""Block regular expressions and their Glushkov block automata.

Syntax::

    expr    := term ('+' term)*
    term    := factor factor*          (juxtaposition is concatenation)
    factor  := atom '*'*
    atom    := letter | '[' letters ']' | '(' expr ')' | '@eps' | '@empty'

Whitespace is ignored.  A bracketed block is a single symbol of the
expression; ``[aa]`` and ``aa`` denote the same language but not the same
Glushkov automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .automaton import BlockAutomaton, is_deterministic

SPECIAL = set("+*()[]@")


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "@empty"


@dataclass(frozen=True)
class Epsilon:
    def __str__(self):
        return "@eps"


@dataclass(frozen=True)
class BlockLit:
    block: str

    def __str__(self):
        return self.block if len(self.block) == 1 else f"[{self.block}]"


@dataclass(frozen=True)
class Sum:
    left: "BlockExpr"
    right: "BlockExpr"

    def __str__(self):
        return f"{self.left}+{_paren(self.right, Sum)}"


@dataclass(frozen=True)
class Concat:
    left: "BlockExpr"
    right: "BlockExpr"

    def __str__(self):
        return f"{_paren(self.left, Sum)}{_paren(self.right, (Sum, Concat))}"


@dataclass(frozen=True)
class Star:
    child: "BlockExpr"

    def __str__(self):
        return f"{_paren(self.child, (Sum, Concat))}*"


BlockExpr = Union[Empty, Epsilon, BlockLit, Sum, Concat, Star]


def _paren(e, kinds) -> str:
    return f"({e})" if isinstance(e, kinds) else str(e)


class _Parser:
    def __init__(self, text: str, alphabet: str | None):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, c: str) -> None:
        if self.peek() != c:
            raise RegexSyntaxError(f"expected {c!r}", self.pos)
        self.pos += 1

    def letter(self, c: str) -> str:
        if self.alphabet is not None and c not in self.alphabet:
            raise RegexSyntaxError(f"symbol {c!r} outside the alphabet", self.pos)
        return c

    def expr(self) -> BlockExpr:
        e = self.term()
        while self.peek() == "+":
            self.pos += 1
            e = Sum(e, self.term())
        return e

    def term(self) -> BlockExpr:
        e = self.factor()
        while self.peek() and self.peek() not in "+)":
            e = Concat(e, self.factor())
        return e

    def factor(self) -> BlockExpr:
        e = self.atom()
        while self.peek() == "*":
            self.pos += 1
            e = Star(e)
        return e

    def atom(self) -> BlockExpr:
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if c == "[":
            self.pos += 1
            block = []
            while self.pos < len(self.text) and self.text[self.pos] != "]":
                ch = self.text[self.pos]
                if ch in SPECIAL or ch.isspace():
                    raise RegexSyntaxError(f"unexpected {ch!r} inside a block", self.pos)
                block.append(self.letter(ch))
                self.pos += 1
            if self.pos >= len(self.text):
                raise RegexSyntaxError("unterminated block", start)
            self.pos += 1
            if not block:
                raise RegexSyntaxError("empty block", start)
            return BlockLit("".join(block))
        if c == "@":
            for word, node in (("@eps", Epsilon()), ("@empty", Empty())):
                if self.text.startswith(word, self.pos):
                    self.pos += len(word)
                    return node
            raise RegexSyntaxError("unknown constant", start)
        if not c:
            raise RegexSyntaxError("unexpected end of expression", start)
        if c in SPECIAL:
            raise RegexSyntaxError(f"unexpected {c!r}", start)
        self.pos += 1
        return BlockLit(self.letter(c))


def parse(text: str, alphabet: str | None = None) -> BlockExpr:
    """Parse ``text`` into a trim expression (``∅`` simplified away)."""
    p = _Parser(text, alphabet)
    e = p.expr()
    if p.peek():
        raise RegexSyntaxError(f"unexpected {p.peek()!r}", p.pos)
    return simplify(e)


def simplify(e: BlockExpr) -> BlockExpr:
    """Remove ``∅`` from ``e``: the result is ``∅`` or ∅-free."""
    if isinstance(e, Sum):
        l, r = simplify(e.left), simplify(e.right)
        if isinstance(l, Empty):
            return r
        if isinstance(r, Empty):
            return l
        return Sum(l, r)
    if isinstance(e, Concat):
        l, r = simplify(e.left), simplify(e.right)
        if isinstance(l, Empty) or isinstance(r, Empty):
            return Empty()
        return Concat(l, r)
    if isinstance(e, Star):
        c = simplify(e.child)
        return Epsilon() if isinstance(c, Empty) else Star(c)
    return e


def is_trim(e: BlockExpr) -> bool:
    return isinstance(e, Empty) or not _contains_empty(e)


def _contains_empty(e: BlockExpr) -> bool:
    if isinstance(e, Empty):
        return True
    if isinstance(e, (Sum, Concat)):
        return _contains_empty(e.left) or _contains_empty(e.right)
    if isinstance(e, Star):
        return _contains_empty(e.child)
    return False


def blocks(e: BlockExpr) -> list[str]:
    """Block occurrences, left to right (the positions of ``e``)."""
    if isinstance(e, BlockLit):
        return [e.block]
    if isinstance(e, (Sum, Concat)):
        return blocks(e.left) + blocks(e.right)
    if isinstance(e, Star):
        return blocks(e.child)
    return []


def member(e: BlockExpr, w: str) -> bool:
    """Membership by the inductive definition of ``L(e)``."""

    @lru_cache(maxsize=None)
    def m(node: BlockExpr, i: int, j: int) -> bool:
        if isinstance(node, Empty):
            return False
        if isinstance(node, Epsilon):
            return i == j
        if isinstance(node, BlockLit):
            return w[i:j] == node.block
        if isinstance(node, Sum):
            return m(node.left, i, j) or m(node.right, i, j)
        if isinstance(node, Concat):
            return any(m(node.left, i, k) and m(node.right, k, j) for k in range(i, j + 1))
        # star: empty, or a non-empty first factor followed by the star again
        return i == j or any(m(node.child, i, k) and m(node, k, j) for k in range(i + 1, j + 1))

    return m(e, 0, len(w))


# -- Glushkov construction ---------------------------------------------------------


def _nullable(e: BlockExpr) -> bool:
    if isinstance(e, (Epsilon, Star)):
        return True
    if isinstance(e, Sum):
        return _nullable(e.left) or _nullable(e.right)
    if isinstance(e, Concat):
        return _nullable(e.left) and _nullable(e.right)
    return False


def _positions(e: BlockExpr, start: int, follow: dict[int, set[int]]) -> tuple[set[int], set[int], int]:
    """First and Last sets of ``e`` with positions numbered from ``start``.

    Fills ``follow`` as a side effect and returns the next free position.
    """
    if isinstance(e, BlockLit):
        follow[start] = set()
        return {start}, {start}, start + 1
    if isinstance(e, (Empty, Epsilon)):
        return set(), set(), start
    if isinstance(e, Star):
        first, last, nxt = _positions(e.child, start, follow)
        for x in last:
            follow[x] |= first
        return first, last, nxt
    lf, ll, mid = _positions(e.left, start, follow)
    rf, rl, nxt = _positions(e.right, mid, follow)
    if isinstance(e, Sum):
        return lf | rf, ll | rl, nxt
    for x in ll:
        follow[x] |= rf
    first = lf | rf if _nullable(e.left) else lf
    last = ll | rl if _nullable(e.right) else rl
    return first, last, nxt


def glushkov(e: BlockExpr) -> BlockAutomaton:
    """Glushkov block automaton: state 0 plus one state per block occurrence."""
    if not is_trim(e):
        raise ValueError("expression is not trim")
    if isinstance(e, Empty):
        return BlockAutomaton("", (0,), frozenset({0}), frozenset(), frozenset(), {0: "0"})
    follow: dict[int, set[int]] = {}
    first, last, nxt = _positions(e, 1, follow)
    labels = dict(enumerate(blocks(e), 1))
    trans = {(0, labels[y], y) for y in first}
    trans |= {(x, labels[y], y) for x, ys in follow.items() for y in ys}
    finals = set(last) | ({0} if _nullable(e) else set())
    names = {0: "0", **{x: f"{BlockLit(b)}_{x}" for x, b in labels.items()}}
    return BlockAutomaton("", tuple(range(nxt)), frozenset({0}), frozenset(finals), frozenset(trans), names)


def is_deterministic_expr(e: BlockExpr) -> bool:
    return is_deterministic(glushkov(e))
