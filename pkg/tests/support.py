"""Shared helpers for the test suite: fixtures, random automata and oracles.

The oracles here deliberately avoid the library's own algorithms: languages
are compared by brute-force enumeration of block paths, and language
constructions (concatenation, star) are built directly on transitions.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from kblock.automaton import BlockAutomaton, from_text, is_deterministic, is_trim

DATA = Path(__file__).parent / "data"


def load(name: str) -> BlockAutomaton:
    return from_text((DATA / f"{name}.aut").read_text())


# -- brute-force language oracle -------------------------------------------------------


def words_of(a: BlockAutomaton, max_len: int, roots=None) -> frozenset[str]:
    """Every word of length <= max_len accepted from ``roots`` (default: initials)."""
    roots = a.initials if roots is None else roots
    found = set()
    seen = set()
    stack = [(q, "") for q in roots]
    while stack:
        q, w = stack.pop()
        if (q, w) in seen:
            continue
        seen.add((q, w))
        if q in a.finals:
            found.add(w)
        for p, b, r in a.transitions:
            if p == q and len(w) + len(b) <= max_len:
                stack.append((r, w + b))
    return frozenset(found)


def same_words(a: BlockAutomaton, b: BlockAutomaton, max_len: int = 9, ra=None, rb=None) -> bool:
    return words_of(a, max_len, ra) == words_of(b, max_len, rb)


# -- epsilon-free language constructions ---------------------------------------------------


def _shift(a: BlockAutomaton, offset: int) -> BlockAutomaton:
    return a.relabelled({q: q + offset for q in a.states})


def _union_parts(x: BlockAutomaton, y: BlockAutomaton):
    y = _shift(y, max(x.states, default=-1) + 1)
    return x, y


def word_automaton(b: str) -> BlockAutomaton:
    return BlockAutomaton("", (0, 1), frozenset({0}), frozenset({1}), frozenset({(0, b, 1)}))


def concat(x: BlockAutomaton, y: BlockAutomaton) -> BlockAutomaton:
    x, y = _union_parts(x, y)
    starts = [(b, r) for i in y.initials for b, r in y.out(i)]
    trans = set(x.transitions) | set(y.transitions)
    trans |= {(f, b, r) for f in x.finals for b, r in starts}
    y_nullable = bool(y.initials & y.finals)
    x_nullable = bool(x.initials & x.finals)
    initials = set(x.initials) | (set(y.initials) if x_nullable else set())
    finals = set(y.finals) | (set(x.finals) if y_nullable else set())
    return BlockAutomaton("", x.states + y.states, frozenset(initials), frozenset(finals), frozenset(trans))


def star(x: BlockAutomaton) -> BlockAutomaton:
    n = max(x.states, default=-1) + 1
    starts = [(b, r) for i in x.initials for b, r in x.out(i)]
    trans = set(x.transitions) | {(n, b, r) for b, r in starts}
    trans |= {(f, b, r) for f in x.finals for b, r in starts}
    return BlockAutomaton("", x.states + (n,), frozenset({n}), x.finals | {n}, frozenset(trans))


# -- random automata ---------------------------------------------------------------------


def random_deterministic(rng: random.Random, max_states: int = 5, k: int = 3, alphabet: str = "ab") -> BlockAutomaton:
    """Random trim deterministic k-block automaton with a single initial state.

    The state count is drawn first and samples losing states to trimming
    are rejected, so small automata are not over-represented.
    """
    n = rng.randint(1, max_states)
    while True:
        trans = set()
        for p in range(n):
            for b in _prefix_free_sample(rng, k, alphabet):
                trans.add((p, b, rng.randrange(n)))
        finals = frozenset(q for q in range(n) if rng.random() < 0.35) or frozenset({rng.randrange(n)})
        a = BlockAutomaton(alphabet, tuple(range(n)), frozenset({0}), finals, frozenset(trans))
        if is_trim(a):
            return a


def random_unfolded(rng: random.Random, max_states: int = 5, k: int = 3, alphabet: str = "ab") -> BlockAutomaton:
    """Deterministic automaton with a duplicated state, hence usually not compact.

    A state of a random automaton is copied together with its outgoing
    transitions, and part of its incoming transitions move to the copy.
    """
    while True:
        a = random_deterministic(rng, max_states - 1, k, alphabet)
        incoming = {}
        for t in a.transitions:
            incoming.setdefault(t[2], []).append(t)
        choices = [q for q, ts in incoming.items() if len(ts) + (q == a.initial) >= 2]
        if not choices:
            continue
        p = rng.choice(sorted(choices))
        copy = len(a.states)
        ts = sorted(incoming[p])
        moved = set(rng.sample(ts, rng.randint(1, len(ts) - (p != a.initial))))
        trans = (set(a.transitions) - moved) | {(x, b, copy) for x, b, _ in moved}
        trans |= {(copy, b, copy if q == p and (p, b, q) in moved else q) for b, q in a.out(p)}
        finals = a.finals | ({copy} if p in a.finals else set())
        return BlockAutomaton(alphabet, a.states + (copy,), a.initials, frozenset(finals), frozenset(trans))


def _prefix_free_sample(rng: random.Random, k: int, alphabet: str) -> list[str]:
    """Random prefix-free set of blocks of length <= k (possibly empty)."""
    out = []

    def grow(prefix: str):
        for c in alphabet:
            w = prefix + c
            r = rng.random()
            if r < 0.35:
                out.append(w)
            elif r < 0.6 and len(w) < k:
                grow(w)

    grow("")
    return out


def random_dfa(rng: random.Random, max_states: int = 4, alphabet: str = "ab") -> BlockAutomaton:
    """Random trim 1-block DFA (not necessarily minimal)."""
    return random_deterministic(rng, max_states, 1, alphabet)


# -- exhaustive enumeration oracle ---------------------------------------------------------


def all_blocks(alphabet: str, k: int) -> list[str]:
    return ["".join(t) for n in range(1, k + 1) for t in itertools.product(alphabet, repeat=n)]


def prefix_free_subsets(blocks: list[str]) -> list[tuple[str, ...]]:
    """Every prefix-free subset of ``blocks`` (including the empty one)."""
    result = [()]
    for b in sorted(blocks):
        result += [s + (b,) for s in result if all(not b.startswith(x) and not x.startswith(b) for x in s)]
    return result


def literal_candidates(m: BlockAutomaton, k: int, equal) -> list[BlockAutomaton]:
    """Every trim deterministic automaton on a subset of ``m``'s states recognizing ``L(m)``.

    Literal search: for each kept state, every prefix-free label set of
    blocks of length <= k with arbitrary targets; finality follows ``m``.
    Only feasible for tiny inputs.
    """
    blocks = all_blocks(m.alphabet, k)
    results = []
    others = [q for q in m.states if q != m.initial]
    for r in range(len(others) + 1):
        for subset in itertools.combinations(others, r):
            keep = (m.initial, *subset)
            opts = [
                tuple(zip(labels, targets))
                for labels in prefix_free_subsets(blocks)
                for targets in itertools.product(keep, repeat=len(labels))
            ]
            for combo in itertools.product(opts, repeat=len(keep)):
                trans = frozenset((p, b, q) for p, o in zip(keep, combo) for b, q in o)
                cand = BlockAutomaton(m.alphabet, tuple(sorted(keep)), m.initials, m.finals & set(keep), trans)
                if is_trim(cand) and is_deterministic(cand) and equal(cand, m):
                    results.append(cand)
    return results


def _run(m: BlockAutomaton, q: int, w: str):
    for c in w:
        q = dict(m.out(q)).get(c)
        if q is None:
            return None
    return q


def _covers(m: BlockAutomaton, x: int, labels: tuple[str, ...], k: int) -> bool:
    """No non-empty word of L_m(x) escapes the label set.

    A word with no prefix in ``labels`` is either short (length < k, must be
    rejected) or has a length-k prefix with no prefix in ``labels`` (the
    residual after it must be empty).
    """
    for n in range(1, k + 1):
        for t in itertools.product(m.alphabet, repeat=n):
            u = "".join(t)
            if any(u.startswith(b) for b in labels):
                continue
            r = _run(m, x, u)
            if r is None:
                continue
            if r in m.finals or n == k:
                return False
    return True


def factorized_candidates(m: BlockAutomaton, k: int) -> list[BlockAutomaton]:
    """Deterministic automata on subsets of ``m``'s states whose states solve ``L(q) = L_m(q)``.

    A trim deterministic automaton recognizing ``L(m)`` with pairwise
    inequivalent states can be numbered so that state ``q`` accepts exactly
    ``L_m(q)``.  That equation splits over the outgoing blocks: each block
    ``b`` must lead to the state ``m`` reaches from ``q`` by ``b``, and every
    non-empty word of ``L_m(q)`` must start with one of the blocks.
    """
    blocks = all_blocks(m.alphabet, k)
    results = []
    others = [q for q in m.states if q != m.initial]
    for r in range(len(others) + 1):
        for subset in itertools.combinations(others, r):
            keep = set((m.initial, *subset))
            per_state = []
            for p in sorted(keep):
                opts = []
                for labels in prefix_free_subsets(blocks):
                    targets = [_run(m, p, b) for b in labels]
                    if all(t in keep for t in targets) and _covers(m, p, labels, k):
                        opts.append(tuple((p, b, t) for b, t in zip(labels, targets)))
                per_state.append(opts)
            for combo in itertools.product(*per_state):
                trans = frozenset(t for o in combo for t in o)
                cand = BlockAutomaton(m.alphabet, tuple(sorted(keep)), m.initials, m.finals & keep, trans)
                if is_trim(cand):
                    results.append(cand)
    return results


def all_minimal_dfas(max_states: int, alphabet: str = "ab") -> list[BlockAutomaton]:
    """Every minimal DFA with 1..max_states states, one per isomorphism class."""
    from kblock.automaton import to_text
    from kblock.dfa import minimize

    seen = {}
    for n in range(1, max_states + 1):
        slots = [(p, c) for p in range(n) for c in alphabet]
        for targets in itertools.product([None, *range(n)], repeat=len(slots)):
            trans = frozenset((p, c, q) for (p, c), q in zip(slots, targets) if q is not None)
            for fmask in range(1, 2 ** n):
                finals = frozenset(q for q in range(n) if fmask >> q & 1)
                d = BlockAutomaton(alphabet, tuple(range(n)), frozenset({0}), finals, trans)
                m = minimize(d)
                if len(m.states) == n:
                    seen.setdefault(to_text(m), m)
    return list(seen.values())


def random_automaton(rng: random.Random, max_states: int = 4, k: int = 2, alphabet: str = "ab") -> BlockAutomaton:
    """Random block automaton, possibly nondeterministic and not trim."""
    n = rng.randint(1, max_states)
    blocks = all_blocks(alphabet, k)
    trans = frozenset(
        (rng.randrange(n), rng.choice(blocks), rng.randrange(n)) for _ in range(rng.randint(0, 2 * n + 2))
    )
    initials = frozenset(q for q in range(n) if rng.random() < 0.3) or frozenset({0})
    finals = frozenset(q for q in range(n) if rng.random() < 0.4)
    return BlockAutomaton(alphabet, tuple(range(n)), initials, finals, trans)


def union(parts: list[BlockAutomaton]) -> BlockAutomaton:
    """Disjoint union keeping every initial state."""
    out = BlockAutomaton("", (), frozenset(), frozenset(), frozenset())
    for x in parts:
        x = _shift(x, max(out.states, default=-1) + 1)
        out = BlockAutomaton(
            out.alphabet + x.alphabet, out.states + x.states, out.initials | x.initials,
            out.finals | x.finals, out.transitions | x.transitions,
        )
    return out
