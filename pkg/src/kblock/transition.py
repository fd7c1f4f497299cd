"""k-transition automata, compact candidate enumeration, and the k-block decision."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

from .automaton import (
    BlockAutomaton,
    canonical_key,
    is_deterministic,
    is_trim,
    language_equal,
)
from .bwtest import BwTrace, bw_test, passes_bw_test
from .dfa import MinimalDfa, as_minimal_dfa
from .regex import BlockExpr, glushkov

Cover = tuple[tuple[str, int], ...]


def k_transition_automaton(m: MinimalDfa, k: int) -> BlockAutomaton:
    """Every path of ``m`` of length 1..k that does not pass a final state mid-way."""
    if k < 1:
        raise ValueError("k must be at least 1")
    delta = {q: dict(m.out(q)) for q in m.states}
    trans = set()
    for p in m.states:
        stack = [("", p)]
        while stack:
            w, q = stack.pop()
            if w:
                trans.add((p, w, q))
                if len(w) == k or q in m.finals:
                    continue
            for c, r in delta[q].items():
                stack.append((w + c, r))
    return m.replace(transitions=frozenset(trans))


def _covers(t: BlockAutomaton, p: int) -> list[Cover]:
    """Prefix-free subsets of ``p``'s T-transitions that lose no word of ``L(p)``.

    Walks the trie of outgoing labels: at each node either take the
    transition labelled by the node, or (if its target is not final) cover
    every child.  Options that take a transition come first.
    """
    out = dict(t.out(p))
    labels = sorted(out)

    def node(u: str) -> list[Cover]:
        options: list[Cover] = []
        if u in out:
            options.append(((u, out[u]),))
            if out[u] in t.finals:
                return options
        children = sorted({b[len(u)] for b in labels if len(b) > len(u) and b.startswith(u)})
        if children:
            per_child = [node(u + c) for c in children]
            options.extend(tuple(itertools.chain(*combo)) for combo in itertools.product(*per_child))
        return options

    children = sorted({b[0] for b in labels})
    per_child = [node(c) for c in children]
    return [tuple(itertools.chain(*combo)) for combo in itertools.product(*per_child)]


def iter_candidates(m: MinimalDfa, k: int) -> Iterator[BlockAutomaton]:
    """Trim deterministic sub-automata of the k-transition automaton recognizing ``L(m)``.

    Depth-first over the states in discovery order, choosing one cover per
    reached state.  Candidates come out in a fixed, reproducible order.
    """
    t = k_transition_automaton(m, k)
    if not m.states:
        return
    covers = {p: _covers(t, p) for p in t.states}
    seen: set[tuple] = set()

    def build(assigned: dict[int, Cover]) -> BlockAutomaton:
        keep = tuple(sorted(assigned))
        trans = frozenset((p, b, q) for p, cov in assigned.items() for b, q in cov)
        return BlockAutomaton(m.alphabet, keep, m.initials, m.finals & set(keep), trans, m.names)

    def walk(assigned: dict[int, Cover], frontier: tuple[int, ...]) -> Iterator[BlockAutomaton]:
        if not frontier:
            yield build(assigned)
            return
        p, rest = frontier[0], frontier[1:]
        for cov in covers[p]:
            new = []
            for _, q in cov:
                if q not in assigned and q != p and q not in rest and q not in new:
                    new.append(q)
            yield from walk({**assigned, p: cov}, rest + tuple(new))

    for b in walk({}, (m.initial,)):
        key = canonical_key(b)
        if key in seen:
            continue
        if is_deterministic(b) and is_trim(b) and language_equal(b, m):
            seen.add(key)
            yield b


def enumerate_compact(m: MinimalDfa, k: int) -> list[BlockAutomaton]:
    """All trim compact deterministic k-block automata of ``L(m)``, up to isomorphism."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return list(iter_candidates(m, k))


@dataclass
class Verdict:
    answer: bool
    k: int
    witness: BlockAutomaton | None = None
    candidates_examined: int = 0
    trace: BwTrace | None = None


Language = Union[BlockAutomaton, BlockExpr]


def _minimal(l: Language) -> MinimalDfa:
    if isinstance(l, BlockAutomaton):
        return as_minimal_dfa(l)
    return as_minimal_dfa(glushkov(l))


def decide_k_block(l: Language, k: int) -> Verdict:
    """Is ``L(l)`` k-block deterministic?  The witness is the first passing candidate."""
    if k < 1:
        raise ValueError("k must be at least 1")
    m = _minimal(l)
    examined = 0
    for cand in iter_candidates(m, k):
        examined += 1
        if passes_bw_test(cand):
            _, trace = bw_test(cand)
            return Verdict(True, k, cand, examined, trace)
    return Verdict(False, k, None, examined, None)


def search_k(l: Language, k_max: int, all_k: bool = False) -> list[tuple[int, Verdict]]:
    """Run the decision for k = 1..k_max, stopping at the first yes unless ``all_k``."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    m = _minimal(l)
    results = []
    for k in range(1, k_max + 1):
        v = decide_k_block(m, k)
        results.append((k, v))
        if v.answer and not all_k:
            break
    return results
