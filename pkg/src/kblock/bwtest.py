"""Orbits, gates, cuts and the recursive BW-test on block automata.

Inside the test, blocks are compared as opaque symbols: the test never looks
at prefixes, only at label equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .automaton import AutomatonError, BlockAutomaton, reachable


@dataclass(frozen=True, order=True)
class Orbit:
    """Strongly connected component; ordered by its sorted state ids."""

    key: tuple[int, ...] = field(init=False, repr=False)
    states: frozenset[int] = field(compare=False)
    trivial: bool = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "key", tuple(sorted(self.states)))

    def __contains__(self, q: int) -> bool:
        return q in self.states

    def __iter__(self):
        return iter(sorted(self.states))

    def __len__(self):
        return len(self.states)


def orbits(a: BlockAutomaton) -> list[Orbit]:
    """Strongly connected components, sinks first (Tarjan, iterative)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: list[Orbit] = []
    succ = {q: sorted({r for _, r in a.out(q)}) for q in a.states}
    loops = {p for p, _, q in a.transitions if p == q}

    for root in a.states:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = len(index)
                stack.append(v)
                on_stack.add(v)
            if i < len(succ[v]):
                work.append((v, i + 1))
                w = succ[v][i]
                if w not in index:
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                trivial = len(comp) == 1 and v not in loops
                result.append(Orbit(states=frozenset(comp), trivial=trivial))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return result


def orbit_of(a: BlockAutomaton, q: int) -> Orbit:
    for o in orbits(a):
        if q in o:
            return o
    raise AutomatonError(f"unknown state {q}")


def is_non_reentering(a: BlockAutomaton, r: Iterable[int]) -> bool:
    """No path leaves ``r`` and comes back."""
    r = frozenset(r)
    outside = {q for _, _, q in out_transitions(a, r)}
    return not (reachable(a, outside) & r)


def out_transitions(a: BlockAutomaton, r: Iterable[int]) -> list[tuple[int, str, int]]:
    r = frozenset(r)
    return [t for t in a.sorted_transitions if t[0] in r and t[2] not in r]


def in_transitions(a: BlockAutomaton, r: Iterable[int]) -> list[tuple[int, str, int]]:
    r = frozenset(r)
    return [t for t in a.sorted_transitions if t[0] not in r and t[2] in r]


def gates(a: BlockAutomaton, r: Iterable[int]) -> frozenset[int]:
    """States of ``r`` that are final or leave ``r`` by some transition."""
    r = frozenset(r)
    if not is_non_reentering(a, r):
        raise AutomatonError("component is re-entering")
    leaving = {t[0] for t in out_transitions(a, r)}
    return frozenset(q for q in r if q in a.finals or q in leaving)


def is_transverse(a: BlockAutomaton, r: Iterable[int]) -> bool:
    """All gates of ``r`` agree on finality and on their out-transitions."""
    r = frozenset(r)
    g = sorted(gates(a, r))
    if len(g) < 2:
        return True
    outs = {q: set() for q in g}
    for p, b, q in out_transitions(a, r):
        outs[p].add((b, q))
    ref = g[0]
    return all(
        (q in a.finals) == (ref in a.finals) and outs[q] == outs[ref] for q in g[1:]
    )


def has_orbit_property(a: BlockAutomaton) -> bool:
    return all(is_transverse(a, o.states) for o in orbits(a))


def orbit_automaton(a: BlockAutomaton, q: int, orbit: Orbit | None = None) -> BlockAutomaton:
    """Restriction to the orbit of ``q``: initial ``q``, finals are the gates."""
    a._check_state(q)
    o = orbit if orbit is not None else orbit_of(a, q)
    return a.restrict(o.states).replace(initials=frozenset({q}), finals=gates(a, o.states))


# -- consistency / vacancy ----------------------------------------------------------


def consistency_set(a: BlockAutomaton) -> frozenset[tuple[str, int]]:
    """Pairs ``(b, s)`` such that every final state has a ``b``-transition to ``s``.

    Empty when there are no final states.
    """
    if not a.finals:
        return frozenset()
    sets = [{(b, q) for b, q in a.out(f)} for f in sorted(a.finals)]
    return frozenset(set.intersection(*sets))


def cut(a: BlockAutomaton, pairs: Iterable[tuple[str, int]]) -> BlockAutomaton:
    """Remove the synchronizing transitions ``(f, b, s)`` for all finals ``f``."""
    pairs = frozenset(pairs)
    bad = pairs - consistency_set(a)
    if bad:
        raise AutomatonError(f"pairs not consistent: {sorted(bad)}")
    drop = {(f, b, s) for f in a.finals for b, s in pairs}
    return a.replace(transitions=a.transitions - drop)


def is_vacant(a: BlockAutomaton, pair: tuple[str, int]) -> bool:
    b, s = pair
    a._check_state(s)
    return bool(b) and all((f, b, s) not in a.transitions for f in a.finals)


def vacancy_set(a: BlockAutomaton, blocks: Iterable[str]) -> frozenset[tuple[str, int]]:
    """Vacant pairs among ``blocks × states`` (the full set is infinite)."""
    return frozenset((b, q) for b in blocks for q in a.states if is_vacant(a, (b, q)))


def add(a: BlockAutomaton, pairs: Iterable[tuple[str, int]]) -> BlockAutomaton:
    """Add ``(f, b, s)`` for every final ``f`` and every vacant pair ``(b, s)``."""
    pairs = frozenset(pairs)
    for pair in pairs:
        if not is_vacant(a, pair):
            raise AutomatonError(f"pair not vacant: {pair}")
    extra = {(f, b, s) for f in a.finals for b, s in pairs}
    return a.replace(transitions=a.transitions | extra)


# -- the test ---------------------------------------------------------------------------


@dataclass
class BwTrace:
    """One node of the audit tree produced by :func:`bw_test`."""

    message: str
    passed: bool
    children: list["BwTrace"] = field(default_factory=list)

    def render(self, indent: int = 0) -> str:
        mark = "PASS" if self.passed else "FAIL"
        lines = ["  " * indent + f"[{mark}] {self.message}"]
        lines += [c.render(indent + 1) for c in self.children]
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def _memo_key(a: BlockAutomaton) -> tuple:
    return (a.states, a.finals, a.transitions)


def bw_test(a: BlockAutomaton) -> tuple[bool, BwTrace]:
    """Recursive BW-test.  Every consistency pair is tried; any success suffices."""
    memo: dict[tuple, bool] = {}
    return _bw(a, memo, depth=0)


def passes_bw_test(a: BlockAutomaton) -> bool:
    return _bw(a, {}, depth=0, trace=False)[0]


def _bw(a: BlockAutomaton, memo: dict, depth: int, trace: bool = True) -> tuple[bool, BwTrace | None]:
    key = _memo_key(a)
    if key in memo and not trace:
        return memo[key], None
    node = BwTrace(f"automaton with {len(a.states)} states, {len(a.transitions)} transitions", True) if trace else None
    orbs = orbits(a)
    for o in orbs:
        if not is_transverse(a, o.states):
            memo[key] = False
            if node:
                node.passed = False
                node.children.append(BwTrace(f"orbit {_fmt(a, o)} is not transverse", False))
            return False, node
    if node:
        node.children.append(BwTrace("orbit property holds", True))
    for o in sorted(o for o in orbs if not o.trivial):
        root = min(o.states)
        b = orbit_automaton(a, root, o)
        pairs = sorted(consistency_set(b), key=lambda p: (p[1], p[0]))
        child = BwTrace(f"orbit {_fmt(a, o)}: consistency set {_fmt_pairs(a, pairs)}", False) if trace else None
        ok = False
        for blk, s in pairs:
            sub = cut(b.rerooted([s]), [(blk, s)])
            res, sub_trace = _bw(sub, memo, depth + 1, trace)
            if child is not None and sub_trace is not None:
                sub_trace.message = f"cut ({blk}, {a.name(s)}): " + sub_trace.message
                child.children.append(sub_trace)
            if res:
                ok = True
                break
        if child is not None:
            child.passed = ok
            node.children.append(child)
        if not ok:
            memo[key] = False
            if node:
                node.passed = False
            return False, node
    memo[key] = True
    return True, node


def _fmt(a: BlockAutomaton, o: Orbit) -> str:
    return "{" + ", ".join(a.name(q) for q in o) + "}"


def _fmt_pairs(a: BlockAutomaton, pairs) -> str:
    return "{" + ", ".join(f"({b}, {a.name(s)})" for b, s in pairs) + "}"
