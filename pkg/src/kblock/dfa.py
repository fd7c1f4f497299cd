"""Classical DFA pipeline and the maps from a block automaton to its minimal DFA."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automaton import (
    AutomatonError,
    BlockAutomaton,
    LetterNfa,
    expand,
    is_deterministic,
    isomorphic,
    joint_state_classes,
    reachable,
    trim,
)
from .bwtest import Orbit, orbits

# A minimal DFA is a plain BlockAutomaton: single initial state, 1-letter
# labels, trim, pairwise inequivalent states, breadth-first state numbering.
MinimalDfa = BlockAutomaton


def determinize(n: LetterNfa) -> BlockAutomaton:
    """Subset construction; the empty subset is dropped."""
    if any(len(c) != 1 for _, c, _ in n.transitions):
        raise AutomatonError("determinize expects single-letter labels")
    if not n.initials:
        return BlockAutomaton(n.alphabet, (), frozenset(), frozenset(), frozenset())
    start = frozenset(n.initials)
    index = {start: 0}
    queue = deque([start])
    trans = []
    while queue:
        s = queue.popleft()
        for c in n.alphabet:
            t = frozenset().union(*(n.delta[q].get(c, ()) for q in s))
            if not t:
                continue
            if t not in index:
                index[t] = len(index)
                queue.append(t)
            trans.append((index[s], c, index[t]))
    finals = frozenset(i for s, i in index.items() if s & n.finals)
    return BlockAutomaton(n.alphabet, tuple(range(len(index))), frozenset({0}), finals, frozenset(trans))


def minimize(d: BlockAutomaton) -> MinimalDfa:
    """Minimal DFA of a deterministic 1-block automaton, canonically numbered."""
    if not d.initials:
        return BlockAutomaton(d.alphabet, (), frozenset(), frozenset(), frozenset())
    if not is_deterministic(d) or d.width > 1:
        raise AutomatonError("minimize expects a deterministic 1-block automaton")
    t = trim(d)
    if not t.states:
        return BlockAutomaton(d.alphabet, (), frozenset(), frozenset(), frozenset())
    delta = {q: dict(t.out(q)) for q in t.states}
    # Moore refinement; a missing transition behaves as a shared sink (-1)
    cls = {q: int(q in t.finals) for q in t.states}
    count = len(set(cls.values()))
    while True:
        sigs: dict[tuple, int] = {}
        new = {}
        for q in t.states:
            key = (cls[q], tuple(cls[delta[q][c]] if c in delta[q] else -1 for c in t.alphabet))
            new[q] = sigs.setdefault(key, len(sigs))
        cls = new
        if len(sigs) == count:
            break
        count = len(sigs)
    # breadth-first renumbering of the classes from the initial one
    order = {cls[t.initial]: 0}
    queue = deque([t.initial])
    trans = set()
    finals = set()
    while queue:
        q = queue.popleft()
        if q in t.finals:
            finals.add(order[cls[q]])
        for c in t.alphabet:
            if c not in delta[q]:
                continue
            r = delta[q][c]
            if cls[r] not in order:
                order[cls[r]] = len(order)
                queue.append(r)
            trans.add((order[cls[q]], c, order[cls[r]]))
    n = len(order)
    return BlockAutomaton(
        d.alphabet, tuple(range(n)), frozenset({0}), frozenset(finals), frozenset(trans),
        {i: str(i) for i in range(n)},
    )


def minimal_dfa_of(a: BlockAutomaton) -> MinimalDfa:
    return minimize(determinize(expand(a)))


def as_minimal_dfa(a: BlockAutomaton) -> MinimalDfa:
    """``a`` itself if it already is a minimal DFA (keeping its names), else its minimal DFA."""
    m = minimal_dfa_of(a)
    if a.width <= 1 and len(a.initials) == 1 and is_deterministic(a) and isomorphic(a, m):
        return a
    return m


# -- state and orbit correspondence --------------------------------------------------------------------------


def state_correspondence(a: BlockAutomaton, m: MinimalDfa, *, require_deterministic: bool = True) -> dict[int, int]:
    """Map every state of ``a`` to the state of ``m`` with the same right language.

    Defined whenever ``a`` is residual with respect to ``m``; raises otherwise.
    """
    if require_deterministic and not is_deterministic(a):
        raise AutomatonError("the state correspondence needs a deterministic automaton")
    ca, cm = joint_state_classes(a, m)
    by_class = {c: q for q, c in cm.items()}
    result = {}
    for p in a.states:
        if ca[p] not in by_class:
            raise AutomatonError(f"state {a.name(p)} has no equivalent in the minimal DFA")
        result[p] = by_class[ca[p]]
    return result


@dataclass(frozen=True)
class OrbitMap:
    """Image of every orbit of ``a`` in the minimal DFA, and the image states no state of the orbit maps to."""

    image: dict[Orbit, Orbit]
    complement: dict[Orbit, frozenset[int]]


def orbit_images(a: BlockAutomaton, m: MinimalDfa, state_map: dict[int, int]) -> OrbitMap:
    m_orbits = orbits(m)
    where = {q: o for o in m_orbits for q in o.states}
    image, comp = {}, {}
    for o in orbits(a):
        targets = {where[state_map[q]] for q in o.states}
        if len(targets) != 1:
            raise AutomatonError(f"orbit {sorted(o.states)} spans several orbits of the minimal DFA")
        k = targets.pop()
        image[o] = k
        comp[o] = k.states - {state_map[q] for q in o.states}
    return OrbitMap(image, comp)


def orbit_reach(a: BlockAutomaton, o: Orbit, all_orbits: list[Orbit]) -> list[Orbit]:
    """Orbits other than ``o`` reachable from it."""
    seen = reachable(a, o.states) - o.states
    return [x for x in all_orbits if x != o and x.states & seen]


def is_maximal_orbit(a: BlockAutomaton, om: OrbitMap, o: Orbit) -> bool:
    """No distinct orbit reachable from ``o`` shares its image."""
    return all(om.image[x] != om.image[o] for x in orbit_reach(a, o, list(om.image)))


def is_residual(a: BlockAutomaton) -> bool:
    m = minimal_dfa_of(a)
    ca, cm = joint_state_classes(a, m)
    return set(ca.values()) <= set(cm.values())
