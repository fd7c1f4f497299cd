"""Compaction of deterministic block automata that pass the BW-test.

The pipeline extracts a non-compact orbit, cuts its synchronizing
transitions, compacts the rest recursively, puts the transitions back and
substitutes the result for the orbit.  Once every orbit is compact, the
slimming step keeps one maximal orbit per orbit of the minimal DFA, completes
it with bridge states and links the survivors together.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .automaton import (
    AutomatonError,
    BlockAutomaton,
    is_deterministic,
    joint_state_classes,
    state_classes,
    step,
)
from .bwtest import (
    Orbit,
    add,
    consistency_set,
    cut,
    gates,
    in_transitions,
    orbit_automaton,
    orbits,
    out_transitions,
    passes_bw_test,
)
from .dfa import MinimalDfa, OrbitMap, is_maximal_orbit, minimal_dfa_of, orbit_images, state_correspondence

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Step:
    """Intermediate automaton recorded by :func:`compact_automaton`."""

    label: str
    automaton: BlockAutomaton
    depth: int = 0


# -- component languages ------------------------------------------------------------


def internal_language(a: BlockAutomaton, r: Iterable[int], p: int) -> BlockAutomaton:
    """Words sending ``p`` to a gate of ``r`` through internal transitions."""
    r = frozenset(r)
    if p not in r:
        raise AutomatonError(f"state {p} is not in the component")
    return a.restrict(r).replace(initials=frozenset({p}), finals=gates(a, r))


def external_language(a: BlockAutomaton, r: Iterable[int], p: int) -> BlockAutomaton:
    """Words sending ``p`` to a final state without internal transitions of ``r``."""
    r = frozenset(r)
    if p not in r:
        raise AutomatonError(f"state {p} is not in the component")
    trans = frozenset(t for t in a.transitions if not (t[0] in r and t[2] in r))
    return a.replace(initials=frozenset({p}), transitions=trans)


# -- substitution -------------------------------------------------------------------------


def equivalence_witness(orbital: BlockAutomaton, b: BlockAutomaton) -> dict[int, int]:
    """Map each state of ``orbital`` to the least equivalent state of ``b``."""
    co, cb = joint_state_classes(orbital, b)
    if set(co.values()) != set(cb.values()):
        raise AutomatonError("replacement is not L-equivalent to the orbital automaton")
    least: dict[int, int] = {}
    for q in sorted(b.states, reverse=True):
        least[cb[q]] = q
    return {p: least[co[p]] for p in orbital.states}


def substitute(
    a: BlockAutomaton,
    o: Iterable[int],
    b: BlockAutomaton,
    h: dict[int, int] | None = None,
) -> BlockAutomaton:
    """Replace the orbit ``o`` of ``a`` by the automaton ``b``.

    In-transitions of ``o`` are redirected through ``h``; out-transitions are
    replicated from every final state of ``b``.
    """
    o = frozenset(o)
    orbital = orbit_automaton(a, min(o))
    if frozenset(orbital.states) != o:
        raise AutomatonError("not an orbit")
    expected = equivalence_witness(orbital, b)
    if h is None:
        h = expected
    else:
        co, cb = joint_state_classes(orbital, b)
        if set(h) != o or any(co[p] != cb[h[p]] for p in o):
            raise AutomatonError("h does not map every orbit state to an equivalent state")
    # keep b's ids unless they collide with the states that stay
    rest = [q for q in a.states if q not in o]
    nxt = max(list(a.states) + list(b.states)) + 1
    ren = {}
    for q in b.states:
        if q in rest:
            ren[q] = nxt
            nxt += 1
    b = b.relabelled(ren)
    h = {p: ren.get(q, q) for p, q in h.items()}

    trans = {t for t in a.transitions if t[0] not in o and t[2] not in o}
    trans |= b.transitions
    trans |= {(p, x, h[q]) for p, x, q in in_transitions(a, o)}
    trans |= {(f, x, q) for f in b.finals for _, x, q in out_transitions(a, o)}
    (i_a,) = a.initials
    initials = {h[i_a]} if i_a in o else {i_a}
    finals = (a.finals - o) | b.finals if a.finals & o else a.finals
    names = {q: a.name(q) for q in rest}
    names.update({q: b.name(q) for q in b.states})
    return BlockAutomaton(
        a.alphabet + b.alphabet, tuple(rest) + b.states, frozenset(initials), frozenset(finals),
        frozenset(trans), names,
    )


# -- pathway and completion --------------------------------------------------------------


def pathway(a: BlockAutomaton, p: int, u: str) -> frozenset[tuple[str, int]]:
    """Minimal completions ``(v, q)`` with ``(p, uv, q)`` a path of ``a``."""
    a._check_state(p)
    # a position is a state (block None) or a point inside a block
    frontier = {(p, None, 0)}
    for c in u:
        nxt = set()
        for q, blk, j in frontier:
            if blk is None:
                for b, r in a.out(q):
                    if b[0] == c:
                        nxt.add((r, None, 0) if len(b) == 1 else (r, b, 1))
            elif blk[j] == c:
                nxt.add((q, None, 0) if j + 1 == len(blk) else (q, blk, j + 1))
        frontier = nxt
    found = {("", q) if blk is None else (blk[j:], q) for q, blk, j in frontier}
    return frozenset(
        (v, q) for v, q in found if not any(step(a, [p], u + v[:i]) for i in range(len(v)))
    )


def completion_choice(
    a: BlockAutomaton, o: Iterable[int], s: int, m: MinimalDfa, state_map: dict[int, int]
) -> tuple[int, str]:
    """Shortest word ``w`` (then lexicographically least, then least state) from ``o`` to ``s``."""
    best = None
    for q in sorted(o):
        w = _shortest_word(m, state_map[q], s)
        if w is not None and (best is None or (len(w), w) < (len(best[1]), best[1])):
            best = (q, w)
    if best is None:
        raise AutomatonError(f"state {m.name(s)} is not reachable from the orbit in the minimal DFA")
    return best


def _shortest_word(m: MinimalDfa, src: int, dst: int) -> str | None:
    seen = {src: ""}
    queue = deque([src])
    while queue:
        q = queue.popleft()
        if q == dst:
            return seen[q]
        for c, r in m.out(q):
            if r not in seen:
                seen[r] = seen[q] + c
                queue.append(r)
    return None


def complete_orbit(
    a: BlockAutomaton,
    o: Iterable[int],
    s: int,
    choice: tuple[int, str] | None = None,
    m: MinimalDfa | None = None,
    state_map: dict[int, int] | None = None,
) -> BlockAutomaton:
    """Add a fresh non-final state equivalent to the minimal-DFA state ``s``.

    Its transitions are the pathway of ``o_state`` along ``w`` where ``w`` leads from
    the image of ``o_state`` to ``s``.  The new state gets id ``a.fresh_state()``.
    """
    o = frozenset(o)
    m = m if m is not None else minimal_dfa_of(a)
    state_map = state_map if state_map is not None else state_correspondence(a, m)
    om = orbit_images(a, m, state_map)
    orbit = next(x for x in om.image if x.states == o)
    if s not in om.complement[orbit]:
        raise AutomatonError(f"{m.name(s)} is not in the complement of the orbit")
    q, w = choice if choice is not None else completion_choice(a, o, s, m, state_map)
    return _graft(a, a, q, w, s, m)


# -- slimming --------------------------------------------------------------------------------


def _check_preconditions(a: BlockAutomaton) -> tuple[MinimalDfa, dict[int, int]]:
    if not is_deterministic(a):
        raise AutomatonError("automaton is not deterministic")
    if not passes_bw_test(a):
        raise AutomatonError("automaton does not pass the BW-test")
    m = minimal_dfa_of(a)
    return m, state_correspondence(a, m)


def select_orbits(a: BlockAutomaton, m: MinimalDfa, om: OrbitMap) -> list[tuple[Orbit, Orbit]]:
    """One maximal orbit per image, as ``(K, O)`` pairs with sinks first."""
    images = set(om.image.values())
    selected = []
    for k in orbits(m):
        if k not in images:
            continue
        cands = sorted(o for o, img in om.image.items() if img == k and is_maximal_orbit(a, om, o))
        selected.append((k, cands[0]))
    return selected


def slim(a: BlockAutomaton, steps: list[Step] | None = None, depth: int = 0) -> BlockAutomaton:
    m, state_map = _check_preconditions(a)
    return _slim(a, m, state_map, steps, depth)


def _slim(a, m, state_map, steps, depth) -> BlockAutomaton:
    om = orbit_images(a, m, state_map)
    selected = select_orbits(a, m, om)
    image = set(state_map.values())

    comp = a
    state_map_c = dict(state_map)
    completed: list[set[int]] = []
    for k, o in selected:
        members = set(o.states)
        for s in sorted(om.complement[o] & image):
            q, w = completion_choice(a, o.states, s, m, state_map)
            new = comp.fresh_state()
            comp = _graft(comp, a, q, w, s, m)
            state_map_c[new] = s
            members.add(new)
        completed.append(members)
    if steps is not None:
        steps.append(Step("completion", comp, depth))

    rep: dict[int, int] = {}
    for members in completed:
        for q in sorted(members, reverse=True):
            rep[state_map_c[q]] = q
    index = {q: i for i, members in enumerate(completed) for q in members}
    trans = set()
    for p, b, q in comp.transitions:
        if p not in index:
            trans.add((p, b, q))
        elif q in completed[index[p]]:
            trans.add((p, b, q))
        else:
            target = rep[state_map_c[q]]
            if index[target] >= index[p]:
                raise AutomatonError("linking target is not in an earlier completed orbit")
            trans.add((p, b, target))
    link = comp.replace(transitions=frozenset(trans))
    if steps is not None:
        steps.append(Step("link", link, depth))

    keep = set(index)
    init = rep[state_map_c[a.initial]]
    out = link.restrict(keep).replace(initials=frozenset({init}))
    if steps is not None:
        steps.append(Step("slim", out, depth))
    return out


def _graft(comp: BlockAutomaton, a: BlockAutomaton, q: int, w: str, s: int, m: MinimalDfa) -> BlockAutomaton:
    """Add to ``comp`` a state for ``s`` whose transitions are the pathway of ``q`` along ``w``."""
    delta = pathway(a, q, w)
    if not delta or any(v == "" for v, _ in delta):
        raise AutomatonError(f"pathway from {a.name(q)} by {w!r} reaches a state directly")
    new = comp.fresh_state()
    return BlockAutomaton(
        comp.alphabet, comp.states + (new,), comp.initials, comp.finals,
        comp.transitions | {(new, v, r) for v, r in delta}, {**comp.names, new: f"{m.name(s)}_c"},
    )


# -- compaction ------------------------------------------------------------------------------


def non_compact_orbits(a: BlockAutomaton) -> list[Orbit]:
    cls = state_classes(a)
    return sorted(o for o in orbits(a) if len({cls[q] for q in o.states}) < len(o))


def compact_automaton(a: BlockAutomaton, steps: list[Step] | None = None) -> BlockAutomaton:
    """A compact automaton L-equivalent to ``a`` that still passes the BW-test.

    ``a`` must be deterministic, residual and pass the BW-test.  When
    ``steps`` is a list, every intermediate automaton is appended to it.
    """
    fuel = [sum(1 for _ in a.transitions) + len(a.states) + 1]
    return _compact(a, steps, 0, fuel)


def _compact(a: BlockAutomaton, steps, depth: int, fuel: list[int]) -> BlockAutomaton:
    m, state_map = _check_preconditions(a)
    while True:
        fuel[0] -= 1
        if fuel[0] < 0:
            raise RuntimeError("compaction did not terminate within its transition budget")
        bad = non_compact_orbits(a)
        if not bad:
            return _slim(a, m, state_map, steps, depth)
        o = bad[0]
        pairs = consistency_set(orbit_automaton(a, min(o.states), o))
        if not pairs:
            raise AutomatonError("non-compact orbit without consistent label")
        s = min(q for _, q in pairs)
        blocks = sorted(b for b, q in pairs if q == s)
        log.debug("compacting orbit %s with cut %s -> %s", sorted(o.states), blocks, s)
        b = orbit_automaton(a, s, o)
        c = cut(b, [(x, s) for x in blocks])
        if steps is not None:
            steps.append(Step("extract", b, depth))
            steps.append(Step("cut", c, depth))
        c2 = _compact(c, steps, depth + 1, fuel)
        if steps is not None:
            steps.append(Step("compacted", c2, depth))
        b2 = add(c2, [(x, c2.initial) for x in blocks])
        if steps is not None:
            steps.append(Step("add", b2, depth))
        a = substitute(a, o.states, b2)
        if steps is not None:
            steps.append(Step("substitute", a, depth))
        state_map = state_correspondence(a, m)
