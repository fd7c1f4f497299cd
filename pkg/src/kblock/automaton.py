"""Block automata: the core data model and language-level predicates.

A block automaton is a finite automaton whose transitions are labelled by
non-empty words (blocks).  States are integers; every automaton also carries
an optional display name for each state, which is what the text format and
the DOT export print.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Transition = tuple[int, str, int]


class AutomatonError(ValueError):
    """Raised for structurally invalid automata or bad state references."""


class AutomatonFormatError(AutomatonError):
    """Malformed automaton text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class BlockAutomaton:
    """Immutable block automaton ``(alphabet, states, initials, finals, transitions)``.

    Iteration orders are canonical: states ascend by id, transitions sort as
    ``(source, label, target)`` tuples.  Names are display-only and do not
    take part in equality.
    """

    alphabet: str
    states: tuple[int, ...]
    initials: frozenset[int]
    finals: frozenset[int]
    transitions: frozenset[Transition]
    names: Mapping[int, str] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        states = tuple(sorted(set(self.states)))
        transitions = frozenset((int(p), str(b), int(q)) for p, b, q in self.transitions)
        letters = set(self.alphabet)
        known = set(states)
        for p, b, q in transitions:
            if not b:
                raise AutomatonError(f"empty block on transition from state {p}")
            if p not in known or q not in known:
                raise AutomatonError(f"transition ({p}, {b}, {q}) uses an unknown state")
            letters.update(b)
        initials = frozenset(self.initials)
        finals = frozenset(self.finals)
        if not initials <= known:
            raise AutomatonError("initial states must be states of the automaton")
        if not finals <= known:
            raise AutomatonError("final states must be states of the automaton")
        names = {q: n for q, n in dict(self.names).items() if q in known}
        object.__setattr__(self, "alphabet", "".join(sorted(letters)))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "finals", finals)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "names", names)

    # -- indexing -----------------------------------------------------------

    @cached_property
    def sorted_transitions(self) -> tuple[Transition, ...]:
        return tuple(sorted(self.transitions))

    @cached_property
    def _out(self) -> dict[int, tuple[tuple[str, int], ...]]:
        out: dict[int, list[tuple[str, int]]] = {q: [] for q in self.states}
        for p, b, q in self.sorted_transitions:
            out[p].append((b, q))
        return {q: tuple(v) for q, v in out.items()}

    def out(self, q: int) -> tuple[tuple[str, int], ...]:
        """Outgoing ``(block, target)`` pairs of ``q``, sorted."""
        return self._out[q]

    @cached_property
    def blocks(self) -> frozenset[str]:
        return frozenset(b for _, b, _ in self.transitions)

    @property
    def width(self) -> int:
        """Length of the longest block (0 without transitions)."""
        return max((len(b) for b in self.blocks), default=0)

    @property
    def initial(self) -> int:
        if len(self.initials) != 1:
            raise AutomatonError("automaton does not have a single initial state")
        return next(iter(self.initials))

    def name(self, q: int) -> str:
        return self.names.get(q, str(q))

    def state(self, name: str) -> int:
        """Id of the state displayed as ``name``."""
        for q in self.states:
            if self.name(q) == name:
                return q
        raise AutomatonError(f"no state named {name!r}")

    def fresh_state(self) -> int:
        return max(self.states, default=-1) + 1

    def is_empty(self) -> bool:
        return not self.states

    # -- derived automata ---------------------------------------------------

    def replace(self, **changes) -> "BlockAutomaton":
        if "names" not in changes:
            changes["names"] = self.names
        return replace(self, **changes)

    def restrict(self, keep: Iterable[int]) -> "BlockAutomaton":
        """Sub-automaton induced by ``keep``."""
        keep = frozenset(keep)
        return self.replace(
            states=tuple(q for q in self.states if q in keep),
            initials=self.initials & keep,
            finals=self.finals & keep,
            transitions=frozenset(t for t in self.transitions if t[0] in keep and t[2] in keep),
        )

    def rerooted(self, roots: Iterable[int]) -> "BlockAutomaton":
        """Same automaton with ``roots`` as initial states."""
        roots = frozenset(roots)
        for q in roots:
            self._check_state(q)
        return self.replace(initials=roots)

    def relabelled(self, mapping: Mapping[int, int]) -> "BlockAutomaton":
        """Rename state ids through the injective ``mapping`` (identity elsewhere)."""
        f = lambda q: mapping.get(q, q)  # noqa: E731
        return BlockAutomaton(
            self.alphabet,
            tuple(f(q) for q in self.states),
            frozenset(f(q) for q in self.initials),
            frozenset(f(q) for q in self.finals),
            frozenset((f(p), b, f(q)) for p, b, q in self.transitions),
            {f(q): n for q, n in self.names.items()},
        )

    def _check_state(self, q: int) -> None:
        if q not in self._out:
            raise AutomatonError(f"unknown state {q}")

    def __str__(self) -> str:
        return to_text(self)


def automaton(
    transitions: Iterable[tuple[str, str, str]],
    initial: str | Iterable[str] | None = None,
    finals: Iterable[str] = (),
    states: Sequence[str] = (),
    alphabet: str = "",
) -> BlockAutomaton:
    """Build an automaton from state *names*.

    Ids are assigned in order of first appearance: ``states`` first, then
    transition endpoints.

    >>> a = automaton([("i", "ab", "f")], initial="i", finals=["f"])
    >>> a.state("f"), accepts(a, "ab")
    (1, True)
    """
    ids: dict[str, int] = {}

    def sid(n: str) -> int:
        if n not in ids:
            ids[n] = len(ids)
        return ids[n]

    for n in states:
        sid(n)
    trans = [(sid(p), b, sid(q)) for p, b, q in transitions]
    if initial is None:
        inits: Iterable[str] = ()
    elif isinstance(initial, str):
        inits = (initial,)
    else:
        inits = initial
    init_ids = frozenset(sid(n) for n in inits)
    final_ids = frozenset(sid(n) for n in finals)
    return BlockAutomaton(
        alphabet, tuple(ids.values()), init_ids, final_ids, frozenset(trans),
        {i: n for n, i in ids.items()},
    )


EMPTY = BlockAutomaton("", (), frozenset(), frozenset(), frozenset())


# -- text format ---------------------------------------------------------------


def to_text(a: BlockAutomaton) -> str:
    """Serialize to the line-based automaton format."""
    names = [a.name(q) for q in a.states]
    if len(set(names)) != len(names) or any(not n or any(c.isspace() for c in n) for n in names):
        a = a.replace(names={})
    lines = [
        f"alphabet: {a.alphabet}",
        "states: " + " ".join(a.name(q) for q in a.states),
        "initial: " + " ".join(a.name(q) for q in sorted(a.initials)),
        "final: " + " ".join(a.name(q) for q in sorted(a.finals)),
    ]
    lines += [f"trans: {a.name(p)} {b} {a.name(q)}" for p, b, q in a.sorted_transitions]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> BlockAutomaton:
    """Parse the line-based automaton format.  ``#`` starts a comment."""
    alphabet = ""
    states: list[str] = []
    initial: list[str] = []
    finals: list[str] = []
    trans: list[tuple[str, str, str]] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise AutomatonFormatError(f"expected 'key: value', got {line!r}", lineno)
        fields = rest.split()
        if key == "alphabet":
            alphabet = "".join(fields)
        elif key == "states":
            states.extend(fields)
        elif key == "initial":
            initial.extend(fields)
        elif key == "final":
            finals.extend(fields)
        elif key == "trans":
            if len(fields) != 3:
                raise AutomatonFormatError("a transition needs 'source block target'", lineno)
            p, b, q = fields
            if alphabet and set(b) - set(alphabet):
                raise AutomatonFormatError(f"block {b!r} uses symbols outside the alphabet", lineno)
            trans.append((p, b, q))
        else:
            raise AutomatonFormatError(f"unknown key {key!r}", lineno)
        if key != "trans":
            seen.add(key)
        if key in ("states",) and len(set(states)) != len(states):
            raise AutomatonFormatError("duplicate state name", lineno)
    declared = set(states)
    for n in initial + finals + [x for p, _, q in trans for x in (p, q)]:
        if declared and n not in declared:
            raise AutomatonFormatError(f"undeclared state {n!r}")
    return automaton(trans, initial, finals, states, alphabet)


# -- structural predicates -----------------------------------------------------


def is_prefix_free(words: Iterable[str]) -> bool:
    """True iff no word of the list is a prefix of another (duplicates count)."""
    ws = sorted(words)
    return all(not ws[i + 1].startswith(ws[i]) for i in range(len(ws) - 1))


def is_deterministic(a: BlockAutomaton) -> bool:
    """One initial state and prefix-free outgoing labels at every state."""
    if len(a.initials) != 1:
        return False
    return all(is_prefix_free(b for b, _ in a.out(q)) for q in a.states)


def reachable(a: BlockAutomaton, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    todo = list(seen)
    while todo:
        p = todo.pop()
        for _, q in a.out(p):
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def coreachable(a: BlockAutomaton, targets: Iterable[int]) -> set[int]:
    back: dict[int, list[int]] = {q: [] for q in a.states}
    for p, _, q in a.transitions:
        back[q].append(p)
    seen = set(targets)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def trim(a: BlockAutomaton) -> BlockAutomaton:
    """Keep the states that are both accessible and co-accessible."""
    return a.restrict(reachable(a, a.initials) & coreachable(a, a.finals))


def is_trim(a: BlockAutomaton) -> bool:
    return len(trim(a).states) == len(a.states)


def final_labels(a: BlockAutomaton) -> frozenset[str]:
    return frozenset(b for p, b, _ in a.transitions if p in a.finals)


def step(a: BlockAutomaton, sources: Iterable[int], word: str) -> set[int]:
    """``δ*(sources, word)``: states reachable by paths spelling exactly ``word``."""
    frontier = {(q, 0) for q in sources}
    seen = set(frontier)
    result = set()
    while frontier:
        nxt = set()
        for q, i in frontier:
            if i == len(word):
                result.add(q)
                continue
            for b, r in a.out(q):
                if word.startswith(b, i):
                    item = (r, i + len(b))
                    if item not in seen:
                        seen.add(item)
                        nxt.add(item)
        frontier = nxt
    return result


def accepts(a: BlockAutomaton, w: str) -> bool:
    return bool(step(a, a.initials, w) & a.finals)


# -- letter expansion ------------------------------------------------------------


@dataclass(frozen=True)
class LetterNfa:
    """Single-letter NFA obtained by splitting blocks into chains.

    ``intermediate`` holds the chain states added by :func:`expand`; the
    other states are those of the originating block automaton.
    """

    alphabet: str
    states: tuple[int, ...]
    initials: frozenset[int]
    finals: frozenset[int]
    transitions: frozenset[Transition]
    intermediate: frozenset[int] = frozenset()

    @cached_property
    def delta(self) -> dict[int, dict[str, frozenset[int]]]:
        d: dict[int, dict[str, set[int]]] = {q: {} for q in self.states}
        for p, c, q in self.transitions:
            d[p].setdefault(c, set()).add(q)
        return {p: {c: frozenset(v) for c, v in m.items()} for p, m in d.items()}

    def as_automaton(self) -> BlockAutomaton:
        return BlockAutomaton(self.alphabet, self.states, self.initials, self.finals, self.transitions)


def expand(a: BlockAutomaton) -> LetterNfa:
    """Split every block transition into a chain of single-letter transitions."""
    nxt = a.fresh_state()
    trans: list[Transition] = []
    inter: list[int] = []
    for p, b, q in a.sorted_transitions:
        src = p
        for c in b[:-1]:
            trans.append((src, c, nxt))
            inter.append(nxt)
            src = nxt
            nxt += 1
        trans.append((src, b[-1], q))
    return LetterNfa(
        a.alphabet, a.states + tuple(inter), a.initials, a.finals, frozenset(trans), frozenset(inter)
    )


# -- right languages --------------------------------------------------------------


def language_classes(n: LetterNfa, roots: Sequence[Iterable[int]]) -> list[int]:
    """Language class of every root set.

    Two roots get the same number iff the words accepted from them coincide.
    Subset construction from all roots at once, then Moore refinement on the
    resulting complete DFA (the empty subset is the sink).
    """
    letters = n.alphabet
    delta = n.delta
    root_sets = [frozenset(r) for r in roots]
    index: dict[frozenset[int], int] = {}
    subsets: list[frozenset[int]] = []
    for r in root_sets + [frozenset()]:
        if r not in index:
            index[r] = len(subsets)
            subsets.append(r)
    succ: list[list[int]] = []
    i = 0
    while i < len(subsets):
        s = subsets[i]
        row = []
        for c in letters:
            t = frozenset().union(*(delta[q].get(c, ()) for q in s)) if s else frozenset()
            if t not in index:
                index[t] = len(subsets)
                subsets.append(t)
            row.append(index[t])
        succ.append(row)
        i += 1
    cls = [1 if s & n.finals else 0 for s in subsets]
    count = len(set(cls))
    while True:
        sigs: dict[tuple, int] = {}
        new = []
        for j, row in enumerate(succ):
            key = (cls[j], tuple(cls[t] for t in row))
            new.append(sigs.setdefault(key, len(sigs)))
        cls = new
        if len(sigs) == count:
            break
        count = len(sigs)
    return [cls[index[r]] for r in root_sets]


def disjoint_union(a: BlockAutomaton, b: BlockAutomaton) -> tuple[BlockAutomaton, dict[int, int]]:
    """Union with ``b``'s states shifted past ``a``'s; returns the shift map."""
    offset = a.fresh_state()
    shift = {q: q + offset for q in b.states}
    bb = b.relabelled(shift)
    c = BlockAutomaton(
        a.alphabet + b.alphabet,
        a.states + bb.states,
        a.initials | bb.initials,
        a.finals | bb.finals,
        a.transitions | bb.transitions,
        {**a.names, **bb.names},
    )
    return c, shift


def state_classes(a: BlockAutomaton) -> dict[int, int]:
    """Right-language class of each state of ``a``."""
    cls = language_classes(expand(a), [(q,) for q in a.states])
    return dict(zip(a.states, cls))


def joint_state_classes(a: BlockAutomaton, b: BlockAutomaton) -> tuple[dict[int, int], dict[int, int]]:
    """Right-language classes of the states of two automata on a common scale."""
    c, shift = disjoint_union(a, b)
    cls = state_classes(c)
    return {q: cls[q] for q in a.states}, {q: cls[shift[q]] for q in b.states}


def language_equal(a: BlockAutomaton, b: BlockAutomaton) -> bool:
    """``L(a) == L(b)``."""
    c, shift = disjoint_union(a, b)
    x, y = language_classes(expand(c), [a.initials, [shift[q] for q in b.initials]])
    return x == y


def right_language_equivalent(a: BlockAutomaton, p: int, b: BlockAutomaton, q: int) -> bool:
    a._check_state(p)
    b._check_state(q)
    return language_equal(a.rerooted([p]), b.rerooted([q]))


def is_compact(a: BlockAutomaton) -> bool:
    """No two distinct states share a right language."""
    cls = state_classes(a)
    return len(set(cls.values())) == len(cls)


def is_l_equivalent(a: BlockAutomaton, b: BlockAutomaton) -> bool:
    """Same language and same family of right languages."""
    if not language_equal(a, b):
        return False
    ca, cb = joint_state_classes(a, b)
    return set(ca.values()) == set(cb.values())


# -- isomorphism ------------------------------------------------------------------


def canonical_key(a: BlockAutomaton) -> tuple:
    """Canonical encoding for automata with one initial state and prefix-free labels.

    States are renumbered breadth-first from the initial state following
    sorted labels; unreachable states are not part of the key, so this is an
    isomorphism invariant only for accessible automata.
    """
    if not a.states:
        return ()
    order = {a.initial: 0}
    queue = deque([a.initial])
    trans = []
    while queue:
        p = queue.popleft()
        for b, q in a.out(p):
            if q not in order:
                order[q] = len(order)
                queue.append(q)
            trans.append((order[p], b, order[q]))
    finals = tuple(sorted(order[q] for q in a.finals if q in order))
    return (len(order), finals, tuple(sorted(trans)))


def isomorphic(a: BlockAutomaton, b: BlockAutomaton) -> bool:
    """Label-, initial- and final-preserving graph isomorphism."""
    if (len(a.states), len(a.transitions), len(a.initials), len(a.finals)) != (
        len(b.states), len(b.transitions), len(b.initials), len(b.finals)
    ):
        return False
    if sorted(x for _, x, _ in a.transitions) != sorted(x for _, x, _ in b.transitions):
        return False
    if (
        is_deterministic(a)
        and is_deterministic(b)
        and len(reachable(a, a.initials)) == len(a.states)
        and len(reachable(b, b.initials)) == len(b.states)
    ):
        return canonical_key(a) == canonical_key(b)
    from networkx.algorithms.isomorphism import DiGraphMatcher

    return DiGraphMatcher(
        _graph(a), _graph(b), node_match=lambda x, y: x == y, edge_match=lambda x, y: x == y
    ).is_isomorphic()


def _graph(a: BlockAutomaton):
    import networkx as nx

    g = nx.DiGraph()
    for q in a.states:
        g.add_node(q, initial=q in a.initials, final=q in a.finals)
    labels: dict[tuple[int, int], list[str]] = {}
    for p, b, q in a.sorted_transitions:
        labels.setdefault((p, q), []).append(b)
    for (p, q), bs in labels.items():
        g.add_edge(p, q, labels=tuple(bs))
    return g


def words(alphabet: str, max_len: int) -> Iterator[str]:
    """All words over ``alphabet`` up to ``max_len``, shortlex order."""
    layer = [""]
    for _ in range(max_len + 1):
        yield from layer
        layer = [w + c for w in layer for c in alphabet]
