"""Graphviz export."""

from __future__ import annotations

from .automaton import BlockAutomaton


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(a: BlockAutomaton, name: str = "automaton") -> str:
    """DOT digraph; parallel transitions share one edge with comma-joined labels."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for q in a.states:
        shape = "doublecircle" if q in a.finals else "circle"
        lines.append(f"  {_q(a.name(q))} [shape={shape}];")
    for n, q in enumerate(sorted(a.initials)):
        hidden = _q(f"__init{n}")
        lines.append(f"  {hidden} [shape=none, label=\"\", width=0, height=0];")
        lines.append(f"  {hidden} -> {_q(a.name(q))};")
    edges: dict[tuple[int, int], list[str]] = {}
    for p, b, q in a.sorted_transitions:
        edges.setdefault((p, q), []).append(b)
    for (p, q), labels in edges.items():
        lines.append(f"  {_q(a.name(p))} -> {_q(a.name(q))} [label={_q(', '.join(labels))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
