import re

from kblock.automaton import EMPTY, automaton
from kblock.dot import emit_dot
from support import DATA, load


def test_golden_file():
    assert emit_dot(load("dfa_M_T2")) == (DATA / "dfa_M_T2.dot").read_text()


def test_empty_automaton_has_no_nodes():
    text = emit_dot(EMPTY)
    assert text.startswith("digraph") and "shape" not in text and "->" not in text


def test_shapes_and_initial_arrow():
    text = emit_dot(load("dfa_M"))
    assert len(re.findall(r"shape=(?:double)?circle", text)) == 3
    assert '"2" [shape=doublecircle];' in text
    assert '"i" [shape=circle];' in text
    assert '"__init0" -> "i";' in text


def test_parallel_labels_are_joined():
    assert '"2" -> "1" [label="aa, b, bb"];' in emit_dot(load("dfa_M_T2"))


def test_stable():
    a = load("running_A")
    assert emit_dot(a) == emit_dot(a)


def test_quoting():
    a = automaton([('a"b', "x", "q")], 'a"b', ["q"])
    assert r'"a\"b"' in emit_dot(a)


def test_balanced_braces():
    text = emit_dot(load("running_completion"))
    assert text.count("{") == text.count("}") == 1
    assert all(line.endswith((";", "{", "}")) for line in text.splitlines())
