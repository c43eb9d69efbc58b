import os

import pytest

from mimicnet.errors import InputError
from mimicnet.graphio import (WeightedGraph, atomic_write, format_graph, parse_graph,
                              read_graph, relabel_for_output, write_graph)

TEXT = """c demo
p 4 3 2
e 1 2 3
e 3 2 1

e 3 4 2
t 4
t 1
"""


def test_parse_and_format_round_trip(tmp_path):
    g = parse_graph(TEXT)
    assert g.n == 4 and g.terminals == (4, 1) and g.comments == ("demo",)
    assert g.edges == [(1, 2, 3), (3, 2, 1), (3, 4, 2)]
    out = format_graph(g)
    assert out == "c demo\np 4 3 2\ne 1 2 3\ne 2 3 1\ne 3 4 2\nt 4\nt 1\n"
    assert parse_graph(out).edges == [(1, 2, 3), (2, 3, 1), (3, 4, 2)]
    path = tmp_path / "g.txt"
    write_graph(path, g)
    assert read_graph(path).terminals == (4, 1)


@pytest.mark.parametrize("text, line", [
    ("x 1 2 3\n", "line 1"),
    ("p 2 1\n", "line 1"),
    ("p 2 1 0\ne 1 3 1\n", "line 2"),
    ("p 2 1 0\ne 1 2 0\n", "line 2"),
    ("p 2 1 0\ne 1 2 1.5\n", "line 2"),
    ("p 2 0 2\nt 1\nt 1\n", "line 3"),
    ("e 1 2 1\n", "line 1"),
    ("p 2 1 0\np 2 1 0\n", "line 2"),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(InputError, match=line):
        parse_graph(text)


def test_parse_count_mismatch():
    with pytest.raises(InputError, match="promises 2 edges"):
        parse_graph("p 2 2 0\ne 1 2 1\n")
    with pytest.raises(InputError, match="missing"):
        parse_graph("c only a comment\n")


def test_read_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_graph(tmp_path / "nope.txt")


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    path = tmp_path / "out.txt"
    path.write_text("old")
    atomic_write(path, "new\n")
    assert path.read_text() == "new\n"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_relabel_puts_terminals_first_and_aggregates():
    g = relabel_for_output({10, 20, 30, 40}, [(10, 20), (20, 10), (30, 40)], (30, 10))
    assert g.terminals == (1, 2)
    # 30 -> 1, 10 -> 2, 20 -> 3, 40 -> 4
    assert g.edges == [(1, 4, 1), (2, 3, 2)]
    assert isinstance(g, WeightedGraph) and g.n == 4
