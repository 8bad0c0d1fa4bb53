import pytest

from tycat.errors import UnsupportedError
from tycat.graphs import dual_principal_graph, emit_dot, principal_graph
from tycat.groups import FinAbGroup


def test_n3_counts():
    g = principal_graph(FinAbGroup.of(3))
    assert len(g.even) == 10 and len(g.odd) == 3 and len(g.edges) == 12
    assert g.degree("(rho,rho)") == 3

    d = dual_principal_graph(FinAbGroup.of(3))
    assert len(d.even) == 9 and len(d.odd) == 3 and len(d.edges) == 12
    assert all(d.degree(v) == 4 for v in d.odd)


def test_n1_degenerate():
    g = principal_graph(FinAbGroup.of(1))
    assert len(g.even) == 2 and len(g.odd) == 1 and len(g.edges) == 2
    d = dual_principal_graph(FinAbGroup.of(1))
    assert len(d.even) == 2 and len(d.odd) == 1 and len(d.edges) == 2


def test_n5_counts():
    g = principal_graph(FinAbGroup.of(5))
    assert len(g.even) == 26 and len(g.odd) == 5 and len(g.edges) == 30
    d = dual_principal_graph(FinAbGroup.of(5))
    assert len(d.even) == 20 and len(d.odd) == 5 and len(d.edges) == 30
    assert all(d.degree(v) == 6 for v in d.odd)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11, 13, 15])
def test_formulas_all_odd(n):
    group = FinAbGroup.of(n)
    k = (n - 1) // 2
    g = principal_graph(group)
    assert (len(g.even), len(g.odd), len(g.edges)) == (n * n + 1, n, n * (n + 1))
    d = dual_principal_graph(group)
    assert (len(d.even), len(d.odd), len(d.edges)) == (n * (2 + k), n, n * (n + 1))
    # handshake: even degrees sum to the edge count on both sides
    assert sum(g.degree(v) for v in g.even) == len(g.edges)
    assert sum(g.degree(v) for v in g.odd) == len(g.edges)
    assert g.is_connected() and d.is_connected()


def test_nonabelian_grid_group():
    d = dual_principal_graph(FinAbGroup.of(3, 3))
    assert len(d.even) == 9 * 6 and len(d.odd) == 9


def test_even_rejected():
    with pytest.raises(UnsupportedError):
        principal_graph(FinAbGroup.of(2))


def test_dot_output():
    g = principal_graph(FinAbGroup.of(1))
    dot = emit_dot(g)
    assert dot == emit_dot(principal_graph(FinAbGroup.of(1)))  # deterministic
    assert dot.startswith('graph "ty_principal_1"')
    assert dot.count("--") == 2
    assert "peripheries=2" in dot
    assert dot.endswith("}\n")
    # every quoted vertex declared before use, no stray characters
    lines = dot.splitlines()
    assert lines[1] == "  node [shape=circle];"


def test_dot_n3_structure():
    dot = emit_dot(dual_principal_graph(FinAbGroup.of(3)))
    assert dot.count("--") == 12
    assert dot.count("style=filled") == 9
    assert dot.count("style=solid") == 3
