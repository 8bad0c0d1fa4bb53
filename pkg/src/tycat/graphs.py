"""Principal and dual principal graphs of the quantum double subfactor
attached to a Tambara-Yamagami category over an odd group.

The graphs are pure combinatorics on sector names: vertices carry string
tags built from group elements, edges follow the explicit induction-
restriction description, and the builders assert the expected vertex,
degree, and edge counts.  Output formats are deterministic DOT and a JSON
adjacency form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedError
from .groups import FinAbGroup, GroupElement, positive_set

__all__ = [
    "BipartiteGraph",
    "principal_graph",
    "dual_principal_graph",
    "emit_dot",
]


def _tag(g: GroupElement) -> str:
    return ",".join(map(str, g.coords)) if g.coords else "0"


@dataclass(frozen=True)
class BipartiteGraph:
    name: str
    even: tuple[str, ...]
    odd: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # (even, odd)
    star: str

    def __post_init__(self):
        even, odd = set(self.even), set(self.odd)
        assert len(even) == len(self.even) and len(odd) == len(self.odd)
        assert self.star in even or self.star in odd
        assert len(set(self.edges)) == len(self.edges), "unexpected multi-edge"
        for e, o in self.edges:
            assert e in even and o in odd

    def degree(self, v: str) -> int:
        return sum(1 for e, o in self.edges if v in (e, o))

    def is_connected(self) -> bool:
        if not self.even and not self.odd:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.even + self.odd}
        for e, o in self.edges:
            adj[e].add(o)
            adj[o].add(e)
        seen = {self.star}
        frontier = [self.star]
        while frontier:
            cur = frontier.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return len(seen) == len(adj)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "even_vertices": list(self.even),
            "odd_vertices": list(self.odd),
            "edges": [list(e) for e in self.edges],
            "star": self.star,
        }


def dual_principal_graph(A: FinAbGroup) -> BipartiteGraph:
    """Even vertices (id,g), (alpha,g), (sigma_d,g); odd vertices iota(g);
    iota(g) joins (id,g), (alpha,g), and (sigma_{|g-h|}, h) for h != g."""
    n = A.order
    if n % 2 == 0:
        raise UnsupportedError("these graphs are defined for odd group order")
    pos = positive_set(A)
    els = A.elements()
    even = (
        [f"(id,{_tag(g)})" for g in els]
        + [f"(alpha,{_tag(g)})" for g in els]
        + [f"(sigma{_tag(d)},{_tag(g)})" for d in pos.members for g in els]
    )
    odd = [f"iota({_tag(g)})" for g in els]
    edges = []
    for g in els:
        og = f"iota({_tag(g)})"
        edges.append((f"(id,{_tag(g)})", og))
        edges.append((f"(alpha,{_tag(g)})", og))
        for h in els:
            if h == g:
                continue
            d = pos.fold(g - h)
            edges.append((f"(sigma{_tag(d)},{_tag(h)})", og))
    graph = BipartiteGraph(
        f"ty_dual_principal_{n}", tuple(even), tuple(odd), tuple(edges),
        f"(id,{_tag(A.zero())})",
    )
    k = (n - 1) // 2
    assert len(graph.even) == n * (2 + k)
    assert len(graph.odd) == n
    assert len(graph.edges) == n * (n + 1)
    for v in graph.odd:
        assert graph.degree(v) == n + 1
    return graph


def principal_graph(A: FinAbGroup) -> BipartiteGraph:
    """Even vertices the pairs (g,h) plus one extra vertex of degree |A|;
    odd vertices iota(g); iota(g) joins (h, h+g) for every h, and the
    extra vertex."""
    n = A.order
    if n % 2 == 0:
        raise UnsupportedError("these graphs are defined for odd group order")
    els = A.elements()
    even = [f"({_tag(g)},{_tag(h)})" for g in els for h in els] + ["(rho,rho)"]
    odd = [f"iota({_tag(g)})" for g in els]
    edges = []
    for g in els:
        og = f"iota({_tag(g)})"
        for h in els:
            edges.append((f"({_tag(h)},{_tag(h + g)})", og))
        edges.append(("(rho,rho)", og))
    graph = BipartiteGraph(
        f"ty_principal_{n}", tuple(even), tuple(odd), tuple(edges),
        f"({_tag(A.zero())},{_tag(A.zero())})",
    )
    assert len(graph.even) == n * n + 1
    assert len(graph.odd) == n
    assert len(graph.edges) == n * (n + 1)
    for v in graph.odd:
        assert graph.degree(v) == n + 1
    assert graph.degree("(rho,rho)") == n
    return graph


def emit_dot(graph: BipartiteGraph) -> str:
    """Deterministic DOT text: even vertices filled, odd hollow, the
    distinguished vertex marked with a doubled border."""
    lines = [f'graph "{graph.name}" {{', "  node [shape=circle];"]
    for v in graph.even:
        star = ", peripheries=2" if v == graph.star else ""
        lines.append(f'  "{v}" [style=filled, fillcolor=black{star}];')
    for v in graph.odd:
        star = ", peripheries=2" if v == graph.star else ""
        lines.append(f'  "{v}" [style=solid{star}];')
    for e, o in graph.edges:
        lines.append(f'  "{e}" -- "{o}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
