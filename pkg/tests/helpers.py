"""Graph fixtures and brute-force oracles shared by the test modules.

The oracles deliberately avoid the library's own machinery: partitions are
found by scanning every three-way split of the signed generators, and cliques
come from networkx.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
from networkx.generators.atlas import graph_atlas_g

from raagspace.graph_core import DefiningGraph
from raagspace.partitions import MINUS, PLUS, SignedVertex, WPartition, compatible, enumerate_all_partitions


def graph(vertices, edges=()) -> DefiningGraph:
    return DefiningGraph.from_edges(list(vertices), [tuple(e) for e in edges])


def gamma0() -> DefiningGraph:
    """Path a-b-c plus an isolated vertex d."""
    return graph("abcd", ["ab", "bc"])


def four_cycle() -> DefiningGraph:
    return graph("abcd", ["ab", "bc", "cd", "da"])


def figure_one() -> DefiningGraph:
    edges = [("v", "u1"), ("u1", "w1"), ("w1", "u2"), ("u2", "v"), ("u1", "u3"), ("u3", "w3"),
             ("w3", "u2"), ("u2", "u3"), ("u1", "w2"), ("y", "w2"), ("w2", "z"), ("u1", "x"),
             ("v", "u3"), ("u3", "w2"), ("u3", "w1"), ("w2", "w3"), ("w2", "u2")]
    return graph(["v", "u1", "u2", "u3", "w1", "w2", "w3", "x", "y", "z"], edges)


def twin_graph() -> DefiningGraph:
    """a and b are not twist-related but share the upper link {w}, giving forced non-right angles."""
    return graph("abwxy", ["ab", "aw", "bw", "ax", "by", "wx", "wy"])


def sv(text: str) -> list[SignedVertex]:
    """'a b- c' -> signed vertices; a trailing '-' marks an inverse."""
    return [SignedVertex(t.rstrip("-"), MINUS if t.endswith("-") else PLUS) for t in text.split()]


def example_partitions(g: DefiningGraph) -> dict[str, WPartition]:
    return {
        "W": WPartition.from_sides(g, sv("b d"), sv("b- d-")),
        "Q": WPartition.from_sides(g, sv("a d"), sv("a- d- c c-")),
        "R": WPartition.from_sides(g, sv("a c d"), sv("a- d- c-")),
    }


def from_nx(G: nx.Graph) -> DefiningGraph:
    names = {v: chr(ord("a") + i) for i, v in enumerate(sorted(G.nodes))}
    return graph([names[v] for v in sorted(G.nodes)], [(names[u], names[v]) for u, v in G.edges])


@lru_cache(maxsize=None)
def atlas_graphs(max_vertices: int) -> tuple[DefiningGraph, ...]:
    """Every graph with at most ``max_vertices`` vertices, one per isomorphism class."""
    return tuple(from_nx(G) for G in graph_atlas_g() if G.number_of_nodes() <= max_vertices)


@lru_cache(maxsize=None)
def census_graphs() -> tuple[DefiningGraph, ...]:
    """All graphs up to 5 vertices plus every 7th atlas graph on 6 or 7 vertices."""
    small = [G for G in graph_atlas_g() if G.number_of_nodes() <= 5]
    big = [G for G in graph_atlas_g() if G.number_of_nodes() in (6, 7)][::7]
    extra = [nx.complete_graph(7), nx.cycle_graph(7), nx.empty_graph(7)]
    return tuple(from_nx(G) for G in small + big + extra)


def families(g: DefiningGraph, max_size: int = 2):
    """The empty family, every singleton and every compatible pair (if allowed)."""
    ps = enumerate_all_partitions(g)
    yield ()
    if max_size >= 1:
        for p in ps:
            yield (p,)
    if max_size >= 2:
        for p, q in itertools.combinations(ps, 2):
            if compatible(p, q):
                yield (p, q)


# -- oracles -------------------------------------------------------------------


def clique_counts(g: DefiningGraph) -> list[int]:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(tuple(e) for e in g.edges)
    counts = [1]
    for c in nx.enumerate_all_cliques(G):
        while len(counts) <= len(c):
            counts.append(0)
        counts[len(c)] += 1
    return counts


def _components_outside_star(g: DefiningGraph, m: str) -> list[set[str]]:
    adj = {v: set() for v in g.vertices}
    for e in g.edges:
        x, y = tuple(e)
        adj[x].add(y)
        adj[y].add(x)
    star = adj[m] | {m}
    rest = [v for v in g.vertices if v not in star]
    seen, comps = set(), []
    for v in rest:
        if v in seen:
            continue
        comp, todo = set(), [v]
        while todo:
            x = todo.pop()
            if x in comp:
                continue
            comp.add(x)
            todo.extend(y for y in adj[x] if y not in star)
        seen |= comp
        comps.append(comp)
    return comps


def brute_force_partitions(g: DefiningGraph) -> set[tuple[frozenset, frozenset, frozenset]]:
    """All Gamma-Whitehead partitions, as unordered-side triples, by exhaustive search."""
    signed = [SignedVertex(v, s) for v in g.vertices for s in (PLUS, MINUS)]
    adj = {v: {w for w in g.vertices if frozenset((v, w)) in g.edges} for v in g.vertices}
    found = set()
    for labels in itertools.product((0, 1, 2), repeat=len(signed)):
        p = frozenset(x for x, t in zip(signed, labels) if t == 0)
        q = frozenset(x for x, t in zip(signed, labels) if t == 1)
        lk = frozenset(x for x, t in zip(signed, labels) if t == 2)
        if len(p) < 2 or len(q) < 2:
            continue
        for m in g.vertices:
            if lk != frozenset(x for x in signed if x.vertex in adj[m]):
                continue
            mp, mm = SignedVertex(m, PLUS), SignedVertex(m, MINUS)
            if not ((mp in p and mm in q) or (mp in q and mm in p)):
                continue
            ok = True
            for comp in _components_outside_star(g, m):
                if len(comp) < 2:
                    continue
                elems = {SignedVertex(v, s) for v in comp for s in (PLUS, MINUS)}
                if not (elems <= p or elems <= q):
                    ok = False
                    break
            if ok:
                found.add((min(p, q, key=sorted_key), max(p, q, key=sorted_key), lk))
                break
    return found


def sorted_key(side: frozenset) -> tuple:
    return tuple(sorted((x.vertex, x.sign) for x in side))


def as_triple(p: WPartition) -> tuple[frozenset, frozenset, frozenset]:
    a, b = p.side_a, p.side_b
    return (min(a, b, key=sorted_key), max(a, b, key=sorted_key), p.link)
