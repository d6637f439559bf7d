"""Finite cube complexes with labelled, possibly looped, edges.

A cube is a label tuple plus its ``2**k`` corners indexed by bitmask.  Edges
with a vertex label are oriented and the coordinate for such a label runs from
tail (bit 0) to head (bit 1); partition-labelled edges are unoriented.  Since
a vertex carries at most one edge end per (label, direction), a cube is
pinned down by its labels and the set of (corner, head-bits) pairs, which is
what :func:`Cube.key` records.  That key stays canonical when loops make
corners coincide.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple

import networkx as nx

OUT, IN, BOTH = "out", "in", "*"


class ComplexError(ValueError):
    pass


class Label(NamedTuple):
    """An edge label: a generator (``kind == 'v'``) or a partition (``kind == 'p'``)."""

    kind: str
    value: Hashable

    @property
    def is_vertex(self) -> bool:
        return self.kind == "v"

    @classmethod
    def vertex(cls, v: str) -> "Label":
        return cls("v", v)

    @classmethod
    def part(cls, p) -> "Label":
        return cls("p", p)


class Edge(NamedTuple):
    tail: int
    head: int
    label: Label

    @property
    def oriented(self) -> bool:
        return self.label.is_vertex

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Cube:
    labels: tuple[Label, ...]
    corners: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def key(self) -> tuple:
        vbits = [i for i, a in enumerate(self.labels) if a.is_vertex]
        pairs = frozenset(
            (c, frozenset(self.labels[i] for i in vbits if mask >> i & 1))
            for mask, c in enumerate(self.corners)
        )
        return frozenset(self.labels), pairs

    @property
    def label_set(self) -> frozenset[Label]:
        return frozenset(self.labels)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.corners)

    def face(self, i: int, bit: int) -> "Cube":
        """The codimension-one face with coordinate ``i`` fixed to ``bit``."""
        k = self.dim
        labels = self.labels[:i] + self.labels[i + 1:]
        corners = []
        for m in range(1 << (k - 1)):
            low = m & ((1 << i) - 1)
            high = (m >> i) << (i + 1)
            corners.append(self.corners[high | (bit << i) | low])
        return Cube(labels, tuple(corners))

    def faces(self) -> Iterator["Cube"]:
        for i in range(self.dim):
            for bit in (0, 1):
                yield self.face(i, bit)

    def link_simplex(self, mask: int) -> frozenset[tuple[Label, str]]:
        """Edge ends spanned by this cube at the corner ``mask``."""
        out = []
        for i, a in enumerate(self.labels):
            if a.is_vertex:
                out.append((a, IN if mask >> i & 1 else OUT))
            else:
                out.append((a, BOTH))
        return frozenset(out)

    def map_vertices(self, f: Callable[[int], int]) -> "Cube":
        return Cube(self.labels, tuple(f(c) for c in self.corners))


class CubeComplex:
    """Vertices ``0..n-1`` plus a dictionary of cubes of every dimension (vertices included)."""

    def __init__(self, n_vertices: int, cubes: Iterable[Cube], commutes: Callable[[Label, Label], bool],
                 label_sort: Callable[[Label], tuple] | None = None, vertex_names: list | None = None):
        self.n_vertices = n_vertices
        self.commutes = commutes
        self.label_sort = label_sort or (lambda a: (a.kind, str(a.value)))
        self.vertex_names = vertex_names if vertex_names is not None else list(range(n_vertices))
        self.cubes: dict[tuple, Cube] = {}
        for v in range(n_vertices):
            self._add(Cube((), (v,)))
        for c in cubes:
            self._add(c)
        self.edges: list[Edge] = [Edge(c.corners[0], c.corners[1], c.labels[0]) for c in self.cubes_of_dim(1)]
        self._index_edges()

    def _add(self, c: Cube) -> None:
        self.cubes.setdefault(c.key, c)

    def _index_edges(self) -> None:
        self.incidence: list[dict[tuple[Label, str], Edge]] = [dict() for _ in range(self.n_vertices)]
        for e in self.edges:
            if e.oriented:
                ends = [(e.tail, OUT), (e.head, IN)]
            else:
                ends = [(e.tail, BOTH), (e.head, BOTH)]
            for v, d in ends:
                slot = (e.label, d)
                if slot in self.incidence[v]:
                    raise ComplexError(f"two edges labelled {e.label} meet vertex {v}")
                self.incidence[v][slot] = e

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Edge], commutes, label_sort=None,
                   vertex_names=None) -> "CubeComplex":
        """Fill in every cube whose 1-skeleton is present with pairwise commuting labels."""
        edges = list(edges)
        skeleton = cls(n_vertices, [Cube((e.label,), (e.tail, e.head)) for e in edges], commutes,
                       label_sort, vertex_names)
        cubes = skeleton._fill_cubes()
        return cls(n_vertices, cubes, commutes, label_sort, vertex_names)

    def forward(self, v: int, a: Label) -> int | None:
        """Endpoint reached from ``v`` by moving along ``a`` in its positive coordinate direction."""
        d = OUT if a.is_vertex else BOTH
        e = self.incidence[v].get((a, d))
        return None if e is None else other_end(e, v, d)

    def _fill_cubes(self) -> list[Cube]:
        found: dict[tuple, Cube] = {}
        for x in range(self.n_vertices):
            moves = sorted(
                (a for (a, d) in self.incidence[x] if d != IN),
                key=self.label_sort,
            )

            def grow(labels: tuple[Label, ...], corners: tuple[int, ...], start: int) -> None:
                for j in range(start, len(moves)):
                    a = moves[j]
                    if not all(self.commutes(a, b) for b in labels):
                        continue
                    new = self._extend(labels, corners, a)
                    if new is None:
                        continue
                    c = Cube(labels + (a,), new)
                    found.setdefault(c.key, c)
                    grow(c.labels, c.corners, j + 1)

            grow((), (x,), 0)
        return list(found.values())

    def _extend(self, labels, corners, a) -> tuple[int, ...] | None:
        """Corners of ``cube x a`` if every new edge exists and the new squares close."""
        k = len(labels)
        top = []
        for m in range(1 << k):
            y = self.forward(corners[m], a)
            if y is None:
                return None
            top.append(y)
        # the far facet must itself be a cube with the same labels
        for m in range(1 << k):
            for i in range(k):
                if not m >> i & 1 and self.forward(top[m], labels[i]) != top[m | 1 << i]:
                    return None
        return tuple(corners) + tuple(top)

    # -- queries ---------------------------------------------------------

    def cubes_of_dim(self, k: int) -> list[Cube]:
        return [c for c in self.cubes.values() if c.dim == k]

    @property
    def dimension(self) -> int:
        return max(c.dim for c in self.cubes.values()) if self.cubes else -1

    def counts(self) -> list[int]:
        n = [0] * (self.dimension + 1)
        for c in self.cubes.values():
            n[c.dim] += 1
        return n

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    @property
    def labels(self) -> list[Label]:
        return sorted({e.label for e in self.edges}, key=self.label_sort)

    def edges_with_label(self, a: Label) -> list[Edge]:
        return [e for e in self.edges if e.label == a]

    def cubes_with_labels(self, labels: Iterable[Label]) -> list[Cube]:
        want = frozenset(labels)
        return [c for c in self.cubes.values() if c.label_set == want]

    def maximal_cubes(self) -> list[Cube]:
        faces = set()
        for c in self.cubes.values():
            for f in c.faces():
                faces.add(f.key)
        return [c for c in self.cubes.values() if c.key not in faces]

    def closure(self, cubes: Iterable[Cube]) -> dict[tuple, Cube]:
        out: dict[tuple, Cube] = {}
        stack = list(cubes)
        while stack:
            c = stack.pop()
            if c.key in out:
                continue
            out[c.key] = c
            stack.extend(c.faces())
        return out

    def subcomplex_vertices_connected(self, cubes: dict[tuple, Cube]) -> bool:
        g = nx.MultiGraph()
        for c in cubes.values():
            if c.dim == 0:
                g.add_node(c.corners[0])
            elif c.dim == 1:
                g.add_edge(c.corners[0], c.corners[1])
        return g.number_of_nodes() > 0 and nx.is_connected(g)

    def one_skeleton(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.n_vertices))
        for e in self.edges:
            g.add_edge(e.tail, e.head, label=e.label)
        return g

    # -- local structure -------------------------------------------------

    def vertex_link(self, v: int) -> tuple[set, set[frozenset]]:
        """Vertices (edge ends) and simplices of the link of ``v``."""
        simplices: set[frozenset] = set()
        for c in self.cubes.values():
            if c.dim == 0:
                continue
            for mask, corner in enumerate(c.corners):
                if corner == v:
                    simplices.add(c.link_simplex(mask))
        verts = {x for s in simplices for x in s}
        return verts, simplices

    def link_is_flag(self, v: int) -> bool:
        """Every clique in the link's 1-skeleton spans a simplex, and simplices are determined by vertices."""
        verts, simplices = self.vertex_link(v)
        # two distinct cubes giving the same simplex would make the link non-simplicial
        count = defaultdict(int)
        for c in self.cubes.values():
            for mask, corner in enumerate(c.corners):
                if corner == v and c.dim:
                    count[c.link_simplex(mask)] += 1
        if any(n > 1 for n in count.values()):
            return False
        g = nx.Graph()
        g.add_nodes_from(verts)
        for s in simplices:
            if len(s) == 2:
                g.add_edge(*s)
        for clique in nx.enumerate_all_cliques(g):
            if len(clique) >= 2 and frozenset(clique) not in simplices:
                return False
        return True

    def free_face_collapse(self, cubes: dict[tuple, Cube]) -> dict[tuple, Cube]:
        """Greedy elementary collapses; returns what is left."""
        cells = dict(cubes)
        while True:
            cofaces = defaultdict(list)
            for c in cells.values():
                for f in c.faces():
                    if f.key in cells:
                        cofaces[f.key].append(c.key)
            for fk, cs in sorted(cofaces.items(), key=lambda kv: -cells[kv[0]].dim):
                if len(cs) == 1 and cells[cs[0]].dim == cells[fk].dim + 1:
                    # a face shared twice by a single cube (a loop) is not free
                    c = cells[cs[0]]
                    if sum(1 for f in c.faces() if f.key == fk) != 1:
                        continue
                    del cells[fk]
                    del cells[cs[0]]
                    break
            else:
                return cells


def find_isomorphism(x: CubeComplex, y: CubeComplex) -> dict[int, int] | None:
    """A label-preserving cube complex isomorphism ``x -> y`` as a vertex bijection, or None."""
    if x.n_vertices != y.n_vertices or sorted(x.counts()) != sorted(y.counts()):
        return None
    if x.n_vertices == 0:
        return {}
    ykeys = set(y.cubes)
    for target in range(y.n_vertices):
        phi = _propagate(x, y, 0, target)
        if phi is None or len(set(phi.values())) != x.n_vertices:
            continue
        if {c.map_vertices(phi.__getitem__).key for c in x.cubes.values()} == ykeys:
            return phi
    return None


def _propagate(x: CubeComplex, y: CubeComplex, start: int, target: int) -> dict[int, int] | None:
    # at most one edge end per (label, direction) at a vertex, so one choice fixes a component
    phi = {start: target}
    stack = [start]
    while stack:
        u = stack.pop()
        inc_x, inc_y = x.incidence[u], y.incidence[phi[u]]
        if set(inc_x) != set(inc_y):
            return None
        for slot, e in inc_x.items():
            ux = other_end(e, u, slot[1])
            uy = other_end(inc_y[slot], phi[u], slot[1])
            if ux in phi:
                if phi[ux] != uy:
                    return None
            else:
                phi[ux] = uy
                stack.append(ux)
    if len(phi) != x.n_vertices:
        return None
    return phi


def other_end(e: Edge, v: int, direction: str) -> int:
    if direction == OUT:
        return e.head
    if direction == IN:
        return e.tail
    return e.head if e.tail == v else e.tail


def label_commutation_ok(c: CubeComplex) -> bool:
    """Every cube's labels pairwise commute."""
    return all(c.commutes(a, b) for cube in c.cubes.values() for a, b in combinations(cube.labels, 2))
