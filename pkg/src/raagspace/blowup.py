"""Blowups of the Salvetti complex along a compatible family of partitions.

Vertices are regions (one side per partition, pairwise consistent).  A
partition edge joins regions that differ in exactly that side; a generator
edge labelled ``v`` runs from ``R*v`` to each terminal region ``R`` for ``v``.
Cubes are filled wherever a 1-skeleton with pairwise commuting labels closes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .cubecomplex import BOTH, IN, OUT, ComplexError, Cube, CubeComplex, Edge, Label, find_isomorphism
from .graph_core import DefiningGraph
from .partitions import PLUS, PartitionFamily, SignedVertex, WPartition, commute, consistent

Region = tuple[str, ...]
DEFAULT_REGION_CAP = 10000


class BlowupError(ValueError):
    pass


class RegionCapExceeded(BlowupError):
    pass


def label_max(a: Label) -> frozenset[str]:
    return frozenset([a.value]) if a.is_vertex else a.value.max


def labels_commute(g: DefiningGraph, a: Label, b: Label) -> bool:
    """Distinct adjacent maximal vertices; a label never commutes with itself."""
    if a == b:
        return False
    return any(v != w and g.adjacent(v, w) for v in label_max(a) for w in label_max(b))


def flip(side: str) -> str:
    return "B" if side == "A" else "A"


def regions(fam: PartitionFamily, cap: int = DEFAULT_REGION_CAP) -> list[Region]:
    """All consistent side assignments, lexicographic in ('A' < 'B')."""
    ms = fam.members
    out: list[Region] = []

    def extend(prefix: tuple[str, ...]) -> None:
        i = len(prefix)
        if i == len(ms):
            out.append(prefix)
            if len(out) > cap:
                raise RegionCapExceeded(f"more than {cap} regions")
            return
        for s in ("A", "B"):
            if all(consistent(ms[j], prefix[j], ms[i], s) for j in range(i)):
                extend(prefix + (s,))

    extend(())
    return out


def is_consistent(fam: PartitionFamily, choice: dict[int, str]) -> bool:
    items = sorted(choice.items())
    return all(consistent(fam[i], si, fam[j], sj) for (i, si), (j, sj) in combinations(items, 2))


def extend_to_region(fam: PartitionFamily, choice: dict[int, str]) -> Region:
    """Greedy completion of a consistent partial choice, preferring side A."""
    if not is_consistent(fam, choice):
        raise BlowupError("partial choice of sides is inconsistent")
    full = dict(choice)
    for i in range(len(fam)):
        if i in full:
            continue
        for s in ("A", "B"):
            if all(consistent(fam[i], s, fam[j], sj) for j, sj in full.items()):
                full[i] = s
                break
        else:
            raise BlowupError("choice of sides does not extend to a region")
    return tuple(full[i] for i in range(len(fam)))


@dataclass
class Hyperplane:
    label: Label
    dual_edges: list[Edge]
    carrier: dict[tuple, Cube]


@dataclass
class CharacteristicCycle:
    vertex: str
    start: int
    edges: list[Edge]

    @property
    def labels(self) -> list[Label]:
        return [e.label for e in self.edges]


class Blowup(CubeComplex):
    """The cube complex built from a compatible family; ``Pi = ()`` gives the Salvetti complex."""

    def __init__(self, graph: DefiningGraph, family: PartitionFamily, cap: int = DEFAULT_REGION_CAP):
        if family.graph != graph:
            raise BlowupError("family belongs to another graph")
        self.graph = graph
        self.family = family
        self.regions = regions(family, cap)
        self.region_index = {r: i for i, r in enumerate(self.regions)}
        skeleton = CubeComplex(len(self.regions), [Cube((e.label,), (e.tail, e.head)) for e in self._edges()],
                               self.label_commutes, self.label_key, list(self.regions))
        super().__init__(len(self.regions), skeleton._fill_cubes(), self.label_commutes, self.label_key,
                         list(self.regions))

    # -- labels ----------------------------------------------------------

    def label_commutes(self, a: Label, b: Label) -> bool:
        return labels_commute(self.graph, a, b)

    @cached_property
    def _class_rank(self) -> dict[str, int]:
        g = self.graph
        rank = {}
        for i, cls in enumerate(_classes_in_order(g)):
            for v in cls:
                rank[v] = i
        return rank

    def label_key(self, a: Label) -> tuple:
        """Total order on labels refining the order on classes of maximal vertices."""
        g = self.graph
        rep = min(label_max(a), key=g.order_index.__getitem__)
        if a.is_vertex:
            return (self._class_rank[rep], g.order_index[rep], 0, 0)
        return (self._class_rank[rep], g.order_index[rep], 1, self.family.index(a.value))

    def all_labels(self) -> list[Label]:
        out = [Label.vertex(v) for v in self.graph.vertices] + [Label.part(p) for p in self.family]
        return sorted(out, key=self.label_key)

    def label_name(self, a: Label) -> str:
        return a.value if a.is_vertex else f"Q{self.family.index(a.value)}"

    def label_from_name(self, name: str) -> Label:
        if name in self.graph.position:
            return Label.vertex(name)
        if name.startswith("Q") and name[1:].isdigit() and int(name[1:]) < len(self.family):
            return Label.part(self.family[int(name[1:])])
        raise BlowupError(f"unknown label {name!r}")

    # -- 1-skeleton ------------------------------------------------------

    def _edges(self) -> list[Edge]:
        fam = self.family
        out = []
        for r, i in self.region_index.items():
            for k in range(len(fam)):
                r2 = r[:k] + (flip(r[k]),) + r[k + 1:]
                j = self.region_index.get(r2)
                if j is not None and i < j:
                    out.append(Edge(i, j, Label.part(fam[k])))
        for v in self.graph.vertices:
            for r in self.terminal_regions(v):
                out.append(Edge(self.region_index[self.switch(r, v)], self.region_index[r], Label.vertex(v)))
        return out

    def splitting_indices(self, v: str) -> list[int]:
        return [i for i, p in enumerate(self.family) if p.splits(v)]

    def commutes_with_vertex(self, p: WPartition, v: str) -> bool:
        return labels_commute(self.graph, Label.vertex(v), Label.part(p))

    def v_side(self, p: WPartition, v: str) -> str | None:
        return p.side_of(SignedVertex(v, PLUS))

    def is_terminal(self, r: Region, v: str) -> bool:
        return all(
            self.commutes_with_vertex(p, v) or r[i] == self.v_side(p, v)
            for i, p in enumerate(self.family)
        )

    def terminal_regions(self, v: str) -> list[Region]:
        return [r for r in self.regions if self.is_terminal(r, v)]

    def switch(self, r: Region, v: str) -> Region:
        """``R*v``: flip every partition that splits ``v``."""
        s = set(self.splitting_indices(v))
        out = tuple(flip(x) if i in s else x for i, x in enumerate(r))
        if out not in self.region_index:
            raise BlowupError(f"switching sides for {v} leaves the set of regions")
        return out

    def default_terminal_region(self, v: str) -> Region:
        choice = {
            i: self.v_side(p, v)
            for i, p in enumerate(self.family)
            if not self.commutes_with_vertex(p, v)
        }
        return extend_to_region(self.family, choice)

    # -- subcomplexes and hyperplanes ------------------------------------

    def e_subcomplex(self) -> dict[tuple, Cube]:
        """Cubes all of whose labels are partitions (vertices included)."""
        return {k: c for k, c in self.cubes.items() if all(not a.is_vertex for a in c.labels)}

    def hyperplanes(self) -> list[Hyperplane]:
        return [self.hyperplane(a) for a in self.labels]

    def hyperplane(self, a: Label) -> Hyperplane:
        dual = self.edges_with_label(a)
        if not dual:
            raise BlowupError(f"no hyperplane labelled {a}")
        return Hyperplane(a, dual, self.carrier(a))

    def carrier(self, a: Label) -> dict[tuple, Cube]:
        return self.closure(c for c in self.cubes.values() if a in c.label_set)

    def crossing_labels(self, a: Label) -> set[Label]:
        """Labels of hyperplanes meeting ``H_a``, read off the squares."""
        out = set()
        for c in self.cubes_of_dim(2):
            if a in c.label_set:
                out |= c.label_set - {a}
        return out

    def max_cube_for(self, labels: Iterable[Label]) -> Cube:
        want = frozenset(labels)
        for a, b in combinations(want, 2):
            if not self.label_commutes(a, b):
                raise BlowupError(f"labels {self.label_name(a)} and {self.label_name(b)} do not commute")
        for c in self.all_labels():
            if c not in want and all(self.label_commutes(c, a) for a in want):
                raise BlowupError(f"label set is not maximal: {self.label_name(c)} commutes with all of it")
        found = self.cubes_with_labels(want)
        if len(found) != 1:
            raise ComplexError(f"expected one cube with labels {sorted(map(self.label_name, want))}, found {len(found)}")
        return found[0]

    # -- collapse --------------------------------------------------------

    def collapse(self, i: int) -> tuple[CubeComplex, dict[int, int]]:
        """Collapse the carrier of ``H_Q`` for ``Q = family[i]`` onto the hyperplane."""
        if not 0 <= i < len(self.family):
            raise IndexError(f"partition index {i} out of range for a family of {len(self.family)}")
        return collapse_label(self, Label.part(self.family[i]))

    # -- characteristic cycles ---------------------------------------------

    def characteristic_cycle(self, v: str, start: Region | None = None) -> CharacteristicCycle:
        self.graph._check(v)
        if start is None:
            start = self.default_terminal_region(v)
        start = tuple(start)
        if start not in self.region_index or not self.is_terminal(start, v):
            raise BlowupError(f"{start} is not a terminal region for {v}")
        nest = {i: self.family[i] for i in self.splitting_indices(v)}
        vside = {i: p.side(self.v_side(p, v)) for i, p in nest.items()}
        here = self.region_index[start]
        path: list[Edge] = []
        remaining = set(nest)
        while remaining:
            inner = [i for i in remaining if not any(j != i and vside[j] < vside[i] for j in remaining)]
            i = min(inner, key=lambda k: self.label_key(Label.part(self.family[k])))
            e = self.incidence[here].get((Label.part(self.family[i]), BOTH))
            if e is None:
                raise BlowupError(f"no edge for partition {i} at region {self.regions[here]}")
            path.append(e)
            here = e.head if e.tail == here else e.tail
            remaining.discard(i)
        ev = self.incidence[here].get((Label.vertex(v), OUT))
        if ev is None or ev.head != self.region_index[start]:
            raise BlowupError(f"characteristic cycle for {v} does not close")
        path.append(ev)
        return CharacteristicCycle(v, self.region_index[start], path)

    # -- reporting -------------------------------------------------------

    def summary(self) -> dict:
        counts = self.counts()
        counts += [0] * (3 - len(counts))
        return {
            "vertices": counts[0],
            "edges": counts[1],
            "squares": counts[2],
            "cubes": counts,
            "euler": self.euler_characteristic(),
        }

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: (self.label_key(e.label), e.tail, e.head))

    def sorted_cubes(self) -> list[Cube]:
        return sorted(
            (c for c in self.cubes.values() if c.dim > 0),
            key=lambda c: (c.dim, sorted(self.label_key(a) for a in c.labels), c.corners),
        )

    def to_json(self) -> dict:
        name = self.label_name
        return {
            "family": [p.to_json() for p in self.family],
            "vertices": [{f"Q{i}": s for i, s in enumerate(r)} for r in self.regions],
            "edges": [
                {"from": e.tail, "to": e.head, "label": name(e.label), "oriented": e.oriented}
                for e in self.sorted_edges()
            ],
            "cubes": [
                {"labels": [name(a) for a in c.labels], "vertices": list(c.corners)}
                for c in self.sorted_cubes()
            ],
            "eSubcomplex": sorted(
                [list(c.corners) for c in self.e_subcomplex().values()], key=lambda x: (len(x), x)
            ),
            "summary": self.summary(),
        }

    def to_dot(self) -> str:
        lines = ["digraph blowup {", "  node [shape=circle];"]
        for i, r in enumerate(self.regions):
            lines.append(f'  {i} [label="{"".join(r) or "*"}"];')
        for e in self.sorted_edges():
            if e.oriented:
                attrs = f'label="{self.label_name(e.label)}", color="black", arrowhead="normal"'
            else:
                attrs = f'label="{self.label_name(e.label)}", color="blue", dir="none"'
            lines.append(f"  {e.tail} -> {e.head} [{attrs}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _classes_in_order(g: DefiningGraph) -> list[tuple[str, ...]]:
    seen = []
    for v in g.total_order:
        c = g.fold_class(v)
        if c not in seen:
            seen.append(c)
    return seen


def salvetti(g: DefiningGraph) -> Blowup:
    return Blowup(g, PartitionFamily(g, ()))


def build_blowup(g: DefiningGraph, fam: PartitionFamily | Sequence[WPartition], cap: int = DEFAULT_REGION_CAP) -> Blowup:
    if not isinstance(fam, PartitionFamily):
        fam = PartitionFamily(g, tuple(fam))
    return Blowup(g, fam, cap)


def collapse_label(x: CubeComplex, a: Label) -> tuple[CubeComplex, dict[int, int]]:
    """Quotient by the carrier of ``H_a``: identify ends of ``a``-edges, drop cubes containing ``a``."""
    if a.is_vertex:
        raise BlowupError("only partition hyperplanes are collapsed")
    uf = nx.utils.UnionFind(range(x.n_vertices))
    for e in x.edges_with_label(a):
        uf.union(e.tail, e.head)
    classes = sorted({min(s) for s in uf.to_sets()})
    rep = {v: classes.index(min(uf_set)) for uf_set in uf.to_sets() for v in uf_set}
    cubes = [c.map_vertices(rep.__getitem__) for c in x.cubes.values() if a not in c.label_set and c.dim > 0]
    names = [x.vertex_names[c] for c in classes]
    y = CubeComplex(len(classes), cubes, x.commutes, x.label_sort, names)
    return y, rep


def isomorphic(x: CubeComplex, y: CubeComplex) -> bool:
    return find_isomorphism(x, y) is not None


def is_twist_dominant_label(g: DefiningGraph, a: Label) -> bool:
    m = label_max(a)
    return len(m) == 1 and g.is_twist_dominant(next(iter(m)))
