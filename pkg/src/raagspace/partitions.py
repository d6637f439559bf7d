"""Gamma-Whitehead partitions of the signed generators.

A partition is stored in canonical form: ``side_a`` is the side holding ``v+``
for the least split vertex ``v`` in the graph's total order.  Equality and
hashing use only the three sets, so partitions with several bases compare
equal however they were produced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple

import networkx as nx

from .graph_core import DefiningGraph, GraphError

PLUS, MINUS = 1, -1

LESS_F = "LessF"
LESS_T = "LessT"
GREATER_F = "GreaterF"
GREATER_T = "GreaterT"
EQUIVALENT = "Equivalent"
INCOMPARABLE = "Incomparable"


class PartitionError(ValueError):
    """Sets that do not form a Gamma-Whitehead partition."""


class SignedVertex(NamedTuple):
    vertex: str
    sign: int

    def inverse(self) -> "SignedVertex":
        return SignedVertex(self.vertex, -self.sign)

    def __str__(self) -> str:
        return self.vertex if self.sign == PLUS else self.vertex + "^-1"

    def encode(self) -> list:
        return [self.vertex, "+" if self.sign == PLUS else "-"]

    @classmethod
    def decode(cls, item) -> "SignedVertex":
        try:
            v, s = item
        except (TypeError, ValueError):
            raise PartitionError(f"bad signed vertex {item!r}") from None
        if s not in ("+", "-"):
            raise PartitionError(f"sign must be '+' or '-', got {s!r}")
        return cls(v, PLUS if s == "+" else MINUS)


def signed(vs: Iterable[str]) -> frozenset[SignedVertex]:
    """``W^{+-}`` for a vertex set ``W``."""
    return frozenset(SignedVertex(v, s) for v in vs for s in (PLUS, MINUS))


def signed_vertices(g: DefiningGraph) -> frozenset[SignedVertex]:
    return signed(g.vertices)


def sv_key(g: DefiningGraph, x: SignedVertex) -> tuple[int, int]:
    return (g.position[x.vertex], 0 if x.sign == PLUS else 1)


def sorted_sv(g: DefiningGraph, xs: Iterable[SignedVertex]) -> list[SignedVertex]:
    return sorted(xs, key=lambda x: sv_key(g, x))


def doubled_graph(g: DefiningGraph) -> nx.Graph:
    """``Gamma^{+-}``: distinct signed generators are adjacent iff they commute and are not inverse."""
    dg = nx.Graph()
    for x in sorted_sv(g, signed_vertices(g)):
        dg.add_node(x)
    for e in g.edges:
        a, b = tuple(e)
        for sa in (PLUS, MINUS):
            for sb in (PLUS, MINUS):
                dg.add_edge(SignedVertex(a, sa), SignedVertex(b, sb))
    return dg


def m_components(g: DefiningGraph, m: str) -> list[frozenset[SignedVertex]]:
    """Components of ``Gamma^{+-} - lk(m)^{+-}`` other than ``{m}`` and ``{m^-1}``."""
    g._check(m)
    return list(_m_components(g, m))


@lru_cache(maxsize=4096)
def _m_components(g: DefiningGraph, m: str) -> tuple[frozenset[SignedVertex], ...]:
    dg = doubled_graph(g)
    dg.remove_nodes_from(signed(g.link(m)))
    comps = []
    for c in nx.connected_components(dg):
        c = frozenset(c)
        if c in ({SignedVertex(m, PLUS)}, {SignedVertex(m, MINUS)}):
            continue
        comps.append(c)
    comps.sort(key=lambda c: min(sv_key(g, x) for x in c))
    return tuple(comps)


def is_based_at(g: DefiningGraph, side_a: frozenset, side_b: frozenset, link: frozenset, m: str) -> bool:
    """Component-form definition of a partition based at ``m``."""
    if link != signed(g.link(m)):
        return False
    mp, mm = SignedVertex(m, PLUS), SignedVertex(m, MINUS)
    if not ((mp in side_a and mm in side_b) or (mp in side_b and mm in side_a)):
        return False
    for comp in _m_components(g, m):
        if not (comp <= side_a or comp <= side_b):
            return False
    return len(side_a) >= 2 and len(side_b) >= 2


@dataclass(frozen=True)
class WPartition:
    side_a: frozenset[SignedVertex]
    side_b: frozenset[SignedVertex]
    link: frozenset[SignedVertex]
    graph: DefiningGraph = field(compare=False, repr=False)

    @classmethod
    def from_sides(cls, g: DefiningGraph, side: Iterable, other: Iterable, link: Iterable | None = None) -> "WPartition":
        """Validate three sets and return the canonical partition."""
        p = frozenset(side)
        q = frozenset(other)
        universe = signed_vertices(g)
        for x in p | q:
            if x.vertex not in g.position:
                raise PartitionError(f"unknown vertex {x.vertex!r}")
        lk = universe - p - q if link is None else frozenset(link)
        if p & q or p & lk or q & lk or (p | q | lk) != universe:
            raise PartitionError("sides and link must partition the signed generators")
        if len(p) < 2 or len(q) < 2:
            raise PartitionError("partition is not thick")
        if not any(is_based_at(g, p, q, lk, m) for m in g.vertices):
            raise PartitionError("sets are not a Gamma-Whitehead partition for any base")
        return cls._canonical(g, p, q, lk)

    @classmethod
    def from_one_side(cls, g: DefiningGraph, side: Iterable, base: str) -> "WPartition":
        side = frozenset(side)
        lk = signed(g.link(base))
        return cls.from_sides(g, side, signed_vertices(g) - side - lk, lk)

    @classmethod
    def _canonical(cls, g, p, q, lk) -> "WPartition":
        split = [v for v in g.total_order if _splits(p, q, v)]
        first = SignedVertex(split[0], PLUS)
        if first in q:
            p, q = q, p
        return cls(p, q, lk, g)

    def canonical(self) -> "WPartition":
        return self._canonical(self.graph, self.side_a, self.side_b, self.link)

    def sides(self) -> tuple[frozenset, frozenset]:
        return self.side_a, self.side_b

    def side(self, which: str) -> frozenset[SignedVertex]:
        if which == "A":
            return self.side_a
        if which == "B":
            return self.side_b
        raise ValueError(f"side selector must be 'A' or 'B', got {which!r}")

    def side_of(self, x: SignedVertex) -> str | None:
        if x in self.side_a:
            return "A"
        if x in self.side_b:
            return "B"
        return None

    def splits(self, v: str) -> bool:
        return _splits(self.side_a, self.side_b, v)

    @cached_property
    def sing(self) -> frozenset[str]:
        return frozenset(v for v in self.graph.vertices if self.splits(v))

    @cached_property
    def max(self) -> frozenset[str]:
        g = self.graph
        s = self.sing
        return frozenset(v for v in s if not any(w != v and g.leq(v, w) and not g.leq(w, v) for w in s))

    @cached_property
    def bases(self) -> frozenset[str]:
        g = self.graph
        return frozenset(m for m in g.vertices if is_based_at(g, self.side_a, self.side_b, self.link, m))

    @cached_property
    def link_vertices(self) -> frozenset[str]:
        return frozenset(x.vertex for x in self.link)

    def representative(self) -> str:
        """Least maximal vertex in the total order."""
        return min(self.max, key=self.graph.order_index.__getitem__)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "sideA": [x.encode() for x in sorted_sv(g, self.side_a)],
            "sideB": [x.encode() for x in sorted_sv(g, self.side_b)],
            "link": [x.encode() for x in sorted_sv(g, self.link)],
        }

    @classmethod
    def from_json(cls, g: DefiningGraph, data: dict) -> "WPartition":
        try:
            a = [SignedVertex.decode(x) for x in data["sideA"]]
            b = [SignedVertex.decode(x) for x in data["sideB"]]
            lk = [SignedVertex.decode(x) for x in data["link"]] if "link" in data else None
        except (KeyError, TypeError) as exc:
            raise PartitionError(f"bad partition JSON: {exc}") from None
        return cls.from_sides(g, a, b, lk)

    def __str__(self) -> str:
        g = self.graph
        fmt = lambda s: "{" + ",".join(str(x) for x in sorted_sv(g, s)) + "}"
        return f"({fmt(self.side_a)}|{fmt(self.side_b)}|{fmt(self.link)})"


def _splits(p: frozenset, q: frozenset, v: str) -> bool:
    a, b = SignedVertex(v, PLUS), SignedVertex(v, MINUS)
    return (a in p and b in q) or (a in q and b in p)


def sing(p: WPartition) -> frozenset[str]:
    return p.sing


def max_of(p: WPartition) -> frozenset[str]:
    return p.max


def enumerate_partitions(g: DefiningGraph, m: str) -> list[WPartition]:
    """All partitions based at ``m``; one per proper nonempty subset of m-components."""
    comps = m_components(g, m)
    lk = signed(g.link(m))
    mp, mm = SignedVertex(m, PLUS), SignedVertex(m, MINUS)
    out = []
    k = len(comps)
    for mask in range(1, (1 << k) - 1):
        side = {mp}
        other = {mm}
        for i, c in enumerate(comps):
            (side if mask >> i & 1 else other).update(c)
        if len(side) < 2 or len(other) < 2:
            continue
        out.append(WPartition._canonical(g, frozenset(side), frozenset(other), lk))
    return out


def enumerate_all_partitions(g: DefiningGraph) -> list[WPartition]:
    """Every partition of ``g`` once, bases taken in declared order."""
    seen = set()
    out = []
    for m in g.vertices:
        for p in enumerate_partitions(g, m):
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


# -- pairwise relations ------------------------------------------------------


def commute(p: WPartition, q: WPartition) -> bool:
    g = p.graph
    return any(v != w and g.adjacent(v, w) for v in p.max for w in q.max)


def compatible(p: WPartition, q: WPartition) -> bool:
    if p == q or commute(p, q):
        return True
    return any(not (s & t) for s in p.sides() for t in q.sides())


def consistent(p: WPartition, p_side: str, q: WPartition, q_side: str) -> bool:
    """Whether the chosen sides of two partitions may coexist in a region."""
    if p == q:
        return p_side == q_side
    return commute(p, q) or bool(p.side(p_side) & q.side(q_side))


def partition_order(p: WPartition, q: WPartition) -> str:
    g = p.graph
    v, w = p.representative(), q.representative()
    f = g.leq_f(v, w), g.leq_f(w, v)
    t = g.leq_t(v, w), g.leq_t(w, v)
    if v == w or all(f) or all(t):
        return EQUIVALENT
    if f[0]:
        return LESS_F
    if t[0]:
        return LESS_T
    if f[1]:
        return GREATER_F
    if t[1]:
        return GREATER_T
    return INCOMPARABLE


def check_family(members: Iterable[WPartition]) -> None:
    """Raise if the members are not distinct and pairwise compatible."""
    ms = list(members)
    if len(set(ms)) != len(ms):
        raise PartitionError("family has repeated partitions")
    for (i, p), (j, q) in combinations(enumerate(ms), 2):
        if not compatible(p, q):
            raise PartitionError(f"partitions {i} and {j} are not compatible", i, j)


@dataclass(frozen=True)
class PartitionFamily:
    graph: DefiningGraph
    members: tuple[WPartition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for p in self.members:
            if p.graph != self.graph:
                raise GraphError("partition belongs to a different graph")
        check_family(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> WPartition:
        return self.members[i]

    def index(self, p: WPartition) -> int:
        return self.members.index(p)

    def without(self, i: int) -> "PartitionFamily":
        if not 0 <= i < len(self.members):
            raise IndexError(f"partition index {i} out of range")
        return PartitionFamily(self.graph, self.members[:i] + self.members[i + 1:])
