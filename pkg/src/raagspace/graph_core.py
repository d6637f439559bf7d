"""Defining graphs and the vertex orderings derived from links and stars.

A :class:`DefiningGraph` is an immutable finite simplicial graph.  Every derived
set (links, stars, the fold/twist orderings, ``UL``/``UF``) is a pure function
of the vertex list and edge set, cached on first use.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

TWIST_DOMINANT = "TwistDominant"
TWIST_MINIMAL = "TwistMinimal"


class GraphError(ValueError):
    """Malformed graph input (unknown vertex, self-loop, duplicate edge)."""


@dataclass(frozen=True)
class DefiningGraph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex names")
        vset = set(verts)
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise GraphError(f"self-loop or malformed edge {sorted(e)}")
            if not e <= vset:
                raise GraphError(f"edge {sorted(e)} uses an undeclared vertex")
            edges.add(e)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]] = ()) -> "DefiningGraph":
        seen = set()
        for e in edges:
            if len(e) != 2 or e[0] == e[1]:
                raise GraphError(f"self-loop or malformed edge {list(e)}")
            key = frozenset(e)
            if key in seen:
                raise GraphError(f"duplicate edge {list(e)}")
            seen.add(key)
        return cls(tuple(vertices), frozenset(seen))

    @classmethod
    def from_json(cls, data: dict | str) -> "DefiningGraph":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "vertices" not in data:
            raise GraphError("graph JSON must be an object with a 'vertices' list")
        verts = data["vertices"]
        if not all(isinstance(v, str) for v in verts):
            raise GraphError("vertex names must be strings")
        return cls.from_edges(verts, [tuple(e) for e in data.get("edges", [])])

    def to_json(self) -> dict:
        pos = self.position
        edges = sorted((sorted(e, key=pos.get) for e in self.edges), key=lambda e: (pos[e[0]], pos[e[1]]))
        return {"vertices": list(self.vertices), "edges": edges}

    # -- basic adjacency -------------------------------------------------

    @cached_property
    def position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _adj(self) -> dict[str, frozenset[str]]:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(s) for v, s in adj.items()}

    def _check(self, *vs: str) -> None:
        for v in vs:
            if v not in self.position:
                raise GraphError(f"unknown vertex {v!r}")

    def adjacent(self, v: str, w: str) -> bool:
        self._check(v, w)
        return w in self._adj[v]

    def sort(self, vs: Iterable[str]) -> list[str]:
        """Vertices in declared order."""
        return sorted(vs, key=self.position.__getitem__)

    def link(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._adj[v]

    def star(self, v: str) -> frozenset[str]:
        return self.link(v) | {v}

    # -- orderings -------------------------------------------------------

    def leq(self, v: str, w: str) -> bool:
        """``lk(v)`` is contained in ``st(w)``."""
        return self.link(v) <= self.star(w)

    def leq_f(self, v: str, w: str) -> bool:
        return self.link(v) <= self.link(w)

    def leq_t(self, v: str, w: str) -> bool:
        return self.star(v) <= self.star(w)

    def equivalent(self, v: str, w: str) -> bool:
        return self.leq(v, w) and self.leq(w, v)

    def fold_equivalent(self, v: str, w: str) -> bool:
        return self.link(v) == self.link(w)

    def classify_vertex(self, v: str) -> str:
        self._check(v)
        if any(u != v and self.leq_t(u, v) for u in self.vertices):
            return TWIST_DOMINANT
        return TWIST_MINIMAL

    def is_twist_dominant(self, v: str) -> bool:
        return self.classify_vertex(v) == TWIST_DOMINANT

    def ul(self, v: str) -> frozenset[str]:
        """``lk+(v)``: neighbours ``u`` with ``u >= v``."""
        return frozenset(u for u in self.link(v) if self.leq(v, u))

    def uf(self, v: str) -> frozenset[str]:
        """Non-neighbours ``u`` with ``u >= v`` (always contains ``v``)."""
        lk = self.link(v)
        return frozenset(u for u in self.vertices if u not in lk and self.leq(v, u))

    def st_plus(self, v: str) -> frozenset[str]:
        return self.ul(v) | {v}

    @cached_property
    def fold_classes(self) -> tuple[tuple[str, ...], ...]:
        """Classes of the equivalence ``v <= w <= v``, in declared order."""
        classes: list[list[str]] = []
        for v in self.vertices:
            for c in classes:
                if self.equivalent(c[0], v):
                    c.append(v)
                    break
            else:
                classes.append([v])
        return tuple(tuple(c) for c in classes)

    def fold_class(self, v: str) -> tuple[str, ...]:
        self._check(v)
        return next(c for c in self.fold_classes if v in c)

    @cached_property
    def total_order(self) -> tuple[str, ...]:
        """Linear extension of ``<=`` on classes; ties follow declared order."""
        remaining = list(self.fold_classes)
        out: list[str] = []
        while remaining:
            # classes with no strictly smaller class left
            minimal = [
                c for c in remaining
                if not any(d is not c and self.leq(d[0], c[0]) for d in remaining)
            ]
            pick = minimal[0]
            out.extend(pick)
            remaining.remove(pick)
        return tuple(out)

    @cached_property
    def order_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.total_order)}

    def relations(self, v: str) -> dict:
        """Every derived set for ``v`` in one record."""
        vs = self.vertices
        return {
            "vertex": v,
            "link": self.sort(self.link(v)),
            "star": self.sort(self.star(v)),
            "leqF": [w for w in vs if self.leq_f(v, w)],
            "leqT": [w for w in vs if self.leq_t(v, w)],
            "foldClass": list(self.fold_class(v)),
            "twistDominant": self.is_twist_dominant(v),
            "lkPlus": self.sort(self.ul(v)),
            "uf": self.sort(self.uf(v)),
        }

    def cliques(self) -> list[tuple[str, ...]]:
        """All cliques including the empty one, each in declared order."""
        out: list[tuple[str, ...]] = [()]

        def extend(clique: tuple[str, ...], start: int) -> None:
            for i in range(start, len(self.vertices)):
                v = self.vertices[i]
                if all(v in self._adj[u] for u in clique):
                    c = clique + (v,)
                    out.append(c)
                    extend(c, i + 1)

        extend((), 0)
        return out
