"""Shear coordinates on twist-minimal hyperplanes and the zero-sum equations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
import sympy

from .blowup import Blowup, label_max
from .classify import twist_minimal_labels
from .cubecomplex import Label
from .metric import label_rep, splits

TOL = 1e-9

Shear = Mapping[Label, Mapping[str, float]]


class ShearError(ValueError):
    pass


def twist_minimal_hyperplanes(b: Blowup) -> list[Label]:
    return twist_minimal_labels(b)


def shear_coordinates(b: Blowup, a: Label) -> list[str]:
    return b.graph.sort(b.graph.ul(label_rep(b, a)))


def shear_space_dims(b: Blowup) -> dict[Label, int]:
    return {a: len(shear_coordinates(b, a)) for a in twist_minimal_hyperplanes(b)}


def twist_minimal_vertices(b: Blowup) -> list[str]:
    g = b.graph
    return [v for v in g.total_order if not g.is_twist_dominant(v)]


def decompose_shear(b: Blowup, v: str, a: Label, s: Mapping[str, float]) -> tuple[dict, dict]:
    """Split a shear into the part along ``UL(v)`` and the part along ``UF(v)``."""
    g = b.graph
    g._check(v)
    if not any(g.leq_f(v, m) for m in label_max(a)):
        raise ShearError(f"{v} is not below the maximal vertices of {b.label_name(a)} in the fold order")
    coords = set(shear_coordinates(b, a))
    extra = set(s) - coords
    if extra:
        raise ShearError(f"shear has coordinates {sorted(extra)} outside UL of {b.label_name(a)}")
    ul, uf = g.ul(v), g.uf(v)
    ell = {w: float(s.get(w, 0.0)) for w in g.sort(coords & ul)}
    fold = {w: float(s.get(w, 0.0)) for w in g.sort(coords & uf)}
    return ell, fold


@dataclass
class ShearSystem:
    columns: list[tuple[Label, str]]
    rows: list[tuple[str, str]]
    matrix: list[list[int]]
    rank: int
    kernel_basis: list[list[Fraction]]

    @property
    def fiber_dim(self) -> int:
        return len(self.columns) - self.rank

    def vector(self, b: Blowup, shear: Shear) -> np.ndarray:
        index = {c: i for i, c in enumerate(self.columns)}
        x = np.zeros(len(self.columns))
        for a, s in shear.items():
            for w, val in s.items():
                if (a, w) not in index:
                    raise ShearError(f"no shear coordinate ({b.label_name(a)}, {w})")
                x[index[(a, w)]] = float(val)
        return x

    def to_json(self, b: Blowup) -> dict:
        return {
            "columns": [[b.label_name(a), w] for a, w in self.columns],
            "rows": [[v, w] for v, w in self.rows],
            "matrix": self.matrix,
            "fiberDim": self.fiber_dim,
            "kernelBasis": [[_num(x) for x in vec] for vec in self.kernel_basis],
        }


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


def build_shear_system(b: Blowup) -> ShearSystem:
    cols = [(a, w) for a in twist_minimal_hyperplanes(b) for w in shear_coordinates(b, a)]
    g = b.graph
    rows = [(v, w) for v in twist_minimal_vertices(b) for w in g.sort(g.ul(v))]
    mat = [[int(splits(b, a, v) and u == w) for (a, u) in cols] for (v, w) in rows]
    if cols and rows:
        m = sympy.Matrix(mat)
        rank = m.rank()
        kernel = [[Fraction(int(x.p), int(x.q)) for x in vec] for vec in m.nullspace()]
    else:
        rank = 0
        kernel = [[Fraction(int(i == j)) for i in range(len(cols))] for j in range(len(cols))]
    return ShearSystem(cols, rows, mat, rank, kernel)


def fiber_dimension(b: Blowup) -> int:
    return build_shear_system(b).fiber_dim


def is_zero_sum(b: Blowup, shear: Shear, system: ShearSystem | None = None, tol: float = TOL) -> bool:
    system = system or build_shear_system(b)
    x = system.vector(b, shear)
    if not system.rows:
        return True
    return bool(np.all(np.abs(np.array(system.matrix, dtype=float) @ x) <= tol))
