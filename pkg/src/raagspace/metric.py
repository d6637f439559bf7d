"""Allowable parallelotope structures on a blowup.

A structure is stored by its generating data: a width per label and an angle
for every commuting, twist-related pair of labels.  Every other inner product
inside a maximal cube is forced by allowability and is derived on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .blowup import Blowup, label_max
from .cubecomplex import Cube, Label

TOL = 1e-9
PIVOT_TOL = 1e-12
RIGHT = math.pi / 2


class MetricError(ValueError):
    pass


Pair = frozenset  # frozenset of two labels


# -- label data ---------------------------------------------------------------


def label_rep(b: Blowup, a: Label) -> str:
    g = b.graph
    return min(label_max(a), key=g.order_index.__getitem__)


def label_ul(b: Blowup, a: Label) -> frozenset[str]:
    return b.graph.ul(label_rep(b, a))


def twist_related(b: Blowup, a: Label, c: Label) -> bool:
    """Commuting labels whose maxima are comparable in the twist order."""
    if not b.label_commutes(a, c):
        return False
    g = b.graph
    x, y = label_rep(b, a), label_rep(b, c)
    return g.leq_t(x, y) or g.leq_t(y, x)


def splits(b: Blowup, a: Label, w: str) -> bool:
    return a.value == w if a.is_vertex else a.value.splits(w)


def commuting_pairs(b: Blowup) -> list[Pair]:
    seen = {frozenset(c.labels) for c in b.cubes_of_dim(2)}
    return sorted(seen, key=lambda p: sorted(b.label_key(x) for x in p))


def twist_pairs(b: Blowup) -> list[Pair]:
    return [p for p in commuting_pairs(b) if twist_related(b, *p)]


def td_singleton(b: Blowup, a: Label) -> str | None:
    m = label_max(a)
    if len(m) == 1:
        v = next(iter(m))
        if b.graph.is_twist_dominant(v):
            return v
    return None


# -- the structure ----------------------------------------------------------------


@dataclass
class MetricStructure:
    widths: dict[Label, float]
    angles: dict[Pair, float] = field(default_factory=dict)

    def angle(self, a: Label, c: Label) -> float:
        try:
            return self.angles[frozenset((a, c))]
        except KeyError:
            raise MetricError(f"no angle stored for {a.value!s} and {c.value!s}") from None

    def copy(self) -> "MetricStructure":
        return MetricStructure(dict(self.widths), dict(self.angles))

    @classmethod
    def rectilinear(cls, b: Blowup, widths: Mapping[Label, float] | None = None) -> "MetricStructure":
        w = {a: 1.0 for a in b.labels} if widths is None else {a: float(widths[a]) for a in b.labels}
        return cls(w, {p: RIGHT for p in twist_pairs(b)})

    @classmethod
    def standard(cls, b: Blowup) -> "MetricStructure":
        return cls.rectilinear(b)

    def to_json(self, b: Blowup) -> dict:
        angles = []
        for p in sorted(self.angles, key=lambda p: sorted(b.label_key(x) for x in p)):
            x, y = sorted(p, key=b.label_key)
            angles.append({"a": b.label_name(x), "b": b.label_name(y), "radians": self.angles[p]})
        return {
            "widths": {b.label_name(a): self.widths[a] for a in sorted(self.widths, key=b.label_key)},
            "angles": angles,
        }

    @classmethod
    def from_json(cls, b: Blowup, data: dict) -> "MetricStructure":
        try:
            widths = {b.label_from_name(k): float(v) for k, v in data["widths"].items()}
            angles = {
                frozenset((b.label_from_name(e["a"]), b.label_from_name(e["b"]))): float(e["radians"])
                for e in data.get("angles", [])
            }
        except (KeyError, TypeError, AttributeError) as exc:
            raise MetricError(f"bad metric JSON: {exc}") from None
        return cls(widths, angles)

    def validate(self, b: Blowup) -> None:
        for a in b.labels:
            w = self.widths.get(a)
            if w is None:
                raise MetricError(f"missing width for {b.label_name(a)}")
            if not w > 0:
                raise MetricError(f"width for {b.label_name(a)} must be positive")
        for p in twist_pairs(b):
            if p not in self.angles:
                x, y = sorted(p, key=b.label_key)
                raise MetricError(f"missing angle for {b.label_name(x)}, {b.label_name(y)}")
        for p, theta in self.angles.items():
            if not 0 < theta < math.pi:
                raise MetricError("angles must lie strictly between 0 and pi")
            if not twist_related(b, *p):
                raise MetricError("angles may only be given for commuting twist-related pairs")


# -- Gram matrices ---------------------------------------------------------------


@dataclass
class CubeGram:
    cube: Cube
    labels: tuple[Label, ...]
    gram: np.ndarray

    def entry(self, a: Label, c: Label) -> float:
        return float(self.gram[self.labels.index(a), self.labels.index(c)])


def _cos(theta: float) -> float:
    # exact zero for right angles keeps orthotope Grams exactly diagonal
    return 0.0 if theta == RIGHT else math.cos(theta)


def cube_labels(b: Blowup, cube: Cube) -> tuple[Label, ...]:
    return tuple(sorted(cube.labels, key=b.label_key))


def complete_gram(b: Blowup, f: MetricStructure, cube: Cube) -> CubeGram:
    """Gram matrix of the cube's edge vectors, labels in increasing label order."""
    labels = cube_labels(b, cube)
    for a in labels:
        if a not in f.widths:
            raise MetricError(f"missing width for {b.label_name(a)}")
    reps = {a: label_rep(b, a) for a in labels}
    uls = {a: b.graph.ul(reps[a]) for a in labels}

    @lru_cache(maxsize=None)
    def dot(x: Label, y: Label) -> float:
        if x == y:
            return f.widths[x] ** 2
        if twist_related(b, x, y):
            return f.widths[x] * f.widths[y] * _cos(f.angle(x, y))
        common = uls[x] & uls[y]
        ell = [k for k in labels if reps[k] in common]
        if not ell:
            return 0.0
        gl = np.array([[dot(p, q) for q in ell] for p in ell])
        gx = np.array([dot(x, k) for k in ell])
        gy = np.array([dot(y, k) for k in ell])
        return float(gx @ np.linalg.solve(gl, gy))

    # fill in by the sort order so float rounding is reproducible
    n = len(labels)
    g = np.empty((n, n))
    for i, x in enumerate(labels):
        for j in range(i, n):
            g[i, j] = g[j, i] = dot(x, labels[j])
    realize(g)
    return CubeGram(cube, labels, g)


def realize(gram: np.ndarray) -> np.ndarray:
    """Edge vectors as rows, via Cholesky; raises if a pivot drops below the threshold."""
    g = np.asarray(gram, dtype=float)
    if g.size == 0:
        return np.zeros((0, 0))
    if not np.allclose(g, g.T, atol=TOL):
        raise MetricError("Gram matrix is not symmetric")
    try:
        low = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise MetricError("Gram matrix is not positive definite") from None
    if np.min(np.diag(low)) ** 2 < PIVOT_TOL:
        raise MetricError("degenerate parallelotope")
    return low


def maximal_grams(b: Blowup, f: MetricStructure) -> list[CubeGram]:
    return [complete_gram(b, f, c) for c in _maximal_cubes(b)]


def _maximal_cubes(b: Blowup) -> list[Cube]:
    cubes = [c for c in b.maximal_cubes() if c.dim > 0]
    return sorted(cubes, key=lambda c: (sorted(b.label_key(a) for a in c.labels), sorted(c.corners)))


# -- allowability ---------------------------------------------------------------


def _projected_dots(gram: np.ndarray, xs: list[int], ys: list[int], ell: list[int]) -> np.ndarray:
    """Inner products of the components orthogonal to span(ell)."""
    block = gram[np.ix_(xs, ys)]
    if not ell:
        return block
    gl = gram[np.ix_(ell, ell)]
    return block - gram[np.ix_(xs, ell)] @ np.linalg.solve(gl, gram[np.ix_(ell, ys)])


def check_cube_gram(b: Blowup, cg: CubeGram, tol: float = TOL) -> list[str]:
    """Allowability violations inside one cube."""
    out = []
    labels = list(cg.labels)
    name = b.label_name
    try:
        vecs = realize(cg.gram)
    except MetricError as exc:
        return [f"cube {[name(a) for a in labels]}: {exc}"]
    gram = vecs @ vecs.T
    reps = [label_rep(b, a) for a in labels]
    g = b.graph
    k_sets = [[k for k in range(len(labels)) if k == i or reps[k] in g.ul(reps[i])] for i in range(len(labels))]
    for i, j in combinations(range(len(labels)), 2):
        if twist_related(b, labels[i], labels[j]):
            continue
        ell = sorted(set(k_sets[i]) & set(k_sets[j]))
        d = _projected_dots(gram, k_sets[i], k_sets[j], ell)
        if np.max(np.abs(d)) > tol:
            out.append(f"{name(labels[i])}, {name(labels[j])}: complements of the common span are not orthogonal")
    return out


def check_allowable(b: Blowup, f: MetricStructure, grams: Iterable[CubeGram] | None = None,
                    tol: float = TOL) -> tuple[bool, list[str]]:
    """Validate a structure (or explicit per-cube Grams); violations are returned, not raised."""
    violations: list[str] = []
    name = b.label_name
    if grams is None:
        try:
            f.validate(b)
            grams = maximal_grams(b, f)
        except MetricError as exc:
            return False, [str(exc)]
    grams = list(grams)
    for cg in grams:
        violations += check_cube_gram(b, cg, tol)
        for i, a in enumerate(cg.labels):
            w = f.widths.get(a)
            if w is None or abs(cg.gram[i, i] - w * w) > tol:
                violations.append(f"{name(a)}: edge length differs from its width")

    # faces agree: one inner product per label pair across all cubes
    seen: dict[Pair, float] = {}
    for cg in grams:
        for i, j in combinations(range(len(cg.labels)), 2):
            p = frozenset((cg.labels[i], cg.labels[j]))
            val = float(cg.gram[i, j])
            if p in seen and abs(seen[p] - val) > tol:
                x, y = sorted(p, key=b.label_key)
                violations.append(f"{name(x)}, {name(y)}: inner product differs between cubes")
            seen.setdefault(p, val)

    # twist-dominant labels point the same way as their generator
    def cos(p: Pair) -> float | None:
        if p not in seen:
            return None
        x, y = tuple(p)
        return seen[p] / math.sqrt(f.widths[x] * f.widths[x] * f.widths[y] * f.widths[y])

    for a in b.labels:
        v = td_singleton(b, a)
        if v is None or a == Label.vertex(v):
            continue
        for c in b.labels:
            if c in (a, Label.vertex(v)) or not b.label_commutes(a, c):
                continue
            x, y = cos(frozenset((a, c))), cos(frozenset((Label.vertex(v), c)))
            if x is not None and y is not None and abs(x - y) > tol:
                violations.append(f"{name(a)}, {name(c)}: angle differs from the angle at generator {v}")
    return not violations, violations


# -- rotations ---------------------------------------------------------------


def rotate(b: Blowup, f: MetricStructure, a: Label, w: str, angle: float) -> MetricStructure:
    """Rotate the hyperplane of ``a`` toward ``w``; twist-dominant labels move together."""
    if not 0 < angle < math.pi:
        raise MetricError("angle must lie strictly between 0 and pi")
    v = label_rep(b, a)
    if w not in b.graph.ul(v):
        raise MetricError(f"{w} is not a legal rotation direction for {b.label_name(a)}")
    movers = [a]
    td = td_singleton(b, a)
    if td is not None:
        movers = [x for x in b.labels if label_max(x) == frozenset([td])]
    out = f.copy()
    for x in movers:
        for c in b.labels:
            if splits(b, c, w) and b.label_commutes(x, c):
                out.angles[frozenset((x, c))] = float(angle)
    return out


def reconstruct_by_rotations(b: Blowup, f: MetricStructure) -> MetricStructure:
    """Rotate a rectilinear structure with the same widths, hyperplanes in descending order."""
    out = MetricStructure.rectilinear(b, f.widths)
    for a in sorted(b.labels, key=b.label_key, reverse=True):
        for w in b.graph.sort(label_ul(b, a)):
            target = Label.vertex(w)
            if not b.label_commutes(a, target):
                continue
            out = rotate(b, out, a, w, f.angle(a, target))
    return out


def random_allowable(b: Blowup, rng: np.random.Generator, width_range=(0.5, 2.0),
                     angle_range=(math.pi / 4, 3 * math.pi / 4), attempts: int = 100) -> MetricStructure:
    """Random widths plus one random angle per independent rotation parameter."""
    def key(x: Label) -> Label:
        v = td_singleton(b, x)
        return Label.vertex(v) if v is not None else x

    pairs = twist_pairs(b)
    for _ in range(attempts):
        widths = {a: float(rng.uniform(*width_range)) for a in b.labels}
        params: dict[Pair, float] = {}
        angles = {}
        for p in pairs:
            k = frozenset(key(x) for x in p)
            if k not in params:
                params[k] = float(rng.uniform(*angle_range))
            angles[p] = params[k]
        f = MetricStructure(widths, angles)
        try:
            maximal_grams(b, f)
        except MetricError:
            continue
        return f
    raise MetricError("could not sample a non-degenerate structure")


# -- straightening -------------------------------------------------------------


@dataclass
class CubeStraightening:
    labels: tuple[Label, ...]
    basis: np.ndarray          # rows b_A
    radial: np.ndarray         # r_A
    coeffs: np.ndarray         # row A: coefficients of e_A on the b's
    norms: np.ndarray

    def vectors(self, t: float) -> np.ndarray:
        c = self.coeffs * t
        c[np.diag_indices_from(c)] = self.radial
        raw = c @ self.basis
        scale = self.norms / np.linalg.norm(raw, axis=1)
        return raw * scale[:, None]

    def gram(self, t: float) -> np.ndarray:
        e = self.vectors(t)
        return e @ e.T


def straightening_basis(b: Blowup, cg: CubeGram) -> CubeStraightening:
    labels = cg.labels
    vecs = realize(cg.gram)
    n = len(labels)
    reps = [label_rep(b, a) for a in labels]
    g = b.graph
    basis = np.zeros_like(vecs)
    radial = np.zeros(n)
    above = []
    for i in range(n):
        ks = [k for k in range(i + 1, n) if reps[k] in g.ul(reps[i])]
        above.append(ks)
        e = vecs[i]
        if ks:
            span = vecs[ks]
            coef, *_ = np.linalg.lstsq(span.T, e, rcond=None)
            e = e - span.T @ coef
        r = float(np.linalg.norm(e))
        if r < math.sqrt(PIVOT_TOL):
            raise MetricError("edge lies in the span of the edges above it")
        basis[i] = e / r
        radial[i] = r
    coeffs = np.zeros((n, n))
    for i in range(n):
        coeffs[i, above[i]] = basis[above[i]] @ vecs[i]
    return CubeStraightening(labels, basis, radial, coeffs, np.linalg.norm(vecs, axis=1))


def basis_orthogonality_defect(s: CubeStraightening) -> float:
    n = len(s.labels)
    if n < 2:
        return 0.0
    d = s.basis @ s.basis.T - np.eye(n)
    return float(np.max(np.abs(d)))


@dataclass
class StraighteningState:
    base: MetricStructure
    t: float
    grams: list[CubeGram]
    structure: MetricStructure


def straighten(b: Blowup, f: MetricStructure, t: float, tol: float = TOL) -> StraighteningState:
    if not 0 <= t <= 1:
        raise MetricError("t must lie in [0, 1]")
    ok, why = check_allowable(b, f, tol=tol)
    if not ok:
        raise MetricError("structure is not allowable: " + "; ".join(why))
    grams = []
    angles: dict[Pair, float] = {}
    for cg in maximal_grams(b, f):
        s = straightening_basis(b, cg)
        gt = s.gram(t)
        grams.append(CubeGram(cg.cube, cg.labels, gt))
        for i, j in combinations(range(len(cg.labels)), 2):
            p = frozenset((cg.labels[i], cg.labels[j]))
            if p in f.angles:
                c = gt[i, j] / math.sqrt(gt[i, i] * gt[j, j])
                theta = math.acos(max(-1.0, min(1.0, c)))
                if p in angles and abs(angles[p] - theta) > math.sqrt(tol):
                    raise MetricError("straightened cubes disagree on a shared face")
                angles.setdefault(p, theta)
    return StraighteningState(f, t, grams, MetricStructure(dict(f.widths), angles))


def straightening_path(b: Blowup, f: MetricStructure, samples: int | Iterable[float] = 5) -> list[StraighteningState]:
    ts = np.linspace(0.0, 1.0, samples) if isinstance(samples, int) else list(samples)
    return [straighten(b, f, float(t)) for t in ts]
