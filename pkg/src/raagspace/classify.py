"""Twist-dominant / twist-minimal classification of blowup hyperplanes.

The combinatorial test looks only at the cube complex: which hyperplanes cross
(read off the squares), which share a link, and whether a fold class sweeps
out a product of a carrier with a polygon boundary.  The label test compares
maximal vertices in the defining graph.  The two should always agree.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .blowup import Blowup, label_max
from .cubecomplex import Cube, Label
from .graph_core import TWIST_DOMINANT, TWIST_MINIMAL


class ClassificationMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class HyperplaneClass:
    label: Label
    link: frozenset[Label]
    fold_class: frozenset[Label]
    cyclic: bool
    classification: str


def hyperplane_link(b: Blowup, a: Label) -> frozenset[Label]:
    return frozenset(b.crossing_labels(a))


def _links(b: Blowup) -> dict[Label, frozenset[Label]]:
    out = {a: frozenset() for a in b.labels}
    for c in b.cubes_of_dim(2):
        x, y = c.labels
        out[x] |= {y}
        out[y] |= {x}
    return out


def fold_class(b: Blowup, a: Label, links: dict | None = None) -> frozenset[Label]:
    links = links or _links(b)
    return frozenset(k for k, lk in links.items() if lk == links[a])


def is_cyclic(b: Blowup, a: Label, links: dict | None = None) -> bool:
    """Whether the carriers of the fold class of ``a`` form (carrier) x (polygon boundary)."""
    links = links or _links(b)
    fold = fold_class(b, a, links)
    n = len(fold)
    union = b.closure(c for c in b.cubes.values() if c.label_set & fold)
    verts = {c.corners[0] for c in union.values() if c.dim == 0}

    # F-edge ends per vertex, loops counted twice
    ends: dict[int, list] = defaultdict(list)
    for e in b.edges:
        if e.label in fold:
            ends[e.tail].append(e)
            ends[e.head].append(e)
    if any(len(ends[v]) != 2 for v in verts):
        return False

    # walk one cycle to fix the cyclic order of labels
    start = min(verts)
    seq: list[Label] = []
    here, prev = start, None
    for _ in range(n + 1):
        options = [e for e in ends[here] if e is not prev] if prev is not None else ends[here][:1]
        if not options:
            options = ends[here]
        e = options[0]
        seq.append(e.label)
        here = e.head if e.tail == here else e.tail
        prev = e
        if here == start:
            break
    if here != start or sorted(seq, key=b.label_key) != sorted(fold, key=b.label_key):
        return False
    step = {lab: i for i, lab in enumerate(seq)}

    # propagate positions
    pos = {start: 0}
    stack = [start]
    slice_edges = [c for c in union.values() if c.dim == 1 and not (c.label_set & fold)]
    adj = defaultdict(list)
    for c in slice_edges:
        adj[c.corners[0]].append(c.corners[1])
        adj[c.corners[1]].append(c.corners[0])
    while stack:
        x = stack.pop()
        p = pos[x]
        want = {seq[(p - 1) % n], seq[p]}
        if {e.label for e in ends[x]} != want:
            return False
        moves = [(y, p) for y in adj[x]]
        for e in ends[x]:
            i = step[e.label]
            y = e.head if e.tail == x else e.tail
            q = (i + 1) % n if p == i else i
            moves.append((y, q))
        for y, q in moves:
            if y in pos:
                if pos[y] != q:
                    return False
            else:
                pos[y] = q
                stack.append(y)
    if set(pos) != verts:
        return False

    # slice cubes sit over one position and are faces of the expected number of fold cubes
    expected = 1 if n == 1 else 2
    cofaces: dict[tuple, set] = defaultdict(set)
    for c in union.values():
        if c.label_set & fold:
            for f in c.faces():
                if not (f.label_set & fold):
                    cofaces[f.key].add(c.key)
    for c in union.values():
        if c.label_set & fold:
            continue
        if len({pos[x] for x in c.corners}) != 1:
            return False
        if len(cofaces[c.key]) != expected:
            return False
    return True


def classify_all(b: Blowup) -> dict[Label, HyperplaneClass]:
    links = _links(b)
    folds = {a: fold_class(b, a, links) for a in links}
    cyc = {a: is_cyclic(b, a, links) for a in links}
    out = {}
    for h in links:
        mine = links[h] | folds[h]
        dominant = cyc[h] and any(
            folds[k] != folds[h] and links[k] | folds[k] <= mine for k in links
        )
        out[h] = HyperplaneClass(h, links[h], folds[h], cyc[h], TWIST_DOMINANT if dominant else TWIST_MINIMAL)
    return out


def classify_hyperplane(b: Blowup, a: Label) -> str:
    return classify_all(b)[a].classification


def label_classification(b: Blowup, a: Label) -> str:
    """Twist-dominant iff some label's maxima sit strictly below in the twist order and are not fold-equivalent."""
    g = b.graph
    mb = label_max(a)
    for c in b.labels:
        ma = label_max(c)
        if any(g.leq_t(x, y) and not g.fold_equivalent(x, y) for x in ma for y in mb):
            return TWIST_DOMINANT
    return TWIST_MINIMAL


def cross_check_classification(b: Blowup, strict: bool = True) -> list[dict]:
    table = classify_all(b)
    rows = []
    bad = []
    for a in b.labels:
        h = table[a]
        other = label_classification(b, a)
        rows.append({
            "label": b.label_name(a),
            "class": h.classification,
            "labelClass": other,
            "agree": h.classification == other,
        })
        if h.classification != other:
            bad.append(b.label_name(a))
    if strict and bad:
        raise ClassificationMismatch(f"classifications disagree for {bad}")
    return rows


def classification_report(b: Blowup) -> list[dict]:
    table = classify_all(b)
    return [
        {
            "label": b.label_name(a),
            "class": table[a].classification,
            "foldClass": [b.label_name(k) for k in sorted(table[a].fold_class, key=b.label_key)],
            "cyclic": table[a].cyclic,
        }
        for a in b.labels
    ]


def twist_minimal_labels(b: Blowup) -> list[Label]:
    table = classify_all(b)
    return [a for a in b.labels if table[a].classification == TWIST_MINIMAL]
