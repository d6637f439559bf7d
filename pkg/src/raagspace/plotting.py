"""Matplotlib renderings for CLI reports; every function writes one PNG."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402
import numpy as np  # noqa: E402

from .blowup import Blowup  # noqa: E402
from .metric import StraighteningState  # noqa: E402
from .shearing import ShearSystem  # noqa: E402


def plot_blowup(b: Blowup, path: str | Path) -> Path:
    """The 1-skeleton: generator edges black with arrows, partition edges blue."""
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(b.n_vertices))
    pos = nx.circular_layout(g) if b.n_vertices > 1 else {0: np.zeros(2)}
    fig, ax = plt.subplots(figsize=(5, 5))
    loops: dict[int, int] = {}
    bends: dict[tuple, int] = {}
    for e in b.sorted_edges():
        name = b.label_name(e.label)
        color = "black" if e.oriented else "tab:blue"
        if e.is_loop:
            k = loops.get(e.tail, 0)
            loops[e.tail] = k + 1
            r = 0.12 + 0.06 * k
            x, y = pos[e.tail]
            ax.add_patch(plt.Circle((x, y + r), r, fill=False, color=color))
            ax.text(x, y + 2 * r + 0.02, name, ha="center", fontsize=8, color=color)
            continue
        pair = (min(e.tail, e.head), max(e.tail, e.head))
        k = bends.get(pair, 0)
        bends[pair] = k + 1
        rad = 0.25 * ((k + 1) // 2) * (1 if k % 2 else -1)
        if e.tail > e.head:
            rad = -rad
        ax.annotate(
            "", xy=pos[e.head], xytext=pos[e.tail],
            arrowprops=dict(arrowstyle="-|>" if e.oriented else "-", color=color,
                            connectionstyle=f"arc3,rad={rad}", shrinkA=8, shrinkB=8),
        )
        p, q = np.asarray(pos[e.tail]), np.asarray(pos[e.head])
        lift = abs(rad) * (1 if k % 2 else -1) * 0.5 * np.linalg.norm(q - p)
        ax.text((p[0] + q[0]) / 2, (p[1] + q[1]) / 2 + lift, name, fontsize=8, color=color)
    for v, (x, y) in pos.items():
        ax.plot(x, y, "o", color="tab:red")
        ax.text(x, y - 0.1, "".join(b.regions[v]) or "*", ha="center", fontsize=8)
    s = b.summary()
    ax.set_title(f"V={s['vertices']} E={s['edges']} squares={s['squares']} euler={s['euler']}")
    ax.set_aspect("equal")
    ax.axis("off")
    ax.autoscale_view()
    ax.margins(0.3)
    return _save(fig, path)


def plot_straightening(b: Blowup, states: list[StraighteningState], path: str | Path) -> Path:
    """Largest off-diagonal Gram entry and edge lengths against t."""
    ts = [s.t for s in states]
    off = [max((float(np.max(np.abs(cg.gram - np.diag(np.diag(cg.gram))))) for cg in s.grams), default=0.0)
           for s in states]
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    left.plot(ts, off, marker="o")
    left.set_xlabel("t")
    left.set_ylabel("max |off-diagonal Gram entry|")
    for a in b.labels:
        lengths = []
        for s in states:
            vals = [np.sqrt(cg.entry(a, a)) for cg in s.grams if a in cg.labels]
            lengths.append(vals[0] if vals else np.nan)
        right.plot(ts, lengths, label=b.label_name(a))
    right.set_xlabel("t")
    right.set_ylabel("edge length")
    right.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return _save(fig, path)


def plot_shear_system(b: Blowup, system: ShearSystem, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(1 + 0.5 * max(1, len(system.columns)), 1 + 0.5 * max(1, len(system.rows))))
    mat = np.array(system.matrix, dtype=float).reshape(len(system.rows), len(system.columns))
    ax.imshow(mat if mat.size else np.zeros((1, 1)), cmap="Greys", vmin=0, vmax=1)
    ax.set_xticks(range(len(system.columns)))
    ax.set_xticklabels([f"{b.label_name(a)}:{w}" for a, w in system.columns], rotation=60, fontsize=8)
    ax.set_yticks(range(len(system.rows)))
    ax.set_yticklabels([f"{v}:{w}" for v, w in system.rows], fontsize=8)
    ax.set_title(f"fiber dimension {system.fiber_dim}")
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
