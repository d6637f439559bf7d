"""Command-line front end.

Exit codes: 0 success, 2 unparseable input, 3 semantically invalid input,
4 region cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import metric as metric_mod
from .blowup import DEFAULT_REGION_CAP, Blowup, BlowupError, RegionCapExceeded, build_blowup, isomorphic
from .classify import classification_report
from .cubecomplex import ComplexError
from .graph_core import DefiningGraph, GraphError
from .partitions import (PartitionError, PartitionFamily, WPartition, check_family, commute, compatible,
                         enumerate_all_partitions)
from .shearing import ShearError, build_shear_system

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_CAP = 0, 2, 3, 4


class ParseFailure(Exception):
    pass


class SemanticFailure(Exception):
    pass


# -- input ---------------------------------------------------------------


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise ParseFailure(f"cannot read {source}: {exc.strerror}") from None


def load_graph(source: str) -> DefiningGraph:
    try:
        data = json.loads(_read_text(source))
        edges = data.get("edges", []) if isinstance(data, dict) else None
        if edges is not None and not all(isinstance(e, list) and len(e) == 2 for e in edges):
            raise GraphError("edges must be pairs of vertex names")
        return DefiningGraph.from_json(data)
    except (json.JSONDecodeError, GraphError) as exc:
        raise ParseFailure(f"invalid graph: {exc}") from None


def resolve_partitions(g: DefiningGraph, selector: str | None) -> PartitionFamily:
    """Indices (``3`` or ``Q3``), inline JSON, or ``@file`` holding JSON."""
    if not selector:
        return PartitionFamily(g, ())
    text = selector.strip()
    if text.startswith("@"):
        text = _read_text(text[1:]).strip()
    if text.startswith("[") or text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseFailure(f"invalid partition JSON: {exc}") from None
        items = data if isinstance(data, list) else [data]
        members = []
        for item in items:
            if not isinstance(item, dict) or "sideA" not in item or "sideB" not in item:
                raise ParseFailure("each partition needs 'sideA' and 'sideB'")
            try:
                members.append(WPartition.from_json(g, item))
            except (PartitionError, GraphError) as exc:
                raise SemanticFailure(f"invalid partition: {exc}") from None
    else:
        catalogue = enumerate_all_partitions(g)
        members = []
        for tok in text.replace(",", " ").split():
            raw = tok[1:] if tok[:1] in "Qq" else tok
            if not raw.isdigit():
                raise ParseFailure(f"bad partition index {tok!r}")
            i = int(raw)
            if i >= len(catalogue):
                raise SemanticFailure(f"partition index {i} out of range (graph has {len(catalogue)})")
            members.append(catalogue[i])
    try:
        check_family(members)
    except PartitionError as exc:
        if len(exc.args) == 3:
            i, j = exc.args[1], exc.args[2]
            raise SemanticFailure(f"partitions {i} and {j} are not compatible: {members[i]} and {members[j]}") from None
        raise SemanticFailure(str(exc)) from None
    return PartitionFamily(g, tuple(members))


def _blowup(args, g: DefiningGraph) -> Blowup:
    fam = resolve_partitions(g, args.partitions)
    return build_blowup(g, fam, cap=args.cap)


# -- commands ------------------------------------------------------------------


def cmd_graph_info(args, g: DefiningGraph):
    rel = [g.relations(v) for v in g.vertices]
    td = [v for v in g.vertices if g.is_twist_dominant(v)]
    data = {
        "graph": g.to_json(),
        "relations": rel,
        "foldClasses": [list(c) for c in g.fold_classes],
        "twistDominant": td,
        "totalOrder": list(g.total_order),
    }
    lines = [f"vertices={len(g.vertices)} edges={len(g.edges)}"]
    lines.append("twist-dominant: " + " ".join(td))
    lines.append("total order: " + " ".join(g.total_order))
    lines.append("classes: " + " ".join("{" + ",".join(c) + "}" for c in g.fold_classes))
    for r in rel:
        lines.append(f"{r['vertex']}: link={{{','.join(r['link'])}}} UL={{{','.join(r['lkPlus'])}}} "
                     f"UF={{{','.join(r['uf'])}}}")
    return data, "\n".join(lines), None


def cmd_partitions(args, g: DefiningGraph):
    ps = enumerate_all_partitions(g)
    rows = []
    for i, p in enumerate(ps):
        d = p.to_json()
        d.update({"name": f"Q{i}", "sing": g.sort(p.sing), "max": g.sort(p.max)})
        rows.append(d)
    comp = [[compatible(p, q) for q in ps] for p in ps]
    comm = [[p != q and commute(p, q) for q in ps] for p in ps]
    data = {"partitions": rows, "compatible": comp, "commute": comm}
    lines = [f"partitions={len(ps)}"]
    for i, p in enumerate(ps):
        lines.append(f"Q{i} {p} sing={{{','.join(g.sort(p.sing))}}} max={{{','.join(g.sort(p.max))}}}")
    for i, row in enumerate(comp):
        lines.append(f"Q{i} compatible: " + "".join("1" if x else "." for x in row))
    return data, "\n".join(lines), None


def _summary_line(s: dict) -> str:
    return f"vertices={s['vertices']} edges={s['edges']} squares={s['squares']} euler={s['euler']}"


def cmd_blowup(args, g: DefiningGraph):
    b = _blowup(args, g)
    plot = None
    if args.plot:
        from .plotting import plot_blowup
        plot = lambda: plot_blowup(b, args.plot)  # noqa: E731
    return b.to_json(), _summary_line(b.summary()), b.to_dot(), plot


def cmd_collapse(args, g: DefiningGraph):
    b = _blowup(args, g)
    if not len(b.family):
        raise SemanticFailure("nothing to collapse: the family is empty")
    if not 0 <= args.index < len(b.family):
        raise SemanticFailure(f"collapse index {args.index} out of range")
    y, vmap = b.collapse(args.index)
    expected = build_blowup(g, b.family.without(args.index), cap=args.cap)
    iso = isomorphic(y, expected)
    s = {"vertices": y.n_vertices, "edges": len(y.edges), "squares": len(y.cubes_of_dim(2)),
         "euler": y.euler_characteristic()}
    data = {"summary": s, "vertexMap": [vmap[i] for i in range(b.n_vertices)], "isomorphic": iso}
    text = _summary_line(s) + f" isomorphic={str(iso).lower()}"
    return data, text, None


def cmd_classify(args, g: DefiningGraph):
    b = _blowup(args, g)
    rows = classification_report(b)
    lines = [f"{r['label']} {r['class']} fold={{{','.join(r['foldClass'])}}} cyclic={str(r['cyclic']).lower()}"
             for r in rows]
    return rows, "\n".join(lines), None


def cmd_fiber(args, g: DefiningGraph):
    b = _blowup(args, g)
    system = build_shear_system(b)
    data = system.to_json(b)
    lines = [f"fiberDim={system.fiber_dim}"]
    cols = ", ".join(f"{a}:{w}" for a, w in data["columns"])
    lines.append(f"columns: {cols}")
    for vec in data["kernelBasis"]:
        lines.append("kernel: " + " ".join(str(x) for x in vec))
    plot = None
    if args.plot:
        from .plotting import plot_shear_system
        plot = lambda: plot_shear_system(b, system, args.plot)  # noqa: E731
    return data, "\n".join(lines), None, plot


def cmd_straighten(args, g: DefiningGraph):
    b = _blowup(args, g)
    if args.metric:
        try:
            f = metric_mod.MetricStructure.from_json(b, json.loads(_read_text(args.metric)))
        except json.JSONDecodeError as exc:
            raise ParseFailure(f"invalid metric JSON: {exc}") from None
    else:
        f = metric_mod.MetricStructure.standard(b)
    tol = args.tol if args.tol is not None else metric_mod.TOL
    ok, why = metric_mod.check_allowable(b, f, tol=tol)
    if not ok:
        raise SemanticFailure("metric is not allowable: " + "; ".join(why))
    ts = [i / (args.samples - 1) for i in range(args.samples)] if args.samples > 1 else [1.0]
    states = [metric_mod.straighten(b, f, t, tol=tol) for t in ts]
    samples = []
    lines = []
    for s in states:
        off = max((float(np.abs(cg.gram - np.diag(np.diag(cg.gram))).max()) for cg in s.grams if cg.gram.size), default=0.0)
        allowed = metric_mod.check_allowable(b, s.structure, tol=tol)[0]
        samples.append({"t": s.t, "maxOffDiagonal": off, "allowable": allowed, "metric": s.structure.to_json(b)})
        lines.append(f"t={s.t:.4f} maxOffDiagonal={off:.3e} allowable={str(allowed).lower()}")
    plot = None
    if args.plot:
        from .plotting import plot_straightening
        plot = lambda: plot_straightening(b, states, args.plot)  # noqa: E731
    return {"samples": samples}, "\n".join(lines), None, plot


COMMANDS = {
    "graph-info": cmd_graph_info,
    "partitions": cmd_partitions,
    "blowup": cmd_blowup,
    "collapse": cmd_collapse,
    "classify": cmd_classify,
    "fiber": cmd_fiber,
    "straighten": cmd_straighten,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagspace", description="Blowups, partitions and metrics for RAAG Outer space.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", "-i", required=True, help="graph JSON file, or - for stdin")
        s.add_argument("--format", "-f", choices=["json", "dot", "text"], default="text")
        s.add_argument("--out", "-o", help="write the report here instead of stdout")
        s.add_argument("--tol", type=float, default=None, help="numerical tolerance")
        if name not in ("graph-info", "partitions"):
            s.add_argument("--partitions", "-p", default=None,
                           help="indices like '3,Q5', inline JSON, or @file")
            s.add_argument("--cap", type=int, default=DEFAULT_REGION_CAP, help="maximum number of regions")
        if name in ("blowup", "fiber", "straighten"):
            s.add_argument("--plot", default=None, help="also render a PNG figure to this path")
        if name == "collapse":
            s.add_argument("--index", type=int, default=0, help="family position of the partition to collapse")
        if name == "straighten":
            s.add_argument("--metric", default=None, help="metric JSON (default: the standard structure)")
            s.add_argument("--samples", type=int, default=5)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cap", 1) <= 0:
        print("error: --cap must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        g = load_graph(args.input)
        result = COMMANDS[args.command](args, g)
        data, text, dot = result[:3]
        plot = result[3] if len(result) > 3 else None
        if args.format == "dot":
            if dot is None:
                raise SemanticFailure(f"dot output is not available for {args.command}")
            out = dot
        elif args.format == "json":
            out = json.dumps(data, indent=2, sort_keys=False) + "\n"
        else:
            out = text + "\n"
        if plot is not None:
            plot()
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RegionCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SemanticFailure, GraphError, PartitionError, BlowupError, ComplexError,
            metric_mod.MetricError, ShearError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
