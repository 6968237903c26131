"""Command-line front end: ``glyphgraph {analyze,recognize,generate,random,render}``.

Exit codes: 0 success, 1 domain or validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import analysis, generator, io, matcher, model, render
from .errors import GlyphGraphError, UsageError
from .geometry import Point, Tolerance, normalize_angle

log = logging.getLogger("glyphgraph")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _point(text: str) -> Point:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}") from None
    return Point(x, y)


def _size(text: str):
    try:
        w, h = (float(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    return (w, h)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _load_graph(path: str, tol: Tolerance) -> model.Graph:
    return generator.assemble(io.parse_graph(_read(path)), tol)


def _resolved(g: model.Graph, tol: Tolerance, root_point=None, base_angle=None) -> model.Graph:
    if not g.nodes:
        raise UsageError("nothing to draw: the graph has no lines")
    root = g.nodes[0]
    if base_angle:
        keep = {root: g.coords[root]} if root in g.coords else {}
        g = g.evolve(
            lines=tuple(ln.__class__(ln.start, ln.end, ln.length, normalize_angle(ln.angle + base_angle), ln.tag) for ln in g.lines),
            coords=keep,
        )
    return model.resolve_coordinates(g, root, root_point, tol)


def _svg_dump(g: model.Graph, directory: Optional[str], stem: str, tol: Tolerance) -> None:
    if directory is None:
        return
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.svg").write_text(render.to_svg(_resolved(g, tol)), encoding="utf-8")


def cmd_analyze(args, tol: Tolerance) -> int:
    g = _load_graph(args.graph, tol)
    table = analysis.analyze(g, tol, all_incidences=args.all_incidences)
    text = analysis.report_json(table) + "\n" if args.json else analysis.report(table, tol)
    _write(text, args.output)
    return 0


def cmd_recognize(args, tol: Tolerance) -> int:
    g = _load_graph(args.graph, tol)
    if args.pattern:
        found = matcher.match_motif(g, io.parse_pattern(_read(args.pattern)), tol)
    else:
        found = matcher.recognize(g, args.builtin, tol)
    recs = matcher.dedupe(found) if args.dedupe else matcher.sort_recognitions(found)
    lines = [
        f"{r.motif} {','.join(r.nodes)} scale={io.fmt_number(r.scale)} rotation={io.fmt_number(r.rotation)}"
        for r in recs
    ]
    _write("".join(line + "\n" for line in lines), args.output)
    return 0


def _crossings(g: model.Graph, tol: Tolerance) -> int:
    return len(model.find_crossings(model.resolve_coordinates(g, tol=tol), tol))


def cmd_generate(args, tol: Tolerance) -> int:
    g = io.parse_graph(_read(args.graph))
    rows = []
    for k, out in enumerate(generator.exhaustive_generate(g, tol, limit=args.limit)):
        out = out.evolve(name=f"{g.name}-{k}" if g.name else str(k))
        rows.append(json.dumps({"index": k, "crossings": _crossings(out, tol), "graph": io.graph_to_json(out)}))
        _svg_dump(out, args.svg_dir, out.name, tol)
    _write("".join(r + "\n" for r in rows), args.output)
    return 0


def cmd_random(args, tol: Tolerance) -> int:
    corpus = io.parse_corpus(_read(args.corpus))
    rows = []
    for k, mark in enumerate(generator.random_generate(corpus, args.seed, args.attempts, tol)):
        if args.limit is not None and k >= args.limit:
            break
        g = mark.graph.evolve(name=f"random-{args.seed}-{k}")
        rows.append(
            json.dumps(
                {
                    "index": k,
                    "attempt": mark.attempt,
                    "specs": [io.node_to_json(s)["list"] for s in mark.specs],
                    "crossings": _crossings(g, tol),
                    "graph": io.graph_to_json(g),
                }
            )
        )
        _svg_dump(g, args.svg_dir, g.name, tol)
    _write("".join(r + "\n" for r in rows), args.output)
    return 0


def cmd_render(args, tol: Tolerance) -> int:
    g = _load_graph(args.graph, tol)
    style = render.RenderStyle(
        stroke_width=args.stroke_width, margin=args.margin, canvas=args.canvas, y_flip=not args.no_y_flip
    )
    _write(render.to_svg(_resolved(g, tol, args.root, args.base_angle), style), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glyphgraph",
        description="Draw, analyse, recognise and generate straight-line graphs of mason's marks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("analyze", help="count table of nodes, lengths, angles and proportions")
    p.add_argument("graph", help="graph JSON document ('-' for stdin)")
    p.add_argument("--json", action="store_true", help="emit {category: {value: count}} JSON")
    p.add_argument("--all-incidences", action="store_true", help="relative angles at end nodes too")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("recognize", help="find a motif, invariant under scaling and rotation")
    p.add_argument("graph")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--builtin", choices=["parallel", *matcher.BUILTIN_PATTERNS])
    which.add_argument("--pattern", help="pattern JSON file")
    p.add_argument("--dedupe", action="store_true", help="one recognition per matched node set")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("generate", help="all valid graphs from pairing the open half-lines")
    p.add_argument("graph")
    p.add_argument("--limit", type=_positive_int, default=None)
    p.add_argument("--svg-dir", help="also write one SVG per generated graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("random", help="random mason's-mark-like graphs from a node corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--attempts", type=_positive_int, default=100)
    p.add_argument("--limit", type=_positive_int, default=None)
    p.add_argument("--svg-dir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("render", help="draw a graph as SVG")
    p.add_argument("graph")
    p.add_argument("-o", "--output", help="SVG file (default stdout)")
    p.add_argument("--root", type=_point, default=None, metavar="X,Y", help="point of the first node")
    p.add_argument("--base-angle", type=float, default=0.0, metavar="A", help="rotate the drawing by A degrees")
    p.add_argument("--stroke-width", type=float, default=0.05)
    p.add_argument("--margin", type=float, default=0.25)
    p.add_argument("--canvas", type=_size, default=None, metavar="WxH")
    p.add_argument("--no-y-flip", action="store_true", help="keep y pointing down")
    p.set_defaults(func=cmd_render)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        tol = Tolerance.from_env()
        return args.func(args, tol)
    except UsageError as exc:
        print(f"glyphgraph {args.command}: {exc}", file=sys.stderr)
        return 2
    except (GlyphGraphError, OSError) as exc:
        print(f"glyphgraph {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
