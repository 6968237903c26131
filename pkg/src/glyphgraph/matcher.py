"""Motif recognition that is invariant under rotation and uniform scaling.

A motif is a small pattern graph over symbols.  Each pattern line carries a
required length proportion and a pattern angle.  A binding of symbols to
graph nodes is recognized when one common ratio and one common rotation
explain every mapped line.  Graph lines are matched in either orientation,
reading a reversed line at its azimuth + 180.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import FormatError, UsageError
from .geometry import DEFAULT_TOLERANCE, Tolerance, approx_eq, canonical_direction, normalize_angle
from .model import Graph, LineSeg


@dataclass(frozen=True)
class PatternLine:
    start: str
    end: str
    proportion: float
    angle: float


@dataclass(frozen=True)
class MotifPattern:
    name: str
    lines: Tuple[PatternLine, ...]
    symbols: Tuple[str, ...] = ()  # reporting order; defaults to first appearance

    def __post_init__(self):
        lines = tuple(self.lines)
        object.__setattr__(self, "lines", lines)
        used = dict.fromkeys(s for pl in lines for s in (pl.start, pl.end))
        if not self.symbols:
            object.__setattr__(self, "symbols", tuple(used))
        elif sorted(self.symbols) != sorted(used):
            raise FormatError(f"symbol order {list(self.symbols)} must list exactly the symbols {list(used)}")
        if not lines:
            raise FormatError("a motif needs at least one line")
        for pl in lines:
            if pl.start == pl.end:
                raise FormatError(f"pattern line {pl.start!r} -> {pl.end!r} is a loop")
            if not pl.proportion > 0:
                raise FormatError(f"pattern proportions must be > 0, got {pl.proportion!r}")
        if _line_order(lines) is None:
            raise FormatError("pattern lines must form a connected graph")

    @property
    def node_syms(self) -> Tuple[str, ...]:
        return self.symbols

    @classmethod
    def build(cls, name: str, lines: Sequence[Tuple[str, str, float, float]], symbols: Sequence[str] = ()) -> "MotifPattern":
        return cls(name, tuple(PatternLine(*pl) for pl in lines), tuple(symbols))


@dataclass(frozen=True)
class Recognition:
    motif: str
    nodes: Tuple[str, ...]
    scale: float
    rotation: float


def proportional(lengths: Sequence[float], proportions: Sequence[float], tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[float]:
    """The common ratio length/proportion, or None when the ratios disagree."""
    if len(lengths) != len(proportions):
        raise UsageError(f"{len(lengths)} lengths vs {len(proportions)} proportions")
    if not lengths:
        return 1.0
    ratio = lengths[0] / proportions[0]
    for length, p in zip(lengths[1:], proportions[1:]):
        if not approx_eq(length / p, ratio, tol, "ratio"):
            return None
    return ratio


def rotated(angles: Sequence[float], pattern_angles: Sequence[float], tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[float]:
    """The common rotation (angle - pattern angle) mod 360, or None."""
    if len(angles) != len(pattern_angles):
        raise UsageError(f"{len(angles)} angles vs {len(pattern_angles)} pattern angles")
    if not angles:
        return 0.0
    rotation = normalize_angle(angles[0] - pattern_angles[0])
    for a, p in zip(angles[1:], pattern_angles[1:]):
        if not approx_eq(normalize_angle(a - p), rotation, tol, "angle"):
            return None
    return rotation


def _line_order(lines: Sequence[PatternLine]) -> Optional[List[int]]:
    """Pattern line indices starting at line 0, each touching an already placed symbol."""
    order = [0]
    placed = {lines[0].start, lines[0].end}
    remaining = list(range(1, len(lines)))
    while remaining:
        for k in remaining:
            if lines[k].start in placed or lines[k].end in placed:
                order.append(k)
                placed.update((lines[k].start, lines[k].end))
                remaining.remove(k)
                break
        else:
            return None
    return order


def _oriented(ln: LineSeg, forward: bool) -> Tuple[str, str, float, float]:
    if forward:
        return ln.start, ln.end, ln.length, ln.angle
    return ln.end, ln.start, ln.length, normalize_angle(ln.angle + 180.0)


def _recognition(p: MotifPattern, binding: Dict[str, str], lengths, angles, tol) -> Optional[Recognition]:
    scale = proportional(lengths, [pl.proportion for pl in p.lines], tol)
    rotation = rotated(angles, [pl.angle for pl in p.lines], tol)
    if scale is None or rotation is None:
        return None
    return Recognition(p.name, tuple(binding[s] for s in p.node_syms), scale, rotation)


def match_motif(g: Graph, p: MotifPattern, tol: Tolerance = DEFAULT_TOLERANCE) -> Set[Recognition]:
    """All injective symbol bindings under which some graph lines realize the pattern.

    Backtracks over pattern lines in connected order; candidates for a line
    come from the edges at an already bound node.  One recognition per
    binding: the first consistent line choice in line-index order.
    """
    order = _line_order(p.lines)
    n = len(p.lines)
    # node -> [(line index, forward?)] covering both orientations
    out_edges: Dict[str, List[Tuple[int, bool]]] = {v: [] for v in g.nodes}
    for i, ln in enumerate(g.lines):
        out_edges[ln.start].append((i, True))
        out_edges[ln.end].append((i, False))
    first = p.lines[0]
    found: Dict[Tuple[str, ...], Recognition] = {}

    binding: Dict[str, str] = {}
    used_nodes: Set[str] = set()
    chosen: List[Optional[Tuple[float, float]]] = [None] * n
    used_lines: Set[int] = set()
    ref: List[float] = []

    def consistent(k: int, length: float, angle: float) -> bool:
        pl = p.lines[k]
        if k == 0:
            return True
        return approx_eq(length / pl.proportion, ref[0], tol, "ratio") and approx_eq(
            normalize_angle(angle - pl.angle), ref[1], tol, "angle"
        )

    def candidates(k: int) -> Iterator[Tuple[int, str, str, float, float]]:
        pl = p.lines[k]
        if pl.start in binding:
            for i, fwd in out_edges[binding[pl.start]]:
                u, v, length, angle = _oriented(g.lines[i], fwd)
                yield i, u, v, length, angle
        elif pl.end in binding:
            for i, fwd in out_edges[binding[pl.end]]:
                # walk the edge backwards so it runs from the free symbol into the bound one
                u, v, length, angle = _oriented(g.lines[i], not fwd)
                yield i, u, v, length, angle
        else:
            for i in range(len(g.lines)):
                for fwd in (True, False):
                    u, v, length, angle = _oriented(g.lines[i], fwd)
                    yield i, u, v, length, angle

    def bind(sym: str, node: str, fresh: List[str]) -> bool:
        if sym in binding:
            return binding[sym] == node
        if node in used_nodes:
            return False
        binding[sym] = node
        used_nodes.add(node)
        fresh.append(sym)
        return True

    def search(step: int) -> None:
        if step == n:
            key = tuple(binding[s] for s in p.node_syms)
            if key not in found:
                lengths = [c[0] for c in chosen]
                angles = [c[1] for c in chosen]
                rec = _recognition(p, binding, lengths, angles, tol)
                if rec is not None:
                    found[key] = rec
            return
        k = order[step]
        pl = p.lines[k]
        for i, u, v, length, angle in candidates(k):
            if i in used_lines or not consistent(k, length, angle):
                continue
            fresh: List[str] = []
            if bind(pl.start, u, fresh) and bind(pl.end, v, fresh):
                if k == 0:
                    ref[:] = [length / first.proportion, normalize_angle(angle - first.angle)]
                used_lines.add(i)
                chosen[k] = (length, angle)
                search(step + 1)
                used_lines.discard(i)
                chosen[k] = None
            for s in fresh:
                used_nodes.discard(binding.pop(s))

    search(0)
    return set(found.values())


def brute_force_match(g: Graph, p: MotifPattern, tol: Tolerance = DEFAULT_TOLERANCE) -> Set[Recognition]:
    """Exhaustive reference matcher: every assignment of (line, orientation) to each pattern line."""
    options = [(i, fwd) for i in range(len(g.lines)) for fwd in (True, False)]
    found: Dict[Tuple[str, ...], Recognition] = {}
    for combo in itertools.product(options, repeat=len(p.lines)):
        if len({i for i, _ in combo}) < len(combo):
            continue
        binding: Dict[str, str] = {}
        ok = True
        lengths, angles = [], []
        for pl, (i, fwd) in zip(p.lines, combo):
            u, v, length, angle = _oriented(g.lines[i], fwd)
            for sym, node in ((pl.start, u), (pl.end, v)):
                if binding.setdefault(sym, node) != node:
                    ok = False
            lengths.append(length)
            angles.append(angle)
        if not ok or len(set(binding.values())) < len(binding):
            continue
        key = tuple(binding[s] for s in p.node_syms)
        if key in found:
            continue
        rec = _recognition(p, binding, lengths, angles, tol)
        if rec is not None:
            found[key] = rec
    return set(found.values())


def find_parallel(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> Set[Recognition]:
    """One recognition per unordered pair of lines with equal canonical direction.

    Nodes are ``[A, B, C, D]`` of the two lines as stored; scale is the
    length ratio second/first and rotation the shared direction.
    """
    dirs = [canonical_direction(ln.angle)[0] for ln in g.lines]
    out = set()
    for i, j in itertools.combinations(range(len(g.lines)), 2):
        if approx_eq(dirs[i], dirs[j], tol, "angle") or approx_eq(
            abs(dirs[i] - dirs[j]), 180.0, tol, "angle"
        ):
            a, b = g.lines[i], g.lines[j]
            out.add(Recognition("parallel", (a.start, a.end, b.start, b.end), b.length / a.length, dirs[i]))
    return out


def dedupe(recognitions) -> List[Recognition]:
    """Keep one recognition per (motif, node set); the lexicographically first binding wins."""
    seen: Dict[Tuple[str, frozenset], Recognition] = {}
    for rec in sort_recognitions(recognitions):
        seen.setdefault((rec.motif, frozenset(rec.nodes)), rec)
    return list(seen.values())


def sort_recognitions(recognitions) -> List[Recognition]:
    return sorted(recognitions, key=lambda r: (r.motif, r.nodes, r.scale, r.rotation))


# A pattern over symbols A..E with lines A-B, B-C, E-C, C-D.
Y_SIGN = MotifPattern.build(
    "y_sign",
    [("A", "B", 1, 90), ("B", "C", 1, 0), ("E", "C", 1, 90), ("C", "D", 1, 90)],
    symbols="ABCDE",
)


BUILTIN_PATTERNS = {"y_sign": Y_SIGN}


def recognize(g: Graph, name: str, tol: Tolerance = DEFAULT_TOLERANCE) -> Set[Recognition]:
    """Run a built-in recognizer by name: ``parallel`` or ``y_sign``."""
    if name == "parallel":
        return find_parallel(g, tol)
    if name in BUILTIN_PATTERNS:
        return match_motif(g, BUILTIN_PATTERNS[name], tol)
    raise UsageError(f"unknown built-in recognizer {name!r}; choose from parallel, {', '.join(BUILTIN_PATTERNS)}")
