"""Graph data model: symbolic nodes, polar line segments, half-line tags and node specs.

Node handles are plain strings and carry no geometry.  Coordinates live in a
separate, partial ``coords`` map and are only filled in by
:func:`resolve_coordinates`, so graphs can be merged, scaled and rotated
purely symbolically before anything is drawn.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DisconnectedError, FormatError, InconsistencyError, UsageError
from .geometry import (
    DEFAULT_TOLERANCE,
    Point,
    Tolerance,
    azimuth,
    canonical_direction,
    endpoint_of,
    normalize_angle,
    points_close,
)

NodeHandle = str
HalfLineTag = str

ANONYMOUS_TAG = "_"


@dataclass(frozen=True)
class LineSeg:
    """A straight line from ``start`` with polar data; ``tag`` marks a half-line."""

    start: NodeHandle
    end: NodeHandle
    length: float
    angle: float
    tag: Optional[HalfLineTag] = None

    def __post_init__(self):
        if self.start == self.end:
            raise FormatError(f"line {self.start!r} -> {self.end!r} starts and ends at the same node")
        if not (math.isfinite(self.length) and self.length > 0):
            raise FormatError(f"line length must be finite and > 0, got {self.length!r}")
        if not (math.isfinite(self.angle) and 0.0 <= self.angle < 360.0):
            raise FormatError(f"line angle must lie in [0, 360), got {self.angle!r}")

    @property
    def is_half(self) -> bool:
        return self.tag is not None

    def reversed(self) -> "LineSeg":
        return LineSeg(self.end, self.start, self.length, normalize_angle(self.angle + 180.0), self.tag)


LengthEntry = Union[float, Tuple[float, Optional[str]]]


@dataclass(frozen=True)
class NodeSpec:
    """Node-centric encoding: lines leaving one node, separated by counter-clockwise angles.

    ``base`` is the azimuth of the first line; only the first spec of a
    connected graph keeps it after half-line merging.
    """

    lengths: Tuple[float, ...]
    angles: Tuple[float, ...] = ()
    tags: Tuple[Optional[HalfLineTag], ...] = ()
    anchor: Optional[Point] = None
    base: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(v) for v in self.lengths))
        object.__setattr__(self, "angles", tuple(float(v) for v in self.angles))
        tags = tuple(self.tags) if self.tags else (None,) * len(self.lengths)
        object.__setattr__(self, "tags", tags)
        if self.anchor is not None:
            object.__setattr__(self, "anchor", Point(float(self.anchor[0]), float(self.anchor[1])))
        if not self.lengths:
            raise FormatError("node list must contain at least one length")
        if len(self.angles) != len(self.lengths) - 1:
            raise FormatError("node list must alternate length, angle, ..., length")
        if len(self.tags) != len(self.lengths):
            raise FormatError("one tag slot per length required")
        for v in self.lengths:
            if not (math.isfinite(v) and v > 0):
                raise FormatError(f"line length must be finite and > 0, got {v!r}")
        for a in self.angles:
            if not (math.isfinite(a) and 0 < a < 360):
                raise FormatError(f"angle between neighbouring lines must lie in (0, 360), got {a!r}")
        if not math.isfinite(self.base):
            raise FormatError(f"base angle must be finite, got {self.base!r}")
        named = Counter(t for t in self.tags if t is not None and t != ANONYMOUS_TAG)
        for tag, n in named.items():
            if n > 1:
                raise FormatError(f"tag {tag!r} occurs {n} times within one node")

    @classmethod
    def from_entries(cls, entries: Sequence, anchor=None, base: float = 0.0) -> "NodeSpec":
        """Build from the alternating list form, e.g. ``[2, 90, (1, "I"), 90, 2]``."""
        entries = list(entries)
        if len(entries) % 2 == 0:
            raise FormatError(f"node list must have odd length, got {len(entries)}")
        lengths, angles, tags = [], [], []
        for i, item in enumerate(entries):
            if i % 2 == 1:
                if not _is_number(item):
                    raise FormatError(f"entry {i} must be an angle, got {item!r}")
                angles.append(item)
                continue
            if isinstance(item, Mapping):
                if set(item) - {"len", "tag"} or "len" not in item:
                    raise FormatError(f"entry {i}: tagged length needs keys 'len' and 'tag'")
                length, tag = item["len"], item.get("tag")
            elif isinstance(item, tuple):
                length, tag = item
            else:
                length, tag = item, None
            if not _is_number(length):
                raise FormatError(f"entry {i} must be a length, got {length!r}")
            if tag is not None and (not isinstance(tag, str) or not tag):
                raise FormatError(f"entry {i}: tag must be a non-empty string")
            lengths.append(length)
            tags.append(tag)
        return cls(tuple(lengths), tuple(angles), tuple(tags), anchor, base)

    def entries(self) -> list:
        out: list = []
        for i, (length, tag) in enumerate(zip(self.lengths, self.tags)):
            if i:
                out.append(self.angles[i - 1])
            out.append(length if tag is None else (length, tag))
        return out

    @property
    def open_count(self) -> int:
        return sum(t is not None for t in self.tags)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


@dataclass(frozen=True)
class Graph:
    """Lines over symbolic node handles plus a partial coordinate binding."""

    lines: Tuple[LineSeg, ...] = ()
    coords: Mapping[NodeHandle, Point] = field(default_factory=dict)
    nodes: Tuple[NodeHandle, ...] = ()
    name: str = ""

    def __post_init__(self):
        lines = tuple(self.lines)
        seen = dict.fromkeys(self.nodes)
        for ln in lines:
            seen.setdefault(ln.start)
            seen.setdefault(ln.end)
        coords = {k: Point(*v) for k, v in self.coords.items()}
        for k in coords:
            if k not in seen:
                raise FormatError(f"coordinate given for unknown node {k!r}")
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "nodes", tuple(seen))
        object.__setattr__(self, "coords", MappingProxyType(coords))

    @cached_property
    def incidence(self) -> Dict[NodeHandle, List[int]]:
        inc: Dict[NodeHandle, List[int]] = {n: [] for n in self.nodes}
        for i, ln in enumerate(self.lines):
            inc[ln.start].append(i)
            inc[ln.end].append(i)
        return inc

    @property
    def half_lines(self) -> List[LineSeg]:
        return [ln for ln in self.lines if ln.tag is not None]

    @property
    def is_resolved(self) -> bool:
        return all(n in self.coords for n in self.nodes)

    def tag_counts(self) -> Counter:
        return Counter(ln.tag for ln in self.lines if ln.tag is not None)

    def open_tags(self) -> List[HalfLineTag]:
        """Tags carried by exactly one half-line, in line order."""
        counts = self.tag_counts()
        return [ln.tag for ln in self.lines if ln.tag is not None and counts[ln.tag] == 1]

    def evolve(self, **changes) -> "Graph":
        return replace(self, **changes)


def node_to_lines(spec: NodeSpec, center: NodeHandle, base_angle: Optional[float] = None) -> Tuple[LineSeg, ...]:
    """Expand a spec into a star of lines from ``center`` to fresh leaves ``center.i``."""
    heading = spec.base if base_angle is None else base_angle
    out = []
    for i, (length, tag) in enumerate(zip(spec.lengths, spec.tags)):
        if i:
            heading += spec.angles[i - 1]
        out.append(LineSeg(center, f"{center}.{i}", length, normalize_angle(heading), tag))
    return tuple(out)


def graph_from_specs(specs: Iterable[NodeSpec], name: str = "", prefix: str = "c") -> Graph:
    """Expand specs into one graph; centers are ``c0, c1, ...``.

    Anonymous ``_`` tags become fresh unique names, so they stay open.
    A named tag shared by two specs is a forced pair; more than two is an error.
    """
    specs = list(specs)
    named = Counter(t for s in specs for t in s.tags if t is not None and t != ANONYMOUS_TAG)
    for tag, n in named.items():
        if n > 2:
            raise FormatError(f"tag {tag!r} occurs {n} times; a tag pairs exactly two half-lines")
    fresh = _fresh_names(set(named))
    lines: List[LineSeg] = []
    coords: Dict[NodeHandle, Point] = {}
    for i, spec in enumerate(specs):
        center = f"{prefix}{i}"
        for ln in node_to_lines(spec, center):
            if ln.tag == ANONYMOUS_TAG:
                ln = replace(ln, tag=next(fresh))
            lines.append(ln)
        if spec.anchor is not None:
            coords[center] = spec.anchor
    return Graph(tuple(lines), coords, name=name)


def _fresh_names(taken):
    k = 0
    while True:
        k += 1
        candidate = f"_{k}"
        if candidate not in taken:
            yield candidate


def degree(g: Graph, n: NodeHandle) -> int:
    if n not in g.incidence:
        raise UsageError(f"unknown node {n!r}")
    return len(g.incidence[n])


def component_of(g: Graph, n: NodeHandle) -> List[NodeHandle]:
    """Nodes reachable from ``n`` (half-lines count as edges), in BFS order."""
    if n not in g.incidence:
        raise UsageError(f"unknown node {n!r}")
    seen = {n: None}
    queue = deque([n])
    while queue:
        u = queue.popleft()
        for i in g.incidence[u]:
            ln = g.lines[i]
            v = ln.end if ln.start == u else ln.start
            if v not in seen:
                seen[v] = None
                queue.append(v)
    return list(seen)


def connected_components(g: Graph) -> List[List[NodeHandle]]:
    comps, done = [], set()
    for n in g.nodes:
        if n in done:
            continue
        comp = component_of(g, n)
        done.update(comp)
        comps.append(comp)
    return comps


def resolve_coordinates(
    g: Graph,
    root: Optional[NodeHandle] = None,
    root_point: Optional[Point] = None,
    tol: Tolerance = DEFAULT_TOLERANCE,
    unit_scale: float = 1.0,
    allow_half_lines: bool = False,
) -> Graph:
    """Bind every node to a point by propagating polar data outward from ``root``.

    Defaults: the first node, at its pre-bound point or the origin.  Other
    pre-bound points act as constraints and must agree with propagation.
    """
    if not g.nodes:
        return g
    if not allow_half_lines and g.half_lines:
        raise UsageError(f"cannot resolve coordinates with unmatched half-line(s) {sorted(g.tag_counts())}")
    root = g.nodes[0] if root is None else root
    if root not in g.incidence:
        raise UsageError(f"unknown root node {root!r}")
    if root_point is None:
        root_point = g.coords.get(root, Point(0.0, 0.0))
    bound: Dict[NodeHandle, Point] = {root: Point(*root_point)}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for i in g.incidence[u]:
            ln = g.lines[i]
            if ln.start == u:
                v, cand = ln.end, endpoint_of(bound[u], ln.length, ln.angle, unit_scale)
            else:
                v, cand = ln.start, endpoint_of(bound[u], ln.length, ln.angle + 180.0, unit_scale)
            if v in bound:
                if not points_close(bound[v], cand, tol):
                    raise InconsistencyError(v, bound[v], cand)
                continue
            pinned = g.coords.get(v)
            if pinned is not None and not points_close(pinned, cand, tol):
                raise InconsistencyError(v, pinned, cand)
            bound[v] = cand
            queue.append(v)
    for n in g.nodes:
        if n not in bound:
            raise DisconnectedError(n)
    return g.evolve(coords={n: bound[n] for n in g.nodes})


def canonicalize(g: Graph) -> Graph:
    """Invert every line whose azimuth lies in [180, 360)."""
    lines = []
    for ln in g.lines:
        direction, flipped = canonical_direction(ln.angle)
        lines.append(LineSeg(ln.end, ln.start, ln.length, direction, ln.tag) if flipped else ln)
    return g.evolve(lines=tuple(lines))


def transform(g: Graph, scale: float, rotation: float) -> Graph:
    """Uniformly scale and rotate the whole graph about the origin."""
    if not (math.isfinite(scale) and scale > 0):
        raise UsageError(f"scale must be finite and > 0, got {scale!r}")
    lines = tuple(
        replace(ln, length=ln.length * scale, angle=normalize_angle(ln.angle + rotation)) for ln in g.lines
    )
    coords = {n: similarity_point(p, Point(0.0, 0.0), scale, rotation) for n, p in g.coords.items()}
    return g.evolve(lines=lines, coords=coords)


def similarity_point(p: Point, center: Point, scale: float, rotation: float) -> Point:
    rad = math.radians(rotation)
    c, s = math.cos(rad), math.sin(rad)
    dx, dy = p[0] - center[0], p[1] - center[1]
    return Point(center[0] + scale * (c * dx - s * dy), center[1] + scale * (s * dx + c * dy))


def rename_nodes(g: Graph, mapping: Mapping[NodeHandle, NodeHandle]) -> Graph:
    """Apply a handle substitution; several handles may collapse onto one."""
    lines = tuple(
        replace(ln, start=mapping.get(ln.start, ln.start), end=mapping.get(ln.end, ln.end)) for ln in g.lines
    )
    coords: Dict[NodeHandle, Point] = {}
    for n, p in g.coords.items():
        coords.setdefault(mapping.get(n, n), p)
    nodes = tuple(dict.fromkeys(mapping.get(n, n) for n in g.nodes))
    return Graph(lines, coords, nodes, g.name)


def segments(g: Graph) -> List[Tuple[Point, Point]]:
    if not g.is_resolved:
        raise UsageError("graph coordinates are not resolved")
    return [(g.coords[ln.start], g.coords[ln.end]) for ln in g.lines]


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def find_crossings(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> List[Tuple[int, int]]:
    """Index pairs of lines that properly cross (planarity advisory; shared endpoints excluded)."""
    segs = segments(g)
    out = []
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            a, b = g.lines[i], g.lines[j]
            if {a.start, a.end} & {b.start, b.end}:
                continue
            p1, p2 = segs[i]
            q1, q2 = segs[j]
            d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
            d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
            eps = tol.abs_eps
            if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
                (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
            ):
                out.append((i, j))
    return out


def congruent(g: Graph, h: Graph, eps: float = 1e-6, allow_scale: bool = False) -> bool:
    """Whether two resolved graphs have the same drawing up to a rigid motion (or a similarity).

    Reflections are not allowed: a mirrored mark is a different mark.
    """
    gs, hs = segments(g), segments(h)
    if len(gs) != len(hs):
        return False
    if not gs:
        return True
    p, q = gs[0]
    d0 = math.dist(p, q)
    a0 = azimuth(p, q)
    for u, v in hs:
        for s, t in ((u, v), (v, u)):
            d1 = math.dist(s, t)
            if not allow_scale and abs(d1 - d0) > eps:
                continue
            scale = d1 / d0
            rot = azimuth(s, t) - a0
            moved = [
                (_move(a, p, s, scale, rot), _move(b, p, s, scale, rot)) for a, b in gs
            ]
            if _same_segments(moved, hs, eps):
                return True
    return False


def _move(x: Point, src: Point, dst: Point, scale: float, rot: float) -> Point:
    y = similarity_point(x, src, scale, rot)
    return Point(y[0] - src[0] + dst[0], y[1] - src[1] + dst[1])


def _same_segments(a, b, eps) -> bool:
    tol = Tolerance(abs_eps=eps)
    remaining = list(b)
    for s1, s2 in a:
        for k, (t1, t2) in enumerate(remaining):
            if (points_close(s1, t1, tol) and points_close(s2, t2, tol)) or (
                points_close(s1, t2, tol) and points_close(s2, t1, tol)
            ):
                del remaining[k]
                break
        else:
            return False
    return True
