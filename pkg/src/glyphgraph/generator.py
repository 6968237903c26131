"""Graph generation by pairing and merging half-lines.

Two half-lines are merged by scaling and rotating the whole subgraph of the
second one until it coincides with the first (reversed), then identifying
their endpoints.  Exhaustive generation tries every perfect matching of the
open half-lines; random generation assembles mason's-mark-like graphs from
a corpus of node specs.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import GlyphGraphError, MergeError, UsageError
from .geometry import DEFAULT_TOLERANCE, Tolerance, approx_eq, is_multiple, normalize_angle, points_close
from .model import (
    Graph,
    HalfLineTag,
    LineSeg,
    NodeHandle,
    NodeSpec,
    component_of,
    connected_components,
    graph_from_specs,
    rename_nodes,
    resolve_coordinates,
    similarity_point,
)

logger = logging.getLogger(__name__)

PairingPlan = Tuple[Tuple[HalfLineTag, HalfLineTag], ...]


@dataclass(frozen=True)
class UpdateOp:
    seed_node: NodeHandle
    scale: float
    rotation: float

    def __post_init__(self):
        if not (self.scale > 0 and self.scale < float("inf")):
            raise UsageError(f"update scale must be finite and > 0, got {self.scale!r}")


@dataclass(frozen=True)
class NodeCorpus:
    primary_specs: Tuple[NodeSpec, ...]
    other_specs: Tuple[NodeSpec, ...]


@dataclass(frozen=True)
class Violation:
    check: str  # one of: half_lines, connectivity, geometry, coincident_nodes, coincident_lines
    message: str


def enumerate_pairings(tags: Sequence[HalfLineTag]) -> Iterator[PairingPlan]:
    """All perfect matchings of the open tags.

    A tag listed twice is already bound to its partner and takes no part
    in the enumeration; one listed more than twice is an error.
    """
    counts: Dict[HalfLineTag, int] = {}
    for t in tags:
        counts[t] = counts.get(t, 0) + 1
    for t, n in counts.items():
        if n > 2:
            raise UsageError(f"tag {t!r} occurs {n} times")
    free = [t for t in counts if counts[t] == 1]
    if len(free) % 2:
        return
    yield from _pairlines(free)


def _pairlines(items: List[HalfLineTag]) -> Iterator[PairingPlan]:
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for plan in _pairlines(rest[:k] + rest[k + 1 :]):
            yield ((head, partner),) + plan


def apply_update(g: Graph, op: UpdateOp) -> Graph:
    """Scale and rotate every line of the seed's component, each exactly once.

    Lines are first collected, then rewritten in one pass.  Bound points in
    the component move with it about the seed when the seed itself is bound,
    and are dropped otherwise.
    """
    comp = set(component_of(g, op.seed_node))
    marked = [i for i, ln in enumerate(g.lines) if ln.start in comp]
    lines = list(g.lines)
    for i in marked:
        ln = lines[i]
        lines[i] = replace(ln, length=ln.length * op.scale, angle=normalize_angle(op.rotation + ln.angle))
    coords = dict(g.coords)
    seed_point = coords.get(op.seed_node)
    for n in comp:
        if n in coords:
            if seed_point is None:
                del coords[n]
            else:
                coords[n] = similarity_point(coords[n], seed_point, op.scale, op.rotation)
    return g.evolve(lines=tuple(lines), coords=coords)


def merge_factors(h1: LineSeg, h2: LineSeg) -> Tuple[float, float]:
    """Scale and rotation that carry ``h2`` onto ``h1`` reversed."""
    return h1.length / h2.length, normalize_angle(h1.angle + 180.0 - h2.angle)


def _keep_name(a: NodeHandle, b: NodeHandle) -> Tuple[NodeHandle, NodeHandle]:
    """Return (kept, dropped) when two handles are identified; shorter names survive."""
    return (a, b) if (len(a), a) <= (len(b), b) else (b, a)


def merge_pair(g: Graph, h1: LineSeg, h2: LineSeg, tol: Tolerance = DEFAULT_TOLERANCE) -> Graph:
    """Join two half-lines into one full line, transforming ``h2``'s subgraph onto ``h1``.

    Within one component nothing can be transformed: the pair is accepted
    only when it already coincides (equal length, opposite azimuths).
    """
    if h1.tag is None or h2.tag is None:
        raise MergeError("both lines must be half-lines")
    try:
        i1, i2 = g.lines.index(h1), g.lines.index(h2)
    except ValueError:
        raise MergeError("half-line not in graph") from None
    if i1 == i2:
        raise MergeError(f"half-line {h1.tag!r} cannot pair with itself")
    n1, n2, n3, n4 = h1.start, h1.end, h2.start, h2.end
    if len({n1, n2, n3, n4}) < 4:
        raise MergeError(f"half-lines {h1.tag!r} and {h2.tag!r} share an endpoint")
    scale, rotation = merge_factors(h1, h2)
    comp = component_of(g, n3)
    if n1 in comp:
        if not (approx_eq(h1.length, h2.length, tol, "ratio") and approx_eq(rotation, 0.0, tol, "angle")):
            raise MergeError(f"half-lines {h1.tag!r} and {h2.tag!r} close a cycle inconsistently")
        work = g
    else:
        work = apply_update(g, UpdateOp(n3, scale, rotation))
        # the moved subgraph is also translated onto h1, so its points are stale
        work = work.evolve(coords={n: p for n, p in work.coords.items() if n not in comp})
    lines = list(work.lines)
    lines[i1] = LineSeg(n1, n2, h1.length, h1.angle)
    del lines[i2]
    mapping = {}
    for a, b in ((n1, n4), (n2, n3)):
        keep, drop = _keep_name(a, b)
        mapping[drop] = keep
    try:
        return rename_nodes(work.evolve(lines=tuple(lines)), mapping)
    except GlyphGraphError as exc:
        raise MergeError(f"merging {h1.tag!r} with {h2.tag!r}: {exc}") from None


def _line_with_tag(g: Graph, tag: HalfLineTag) -> List[LineSeg]:
    return [ln for ln in g.lines if ln.tag == tag]


def merge_tags(g: Graph, a: HalfLineTag, b: Optional[HalfLineTag] = None, tol: Tolerance = DEFAULT_TOLERANCE) -> Graph:
    """Merge the half-lines tagged ``a`` and ``b`` (or the two sharing ``a``); the earlier line stays fixed."""
    pair = _line_with_tag(g, a) if b is None else _line_with_tag(g, a) + _line_with_tag(g, b)
    if len(pair) != 2:
        raise MergeError(f"expected two half-lines for {a!r}/{b!r}, found {len(pair)}")
    h1, h2 = sorted(pair, key=g.lines.index)
    return merge_pair(g, h1, h2, tol)


def assemble(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> Graph:
    """Merge every forced pair (a tag shared by two half-lines), in tag order."""
    for tag, n in sorted(g.tag_counts().items()):
        if n == 2:
            g = merge_tags(g, tag, tol=tol)
    return g


def validate_graph(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> List[Violation]:
    """Every violated validity check, in check order; empty means valid."""
    out: List[Violation] = []
    if g.half_lines:
        tags = ", ".join(sorted(g.tag_counts()))
        out.append(Violation("half_lines", f"unmatched half-lines: {tags}"))
    comps = connected_components(g)
    if len(comps) > 1:
        out.append(Violation("connectivity", f"{len(comps)} components"))
        return out
    if not g.lines:
        return out
    try:
        r = resolve_coordinates(g, tol=tol, allow_half_lines=True)
    except GlyphGraphError as exc:
        out.append(Violation("geometry", str(exc)))
        return out
    pts = [(n, r.coords[n]) for n in r.nodes]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if points_close(pts[i][1], pts[j][1], tol):
                out.append(Violation("coincident_nodes", f"nodes {pts[i][0]!r} and {pts[j][0]!r} coincide"))
    for i in range(len(r.lines)):
        for j in range(i + 1, len(r.lines)):
            a, b = r.lines[i], r.lines[j]
            pa = (r.coords[a.start], r.coords[a.end])
            pb = (r.coords[b.start], r.coords[b.end])
            same = (points_close(pa[0], pb[0], tol) and points_close(pa[1], pb[1], tol)) or (
                points_close(pa[0], pb[1], tol) and points_close(pa[1], pb[0], tol)
            )
            if same:
                out.append(Violation("coincident_lines", f"lines {i} and {j} coincide"))
    return out


def is_valid(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    return not validate_graph(g, tol)


def _pair_order(plan: Iterable[Tuple[HalfLineTag, HalfLineTag]]) -> List[Tuple[HalfLineTag, HalfLineTag]]:
    return sorted((tuple(sorted(p)) for p in plan))  # type: ignore[misc]


def apply_plan(g: Graph, plan: PairingPlan, tol: Tolerance = DEFAULT_TOLERANCE) -> Graph:
    """Merge every pair of a plan, lowest tag first; raises MergeError on a rejected pair."""
    for a, b in _pair_order(plan):
        g = merge_tags(g, a, b, tol)
    return g


def exhaustive_generate(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE, limit: Optional[int] = None) -> Iterator[Graph]:
    """Every valid graph obtainable by pairing up the open half-lines.

    Forced pairs are merged first.  Plans are explored depth-first with the
    smallest unpaired tag merged next, which is exactly lowest-tag-first
    merge order; a failed merge prunes all plans sharing that prefix.
    """
    try:
        g = assemble(g, tol)
    except MergeError as exc:
        logger.debug("forced pair rejected: %s", exc)
        return
    tags = sorted(g.open_tags())
    if len(tags) % 2:
        return
    emitted = 0

    def walk(current: Graph, free: List[HalfLineTag]) -> Iterator[Graph]:
        if not free:
            if is_valid(current, tol):
                yield current
            return
        head, rest = free[0], free[1:]
        for k, partner in enumerate(rest):
            try:
                merged = merge_tags(current, head, partner, tol)
            except MergeError:
                continue
            yield from walk(merged, rest[:k] + rest[k + 1 :])

    for out in walk(g, tags):
        yield out
        emitted += 1
        if limit is not None and emitted >= limit:
            return


def angles_ok(spec: NodeSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Every inter-line angle is a multiple of 30 or of 45 degrees."""
    return all(is_multiple(a, 30.0, tol) or is_multiple(a, 45.0, tol) for a in spec.angles)


def _open_instance(spec: NodeSpec) -> NodeSpec:
    # corpus tags only mark half-lines; each drawn instance gets fresh, open tags
    return replace(spec, tags=tuple(None if t is None else "_" for t in spec.tags), anchor=None, base=0.0)


@dataclass(frozen=True)
class RandomMark:
    attempt: int
    specs: Tuple[NodeSpec, ...]  # primary, two others, fourth
    graph: Graph


def random_generate(
    corpus: NodeCorpus,
    seed: int,
    attempts: int,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Iterator[RandomMark]:
    """Draw a primary and two other specs per attempt; complete each with every fourth spec.

    Draws whose angles are not all multiples of 30 or 45 degrees are
    rejected.  Fourth specs that duplicate a drawn spec, or fail the same
    angle filter, are skipped.
    """
    if not corpus.primary_specs or not corpus.other_specs:
        raise UsageError("corpus needs at least one primary and one other node spec")
    if attempts < 0:
        raise UsageError("attempts must be >= 0")
    rng = random.Random(seed)
    distinct_others = list(dict.fromkeys(corpus.other_specs))
    for attempt in range(attempts):
        primary = rng.choice(corpus.primary_specs)
        second = rng.choice(corpus.other_specs)
        third = rng.choice(corpus.other_specs)
        drawn = (primary, second, third)
        if not all(angles_ok(s, tol) for s in drawn):
            logger.debug("attempt %d rejected by the angle filter", attempt)
            continue
        for fourth in distinct_others:
            if fourth in (second, third) or not angles_ok(fourth, tol):
                continue
            specs = drawn + (fourth,)
            g = graph_from_specs([_open_instance(s) for s in specs], name=f"random-{seed}-{attempt}")
            for out in exhaustive_generate(g, tol):
                yield RandomMark(attempt, specs, out)
