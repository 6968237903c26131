"""JSON documents: graphs (one mark per document), node corpora and motif patterns.

Graph document::

    {"name": "t_sign",
     "nodes": [{"anchor": null, "list": [2, 90, {"len": 1, "tag": "I"}, 90, 2]}]}

A node may also carry ``"base"``, the azimuth of its first line (default 0).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from typing import Any, Dict, List, Mapping, Optional

from .errors import FormatError
from .geometry import normalize_angle
from .model import ANONYMOUS_TAG, Graph, NodeSpec, graph_from_specs

SIG_DIGITS = 9


def fmt_number(x: float):
    """Round to 9 significant digits; integral values come out as ints."""
    v = float(f"{x:.{SIG_DIGITS}g}") + 0.0
    if v.is_integer() and abs(v) < 1e15:
        return int(v)
    return v


def _load(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {what}: {exc}") from None


def _number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise FormatError(f"expected a finite number, got {v!r}", path)
    return float(v)


def parse_node(obj: Any, path: str = "node") -> NodeSpec:
    """One node entry: either ``{"anchor", "list", "base"?}`` or a bare alternating list."""
    anchor = None
    base = 0.0
    if isinstance(obj, list):
        entries = obj
    elif isinstance(obj, Mapping):
        extra = set(obj) - {"anchor", "list", "base"}
        if extra:
            raise FormatError(f"unexpected keys {sorted(extra)}", path)
        if "list" not in obj:
            raise FormatError("missing 'list'", path)
        entries = obj["list"]
        raw_anchor = obj.get("anchor")
        if raw_anchor is not None:
            if not isinstance(raw_anchor, list) or len(raw_anchor) != 2:
                raise FormatError("anchor must be [x, y] or null", f"{path}.anchor")
            anchor = (_number(raw_anchor[0], f"{path}.anchor[0]"), _number(raw_anchor[1], f"{path}.anchor[1]"))
        if "base" in obj:
            base = _number(obj["base"], f"{path}.base")
    else:
        raise FormatError("node must be an object or a list", path)
    if not isinstance(entries, list):
        raise FormatError("'list' must be an array", f"{path}.list")
    for i, item in enumerate(entries):
        if isinstance(item, Mapping):
            _number(item.get("len"), f"{path}.list[{i}].len")
            if not isinstance(item.get("tag"), str) or not item.get("tag"):
                raise FormatError("tag must be a non-empty string", f"{path}.list[{i}].tag")
        else:
            _number(item, f"{path}.list[{i}]")
    try:
        return NodeSpec.from_entries(entries, anchor=anchor, base=base)
    except FormatError as exc:
        raise FormatError(str(exc), f"{path}.list") from None


def parse_graph_document(text: str):
    """Return ``(name, specs)`` without expanding the specs."""
    doc = _load(text, "graph document")
    if not isinstance(doc, Mapping):
        raise FormatError("graph document must be a JSON object", "$")
    extra = set(doc) - {"name", "nodes"}
    if extra:
        raise FormatError(f"unexpected keys {sorted(extra)}", "$")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name must be a string", "$.name")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list):
        raise FormatError("'nodes' must be an array", "$.nodes")
    specs = [parse_node(n, f"$.nodes[{i}]") for i, n in enumerate(nodes)]
    return name, specs


def parse_graph(text: str) -> Graph:
    name, specs = parse_graph_document(text)
    try:
        return graph_from_specs(specs, name=name)
    except FormatError as exc:
        raise FormatError(str(exc), "$.nodes") from None


def graph_to_specs(g: Graph) -> List[NodeSpec]:
    """Re-encode a graph node-centrically.

    Every node of degree >= 2 becomes a spec; a line joining two such nodes
    is written into both, tied by a generated tag.  Untagged isolated lines
    are written at their start node.
    """
    deg = {n: len(ix) for n, ix in g.incidence.items()}
    centers: Dict[str, List[int]] = {}
    for i, ln in enumerate(g.lines):
        ends = [n for n in (ln.start, ln.end) if deg[n] >= 2] or [ln.start]
        for n in ends:
            centers.setdefault(n, []).append(i)
    tag_counts = g.tag_counts()
    taken = set(tag_counts)
    pair_tags: Dict[int, str] = {}
    k = 0
    for i, ln in enumerate(g.lines):
        if ln.start in centers and ln.end in centers:
            if ln.tag is not None:
                raise FormatError(f"half-line {ln.tag!r} joins two branching nodes and cannot be encoded")
            k += 1
            while f"t{k}" in taken:
                k += 1
            pair_tags[i] = f"t{k}"

    specs = []
    for center, idxs in centers.items():
        headings, lengths, tags = [], [], []
        for i in idxs:
            ln = g.lines[i]
            headings.append(ln.angle if ln.start == center else normalize_angle(ln.angle + 180.0))
            lengths.append(ln.length)
            if i in pair_tags:
                tags.append(pair_tags[i])
            elif ln.tag is not None and ln.tag.startswith("_") and tag_counts[ln.tag] == 1:
                tags.append(ANONYMOUS_TAG)
            else:
                tags.append(ln.tag)
        gaps = []
        for a, b in zip(headings, headings[1:]):
            gap = normalize_angle(b - a)
            if fmt_number(gap) in (0, 360):
                raise FormatError(f"two lines leave node {center!r} in the same direction")
            gaps.append(gap)
        specs.append(NodeSpec(tuple(lengths), tuple(gaps), tuple(tags), g.coords.get(center), headings[0]))
    return specs


def node_to_json(spec: NodeSpec) -> Dict[str, Any]:
    items: list = []
    for entry in spec.entries():
        if isinstance(entry, tuple):
            items.append({"len": fmt_number(entry[0]), "tag": entry[1]})
        else:
            items.append(fmt_number(entry))
    out: Dict[str, Any] = {
        "anchor": None if spec.anchor is None else [fmt_number(spec.anchor[0]), fmt_number(spec.anchor[1])],
        "list": items,
    }
    base = fmt_number(normalize_angle(spec.base))
    if base not in (0, 360):
        out["base"] = base
    return out


def graph_to_json(g: Graph) -> Dict[str, Any]:
    return {"name": g.name, "nodes": [node_to_json(s) for s in graph_to_specs(g)]}


def serialize_graph(g: Graph, indent: Optional[int] = 2) -> str:
    return json.dumps(graph_to_json(g), indent=indent)


def parse_corpus(text: str):
    """``{"primary": [node, ...], "other": [node, ...]}`` -> NodeCorpus."""
    from .generator import NodeCorpus

    doc = _load(text, "corpus")
    if not isinstance(doc, Mapping):
        raise FormatError("corpus must be a JSON object", "$")
    extra = set(doc) - {"name", "primary", "other"}
    if extra:
        raise FormatError(f"unexpected keys {sorted(extra)}", "$")
    lists = {}
    for key in ("primary", "other"):
        items = doc.get(key, [])
        if not isinstance(items, list):
            raise FormatError(f"'{key}' must be an array", f"$.{key}")
        lists[key] = tuple(parse_node(n, f"$.{key}[{i}]") for i, n in enumerate(items))
    return NodeCorpus(lists["primary"], lists["other"])


def corpus_to_json(corpus) -> Dict[str, Any]:
    return {
        "primary": [node_to_json(s) for s in corpus.primary_specs],
        "other": [node_to_json(s) for s in corpus.other_specs],
    }


def parse_pattern(text: str):
    """``{"name": str, "lines": [{"from", "to", "prop", "angle"}, ...]}`` -> MotifPattern.

    An optional ``"nodes"`` array fixes the order in which matched nodes are reported.
    """
    from .matcher import MotifPattern, PatternLine

    doc = _load(text, "pattern")
    if not isinstance(doc, Mapping):
        raise FormatError("pattern must be a JSON object", "$")
    name = doc.get("name", "pattern")
    if not isinstance(name, str):
        raise FormatError("name must be a string", "$.name")
    extra = set(doc) - {"name", "lines", "nodes"}
    if extra:
        raise FormatError(f"unexpected keys {sorted(extra)}", "$")
    symbols = doc.get("nodes", [])
    if not isinstance(symbols, list) or not all(isinstance(v, str) for v in symbols):
        raise FormatError("'nodes' must be an array of symbol names", "$.nodes")
    raw = doc.get("lines")
    if not isinstance(raw, list) or not raw:
        raise FormatError("'lines' must be a non-empty array", "$.lines")
    lines = []
    for i, item in enumerate(raw):
        path = f"$.lines[{i}]"
        if not isinstance(item, Mapping) or set(item) != {"from", "to", "prop", "angle"}:
            raise FormatError("line needs exactly the keys from, to, prop, angle", path)
        for key in ("from", "to"):
            if not isinstance(item[key], str) or not item[key]:
                raise FormatError(f"'{key}' must be a non-empty string", f"{path}.{key}")
        lines.append(
            PatternLine(item["from"], item["to"], _number(item["prop"], f"{path}.prop"), _number(item["angle"], f"{path}.angle"))
        )
    try:
        return MotifPattern(name, tuple(lines), tuple(symbols))
    except FormatError as exc:
        raise FormatError(str(exc), "$.lines") from None


def pattern_to_json(pattern) -> Dict[str, Any]:
    return {
        "name": pattern.name,
        "nodes": list(pattern.symbols),
        "lines": [
            {"from": pl.start, "to": pl.end, "prop": fmt_number(pl.proportion), "angle": fmt_number(pl.angle)}
            for pl in pattern.lines
        ],
    }
