"""Value/count tables over a graph's lines.

A :class:`CountTable` is a bag of ``(category, value, count)`` entries.  The
tally functions add one entry per observation and then merge, summing the
counts of entries whose values agree within tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Any, Dict, List, Tuple

from .geometry import DEFAULT_TOLERANCE, Tolerance, approx_eq, normalize_angle
from .io import fmt_number
from .model import Graph

CATEGORIES = ("line_count", "node", "line_length", "angle", "rel_angle", "proportion")

# comparison kind per numeric category; the rest compare by identity
_NUMERIC = {"line_length": "length", "angle": "angle", "rel_angle": "angle", "proportion": "ratio"}

Entry = Tuple[str, Any, int]


@dataclass(frozen=True)
class CountTable:
    entries: Tuple[Entry, ...] = ()

    def __post_init__(self):
        entries = tuple(self.entries)
        for cat, _, n in entries:
            if cat not in CATEGORIES:
                raise ValueError(f"unknown category {cat!r}")
            if n < 1:
                raise ValueError(f"counts must be >= 1, got {n}")
        object.__setattr__(self, "entries", entries)

    def __add__(self, other: "CountTable") -> "CountTable":
        return CountTable(self.entries + other.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def total(self, category: str) -> int:
        return sum(n for cat, _, n in self.entries if cat == category)

    def category(self, category: str) -> Dict[Any, int]:
        out: Dict[Any, int] = {}
        for cat, value, n in self.entries:
            if cat == category:
                out[value] = out.get(value, 0) + n
        return out

    def count(self, category: str, value, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
        kind = _NUMERIC.get(category)
        return sum(
            n
            for cat, v, n in self.entries
            if cat == category and (v == value if kind is None else approx_eq(v, value, tol, kind))
        )

    def as_dict(self) -> Dict[str, Dict[str, int]]:
        """JSON-ready ``{category: {value: count}}`` of the merged table."""
        out: Dict[str, Dict[str, int]] = {}
        for cat, value, n in merge_counts(self).entries:
            out.setdefault(cat, {})[_label(value)] = n
        return out


def _label(value) -> str:
    return str(fmt_number(value)) if isinstance(value, float) else str(value)


def _sort_key(value):
    return (0, value, "") if isinstance(value, (int, float)) else (1, 0, str(value))


def merge_counts(t: CountTable, tol: Tolerance = DEFAULT_TOLERANCE) -> CountTable:
    """Collapse entries sharing (category, value); numeric values are binned with tolerance.

    Values are sorted before binning and each bin is represented by its
    smallest member, so the result does not depend on entry order.
    """
    by_cat: Dict[str, List[Tuple[Any, int]]] = {}
    for cat, value, n in t.entries:
        by_cat.setdefault(cat, []).append((value, n))
    merged: List[Entry] = []
    for cat in CATEGORIES:
        items = sorted(by_cat.get(cat, []), key=lambda vn: _sort_key(vn[0]))
        kind = _NUMERIC.get(cat)
        bins: List[List] = []
        for value, n in items:
            if bins and (bins[-1][0] == value if kind is None else approx_eq(bins[-1][0], value, tol, kind)):
                bins[-1][1] += n
            else:
                bins.append([value, n])
        if kind == "angle" and len(bins) > 1 and approx_eq(bins[0][0], bins[-1][0], tol, "angle"):
            bins[0][1] += bins.pop()[1]
        merged.extend((cat, value, n) for value, n in bins)
    return CountTable(tuple(merged))


def tally_lines(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> CountTable:
    raw: List[Entry] = []
    for ln in g.lines:
        raw += [
            ("line_count", "l", 1),
            ("node", ln.start, 1),
            ("node", ln.end, 1),
            ("line_length", ln.length, 1),
            ("angle", ln.angle, 1),
        ]
    return merge_counts(CountTable(tuple(raw)), tol)


def _outgoing(g: Graph, all_incidences: bool) -> Dict[str, List[float]]:
    out: Dict[str, List[float]] = {}
    for ln in g.lines:
        out.setdefault(ln.start, []).append(ln.angle)
        if all_incidences:
            out.setdefault(ln.end, []).append(normalize_angle(ln.angle + 180.0))
    return out


def tally_relative_angles(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE, all_incidences: bool = False) -> CountTable:
    """|A1 - A2| for every unordered pair of lines leaving the same start node.

    With ``all_incidences`` a line also leaves its end node, at the reverse azimuth.
    """
    raw = [
        ("rel_angle", abs(a1 - a2), 1)
        for angles in _outgoing(g, all_incidences).values()
        for a1, a2 in combinations(angles, 2)
    ]
    return merge_counts(CountTable(tuple(raw)), tol)


def tally_proportions(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE) -> CountTable:
    """L1 / L2 for every ordered pair of distinct lines."""
    raw = [("proportion", l1.length / l2.length, 1) for l1, l2 in permutations(g.lines, 2)]
    return merge_counts(CountTable(tuple(raw)), tol)


def analyze(g: Graph, tol: Tolerance = DEFAULT_TOLERANCE, all_incidences: bool = False) -> CountTable:
    """All four tallies in one merged table."""
    return merge_counts(
        tally_lines(g, tol) + tally_relative_angles(g, tol, all_incidences) + tally_proportions(g, tol), tol
    )


def report(t: CountTable, tol: Tolerance = DEFAULT_TOLERANCE) -> str:
    """Sorted plain-text table; byte-identical for equal merged tables."""
    rows = [f"{'category':<12} {'value':>14} {'count':>6}"]
    for cat, value, n in merge_counts(t, tol).entries:
        rows.append(f"{cat:<12} {_label(value):>14} {n:>6}")
    return "\n".join(rows) + "\n"


def report_json(t: CountTable) -> str:
    return json.dumps(t.as_dict(), indent=2, sort_keys=False)

