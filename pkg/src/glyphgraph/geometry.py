"""Scalar geometry: points, degree-based angle arithmetic and tolerances.

Every stored angle is in degrees; radians only appear inside
:func:`endpoint_of` where polar data is turned into Cartesian coordinates.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Literal, NamedTuple, Tuple

from .errors import GeometryError, UsageError

Kind = Literal["coord", "length", "ratio", "angle"]


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Tolerance:
    """Comparison thresholds: absolute (coordinates, lengths), relative (ratios), degrees."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-6
    angle_eps: float = 1e-6

    def __post_init__(self):
        for name in ("abs_eps", "rel_eps", "angle_eps"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise UsageError(f"tolerance {name} must be finite and > 0, got {value!r}")

    @classmethod
    def from_env(cls, environ=None) -> "Tolerance":
        """Build a tolerance from GLYPHGRAPH_TOLERANCE_{ABS,REL,ANGLE}, falling back to defaults."""
        environ = os.environ if environ is None else environ
        kwargs = {}
        for suffix, name in (("ABS", "abs_eps"), ("REL", "rel_eps"), ("ANGLE", "angle_eps")):
            raw = environ.get(f"GLYPHGRAPH_TOLERANCE_{suffix}")
            if raw is None or raw == "":
                continue
            try:
                kwargs[name] = float(raw)
            except ValueError:
                raise UsageError(f"GLYPHGRAPH_TOLERANCE_{suffix}={raw!r} is not a number") from None
        return cls(**kwargs)


DEFAULT_TOLERANCE = Tolerance()


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise GeometryError(f"non-finite value {v!r}")


def normalize_angle(a: float) -> float:
    """Reduce ``a`` degrees into [0, 360)."""
    _check_finite(a)
    r = a % 360.0
    # tiny negative inputs round up to exactly 360.0
    if r >= 360.0:
        r = 0.0
    return r + 0.0


def canonical_direction(a: float) -> Tuple[float, bool]:
    """Fold an azimuth into [0, 180); the flag says whether the line had to be inverted."""
    a = normalize_angle(a)
    if a < 180.0:
        return a, False
    return a - 180.0, True


def angle_distance(a: float, b: float) -> float:
    """Shortest distance between two directions on the circle, in [0, 180]."""
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def approx_eq(a: float, b: float, tol: Tolerance = DEFAULT_TOLERANCE, kind: Kind = "length") -> bool:
    if kind == "angle":
        return angle_distance(a, b) <= tol.angle_eps
    if kind == "ratio":
        return abs(a - b) <= tol.rel_eps * max(abs(a), abs(b))
    if kind in ("coord", "length"):
        return abs(a - b) <= tol.abs_eps
    raise UsageError(f"unknown comparison kind {kind!r}")


def points_close(p: Point, q: Point, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    return approx_eq(p[0], q[0], tol, "coord") and approx_eq(p[1], q[1], tol, "coord")


def endpoint_of(origin: Point, length: float, angle: float, unit_scale: float = 1.0) -> Point:
    """Second endpoint of a line given its first endpoint and polar data."""
    _check_finite(origin[0], origin[1], length, angle, unit_scale)
    if length < 0:
        raise GeometryError(f"line length must be >= 0, got {length!r}")
    if unit_scale <= 0:
        raise GeometryError(f"unit scale must be > 0, got {unit_scale!r}")
    rad = angle * math.pi / 180.0
    return Point(
        origin[0] + length * unit_scale * math.cos(rad),
        origin[1] + length * unit_scale * math.sin(rad),
    )


def azimuth(p: Point, q: Point) -> float:
    """Direction from ``p`` to ``q`` in degrees, in [0, 360)."""
    return normalize_angle(math.degrees(math.atan2(q[1] - p[1], q[0] - p[0])))


def is_multiple(a: float, step: float, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True when ``a`` is an integer multiple of ``step`` degrees (within angle_eps)."""
    r = a % step
    return min(r, step - r) <= tol.angle_eps
