"""Arc-length geometry for facilities on the boundary of regular shapes.

Every shape is parametrized by arc length s, measured counterclockwise from
facility 0 at s = 0. Facilities occupy the shape's vertices; for a facility
ring they sit at the cumulative gap offsets. Three metrics compare boundary
points:

* cycle: length of the shorter arc around the closed boundary,
* path:  |a - b| along the parametrization, no wraparound,
* chord: Euclidean distance between the embedded points.

A facility ring is a closed loop as well: after the n - 1 declared gaps the
loop closes with one final gap equal to the base width. ``perimeter`` reports
the declared chain only (sum of the n - 1 gaps); ``cycle_length`` includes
the closing gap and is the length the cycle metric wraps at. Rings with
non-uniform gaps have no canonical planar embedding, so the chord metric is
rejected for them; a uniform ring embeds on the circle of circumference
``cycle_length``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable

from .errors import (
    BoundaryRangeError,
    UnsupportedEmbeddingError,
    UnsupportedMetricError,
)

Point = tuple[float, float]


class Metric(str, Enum):
    CYCLE = "cycle"
    PATH = "path"
    CHORD = "chord"


class GapProfile(str, Enum):
    UNIFORM = "uniform"
    LINEAR = "linear"
    EXPONENTIAL = "exponential"


def _require_positive(value: float, label: str) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{label} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class Shape:
    """Common surface for boundary shapes.

    Subclasses provide ``edge_lengths`` (the closed loop of gaps between
    consecutive facilities, ending with the gap that returns to facility 0)
    and, when a canonical embedding exists, ``_embed_unchecked``.
    """

    @property
    def edge_lengths(self) -> tuple[float, ...]:
        raise NotImplementedError

    @cached_property
    def cycle_length(self) -> float:
        return sum(self.edge_lengths)

    @property
    def perimeter(self) -> float:
        return self.cycle_length

    @property
    def facility_count(self) -> int:
        # One facility per edge of the closed loop.
        return len(self.edge_lengths)

    @cached_property
    def vertex_positions(self) -> tuple[float, ...]:
        positions = [0.0]
        for gap in self.edge_lengths[:-1]:
            positions.append(positions[-1] + gap)
        return tuple(positions)

    @property
    def embeddable(self) -> bool:
        return True

    def _embed_unchecked(self, s: float) -> Point:
        raise NotImplementedError


def _corner_walk(edge_lengths: tuple[float, ...], turn: float) -> tuple[Point, ...]:
    # Vertex 0 at the origin, first edge along +x, counterclockwise turns.
    corners = [(0.0, 0.0)]
    heading = 0.0
    for length in edge_lengths[:-1]:
        x, y = corners[-1]
        corners.append((x + length * math.cos(heading), y + length * math.sin(heading)))
        heading += turn
    return tuple(corners)


def _polyline_embed(corners: tuple[Point, ...], edge_lengths: tuple[float, ...], s: float) -> Point:
    remaining = s
    count = len(corners)
    for i, length in enumerate(edge_lengths):
        if remaining <= length:
            x0, y0 = corners[i]
            x1, y1 = corners[(i + 1) % count]
            t = remaining / length
            return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
        remaining -= length
    return corners[0]


@dataclass(frozen=True)
class EquilateralTriangle(Shape):
    side: float

    def __post_init__(self) -> None:
        _require_positive(self.side, "side")

    @cached_property
    def edge_lengths(self) -> tuple[float, ...]:
        return (self.side, self.side, self.side)

    @cached_property
    def corners(self) -> tuple[Point, ...]:
        return _corner_walk(self.edge_lengths, 2.0 * math.pi / 3.0)

    def _embed_unchecked(self, s: float) -> Point:
        return _polyline_embed(self.corners, self.edge_lengths, s)


@dataclass(frozen=True)
class Rectangle(Shape):
    width: float
    height: float

    def __post_init__(self) -> None:
        _require_positive(self.width, "width")
        _require_positive(self.height, "height")

    @cached_property
    def edge_lengths(self) -> tuple[float, ...]:
        return (self.width, self.height, self.width, self.height)

    @cached_property
    def corners(self) -> tuple[Point, ...]:
        w, h = self.width, self.height
        return ((0.0, 0.0), (w, 0.0), (w, h), (0.0, h))

    def _embed_unchecked(self, s: float) -> Point:
        return _polyline_embed(self.corners, self.edge_lengths, s)


@dataclass(frozen=True)
class RegularPolygon(Shape):
    side_count: int
    side: float

    def __post_init__(self) -> None:
        if not (isinstance(self.side_count, int) and self.side_count >= 3):
            raise ValueError(f"side_count must be an integer >= 3, got {self.side_count!r}")
        _require_positive(self.side, "side")

    @cached_property
    def edge_lengths(self) -> tuple[float, ...]:
        return (self.side,) * self.side_count

    @cached_property
    def corners(self) -> tuple[Point, ...]:
        return _corner_walk(self.edge_lengths, 2.0 * math.pi / self.side_count)

    def _embed_unchecked(self, s: float) -> Point:
        return _polyline_embed(self.corners, self.edge_lengths, s)


@dataclass(frozen=True)
class FacilityRing(Shape):
    gap_profile: GapProfile
    base_gap: float
    count: int

    def __post_init__(self) -> None:
        if not isinstance(self.gap_profile, GapProfile):
            raise ValueError(f"gap_profile must be a GapProfile, got {self.gap_profile!r}")
        _require_positive(self.base_gap, "base_gap")
        if not (isinstance(self.count, int) and self.count >= 2):
            raise ValueError(f"facility count must be an integer >= 2, got {self.count!r}")

    @cached_property
    def declared_gaps(self) -> tuple[float, ...]:
        d, n = self.base_gap, self.count
        if self.gap_profile is GapProfile.UNIFORM:
            return (d,) * (n - 1)
        if self.gap_profile is GapProfile.LINEAR:
            return tuple(k * d for k in range(1, n))
        return tuple(d * 2.0**k for k in range(n - 1))

    @cached_property
    def edge_lengths(self) -> tuple[float, ...]:
        # The loop closes with one more base-width gap back to facility 0.
        return self.declared_gaps + (self.base_gap,)

    @property
    def perimeter(self) -> float:
        return sum(self.declared_gaps)

    @property
    def embeddable(self) -> bool:
        return self.gap_profile is GapProfile.UNIFORM

    def _embed_unchecked(self, s: float) -> Point:
        if not self.embeddable:
            raise UnsupportedEmbeddingError(
                f"no canonical embedding for a {self.gap_profile.value}-gap facility ring"
            )
        circumference = self.cycle_length
        radius = circumference / (2.0 * math.pi)
        angle = 2.0 * math.pi * s / circumference
        return (radius * math.cos(angle), radius * math.sin(angle))


def perimeter(shape: Shape) -> float:
    """Boundary length: full perimeter for closed shapes, declared chain for rings."""
    return shape.perimeter


def vertex_positions(shape: Shape) -> tuple[float, ...]:
    """Arc-length position of every facility site, facility 0 first."""
    return shape.vertex_positions


def check_point(shape: Shape, s: float) -> float:
    if not (isinstance(s, (int, float)) and math.isfinite(s)):
        raise BoundaryRangeError(f"boundary point must be finite, got {s!r}")
    if not 0.0 <= s < shape.cycle_length:
        raise BoundaryRangeError(
            f"boundary point {s!r} outside [0, {shape.cycle_length!r})"
        )
    return float(s)


def embed(shape: Shape, s: float) -> Point:
    """Planar coordinates of boundary point s (vertex 0 at the origin for
    polygonal shapes; a uniform ring lies on the circle of circumference
    cycle_length centered at the origin with facility 0 on the +x axis)."""
    check_point(shape, s)
    if not shape.embeddable:
        raise UnsupportedEmbeddingError(
            "no canonical embedding for a facility ring with non-uniform gaps"
        )
    return shape._embed_unchecked(s)


def make_distance(shape: Shape, metric: Metric) -> Callable[[float, float], float]:
    """Fast distance closure for a fixed shape and metric.

    Skips per-call range validation; callers own input hygiene. Raises the
    same unsupported-metric error as ``distance`` at construction time.
    """
    if metric is Metric.CYCLE:
        cycle = shape.cycle_length

        def cycle_distance(a: float, b: float) -> float:
            delta = abs(a - b)
            other = cycle - delta
            return delta if delta < other else other

        return cycle_distance
    if metric is Metric.PATH:
        return lambda a, b: abs(a - b)
    if metric is Metric.CHORD:
        if not shape.embeddable:
            raise UnsupportedMetricError(
                "chord metric needs an embedding; this facility ring has none"
            )
        embed_point = shape._embed_unchecked

        def chord_distance(a: float, b: float) -> float:
            ax, ay = embed_point(a)
            bx, by = embed_point(b)
            return math.hypot(ax - bx, ay - by)

        return chord_distance
    raise UnsupportedMetricError(f"unknown metric {metric!r}")


def distance(shape: Shape, metric: Metric, a: float, b: float) -> float:
    """Distance between boundary points a and b under the given metric."""
    check_point(shape, a)
    check_point(shape, b)
    return make_distance(shape, metric)(a, b)
