"""Shared builders for randomized shapes and scenarios."""

from __future__ import annotations

import random

from polyassign.geometry import (
    EquilateralTriangle,
    FacilityRing,
    GapProfile,
    Metric,
    Rectangle,
    RegularPolygon,
    Shape,
)
from polyassign.scenarios import Scenario

SHAPE_KINDS = ("triangle", "rectangle", "polygon", "ring")


def random_shape(rng: random.Random, kind: str) -> Shape:
    if kind == "triangle":
        return EquilateralTriangle(rng.choice((0.5, 1.0, 2.0)))
    if kind == "rectangle":
        return Rectangle(rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0))
    if kind == "polygon":
        return RegularPolygon(rng.randint(3, 6), rng.choice((0.5, 1.0, 2.0)))
    if kind == "ring":
        profile = rng.choice((GapProfile.UNIFORM, GapProfile.LINEAR, GapProfile.EXPONENTIAL))
        return FacilityRing(profile, rng.choice((0.5, 1.0)), rng.randint(3, 6))
    raise ValueError(f"unknown shape kind {kind!r}")


def metrics_for(shape: Shape) -> tuple[Metric, ...]:
    if not shape.embeddable:
        return (Metric.CYCLE, Metric.PATH)
    return (Metric.CYCLE, Metric.PATH, Metric.CHORD)


def random_point(rng: random.Random, shape: Shape) -> float:
    # uniform() may return the top end; the boundary range is half-open
    s = rng.uniform(0.0, shape.cycle_length)
    return s if s < shape.cycle_length else 0.0


def random_scenario(
    rng: random.Random, kind: str | None = None, max_customers: int = 8
) -> Scenario:
    kind = kind or rng.choice(SHAPE_KINDS)
    shape = random_shape(rng, kind)
    metric = rng.choice(metrics_for(shape))
    k = shape.facility_count
    m = rng.randint(1, max_customers)
    capacities = [1] * k
    while sum(capacities) < m:
        capacities[rng.randrange(k)] += 1
    for _ in range(rng.randint(0, 2)):
        capacities[rng.randrange(k)] += 1
    arrivals = tuple(random_point(rng, shape) for _ in range(m))
    return Scenario(
        name=f"random-{kind}",
        shape=shape,
        metric=metric,
        capacities=tuple(capacities),
        arrivals=arrivals,
    )
