"""Greedy online assignment.

Each arriving customer is assigned, irrevocably, to the nearest facility
with residual capacity; distance ties break toward the smallest facility
id. A run is strictly sequential and deterministic: same shape, metric,
facilities and arrival order, same record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import geometry
from .errors import CapacityExhaustedError
from .geometry import Metric, Shape


@dataclass(frozen=True)
class Facility:
    id: int
    position: float
    capacity: int


@dataclass(frozen=True)
class Assignment:
    customer: int
    facility: int
    cost: float


@dataclass(frozen=True)
class AssignmentRecord:
    steps: tuple[Assignment, ...]
    total_cost: float
    loads: tuple[int, ...]

    @property
    def step_costs(self) -> tuple[float, ...]:
        return tuple(step.cost for step in self.steps)


def facilities_for(shape: Shape, capacities: Sequence[int]) -> tuple[Facility, ...]:
    """One facility per shape vertex, ids in arc-length order from s = 0."""
    positions = shape.vertex_positions
    if len(capacities) != len(positions):
        raise ValueError(
            f"expected {len(positions)} capacities for this shape, got {len(capacities)}"
        )
    for c in capacities:
        if not (isinstance(c, int) and c >= 1):
            raise ValueError(f"capacity must be a positive integer, got {c!r}")
    return tuple(
        Facility(id=i, position=positions[i], capacity=capacities[i])
        for i in range(len(positions))
    )


def greedy_step(
    shape: Shape,
    metric: Metric,
    facilities: Sequence[Facility],
    loads: Sequence[int],
    s: float,
) -> tuple[int, float]:
    """Facility id and cost the greedy rule picks for a customer at s.

    Pure: ``loads`` is read, never written. Raises CapacityExhaustedError
    when every facility is full.
    """
    dist = geometry.make_distance(shape, metric)
    best_id = -1
    best_cost = 0.0
    for facility in facilities:
        if loads[facility.id] >= facility.capacity:
            continue
        cost = dist(s, facility.position)
        if best_id < 0 or cost < best_cost:
            best_id = facility.id
            best_cost = cost
    if best_id < 0:
        raise CapacityExhaustedError(f"no residual capacity for customer at s={s!r}")
    return best_id, best_cost


def run_greedy(
    shape: Shape,
    metric: Metric,
    facilities: Sequence[Facility],
    arrivals: Sequence[float],
) -> AssignmentRecord:
    """Fold greedy_step over the arrival sequence."""
    for s in arrivals:
        geometry.check_point(shape, s)
    dist = geometry.make_distance(shape, metric)
    loads = [0] * len(facilities)
    steps = []
    for customer, s in enumerate(arrivals):
        best_id = -1
        best_cost = 0.0
        for facility in facilities:
            if loads[facility.id] >= facility.capacity:
                continue
            cost = dist(s, facility.position)
            if best_id < 0 or cost < best_cost:
                best_id = facility.id
                best_cost = cost
        if best_id < 0:
            raise CapacityExhaustedError(
                f"customer {customer} arrived with all facilities full"
            )
        loads[best_id] += 1
        steps.append(Assignment(customer=customer, facility=best_id, cost=best_cost))
    # Correctly rounded total, same convention as the offline solvers.
    total = math.fsum(step.cost for step in steps)
    return AssignmentRecord(steps=tuple(steps), total_cost=total, loads=tuple(loads))


def run_scenario(scenario) -> AssignmentRecord:
    """run_greedy over a Scenario (anything with shape/metric/capacities/arrivals)."""
    facilities = facilities_for(scenario.shape, scenario.capacities)
    return run_greedy(scenario.shape, scenario.metric, facilities, scenario.arrivals)
