"""Worst-case search and single-customer analysis tools.

``maximize_ratio`` hunts for arrival sequences that maximize greedy cost
over the true optimum: random restarts followed by coordinate-wise hill
climbing on a boundary grid. Deterministic for a fixed seed. A sequence
whose optimum is zero but whose greedy cost is not would have infinite
ratio; such candidates are never accepted, only reported if a caller feeds
one in directly.

``sweep_customer`` drags one customer of a fixed scenario around the whole
boundary, re-running greedy and the optimum at every sample, and pins each
assignment switch down to the actual boundary point by bisection.

``ratio_curve`` tabulates the one-customer two-facility ratio profile
R(x) = x / (S - x) with its derivative S / (S - x)^2.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import engine, geometry, opt
from .errors import ScenarioError
from .geometry import Metric, Shape
from .scenarios import Scenario, with_arrivals

_BISECT_ROUNDS = 60


@dataclass(frozen=True)
class SearchConfig:
    shape: Shape
    metric: Metric
    capacities: tuple[int, ...]
    customers: int
    resolution: int = 100
    restarts: int = 20
    max_rounds: int = 40
    seed: int = 0

    def __post_init__(self) -> None:
        if self.customers < 1:
            raise ScenarioError("search needs at least one customer")
        if self.customers > sum(self.capacities):
            raise ScenarioError("more customers than total capacity")
        if self.resolution < 2:
            raise ScenarioError("resolution must be >= 2 grid points per unit length")
        if self.restarts < 1 or self.max_rounds < 1:
            raise ScenarioError("restarts and max_rounds must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    best_sequence: tuple[float, ...]
    best_ratio: float
    greedy_total: float
    opt_total: float
    evaluations: int
    restarts: int
    seed: int


def _grid(shape: Shape, resolution: int) -> list[float]:
    length = shape.cycle_length
    count = max(2, int(round(length * resolution)))
    return [length * k / count for k in range(count)]


def maximize_ratio(
    config: SearchConfig, warm_starts: Sequence[Sequence[float]] = ()
) -> SearchResult:
    """Best adversarial sequence found across all restarts.

    ``warm_starts`` adds extra restarts beginning from given sequences (for
    example a known construction); hill climbing only ever accepts strict
    improvements, so a warm-started result never falls below its seed.
    """
    shape, metric = config.shape, config.metric
    facilities = engine.facilities_for(shape, config.capacities)
    dist = geometry.make_distance(shape, metric)
    positions = [f.position for f in facilities]
    capacities = list(config.capacities)
    m = config.customers
    grid = _grid(shape, config.resolution)
    evaluations = 0

    def ratio_of(seq: list[float]) -> tuple[float, float, float]:
        nonlocal evaluations
        evaluations += 1
        loads = [0] * len(positions)
        costs = []
        for s in seq:
            best_id = -1
            best_cost = 0.0
            for fid in range(len(positions)):
                if loads[fid] >= capacities[fid]:
                    continue
                cost = dist(s, positions[fid])
                if best_id < 0 or cost < best_cost:
                    best_id = fid
                    best_cost = cost
            loads[best_id] += 1
            costs.append(best_cost)
        # fsum, not a running sum: results must reproduce bit for bit when
        # the winning sequence is re-run through engine.run_scenario.
        greedy_total = math.fsum(costs)
        probe = _Probe(shape, metric, tuple(capacities), tuple(seq))
        opt_total = opt.solve_matching(probe).total_cost
        return opt.cost_ratio(greedy_total, opt_total), greedy_total, opt_total

    best: Optional[tuple[float, list[float], float, float]] = None

    def climb(seq: list[float]) -> None:
        nonlocal best
        ratio, greedy_total, opt_total = ratio_of(seq)
        if not math.isfinite(ratio):
            ratio = -math.inf
        for _ in range(config.max_rounds):
            moved = False
            for i in range(m):
                original = seq[i]
                found = None
                for candidate in grid:
                    if candidate == original:
                        continue
                    seq[i] = candidate
                    cand_ratio, cand_greedy, cand_opt = ratio_of(seq)
                    if math.isfinite(cand_ratio) and cand_ratio > ratio:
                        ratio = cand_ratio
                        greedy_total, opt_total = cand_greedy, cand_opt
                        found = candidate
                seq[i] = found if found is not None else original
                if found is not None:
                    moved = True
            if not moved:
                break
        if math.isfinite(ratio) and (best is None or ratio > best[0]):
            best = (ratio, seq.copy(), greedy_total, opt_total)

    for start in warm_starts:
        if len(start) != m:
            raise ScenarioError("warm start length must equal the customer count")
        climb([float(s) for s in start])
    for restart in range(config.restarts):
        rng = random.Random(config.seed * 1_000_003 + restart)
        climb([rng.choice(grid) for _ in range(m)])

    assert best is not None
    ratio, seq, greedy_total, opt_total = best
    return SearchResult(
        best_sequence=tuple(seq),
        best_ratio=ratio,
        greedy_total=greedy_total,
        opt_total=opt_total,
        evaluations=evaluations,
        restarts=config.restarts,
        seed=config.seed,
    )


@dataclass(frozen=True)
class _Probe:
    """Minimal scenario stand-in for the optimum solvers."""

    shape: Shape
    metric: Metric
    capacities: tuple[int, ...]
    arrivals: tuple[float, ...]


@dataclass(frozen=True)
class SweepSample:
    s: float
    facility: int
    greedy_total: float
    opt_total: float


@dataclass(frozen=True)
class Switch:
    s: float
    from_facility: int
    to_facility: int


@dataclass(frozen=True)
class SweepResult:
    customer: int
    direction: str
    samples: tuple[SweepSample, ...]
    switches: tuple[Switch, ...]


def sweep_customer(
    scenario: Scenario, customer: int, direction: str = "ccw", step: float = 0.01
) -> SweepResult:
    """Move one customer around the full boundary and watch its assignment.

    Samples every ``step`` along ``direction`` ("ccw" increases s). Between
    two samples whose facility differs, the switch point is refined by
    bisection to the boundary where the new facility takes over.
    """
    if not 0 <= customer < scenario.customer_count:
        raise ScenarioError(f"scenario has no customer {customer}")
    if direction not in ("ccw", "cw"):
        raise ScenarioError(f"direction must be 'ccw' or 'cw', got {direction!r}")
    if not (math.isfinite(step) and step > 0):
        raise ScenarioError("step must be positive")
    cycle = scenario.shape.cycle_length
    sign = 1.0 if direction == "ccw" else -1.0
    start = scenario.arrivals[customer]
    count = max(1, math.ceil(cycle / step))

    def at(s: float) -> tuple[int, float, float]:
        arrivals = list(scenario.arrivals)
        arrivals[customer] = s
        probe = with_arrivals(scenario, tuple(arrivals))
        record = engine.run_scenario(probe)
        opt_total = opt.solve_matching(probe).total_cost
        return record.steps[customer].facility, record.total_cost, opt_total

    samples = []
    for k in range(count):
        s = (start + sign * k * step) % cycle
        fid, greedy_total, opt_total = at(s)
        samples.append(SweepSample(s=s, facility=fid, greedy_total=greedy_total, opt_total=opt_total))

    switches = []
    for k in range(count):
        a = samples[k]
        b = samples[(k + 1) % count]
        if a.facility == b.facility:
            continue
        # Bisect along the sweep direction from a toward b.
        lo, span = a.s, step
        fid_lo = a.facility
        for _ in range(_BISECT_ROUNDS):
            half = span / 2.0
            mid = (lo + sign * half) % cycle
            if at(mid)[0] == fid_lo:
                lo = mid
            span = half
        boundary = (lo + sign * span) % cycle
        switches.append(Switch(s=boundary, from_facility=a.facility, to_facility=b.facility))

    return SweepResult(
        customer=customer,
        direction=direction,
        samples=tuple(samples),
        switches=tuple(switches),
    )


@dataclass(frozen=True)
class CurvePoint:
    x: float
    ratio: float
    derivative: float


def ratio_curve(S: float = 1.0, samples: int = 101) -> tuple[CurvePoint, ...]:
    """R(x) = x / (S - x) for x in [0, S/2], with R'(x) = S / (S - x)^2.

    One customer at distance x from its nearer facility on a segment of
    length S pays x against an optimum of S - x in the worst arrangement;
    the profile peaks at x = S/2 with ratio 1.
    """
    if not (math.isfinite(S) and S > 0):
        raise ScenarioError("S must be positive")
    if samples < 2:
        raise ScenarioError("need at least two samples")
    points = []
    for k in range(samples):
        x = (S / 2.0) * k / (samples - 1)
        points.append(CurvePoint(x=x, ratio=x / (S - x), derivative=S / (S - x) ** 2))
    return tuple(points)
