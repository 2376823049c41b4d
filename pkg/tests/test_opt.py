"""The two exact offline solvers and their agreement."""

import math
import random

import pytest

from conftest import random_scenario
from polyassign import engine, geometry, opt
from polyassign.errors import CapacityExhaustedError, TooManyCustomersError
from polyassign.geometry import EquilateralTriangle, FacilityRing, GapProfile, Metric, Rectangle
from polyassign.scenarios import DEFAULT_CASE_SPECS, Scenario, build, with_arrivals


def test_bruteforce_triangle_three_customers():
    # 6 perfect assignments by hand; the optimum is 1.5 and among the two
    # optima the lexicographically smaller assignment vector wins
    scenario = build("triangle-exact")
    result = opt.solve_bruteforce(scenario)
    assert result.total_cost == 1.5
    assert result.assignment == (0, 2, 1)
    assert result.method == "bruteforce"


def test_matching_agrees_on_triangle():
    scenario = build("triangle-exact")
    result = opt.solve_matching(scenario)
    assert result.total_cost == 1.5
    assert result.method == "matching"


def test_bruteforce_respects_capacity():
    shape = EquilateralTriangle(1.0)
    scenario = Scenario(
        name="two-at-one-corner",
        shape=shape,
        metric=Metric.CYCLE,
        capacities=(1, 1, 1),
        arrivals=(0.0, 0.0),
    )
    result = opt.solve_bruteforce(scenario)
    # second customer is forced one whole side away
    assert result.total_cost == 1.0
    assert result.assignment == (0, 1)


def test_customer_limits():
    shape = Rectangle(1.0, 1.0)
    over = Scenario(
        name="ten",
        shape=shape,
        metric=Metric.CYCLE,
        capacities=(3, 3, 3, 3),
        arrivals=(0.5,) * 10,
    )
    with pytest.raises(TooManyCustomersError):
        opt.solve_bruteforce(over)
    # 12 slots for 10 customers at s=0.5: six fit the near corners at 0.5
    # each, the remaining four pay 1.5 to the far side.
    assert opt.solve_matching(over).total_cost == 9.0

    class Probe:
        shape = over.shape
        metric = over.metric
        capacities = (1, 1, 1, 1)
        arrivals = (0.5,) * 5

    with pytest.raises(CapacityExhaustedError):
        opt.solve_bruteforce(Probe)
    with pytest.raises(CapacityExhaustedError):
        opt.solve_matching(Probe)


def test_empty_instance():
    shape = EquilateralTriangle(1.0)
    scenario = Scenario(
        name="empty", shape=shape, metric=Metric.CYCLE, capacities=(1, 1, 1), arrivals=()
    )
    assert opt.solve_bruteforce(scenario).total_cost == 0.0
    assert opt.solve_matching(scenario).assignment == ()


def test_cost_ratio_conventions():
    assert opt.cost_ratio(0.0, 0.0) == 1.0
    assert opt.cost_ratio(1.0, 0.0) == math.inf
    assert opt.cost_ratio(5.0, 2.0) == 2.5


def test_oracles_agree_on_shipped_cases():
    from polyassign.io_cli import parse_case_spec

    for spec in DEFAULT_CASE_SPECS:
        scenario = parse_case_spec(spec)
        brute, matching = opt.verify_oracles(scenario)
        assert brute.total_cost == matching.total_cost, spec
        greedy = engine.run_scenario(scenario).total_cost
        assert matching.total_cost <= greedy + 1e-15, spec


def test_matching_handles_multi_slot_facilities():
    rng = random.Random(31)
    shape = Rectangle(1.0, 1.0)
    for _ in range(25):
        arrivals = tuple(rng.uniform(0.0, 3.999) for _ in range(6))
        scenario = Scenario(
            name="slots",
            shape=shape,
            metric=Metric.CYCLE,
            capacities=(2, 2, 1, 1),
            arrivals=arrivals,
        )
        assert (
            opt.solve_matching(scenario).total_cost
            == opt.solve_bruteforce(scenario).total_cost
        )


def test_oracle_equality_fuzz_light():
    rng = random.Random(37)
    for _ in range(120):
        scenario = random_scenario(rng)
        brute, matching = opt.verify_oracles(scenario)
        assert brute.total_cost == matching.total_cost, scenario


def test_optimum_never_beats_itself_and_never_loses_to_greedy():
    rng = random.Random(41)
    for _ in range(60):
        scenario = random_scenario(rng)
        greedy = engine.run_scenario(scenario).total_cost
        best = opt.solve_matching(scenario).total_cost
        assert best <= greedy + 1e-12
        assert opt.cost_ratio(greedy, best) >= 1.0 - 1e-12


def test_matching_assignment_is_feasible_and_costed_right():
    rng = random.Random(43)
    for _ in range(40):
        scenario = random_scenario(rng)
        result = opt.solve_matching(scenario)
        loads = [0] * scenario.shape.facility_count
        for fid in result.assignment:
            loads[fid] += 1
        assert all(load <= cap for load, cap in zip(loads, scenario.capacities))
        dist = geometry.make_distance(scenario.shape, scenario.metric)
        positions = scenario.shape.vertex_positions
        total = math.fsum(
            dist(s, positions[fid])
            for s, fid in zip(scenario.arrivals, result.assignment)
        )
        assert total == result.total_cost


def test_analytic_opt_bound_values():
    assert opt.analytic_opt_bound(build("triangle-lb")) == 1.0  # (6/3) * (1/2)
    assert opt.analytic_opt_bound(build("triangle-exact")) == 0.5
    assert opt.analytic_opt_bound(build("rectangle-lb")) == 0.5
    assert opt.analytic_opt_bound(build("polygon-lb", n=5)) == 0.5
    assert opt.analytic_opt_bound(build("circle-uniform", n=3)) == 0.5
    linear = build("circle-linear", n=4)
    assert opt.analytic_opt_bound(linear) == 0.5  # (4/4) * (1/2)


def test_bruteforce_prefers_lexicographically_smallest_optimum():
    # symmetric instance with many optimal assignments
    ring = FacilityRing(GapProfile.UNIFORM, 1.0, 4)
    scenario = Scenario(
        name="symmetric",
        shape=ring,
        metric=Metric.CYCLE,
        capacities=(2, 2, 2, 2),
        arrivals=(0.5, 1.5, 2.5, 3.5),
    )
    result = opt.solve_bruteforce(scenario)
    # every customer is 0.5 from both neighbors, so any adjacent choice
    # totals 2.0; lex order sends the last customer back around to f0
    assert result.total_cost == 2.0
    assert result.assignment == (0, 1, 2, 0)


def test_with_arrivals_probe_matches_direct_scenario():
    base = build("rectangle-lb")
    probe = with_arrivals(base, (0.25, 3.75))
    assert opt.solve_matching(probe).total_cost == opt.solve_bruteforce(probe).total_cost
