"""Adversarial constructions: cascades reproduce, nudges stay sane."""

import math

import pytest

from polyassign import claims
from polyassign.engine import run_scenario
from polyassign.errors import BoundaryRangeError, NudgeError, ScenarioError
from polyassign.geometry import (
    EquilateralTriangle,
    FacilityRing,
    GapProfile,
    Metric,
    Rectangle,
    RegularPolygon,
)
from polyassign.scenarios import (
    DEFAULT_CASE_SPECS,
    Case,
    Claim,
    Scenario,
    build,
    nudge,
    with_arrivals,
)


def build_spec(spec: str):
    from polyassign.io_cli import parse_case_spec

    return parse_case_spec(spec)


# ---------------------------------------------------------------- cascades


def test_every_default_case_reproduces_its_narrated_steps():
    # epsilon = 0: the narrated nearest-facility choices coincide with the
    # engine's lowest-id tie-break and every step cost is an exact binary
    # fraction, so equality here is exact, not approximate.
    for spec in DEFAULT_CASE_SPECS:
        scenario = build_spec(spec)
        record = run_scenario(scenario)
        got = tuple(step.cost for step in record.steps)
        assert got == scenario.claim.steps, spec
        assert record.total_cost == math.fsum(scenario.claim.steps), spec


def test_cascade_visits_facilities_in_id_order():
    scenario = build("polygon-lb", n=8)
    record = run_scenario(scenario)
    # seed goes to facility 0, customer k then lands on facility k-1
    assert tuple(step.facility for step in record.steps) == (0, 1, 2, 3, 4, 5, 6, 7)


def test_polygon_cascade_frozen_values():
    scenario = build("polygon-lb", n=8, d=1.0)
    assert scenario.arrivals == (7.5, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    assert scenario.claim.greedy == 7.5
    assert scenario.claim.opt == 0.5
    assert scenario.claim.ratio == 15.0
    assert scenario.claim.steps == (0.5,) + (1.0,) * 7


def test_ring_cascades_follow_their_gap_profiles():
    linear = build("circle-linear", n=4)
    assert linear.arrivals == (6.5, 0.0, 1.0, 3.0)
    assert linear.claim.steps == (0.5, 1.0, 2.0, 3.0)
    assert linear.claim.ratio == 13.0

    exponential = build("circle-exponential", n=4)
    assert exponential.arrivals == (7.5, 0.0, 1.0, 3.0)
    assert exponential.claim.steps == (0.5, 1.0, 2.0, 4.0)
    assert exponential.claim.ratio == 15.0

    uniform = build("circle-uniform", n=3)
    assert uniform.arrivals == (2.5, 0.0, 1.0)
    assert uniform.claim.ratio == 5.0


def test_seed_epsilon_shifts_only_the_seed_step():
    eps = 1e-6
    scenario = build("polygon-lb", n=8, epsilon=eps)
    # forward across the closing gap brings the seed nearer facility 0
    assert scenario.arrivals[0] == (7.5 + eps) % 8.0
    assert scenario.arrivals[1:] == (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    record = run_scenario(scenario)
    assert record.steps[0].cost == pytest.approx(0.5 - eps, abs=1e-15)
    assert tuple(step.cost for step in record.steps[1:]) == (1.0,) * 7
    # the claim verifier budgets m * epsilon of slack, so the verdicts are
    # the same as at epsilon = 0
    verdict = claims.evaluate(scenario)
    assert verdict.verdict_greedy == "PASS"
    assert verdict.verdict_ratio == "PASS"


def test_triangle_cascade_with_epsilon_still_passes_greedy():
    scenario = build("triangle-lb", epsilon=1e-6)
    assert scenario.arrivals[0] == 0.5 - 1e-6
    verdict = claims.evaluate(scenario)
    assert verdict.verdict_greedy == "PASS"
    # the claimed optimum stays wrong no matter the nudge
    assert verdict.verdict_opt == "FAIL"


# ------------------------------------------------------------------ nudge


def test_nudge_moves_toward_the_target_facility():
    tri = EquilateralTriangle(1.0)
    assert nudge(tri, Metric.CYCLE, 0.5, 0, 0.01) == 0.49
    assert nudge(tri, Metric.CYCLE, 0.5, 1, 0.01) == 0.51
    square = Rectangle(1.0, 1.0)
    assert nudge(square, Metric.CYCLE, 3.5, 0, 0.25) == 3.75


def test_nudge_wraps_across_the_seam():
    octo = RegularPolygon(8, 1.0)
    assert nudge(octo, Metric.CYCLE, 7.5, 0, 0.25) == 7.75
    assert nudge(octo, Metric.CYCLE, 7.75, 0, 0.375) == 0.125


def test_nudge_antipodal_tie_prefers_forward():
    square = Rectangle(1.0, 1.0)
    # s = 2 is antipodal to facility 0; both directions shrink equally
    assert nudge(square, Metric.CYCLE, 2.0, 0, 0.25) == 2.25


def test_nudge_zero_epsilon_is_identity():
    tri = EquilateralTriangle(1.0)
    assert nudge(tri, Metric.CYCLE, 0.5, 0, 0.0) == 0.5


def test_nudge_rejects_bad_arguments():
    tri = EquilateralTriangle(1.0)
    with pytest.raises(NudgeError):
        nudge(tri, Metric.CYCLE, 0.5, 0, -0.1)
    with pytest.raises(NudgeError):
        nudge(tri, Metric.CYCLE, 0.5, 0, math.inf)
    with pytest.raises(NudgeError):
        nudge(tri, Metric.CYCLE, 0.5, 3, 0.01)
    # at or above half the shortest gap the cascade ordering breaks down
    with pytest.raises(NudgeError):
        nudge(tri, Metric.CYCLE, 0.5, 0, 0.5)
    ring = FacilityRing(GapProfile.EXPONENTIAL, 1.0, 4)
    with pytest.raises(NudgeError):
        nudge(ring, Metric.CYCLE, 7.5, 0, 0.5)
    with pytest.raises(BoundaryRangeError):
        nudge(tri, Metric.CYCLE, 99.0, 0, 0.01)


# ----------------------------------------------------------- construction


def test_scenario_validation():
    tri = EquilateralTriangle(1.0)
    with pytest.raises(ScenarioError):
        Scenario(name="x", shape=tri, metric=Metric.CYCLE, capacities=(1, 1), arrivals=())
    with pytest.raises(ScenarioError):
        Scenario(name="x", shape=tri, metric=Metric.CYCLE, capacities=(1, 0, 1), arrivals=())
    with pytest.raises(ScenarioError):
        Scenario(
            name="x",
            shape=tri,
            metric=Metric.CYCLE,
            capacities=(1, 1, 1),
            arrivals=(0.0, 1.0, 2.0, 0.5),
        )
    with pytest.raises(BoundaryRangeError):
        Scenario(name="x", shape=tri, metric=Metric.CYCLE, capacities=(1, 1, 1), arrivals=(3.0,))
    with pytest.raises(ScenarioError):
        Scenario(
            name="x",
            shape=tri,
            metric=Metric.CYCLE,
            capacities=(1, 1, 1),
            arrivals=(),
            epsilon=-1.0,
        )


def test_build_argument_handling():
    with pytest.raises(ScenarioError):
        build("polygon-lb")
    with pytest.raises(ScenarioError):
        build("triangle-lb", n=3)
    with pytest.raises(ValueError):
        build("no-such-case", n=3)
    assert build(Case.TRIANGLE_LB).name == "triangle-lb:S=1"
    assert build("triangle-lb", S=0.5).name == "triangle-lb:S=0.5"


def test_with_arrivals_drops_the_claim():
    scenario = build("triangle-exact")
    probe = with_arrivals(scenario, (0.1, 0.2))
    assert probe.claim is None
    assert probe.arrivals == (0.1, 0.2)
    assert probe.shape == scenario.shape
    assert probe.capacities == scenario.capacities
    assert scenario.claim is not None  # original untouched


def test_claims_record_the_disputed_totals_verbatim():
    # the builders preserve the source totals even where they are wrong;
    # the ledger, not the builder, is where disagreement shows up
    rect = build("rectangle-lb")
    assert rect.claim.greedy == 3.5
    assert math.fsum(rect.claim.steps) == 4.5
    tri = build("triangle-lb")
    assert tri.claim.opt == 1.0
    exact = build("triangle-exact")
    assert exact.claim.opt == 0.5
    assert exact.claim.ratio == 5.0


def test_claim_is_plain_data():
    claim = Claim(greedy=1.0, opt=0.5, ratio=2.0, paper_ref="ref")
    assert claim.steps is None
    assert claim.notes == ""
