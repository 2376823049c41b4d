"""Session service: snapshots, mutations, error contract, expiry."""

import math
import pathlib

import pytest
from fastapi.testclient import TestClient

from polyassign import geometry, io_cli
from polyassign.scenarios import DEFAULT_CASE_SPECS, build, with_arrivals
from polyassign.service import create_app


class FakeClock:
    def __init__(self) -> None:
        self.t = 0.0

    def __call__(self) -> float:
        return self.t

    def advance(self, dt: float) -> None:
        self.t += dt


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


TRIANGLE_BODY = {
    "shape": {"kind": "equilateral-triangle", "side": 1.0},
    "metric": "cycle",
    "capacities": [1, 1, 1],
    "name": "tri",
}


def make_session(client, body=None):
    response = client.post("/api/sessions", json=body or TRIANGLE_BODY)
    assert response.status_code == 201, response.text
    return response.json()


def error_code(response):
    return response.json()["error"]["code"]


# ----------------------------------------------------------------- creation


def test_create_from_case_spec(client):
    snap = make_session(client, {"case": "polygon-lb:n=8,d=1"})
    assert snap["name"] == "polygon-lb:n=8,d=1"
    assert snap["metric"] == "cycle"
    assert snap["capacities"] == [1] * 8
    assert snap["perimeter"] == 8.0
    assert snap["cycle_length"] == 8.0
    assert snap["preset_arrivals"] == [7.5, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
    assert snap["placed"] == []
    assert snap["steps"] == []
    assert snap["last_step"] is None
    assert snap["greedy_total"] == 0.0 and snap["opt_total"] == 0.0
    assert snap["ratio"] == 1.0  # empty boards count as ratio one
    assert snap["render"]["kind"] == "polygon"
    assert len(snap["render"]["corners"]) == 8
    assert all(f["residual"] == f["capacity"] == 1 for f in snap["facilities"])


def test_create_with_replay_preplaces_the_preset(client):
    snap = make_session(client, {"case": "polygon-lb:n=8,d=1", "replay": True})
    assert snap["placed"] == snap["preset_arrivals"]
    assert snap["greedy_total"] == 7.5
    assert snap["opt_total"] == 0.5
    assert snap["ratio"] == 15.0
    assert snap["last_step"] == {"customer": 7, "facility": 7, "cost": 1.0}
    assert [f["residual"] for f in snap["facilities"]] == [0] * 8


def test_create_custom_triangle_pins_the_embedding(client):
    snap = make_session(client)
    assert snap["name"] == "tri"
    assert snap["perimeter"] == 3.0
    coords = [(f["x"], f["y"]) for f in snap["facilities"]]
    assert coords[0] == (0.0, 0.0)
    assert coords[1] == (1.0, 0.0)
    assert coords[2] == (0.5000000000000002, 0.8660254037844387)
    assert snap["render"]["corners"] == [[x, y] for x, y in coords]


def test_create_ring_renders_as_circle(client):
    snap = make_session(
        client,
        {
            "shape": {
                "kind": "facility-ring",
                "gap_profile": "exponential",
                "base_gap": 1.0,
                "facility_count": 4,
            },
            "metric": "cycle",
            "capacities": [1, 1, 1, 1],
        },
    )
    assert snap["perimeter"] == 7.0  # declared gaps only
    assert snap["cycle_length"] == 8.0  # plus the closing gap
    radius = 8.0 / (2.0 * math.pi)
    assert snap["render"] == {"kind": "circle", "radius": radius}
    f0 = snap["facilities"][0]
    assert (f0["x"], f0["y"]) == (radius, 0.0)


def test_uniform_ring_layout_matches_the_true_embedding(client):
    snap = make_session(
        client,
        {
            "shape": {
                "kind": "facility-ring",
                "gap_profile": "uniform",
                "base_gap": 1.0,
                "facility_count": 4,
            },
            "metric": "cycle",
            "capacities": [1, 1, 1, 1],
        },
    )
    shape = build("circle-uniform", n=4).shape
    for facility in snap["facilities"]:
        x, y = geometry.embed(shape, facility["s"])
        assert facility["x"] == pytest.approx(x, abs=1e-12)
        assert facility["y"] == pytest.approx(y, abs=1e-12)


def test_create_validation_errors(client):
    for body, code in [
        ({"case": "hexagon:n=6"}, "invalid_config"),
        ({"case": 5}, "invalid_config"),
        ({"case": "triangle-lb:S=1", "replay": "yes"}, "invalid_config"),
        ({"case": "triangle-lb:S=1", "bogus": 1}, "invalid_config"),
        ({**TRIANGLE_BODY, "metric": "manhattan"}, "invalid_config"),
        ({**TRIANGLE_BODY, "capacities": [1, True, 1]}, "invalid_config"),
        ({**TRIANGLE_BODY, "capacities": [1, 1]}, "invalid_config"),
        ({**TRIANGLE_BODY, "shape": {"kind": "rectangle", "width": -1, "height": 1}}, "invalid_config"),
    ]:
        response = client.post("/api/sessions", json=body)
        assert response.status_code == 400, body
        assert error_code(response) == code, body
    # chord needs an embedding; non-uniform rings have none
    response = client.post(
        "/api/sessions",
        json={
            "shape": {
                "kind": "facility-ring",
                "gap_profile": "linear",
                "base_gap": 1.0,
                "facility_count": 3,
            },
            "metric": "chord",
            "capacities": [1, 1, 1],
        },
    )
    assert response.status_code == 400
    assert error_code(response) == "unsupported_metric"


def test_non_object_body_is_rejected(client):
    response = client.post("/api/sessions", content="[1, 2]")
    assert response.status_code == 400
    assert error_code(response) == "invalid_config"
    response = client.post("/api/sessions", content="{nope")
    assert response.status_code == 400
    assert error_code(response) == "invalid_json"


# ---------------------------------------------------------------- mutation


def test_place_undo_reset_flow(client):
    sid = make_session(client)["id"]
    snap = client.post(f"/api/sessions/{sid}/customers", json={"s": 0.5}).json()
    assert snap["placed"] == [0.5]
    assert snap["steps"] == [{"customer": 0, "s": 0.5, "facility": 0, "cost": 0.5}]
    assert snap["last_step"] == {"customer": 0, "facility": 0, "cost": 0.5}
    assert snap["greedy_total"] == 0.5 and snap["opt_total"] == 0.5
    assert snap["ratio"] == 1.0
    assert snap["facilities"][0]["residual"] == 0

    snap = client.post(f"/api/sessions/{sid}/customers", json={"s": 0.0}).json()
    # facility 0 is taken, the on-site customer pays a full side
    assert snap["steps"][1]["facility"] == 1
    assert snap["greedy_total"] == 1.5
    assert snap["opt_total"] == 0.5
    assert snap["ratio"] == 3.0

    snap = client.post(f"/api/sessions/{sid}/undo").json()
    assert snap["placed"] == [0.5]
    assert snap["greedy_total"] == 0.5
    snap = client.post(f"/api/sessions/{sid}/undo").json()
    assert snap["placed"] == []
    response = client.post(f"/api/sessions/{sid}/undo")
    assert response.status_code == 409
    assert error_code(response) == "empty_session"

    client.post(f"/api/sessions/{sid}/customers", json={"s": 1.0})
    client.post(f"/api/sessions/{sid}/customers", json={"s": 2.0})
    snap = client.post(f"/api/sessions/{sid}/reset").json()
    assert snap["placed"] == []
    assert all(f["residual"] == f["capacity"] for f in snap["facilities"])


def test_snapshot_accounting_identity(client):
    sid = make_session(client, {"case": "circle-uniform:n=3,d=1"})["id"]
    for s in (2.5, 0.0, 1.0):
        snap = client.post(f"/api/sessions/{sid}/customers", json={"s": s}).json()
    assert snap["greedy_total"] == math.fsum(step["cost"] for step in snap["steps"])
    assert snap["opt_total"] <= snap["greedy_total"]
    assert snap["ratio"] == snap["greedy_total"] / snap["opt_total"] == 5.0
    placed_per_facility = [0, 0, 0]
    for step in snap["steps"]:
        placed_per_facility[step["facility"]] += 1
    for facility in snap["facilities"]:
        assert facility["residual"] == facility["capacity"] - placed_per_facility[facility["id"]]


def test_place_validation(client):
    sid = make_session(client)["id"]
    response = client.post(f"/api/sessions/{sid}/customers", json={"s": 3.0})
    assert response.status_code == 400
    assert error_code(response) == "out_of_range"
    response = client.post(f"/api/sessions/{sid}/customers", json={"s": "mid"})
    assert response.status_code == 400 and error_code(response) == "invalid_config"
    response = client.post(f"/api/sessions/{sid}/customers", content='{"s": Infinity}')
    assert response.status_code == 400 and error_code(response) == "invalid_config"
    response = client.post(f"/api/sessions/{sid}/customers", json={"s": 0.5, "x": 1})
    assert response.status_code == 400 and error_code(response) == "invalid_config"
    response = client.post(f"/api/sessions/{sid}/customers", json={})
    assert response.status_code == 400 and error_code(response) == "invalid_config"
    response = client.post(f"/api/sessions/{sid}/customers", content="{nope")
    assert response.status_code == 400 and error_code(response) == "invalid_json"
    # a rejected placement must not leak into the session
    assert client.get(f"/api/sessions/{sid}").json()["placed"] == []


def test_capacity_exhausted_after_six_triangle_placements(client):
    snap = make_session(client, {"case": "triangle-lb:S=1", "replay": True})
    assert len(snap["placed"]) == 6
    response = client.post(f"/api/sessions/{snap['id']}/customers", json={"s": 1.5})
    assert response.status_code == 409
    assert error_code(response) == "capacity_exhausted"


# ------------------------------------------------------------- lifecycles


def test_get_delete_and_unknown_sessions(client):
    sid = make_session(client)["id"]
    assert client.get(f"/api/sessions/{sid}").json()["id"] == sid
    assert client.delete(f"/api/sessions/{sid}").status_code == 204
    assert client.get(f"/api/sessions/{sid}").status_code == 404
    assert error_code(client.get("/api/sessions/nope")) == "unknown_session"
    assert client.delete(f"/api/sessions/{sid}").status_code == 404
    assert client.post(f"/api/sessions/{sid}/customers", json={"s": 0.5}).status_code == 404


def test_sessions_are_independent(client):
    a = make_session(client)["id"]
    b = make_session(client)["id"]
    client.post(f"/api/sessions/{a}/customers", json={"s": 0.5})
    assert client.get(f"/api/sessions/{b}").json()["placed"] == []
    assert client.get(f"/api/sessions/{a}").json()["placed"] == [0.5]


def test_sessions_expire_after_idle_ttl():
    clock = FakeClock()
    with TestClient(create_app(session_ttl=10.0, clock=clock)) as client:
        sid = make_session(client)["id"]
        clock.advance(9.0)
        assert client.get(f"/api/sessions/{sid}").status_code == 200
        clock.advance(9.0)  # the earlier GET refreshed the idle timer
        assert client.get(f"/api/sessions/{sid}").status_code == 200
        clock.advance(10.5)
        response = client.get(f"/api/sessions/{sid}")
        assert response.status_code == 404
        assert error_code(response) == "unknown_session"


def test_export_round_trips_into_the_file_format(client):
    sid = make_session(client, {"case": "circle-uniform:n=3,d=1"})["id"]
    for s in (2.5, 0.0):
        client.post(f"/api/sessions/{sid}/customers", json={"s": s})
    doc = client.get(f"/api/sessions/{sid}/export").json()
    scenario = io_cli.parse_scenario(io_cli.dumps(doc))
    expected = with_arrivals(build("circle-uniform", n=3), (2.5, 0.0))
    assert scenario == expected
    assert scenario.claim is None  # session exports never carry claims


def test_cases_endpoint_lists_the_shipped_specs(client):
    assert client.get("/api/cases").json() == list(DEFAULT_CASE_SPECS)


def test_audit_is_debug_only():
    with TestClient(create_app(debug=True)) as client:
        sid = make_session(client)["id"]
        client.post(f"/api/sessions/{sid}/customers", json={"s": 0.5})
        doc = client.get(f"/api/sessions/{sid}/audit").json()
        assert doc["consistent"] is True
        assert doc["greedy_total"] == doc["snapshot_total"] == 0.5
    with TestClient(create_app(debug=False)) as client:
        sid = make_session(client)["id"]
        assert client.get(f"/api/sessions/{sid}/audit").status_code == 404


def test_static_playground_is_served_when_configured():
    import polyassign

    static_dir = pathlib.Path(polyassign.__file__).parent / "static"
    with TestClient(create_app(static_dir=str(static_dir))) as client:
        response = client.get("/")
        assert response.status_code == 200
        assert "Adversary playground" in response.text
        # the API stays mounted in front of the static files
        assert client.get("/api/cases").status_code == 200
