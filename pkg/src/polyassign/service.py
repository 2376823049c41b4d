"""HTTP session service behind the interactive adversary playground.

A session pins a shape, metric and per-facility capacities; a client then
places customers one at a time and watches greedy's forced response against
the exact optimum over everything placed so far. Every mutation re-simulates
the full arrival list from scratch, so a snapshot can never drift from what
the engine would compute; sessions are small (at most total capacity), which
makes re-simulation the cheap and boring choice.

Sessions live in memory only and expire after an idle TTL. Errors always
take the shape {"error": {"code": ..., "message": ...}}.
"""

from __future__ import annotations

import json
import math
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import engine, geometry, opt
from .errors import (
    BoundaryRangeError,
    CapacityExhaustedError,
    PolyassignError,
    UnsupportedEmbeddingError,
    UnsupportedMetricError,
)
from .geometry import FacilityRing, Metric, Shape
from .io_cli import parse_case_spec, scenario_to_dict, shape_from_dict, shape_to_dict
from .scenarios import DEFAULT_CASE_SPECS, Scenario, with_arrivals


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _wrap(exc: Exception) -> ApiError:
    if isinstance(exc, ApiError):
        return exc
    if isinstance(exc, CapacityExhaustedError):
        return ApiError(409, "capacity_exhausted", str(exc))
    if isinstance(exc, BoundaryRangeError):
        return ApiError(400, "out_of_range", str(exc))
    if isinstance(exc, UnsupportedMetricError):
        return ApiError(400, "unsupported_metric", str(exc))
    if isinstance(exc, UnsupportedEmbeddingError):
        return ApiError(400, "unsupported_embedding", str(exc))
    if isinstance(exc, (PolyassignError, ValueError)):
        return ApiError(400, "invalid_config", str(exc))
    return ApiError(500, "internal", f"{type(exc).__name__}: {exc}")


@dataclass
class _Session:
    id: str
    base: Scenario  # zero arrivals; shape/metric/capacities of record
    preset_arrivals: tuple[float, ...]
    placed: list[float]
    touched: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class _SessionStore:
    def __init__(self, ttl: float, clock: Callable[[], float]) -> None:
        self._ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, _Session] = {}

    def now(self) -> float:
        return self._clock()

    def add(self, session: _Session) -> None:
        with self._lock:
            self._purge()
            self._sessions[session.id] = session

    def get(self, sid: str) -> _Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(sid)
            if session is None:
                raise ApiError(404, "unknown_session", f"no session {sid!r}")
            session.touched = self.now()
            return session

    def remove(self, sid: str) -> None:
        with self._lock:
            self._purge()
            if self._sessions.pop(sid, None) is None:
                raise ApiError(404, "unknown_session", f"no session {sid!r}")

    def _purge(self) -> None:
        # Lazy idle expiry; called under the store lock on every access.
        now = self.now()
        dead = [sid for sid, s in self._sessions.items() if now - s.touched > self._ttl]
        for sid in dead:
            del self._sessions[sid]


def _require_number(value: Any, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ApiError(400, "invalid_config", f"{label} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ApiError(400, "invalid_config", f"{label} must be finite")
    return float(value)


def _check_keys(body: Any, allowed: set, required: set) -> None:
    if not isinstance(body, dict):
        raise ApiError(400, "invalid_config", "request body must be a JSON object")
    unknown = sorted(set(body) - allowed)
    if unknown:
        raise ApiError(400, "invalid_config", f"unknown field(s) {', '.join(unknown)}")
    missing = sorted(required - set(body))
    if missing:
        raise ApiError(400, "invalid_config", f"missing field(s) {', '.join(missing)}")


async def _json_body(request: Request) -> Any:
    raw = await request.body()
    if not raw:
        return {}
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ApiError(400, "invalid_json", f"request body is not valid JSON: {exc}") from exc


def _facility_xy(shape: Shape, s: float) -> tuple[float, float]:
    # Non-uniform rings have no metric embedding; for drawing they borrow the
    # circle layout with angle proportional to arc length, which coincides
    # with the true embedding in the uniform case.
    if isinstance(shape, FacilityRing):
        radius = shape.cycle_length / (2.0 * math.pi)
        angle = 2.0 * math.pi * s / shape.cycle_length
        return (radius * math.cos(angle), radius * math.sin(angle))
    return geometry.embed(shape, s)


def _render_block(shape: Shape) -> dict:
    if isinstance(shape, FacilityRing):
        return {"kind": "circle", "radius": shape.cycle_length / (2.0 * math.pi)}
    return {"kind": "polygon", "corners": [[x, y] for x, y in shape.corners]}


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def _snapshot(session: _Session) -> dict:
    base = session.base
    shape = base.shape
    scenario = with_arrivals(base, tuple(session.placed))
    record = engine.run_scenario(scenario)
    optimal = opt.solve_matching(scenario)
    ratio = opt.cost_ratio(record.total_cost, optimal.total_cost)
    positions = shape.vertex_positions
    facilities = []
    for fid, capacity in enumerate(base.capacities):
        x, y = _facility_xy(shape, positions[fid])
        facilities.append(
            {
                "id": fid,
                "s": positions[fid],
                "x": x,
                "y": y,
                "capacity": capacity,
                "residual": capacity - record.loads[fid],
            }
        )
    last = record.steps[-1] if record.steps else None
    return {
        "id": session.id,
        "name": base.name,
        "shape": shape_to_dict(shape),
        "metric": base.metric.value,
        "capacities": list(base.capacities),
        "perimeter": shape.perimeter,
        "cycle_length": shape.cycle_length,
        "render": _render_block(shape),
        "facilities": facilities,
        "preset_arrivals": list(session.preset_arrivals),
        "placed": list(session.placed),
        "steps": [
            {"customer": a.customer, "s": session.placed[a.customer], "facility": a.facility, "cost": a.cost}
            for a in record.steps
        ],
        "last_step": (
            {"customer": last.customer, "facility": last.facility, "cost": last.cost}
            if last is not None
            else None
        ),
        "opt_assignment": list(optimal.assignment),
        "greedy_total": record.total_cost,
        "opt_total": optimal.total_cost,
        "ratio": _finite_or_none(ratio),
    }


def create_app(
    session_ttl: float = 3600.0,
    clock: Callable[[], float] = time.monotonic,
    static_dir: Optional[str] = None,
    debug: bool = False,
) -> FastAPI:
    """Application factory; sessions and their TTL clock are per-app state."""
    app = FastAPI(title="polyassign playground", openapi_url=None, docs_url=None, redoc_url=None)
    store = _SessionStore(session_ttl, clock)

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            {"error": {"code": exc.code, "message": exc.message}}, status_code=exc.status
        )

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception) -> JSONResponse:
        wrapped = _wrap(exc)
        return JSONResponse(
            {"error": {"code": wrapped.code, "message": wrapped.message}},
            status_code=wrapped.status,
        )

    def _new_session(base: Scenario, preset: tuple[float, ...], placed: list[float]) -> _Session:
        session = _Session(
            id=secrets.token_urlsafe(9),
            base=base,
            preset_arrivals=preset,
            placed=placed,
            touched=store.now(),
        )
        store.add(session)
        return session

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request) -> JSONResponse:
        body = await _json_body(request)
        try:
            if isinstance(body, dict) and "case" in body:
                _check_keys(body, {"case", "replay"}, {"case"})
                if not isinstance(body["case"], str):
                    raise ApiError(400, "invalid_config", "case must be a string")
                preset = parse_case_spec(body["case"])
                base = with_arrivals(preset, ())
                replay = body.get("replay", False)
                if not isinstance(replay, bool):
                    raise ApiError(400, "invalid_config", "replay must be a boolean")
                placed = list(preset.arrivals) if replay else []
                geometry.make_distance(base.shape, base.metric)
                session = _new_session(base, preset.arrivals, placed)
            else:
                _check_keys(
                    body, {"shape", "metric", "capacities", "name"}, {"shape", "metric", "capacities"}
                )
                shape = shape_from_dict(body["shape"], "shape")
                try:
                    metric = Metric(body["metric"])
                except ValueError:
                    raise ApiError(
                        400, "invalid_config", f"unknown metric {body['metric']!r}"
                    ) from None
                capacities_raw = body["capacities"]
                if not isinstance(capacities_raw, list) or not all(
                    isinstance(c, int) and not isinstance(c, bool) for c in capacities_raw
                ):
                    raise ApiError(400, "invalid_config", "capacities must be an array of integers")
                name = body.get("name", "session")
                if not isinstance(name, str):
                    raise ApiError(400, "invalid_config", "name must be a string")
                base = Scenario(
                    name=name,
                    shape=shape,
                    metric=metric,
                    capacities=tuple(capacities_raw),
                    arrivals=(),
                )
                # Surfaces unsupported metric/shape pairings at creation time.
                geometry.make_distance(shape, metric)
                session = _new_session(base, (), [])
        except ApiError:
            raise
        except Exception as exc:
            raise _wrap(exc) from exc
        return JSONResponse(_snapshot(session), status_code=201)

    @app.get("/api/sessions/{sid}")
    async def get_session(sid: str) -> JSONResponse:
        session = store.get(sid)
        with session.lock:
            return JSONResponse(_snapshot(session))

    @app.delete("/api/sessions/{sid}", status_code=204)
    async def delete_session(sid: str) -> Response:
        store.remove(sid)
        return Response(status_code=204)

    @app.post("/api/sessions/{sid}/customers")
    async def place_customer(sid: str, request: Request) -> JSONResponse:
        body = await _json_body(request)
        _check_keys(body, {"s"}, {"s"})
        s = _require_number(body["s"], "s")
        session = store.get(sid)
        with session.lock:
            if len(session.placed) >= sum(session.base.capacities):
                raise ApiError(409, "capacity_exhausted", "every facility is at capacity")
            candidate = session.placed + [s]
            try:
                with_arrivals(session.base, tuple(candidate))
            except Exception as exc:
                raise _wrap(exc) from exc
            session.placed = candidate
            return JSONResponse(_snapshot(session))

    @app.post("/api/sessions/{sid}/undo")
    async def undo(sid: str) -> JSONResponse:
        session = store.get(sid)
        with session.lock:
            if not session.placed:
                raise ApiError(409, "empty_session", "nothing to undo")
            session.placed = session.placed[:-1]
            return JSONResponse(_snapshot(session))

    @app.post("/api/sessions/{sid}/reset")
    async def reset(sid: str) -> JSONResponse:
        session = store.get(sid)
        with session.lock:
            session.placed = []
            return JSONResponse(_snapshot(session))

    @app.get("/api/sessions/{sid}/export")
    async def export(sid: str) -> JSONResponse:
        session = store.get(sid)
        with session.lock:
            scenario = with_arrivals(session.base, tuple(session.placed))
            return JSONResponse(scenario_to_dict(scenario))

    @app.get("/api/cases")
    async def cases() -> JSONResponse:
        return JSONResponse(list(DEFAULT_CASE_SPECS))

    if debug:

        @app.get("/api/sessions/{sid}/audit")
        async def audit(sid: str) -> JSONResponse:
            session = store.get(sid)
            with session.lock:
                snap = _snapshot(session)
                scenario = with_arrivals(session.base, tuple(session.placed))
                record = engine.run_scenario(scenario)
                consistent = (
                    record.total_cost == snap["greedy_total"]
                    and [a.facility for a in record.steps]
                    == [step["facility"] for step in snap["steps"]]
                    and [a.cost for a in record.steps] == [step["cost"] for step in snap["steps"]]
                )
                return JSONResponse(
                    {
                        "consistent": consistent,
                        "greedy_total": record.total_cost,
                        "snapshot_total": snap["greedy_total"],
                    }
                )

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
