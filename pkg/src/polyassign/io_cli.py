"""Scenario files, report serialization, and the command-line surface.

Scenario files are strict JSON: every field is validated, unknown fields are
rejected, and errors carry the path of the offending field. Reports come in
two renderings, JSON (insertion-ordered keys) and CSV (fixed columns); both
write floats in shortest round-trip form, so re-parsing a report recovers
every number bit-exactly.

Case specs are a mini-grammar over the shipped constructions:
``name:key=value,...`` with keys n (facility count), d (gap or side), S
(triangle side) and eps (seed nudge), for example ``polygon-lb:n=8,d=1``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace
from typing import Any, Optional, Sequence

from . import claims, engine, geometry, opt, scenarios, search
from .errors import ScenarioFormatError
from .geometry import (
    EquilateralTriangle,
    FacilityRing,
    GapProfile,
    Metric,
    Rectangle,
    RegularPolygon,
    Shape,
)
from .scenarios import Claim, Scenario
from .search import SearchConfig, SearchResult, SweepResult

CLAIMS_CSV_COLUMNS = (
    "claim_id",
    "paper_ref",
    "claimed_greedy",
    "computed_greedy",
    "claimed_opt",
    "computed_opt",
    "claimed_ratio",
    "ratio_vs_true_opt",
    "ratio_vs_claimed_opt",
    "verdict_greedy",
    "verdict_opt",
    "verdict_ratio",
    "notes",
)
RUN_CSV_COLUMNS = ("customer", "s", "greedy_facility", "greedy_cost", "opt_facility", "opt_cost")
CURVE_CSV_COLUMNS = ("x", "ratio", "derivative")
SWEEP_CSV_COLUMNS = ("s", "facility", "greedy_total", "opt_total")


# -- strict JSON helpers ------------------------------------------------------

def _check_fields(
    mapping: Any, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()
) -> None:
    if not isinstance(mapping, dict):
        raise ScenarioFormatError(f"{path}: expected an object, got {type(mapping).__name__}")
    unknown = sorted(set(mapping) - set(required) - set(optional))
    if unknown:
        raise ScenarioFormatError(f"{path}: unknown field(s) {', '.join(unknown)}")
    for name in required:
        if name not in mapping:
            raise ScenarioFormatError(f"{path}: missing field '{name}'")


def _number(value: Any, path: str) -> float:
    # bool is an int subclass; keep truth values out of numeric fields.
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(f"{path}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioFormatError(f"{path}: number must be finite, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(f"{path}: expected an integer, got {value!r}")
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ScenarioFormatError(f"{path}: expected a string, got {value!r}")
    return value


def _number_list(value: Any, path: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ScenarioFormatError(f"{path}: expected an array, got {value!r}")
    return tuple(_number(item, f"{path}[{i}]") for i, item in enumerate(value))


# -- scenario file format -----------------------------------------------------

def shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, EquilateralTriangle):
        return {"kind": "equilateral-triangle", "side": shape.side}
    if isinstance(shape, Rectangle):
        return {"kind": "rectangle", "width": shape.width, "height": shape.height}
    if isinstance(shape, RegularPolygon):
        return {"kind": "regular-polygon", "side_count": shape.side_count, "side": shape.side}
    if isinstance(shape, FacilityRing):
        return {
            "kind": "facility-ring",
            "gap_profile": shape.gap_profile.value,
            "base_gap": shape.base_gap,
            "facility_count": shape.count,
        }
    raise ScenarioFormatError(f"no file encoding for shape {type(shape).__name__}")


def shape_from_dict(data: Any, path: str = "shape") -> Shape:
    if not isinstance(data, dict) or "kind" not in data:
        raise ScenarioFormatError(f"{path}: expected an object with a 'kind' field")
    kind = _string(data["kind"], f"{path}.kind")
    try:
        if kind == "equilateral-triangle":
            _check_fields(data, path, ("kind", "side"))
            return EquilateralTriangle(_number(data["side"], f"{path}.side"))
        if kind == "rectangle":
            _check_fields(data, path, ("kind", "width", "height"))
            return Rectangle(
                _number(data["width"], f"{path}.width"),
                _number(data["height"], f"{path}.height"),
            )
        if kind == "regular-polygon":
            _check_fields(data, path, ("kind", "side_count", "side"))
            return RegularPolygon(
                _integer(data["side_count"], f"{path}.side_count"),
                _number(data["side"], f"{path}.side"),
            )
        if kind == "facility-ring":
            _check_fields(data, path, ("kind", "gap_profile", "base_gap", "facility_count"))
            profile_name = _string(data["gap_profile"], f"{path}.gap_profile")
            try:
                profile = GapProfile(profile_name)
            except ValueError:
                raise ScenarioFormatError(
                    f"{path}.gap_profile: unknown profile {profile_name!r}"
                ) from None
            return FacilityRing(
                profile,
                _number(data["base_gap"], f"{path}.base_gap"),
                _integer(data["facility_count"], f"{path}.facility_count"),
            )
    except ValueError as exc:
        if isinstance(exc, ScenarioFormatError):
            raise
        raise ScenarioFormatError(f"{path}: {exc}") from exc
    raise ScenarioFormatError(f"{path}.kind: unknown shape kind {kind!r}")


def claim_to_dict(claim: Claim) -> dict:
    doc: dict[str, Any] = {
        "greedy": claim.greedy,
        "opt": claim.opt,
        "ratio": claim.ratio,
        "paper_ref": claim.paper_ref,
    }
    if claim.steps is not None:
        doc["steps"] = list(claim.steps)
    if claim.notes:
        doc["notes"] = claim.notes
    return doc


def claim_from_dict(data: Any, path: str = "claims") -> Claim:
    _check_fields(data, path, ("greedy", "opt", "ratio", "paper_ref"), ("steps", "notes"))
    steps = None
    if "steps" in data:
        steps = _number_list(data["steps"], f"{path}.steps")
    return Claim(
        greedy=_number(data["greedy"], f"{path}.greedy"),
        opt=_number(data["opt"], f"{path}.opt"),
        ratio=_number(data["ratio"], f"{path}.ratio"),
        paper_ref=_string(data["paper_ref"], f"{path}.paper_ref"),
        steps=steps,
        notes=_string(data.get("notes", ""), f"{path}.notes"),
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    doc: dict[str, Any] = {
        "name": scenario.name,
        "shape": shape_to_dict(scenario.shape),
        "metric": scenario.metric.value,
        "capacities": list(scenario.capacities),
        "arrivals": list(scenario.arrivals),
    }
    if scenario.epsilon:
        doc["epsilon"] = scenario.epsilon
    if scenario.claim is not None:
        doc["claims"] = claim_to_dict(scenario.claim)
    return doc


def scenario_from_dict(data: Any, path: str = "scenario") -> Scenario:
    _check_fields(
        data,
        path,
        ("name", "shape", "metric", "capacities", "arrivals"),
        ("epsilon", "claims"),
    )
    metric_name = _string(data["metric"], f"{path}.metric")
    try:
        metric = Metric(metric_name)
    except ValueError:
        raise ScenarioFormatError(f"{path}.metric: unknown metric {metric_name!r}") from None
    capacities_raw = data["capacities"]
    if not isinstance(capacities_raw, list):
        raise ScenarioFormatError(f"{path}.capacities: expected an array")
    capacities = tuple(
        _integer(c, f"{path}.capacities[{i}]") for i, c in enumerate(capacities_raw)
    )
    claim = claim_from_dict(data["claims"], f"{path}.claims") if "claims" in data else None
    epsilon = _number(data["epsilon"], f"{path}.epsilon") if "epsilon" in data else 0.0
    return Scenario(
        name=_string(data["name"], f"{path}.name"),
        shape=shape_from_dict(data["shape"], f"{path}.shape"),
        metric=metric,
        capacities=capacities,
        arrivals=_number_list(data["arrivals"], f"{path}.arrivals"),
        claim=claim,
        epsilon=epsilon,
    )


def parse_scenario(data: bytes | str) -> Scenario:
    """Validated Scenario from UTF-8 JSON bytes (or text)."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON: {exc}") from exc
    return scenario_from_dict(doc, "scenario")


def load_scenario(path: str) -> Scenario:
    with open(path, "rb") as handle:
        return parse_scenario(handle.read())


def save_scenario(scenario: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(scenario_to_dict(scenario)))


def parse_case_spec(spec: str) -> Scenario:
    """Scenario from a ``name:key=value,...`` case spec."""
    name, _, rest = spec.partition(":")
    try:
        case = scenarios.Case(name)
    except ValueError:
        known = ", ".join(c.value for c in scenarios.Case)
        raise ScenarioFormatError(f"unknown case {name!r} (known: {known})") from None
    kwargs: dict[str, Any] = {}
    mapping = {"n": ("n", int), "d": ("d", float), "S": ("S", float), "eps": ("epsilon", float)}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in mapping:
                raise ScenarioFormatError(
                    f"case spec item {item!r} is not one of n=, d=, S=, eps="
                )
            target, converter = mapping[key]
            if target in kwargs:
                raise ScenarioFormatError(f"duplicate case spec key {key!r}")
            try:
                kwargs[target] = converter(value.strip())
            except ValueError:
                raise ScenarioFormatError(
                    f"case spec key {key!r} has invalid value {value.strip()!r}"
                ) from None
    return scenarios.build(case, **kwargs)


def resolve_scenario(arg: str) -> Scenario:
    """File path or case spec, whichever the argument looks like."""
    if arg.endswith(".json") or os.path.sep in arg or os.path.exists(arg):
        return load_scenario(arg)
    return parse_case_spec(arg)


# -- reports ------------------------------------------------------------------

def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


def _csv_text(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buf.getvalue()


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_report(scenario: Scenario, record: engine.AssignmentRecord, optimal: opt.OptResult) -> dict:
    ratio = opt.cost_ratio(record.total_cost, optimal.total_cost)
    return {
        "name": scenario.name,
        "scenario": scenario_to_dict(scenario),
        "greedy_total": record.total_cost,
        "opt_total": optimal.total_cost,
        "ratio": _finite_or_none(ratio),
        "loads": list(record.loads),
        "steps": [
            {
                "customer": step.customer,
                "s": scenario.arrivals[step.customer],
                "facility": step.facility,
                "cost": step.cost,
            }
            for step in record.steps
        ],
        "optimal_assignment": list(optimal.assignment),
        "optimal_method": optimal.method,
    }


def run_csv(scenario: Scenario, record: engine.AssignmentRecord, optimal: opt.OptResult) -> str:
    dist = geometry.make_distance(scenario.shape, scenario.metric)
    positions = scenario.shape.vertex_positions
    rows = []
    for step in record.steps:
        s = scenario.arrivals[step.customer]
        opt_facility = optimal.assignment[step.customer]
        rows.append(
            (step.customer, s, step.facility, step.cost, opt_facility, dist(s, positions[opt_facility]))
        )
    return _csv_text(RUN_CSV_COLUMNS, rows)


def verdict_to_dict(row: claims.ClaimVerdict) -> dict:
    return {
        "kind": row.kind,
        "claim_id": row.claim_id,
        "paper_ref": row.paper_ref,
        "claimed_greedy": row.claimed_greedy,
        "computed_greedy": row.computed_greedy,
        "claimed_opt": row.claimed_opt,
        "computed_opt": row.computed_opt,
        "claimed_ratio": row.claimed_ratio,
        "ratio_vs_true_opt": _finite_or_none(row.ratio_vs_true_opt),
        "ratio_vs_claimed_opt": _finite_or_none(row.ratio_vs_claimed_opt),
        "verdict_greedy": row.verdict_greedy,
        "verdict_opt": row.verdict_opt,
        "verdict_ratio": row.verdict_ratio,
        "claimed_steps": list(row.claimed_steps) if row.claimed_steps is not None else None,
        "computed_steps": list(row.computed_steps) if row.computed_steps is not None else None,
        "step_verdicts": list(row.step_verdicts) if row.step_verdicts is not None else None,
        "notes": row.notes,
    }


def claims_report(rows: Sequence[claims.ClaimVerdict]) -> dict:
    return {
        "rows": [verdict_to_dict(row) for row in rows],
        "failures": sum(1 for row in rows if row.kind == "claim" and row.has_failure),
    }


def claims_csv(rows: Sequence[claims.ClaimVerdict]) -> str:
    table = []
    for row in rows:
        table.append(
            (
                row.claim_id,
                row.paper_ref,
                row.claimed_greedy,
                row.computed_greedy,
                row.claimed_opt,
                row.computed_opt,
                row.claimed_ratio,
                _finite_or_none(row.ratio_vs_true_opt),
                _finite_or_none(row.ratio_vs_claimed_opt),
                row.verdict_greedy,
                row.verdict_opt,
                row.verdict_ratio,
                row.notes,
            )
        )
    return _csv_text(CLAIMS_CSV_COLUMNS, table)


def search_report(config: SearchConfig, result: SearchResult) -> dict:
    return {
        "shape": shape_to_dict(config.shape),
        "metric": config.metric.value,
        "capacities": list(config.capacities),
        "customers": config.customers,
        "resolution": config.resolution,
        "restarts": config.restarts,
        "max_rounds": config.max_rounds,
        "seed": config.seed,
        "best_sequence": list(result.best_sequence),
        "best_ratio": _finite_or_none(result.best_ratio),
        "greedy_total": result.greedy_total,
        "opt_total": result.opt_total,
        "evaluations": result.evaluations,
    }


def curve_report(S: float, points) -> dict:
    return {
        "S": S,
        "points": [
            {"x": p.x, "ratio": p.ratio, "derivative": p.derivative} for p in points
        ],
    }


def curve_csv(points) -> str:
    return _csv_text(CURVE_CSV_COLUMNS, [(p.x, p.ratio, p.derivative) for p in points])


def sweep_report(scenario: Scenario, result: SweepResult, step: float) -> dict:
    return {
        "name": scenario.name,
        "customer": result.customer,
        "direction": result.direction,
        "step": step,
        "samples": [
            {
                "s": sample.s,
                "facility": sample.facility,
                "greedy_total": sample.greedy_total,
                "opt_total": sample.opt_total,
            }
            for sample in result.samples
        ],
        "switches": [
            {
                "s": switch.s,
                "from_facility": switch.from_facility,
                "to_facility": switch.to_facility,
            }
            for switch in result.switches
        ],
    }


def sweep_csv(result: SweepResult) -> str:
    rows = [(s.s, s.facility, s.greedy_total, s.opt_total) for s in result.samples]
    return _csv_text(SWEEP_CSV_COLUMNS, rows)


# -- command line -------------------------------------------------------------

_EPILOG = (
    "case specs: name:key=value,... with keys n, d, S, eps; names: "
    + ", ".join(c.value for c in scenarios.Case)
    + ". Example: polygon-lb:n=8,d=1"
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyassign",
        description="Greedy online facility assignment on shape boundaries, "
        "with exact optima, claim verification and worst-case search.",
        epilog=_EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="run greedy and the exact optimum on a scenario", epilog=_EPILOG
    )
    sim.add_argument("scenario", help="scenario JSON file or case spec")
    sim.add_argument(
        "--metric",
        choices=[m.value for m in Metric],
        help="override the scenario's metric",
    )
    sim.add_argument("--out", choices=("json", "csv"), default="json")

    cl = sub.add_parser("claims", help="recompute every shipped claim and print the ledger")
    cl.add_argument("--n-min", type=int, default=3)
    cl.add_argument("--n-max", type=int, default=8)
    cl.add_argument("--d", type=float, default=1.0)
    cl.add_argument("--S", type=float, default=1.0)
    cl.add_argument("--out", choices=("json", "csv"), default="json")
    cl.add_argument(
        "--strict", action="store_true", help="exit 3 if any claim row has a FAIL verdict"
    )

    se = sub.add_parser("search", help="hunt for arrival sequences maximizing greedy/OPT")
    se.add_argument(
        "--case-spec", required=True, help="shape, metric and capacities come from this case"
    )
    se.add_argument("--m", type=int, help="customer count (default: the case's own)")
    se.add_argument("--restarts", type=int, default=20)
    se.add_argument("--seed", type=int, help="default from POLYASSIGN_SEED, else 0")
    se.add_argument("--resolution", type=int, default=100, help="grid points per unit length")
    se.add_argument("--max-rounds", type=int, default=40)

    cu = sub.add_parser("curve", help="single-customer ratio profile R(x) = x/(S-x)")
    cu.add_argument("--S", type=float, default=1.0)
    cu.add_argument("--samples", type=int, default=101)
    cu.add_argument("--out", choices=("json", "csv"), default="json")

    sw = sub.add_parser("sweep", help="drag one customer around the boundary")
    sw.add_argument("scenario", help="scenario JSON file or case spec")
    sw.add_argument("--customer", type=int, required=True)
    sw.add_argument("--direction", choices=("ccw", "cw"), default="ccw")
    sw.add_argument("--step", type=float, default=0.01)
    sw.add_argument("--out", choices=("json", "csv"), default="json")

    sv = sub.add_parser("serve", help="start the interactive playground service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.add_argument("--session-ttl", type=float, default=3600.0)
    sv.add_argument("--debug", action="store_true", help="enable the audit endpoint")

    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args.scenario)
    if args.metric:
        scenario = replace(scenario, metric=Metric(args.metric))
    record = engine.run_scenario(scenario)
    optimal = opt.solve_matching(scenario)
    if args.out == "csv":
        _emit(run_csv(scenario, record, optimal))
    else:
        _emit(dumps(run_report(scenario, record, optimal)))
    return 0


def _cmd_claims(args: argparse.Namespace) -> int:
    rows = claims.full_ledger(n_min=args.n_min, n_max=args.n_max, d=args.d, S=args.S)
    if args.out == "csv":
        _emit(claims_csv(rows))
    else:
        _emit(dumps(claims_report(rows)))
    if args.strict and claims.any_failure(rows):
        return 3
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    scenario = parse_case_spec(args.case_spec)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("POLYASSIGN_SEED", "0"))
    config = SearchConfig(
        shape=scenario.shape,
        metric=scenario.metric,
        capacities=scenario.capacities,
        customers=args.m if args.m is not None else scenario.customer_count,
        resolution=args.resolution,
        restarts=args.restarts,
        max_rounds=args.max_rounds,
        seed=seed,
    )
    result = search.maximize_ratio(config)
    _emit(dumps(search_report(config, result)))
    return 0


def _cmd_curve(args: argparse.Namespace) -> int:
    points = search.ratio_curve(S=args.S, samples=args.samples)
    if args.out == "csv":
        _emit(curve_csv(points))
    else:
        _emit(dumps(curve_report(args.S, points)))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args.scenario)
    result = search.sweep_customer(scenario, args.customer, args.direction, args.step)
    if args.out == "csv":
        _emit(sweep_csv(result))
    else:
        _emit(dumps(sweep_report(scenario, result, args.step)))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    static_dir = os.path.join(os.path.dirname(__file__), "static")
    app = create_app(session_ttl=args.session_ttl, static_dir=static_dir, debug=args.debug)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "claims": _cmd_claims,
    "search": _cmd_search,
    "curve": _cmd_curve,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; keep its codes.
        return int(exc.code) if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
