"""Capacitated online facility assignment on the boundaries of regular shapes.

Facilities sit on the vertices of a triangle, rectangle, regular polygon or
facility ring; customers arrive one at a time on the boundary and a greedy
rule assigns each to the nearest facility with residual capacity. The
package pairs that engine with two independent exact offline optima, a
library of adversarial arrival constructions with their claimed costs, a
verification ledger, and a worst-case ratio search. ``io_cli`` adds the
file format and command line; ``service`` the interactive HTTP playground.
"""

from .claims import ClaimVerdict, bound_row, evaluate, full_ledger
from .engine import (
    Assignment,
    AssignmentRecord,
    Facility,
    facilities_for,
    greedy_step,
    run_greedy,
    run_scenario,
)
from .errors import (
    BoundaryRangeError,
    CapacityExhaustedError,
    NudgeError,
    OracleDisagreementError,
    PolyassignError,
    ScenarioError,
    ScenarioFormatError,
    TooManyCustomersError,
    UnsupportedEmbeddingError,
    UnsupportedMetricError,
)
from .geometry import (
    EquilateralTriangle,
    FacilityRing,
    GapProfile,
    Metric,
    Rectangle,
    RegularPolygon,
    Shape,
    check_point,
    distance,
    embed,
    make_distance,
    perimeter,
    vertex_positions,
)
from .opt import (
    OptResult,
    analytic_opt_bound,
    cost_ratio,
    solve_bruteforce,
    solve_matching,
    verify_oracles,
)
from .scenarios import (
    DEFAULT_CASE_SPECS,
    Case,
    Claim,
    Scenario,
    build,
    nudge,
    with_arrivals,
)
from .search import (
    CurvePoint,
    SearchConfig,
    SearchResult,
    SweepResult,
    Switch,
    SweepSample,
    maximize_ratio,
    ratio_curve,
    sweep_customer,
)

__version__ = "0.1.0"
