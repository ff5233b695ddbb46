"""Orienteering with per-category visit caps: best-first search and friends."""

from .closure import DisconnectedError, DistanceMatrix
from .heuristic import Heuristic, PotentialBreakdown, extra, potential
from .model import (
    Feasibility,
    InfeasibleQueryError,
    Instance,
    Itinerary,
    Poi,
    Problem,
    Query,
    SchemaError,
    TravelGraph,
    check_feasible,
    itinerary_cost,
    itinerary_score,
)
from .oracle import OracleTooLarge, oracle_solve
from .pathing import OrderedPath, best_order, metric_closure
from .search import (
    PartialSolution,
    PriorityDeque,
    SearchConfig,
    SearchOutcome,
    SearchState,
    extend_greedily,
    greedy_baseline,
    resume,
    solve,
    worst_case_nodes,
)

__version__ = "0.1.0"

__all__ = [
    "DisconnectedError",
    "DistanceMatrix",
    "Feasibility",
    "Heuristic",
    "InfeasibleQueryError",
    "Instance",
    "Itinerary",
    "OracleTooLarge",
    "OrderedPath",
    "PartialSolution",
    "Poi",
    "PotentialBreakdown",
    "PriorityDeque",
    "Problem",
    "Query",
    "SchemaError",
    "SearchConfig",
    "SearchOutcome",
    "SearchState",
    "TravelGraph",
    "best_order",
    "check_feasible",
    "extend_greedily",
    "extra",
    "greedy_baseline",
    "itinerary_cost",
    "itinerary_score",
    "metric_closure",
    "oracle_solve",
    "potential",
    "resume",
    "solve",
    "worst_case_nodes",
]
