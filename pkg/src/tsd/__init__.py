"""Turn-minimal time-space diagrams for train event graphs."""

__version__ = "0.1.0"

from .model import (
    Event,
    EventGraph,
    TrainLine,
    ValidationReport,
    Violation,
    event_graph_from_obj,
    event_graph_to_obj,
    is_normalized,
    normalize,
    parse_event_graph,
    serialize_event_graph,
    validate,
)
from .locgraph import (
    AugmentedLocationGraph,
    LocationGraph,
    LocationOrder,
    RestrictionMultiset,
    build_augmented,
    build_location_graph,
    count_crossings,
    count_turns,
    extract_restrictions,
    instance_stats,
    violated_restrictions,
)
from .reduction import ContractionReport, apply_rule_exhaustively, lift_order
from .treedecomp import (
    NiceTreeDecomposition,
    TreeDecomposition,
    make_nice,
    min_degree_decomposition,
    validate_decomposition,
)
from .solvers import METHODS, SolveResult, solve
from .generators import (
    BetweennessInstance,
    from_betweenness,
    from_maxcut,
    gen_corridor,
    gen_random_event_graph,
    gen_satisfiable_betweenness,
    generate,
)
from .render import RenderStyle, render_svg
from .bench import BenchRecord, bench_csv, bench_rows

__all__ = [
    "Event", "EventGraph", "TrainLine", "ValidationReport", "Violation",
    "event_graph_from_obj", "event_graph_to_obj", "is_normalized", "normalize",
    "parse_event_graph", "serialize_event_graph", "validate",
    "AugmentedLocationGraph", "LocationGraph", "LocationOrder", "RestrictionMultiset",
    "build_augmented", "build_location_graph", "count_crossings", "count_turns",
    "extract_restrictions", "instance_stats", "violated_restrictions",
    "ContractionReport", "apply_rule_exhaustively", "lift_order",
    "NiceTreeDecomposition", "TreeDecomposition", "make_nice",
    "min_degree_decomposition", "validate_decomposition",
    "METHODS", "SolveResult", "solve",
    "BetweennessInstance", "from_betweenness", "from_maxcut", "gen_corridor",
    "gen_random_event_graph", "gen_satisfiable_betweenness", "generate",
    "RenderStyle", "render_svg",
    "BenchRecord", "bench_csv", "bench_rows",
]
