"""End-to-end solve: optional contraction, one exact method, lift back."""

import time
from typing import Optional

from ..errors import CrossCheckError, TimeLimitExceeded
from ..locgraph import (build_augmented, build_location_graph, count_turns,
                        extract_restrictions)
from ..model import EventGraph, normalize, require_valid
from ..reduction import apply_rule_exhaustively, lift_order
from ..treedecomp import make_nice, min_degree_decomposition
from .branchbound import bb_solve
from .brute import solve_brute_force
from .cutting_plane import solve_cutting_plane
from .dp import solve_dp
from .ilp import build_ilp_naive, build_ilp_tw, order_from_assignment
from .result import SolveResult

METHODS = ("brute", "dp", "ilp", "ilp-tw", "cutplane")


def solve(g: EventGraph, method: str = "dp", reduce: bool = True,
          reduce_mode: str = "chain", time_limit: Optional[float] = None,
          cap: int = 10, cuts_per_round: int = 100) -> SolveResult:
    """Solve the instance end to end and return a result on its original
    locations.

    With reduce set (the default) the contraction rule shrinks the instance
    first and the witness order is lifted back afterwards; the theorem
    behind lift_order guarantees the turn count carries over unchanged.
    brute and dp ignore time_limit; the other methods return a flagged
    incumbent inside a TimeLimitExceeded when the wall clock runs out.
    """
    if method not in METHODS:
        raise ValueError("unknown method %r; expected one of %s"
                         % (method, "|".join(METHODS)))
    start = time.monotonic()
    require_valid(g)
    full = normalize(g)
    report = None
    inst = full
    if reduce:
        inst, report = apply_rule_exhaustively(full, reduce_mode)

    hit_limit = False
    if method == "brute":
        result = solve_brute_force(inst, cap=cap)
    elif method == "dp":
        aug = build_augmented(inst)
        td = min_degree_decomposition(aug.vertices, sorted(aug.edge_set()))
        result = solve_dp(inst, make_nice(td))
    elif method == "cutplane":
        result = solve_cutting_plane(extract_restrictions(inst), bb_solve,
                                     cuts_per_round, time_limit)
    else:
        rm = extract_restrictions(inst)
        if method == "ilp":
            model = build_ilp_naive(rm)
        else:
            loc = build_location_graph(inst)
            td = min_degree_decomposition(loc.vertices, loc.edges())
            model = build_ilp_tw(rm, td)
        a = bb_solve(model, time_limit)
        hit_limit = not a.optimal
        result = SolveResult(order_from_assignment(a), a.objective, method,
                             {"branch_nodes": a.nodes, "optimal": a.optimal})

    order = result.order
    if report is not None and report.steps:
        order = lift_order(report, order)
    actual = count_turns(full, order)
    if not hit_limit and actual != result.turns:
        raise CrossCheckError(
            "method %s reported %d turns but its order draws %d"
            % (method, result.turns, actual))

    stats = dict(result.stats)
    stats.update({
        "wall_time_s": time.monotonic() - start,
        "locations_before": len(full.locations),
        "locations_after": len(inst.locations),
        "reduction_steps": len(report.steps) if report is not None else 0,
        "reduce_mode": reduce_mode if reduce else None,
    })
    final = SolveResult(order, result.turns, method, stats)
    if hit_limit:
        raise TimeLimitExceeded("solver hit the %.3f s time limit" % time_limit,
                                partial=final)
    return final
