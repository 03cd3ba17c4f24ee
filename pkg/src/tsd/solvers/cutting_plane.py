"""Cutting-plane loop: transitivity constraints added only when violated.

Start from the relaxation with violation constraints only. Each round solves
the current integer model, reads the resulting tournament, and looks for
directed triangles; a tournament is acyclic exactly when it has no directed
triangle, so an empty search certifies the assignment orders the locations
and the loop stops at a provably optimal solution. Otherwise the violated
triangle constraints (at most k per round) are appended and the round
repeats. Every round adds at least one fresh constraint, so the loop
terminates.
"""

import time
from dataclasses import replace
from itertools import combinations
from typing import List, Optional, Tuple

from ..errors import TimeLimitExceeded
from ..locgraph import RestrictionMultiset
from .branchbound import bb_solve
from .ilp import (Assignment, build_ilp_naive, order_from_assignment,
                  transitivity_constraint)
from .result import SolveResult


def find_triangle_violations(a: Assignment, k: Optional[int] = None) -> List[Tuple[str, str, str]]:
    """Up to k directed triangles of the assignment's tournament.

    Triples are scanned in lexicographic order; each reported triangle
    (u, v, w) reads u -> v -> w -> u. Triples with a missing pair variable
    (partial tournaments) are skipped.
    """
    verts = a.vertices()
    xs = a.xs
    out: List[Tuple[str, str, str]] = []
    for p, q, r in combinations(verts, 3):
        if (p, q) not in xs or (q, r) not in xs or (p, r) not in xs:
            continue
        d_pq, d_qr, d_pr = xs[(p, q)], xs[(q, r)], xs[(p, r)]
        if d_pq == 1 and d_qr == 1 and d_pr == 0:
            out.append((p, q, r))
        elif d_pq == 0 and d_qr == 0 and d_pr == 1:
            out.append((p, r, q))
        if k is not None and len(out) >= k:
            break
    return out


def solve_cutting_plane(rm: RestrictionMultiset, backend=bb_solve, k: int = 100,
                        time_limit: Optional[float] = None) -> SolveResult:
    start = time.monotonic()
    base = build_ilp_naive(rm, include_transitivity=False)
    model = base
    present = set(base.constraints)
    cuts = []
    rounds = 0
    cuts_added = 0
    nodes_total = 0
    while True:
        rounds += 1
        remaining = None
        if time_limit is not None:
            remaining = time_limit - (time.monotonic() - start)
        a = backend(model, remaining)
        nodes_total += a.nodes
        if not a.optimal:
            raise TimeLimitExceeded(
                "cutting-plane round %d ran out of time" % rounds)
        triangles = find_triangle_violations(a, k)
        if not triangles:
            order = order_from_assignment(a)
            stats = {
                "wall_time_s": time.monotonic() - start,
                "rounds": rounds,
                "cuts_added": cuts_added,
                "branch_nodes": nodes_total,
            }
            return SolveResult(order, a.objective, "cutplane", stats)
        fresh = []
        for u, v, w in triangles:
            # the cycle violates the canonical constraint whose middle is v
            p, r = (u, w) if u < w else (w, u)
            c = transitivity_constraint(p, v, r)
            if c not in present:
                present.add(c)
                fresh.append(c)
        assert fresh, "separation found a triangle already cut"
        cuts.extend(fresh)
        cuts_added += len(fresh)
        model = replace(base, constraints=base.constraints + tuple(cuts))
