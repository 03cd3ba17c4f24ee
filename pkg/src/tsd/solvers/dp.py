"""Dynamic program over a nice tree decomposition of the augmented graph.

The table D[t, pi] holds the minimum turn count of a drawing of the
locations seen below node t that places the bag of t in the order pi
(earlier in pi = drawn higher). The augmentation makes every potential turn
a triangle, so each one lies inside some bag and is charged exactly once: at
an introduce node when the last of its three locations appears, with join
nodes subtracting the doubly counted bag-internal turns.

pi ranges over all |bag|! orders, so each table has at most (width+1)!
entries; the instrumented maximum is reported in the result stats.
"""

import time
from math import factorial
from typing import Dict, List, Optional, Tuple

from ..errors import DecompositionError
from ..locgraph import build_augmented, extract_restrictions, pair_key
from ..model import EventGraph
from ..treedecomp import NiceTreeDecomposition, check_nice, validate_decomposition
from .ilp import Assignment, order_from_assignment
from .result import SolveResult


def _violated(pos: Dict[str, int], p: str, q: str, r: str) -> bool:
    # q strictly above both or strictly below both outer locations
    return (pos[q] < pos[p]) == (pos[q] < pos[r])


def solve_dp(g: EventGraph, ntd: NiceTreeDecomposition) -> SolveResult:
    """Minimum turns plus a witness order recovered by backtracking."""
    start = time.monotonic()
    aug = build_augmented(g)
    problems = check_nice(ntd)
    if problems:
        raise DecompositionError("malformed nice decomposition: %s" % problems[0])
    report = validate_decomposition(list(aug.vertices), sorted(aug.edge_set()),
                                    ntd.as_decomposition())
    if not report.valid:
        raise DecompositionError(
            "decomposition does not cover the augmented location graph", report)
    rm = extract_restrictions(g)
    triples = rm.items()

    nodes = ntd.nodes
    bag_triples: Dict[int, list] = {}
    for nid, node in nodes.items():
        bag_triples[nid] = [((p, q, r), m) for (p, q, r), m in triples
                            if p in node.bag and q in node.bag and r in node.bag]

    def charge(nid: int, pi: Tuple[str, ...], vertex: Optional[str]) -> int:
        """Turns inside the bag of nid under pi; vertex None counts all of
        them, otherwise only those involving the vertex."""
        pos = {v: k for k, v in enumerate(pi)}
        total = 0
        for (p, q, r), mult in bag_triples[nid]:
            if vertex is not None and vertex not in (p, q, r):
                continue
            if _violated(pos, p, q, r):
                total += mult
        return total

    tables: Dict[int, Dict[Tuple[str, ...], int]] = {}
    back: Dict[int, Dict[Tuple[str, ...], Tuple[str, ...]]] = {}
    table_max = 0
    for nid in ntd.topo_order():
        node = nodes[nid]
        if node.kind == "leaf":
            tables[nid] = {(): 0}
        elif node.kind == "introduce":
            child = tables[node.children[0]]
            cur: Dict[Tuple[str, ...], int] = {}
            for pi_c, cost in child.items():
                for i in range(len(pi_c) + 1):
                    pi = pi_c[:i] + (node.vertex,) + pi_c[i:]
                    cur[pi] = cost + charge(nid, pi, node.vertex)
            tables[nid] = cur
        elif node.kind == "forget":
            child = tables[node.children[0]]
            cur = {}
            choice: Dict[Tuple[str, ...], Tuple[str, ...]] = {}
            for pi_c in sorted(child):
                cost = child[pi_c]
                pi = tuple(v for v in pi_c if v != node.vertex)
                if pi not in cur or cost < cur[pi]:
                    cur[pi] = cost
                    choice[pi] = pi_c
            tables[nid] = cur
            back[nid] = choice
        else:  # join
            left = tables[node.children[0]]
            right = tables[node.children[1]]
            tables[nid] = {pi: left[pi] + right[pi] - charge(nid, pi, None)
                           for pi in left}
        table_max = max(table_max, len(tables[nid]))

    best = tables[ntd.root][()]

    # walk back down the chosen entries, collecting every in-bag orientation
    xs: Dict[Tuple[str, str], int] = {}
    charges_introduce = 0
    charges_join = 0
    stack: List[Tuple[int, Tuple[str, ...]]] = [(ntd.root, ())]
    while stack:
        nid, pi = stack.pop()
        node = nodes[nid]
        for i, p in enumerate(pi):
            for q in pi[i + 1:]:
                key = pair_key(p, q)
                val = 1 if key == (p, q) else 0
                assert xs.setdefault(key, val) == val, "bag orders disagree"
        if node.kind == "introduce":
            charges_introduce += charge(nid, pi, node.vertex)
            stack.append((node.children[0],
                          tuple(v for v in pi if v != node.vertex)))
        elif node.kind == "forget":
            stack.append((node.children[0], back[nid][pi]))
        elif node.kind == "join":
            charges_join += charge(nid, pi, None)
            stack.append((node.children[0], pi))
            stack.append((node.children[1], pi))

    order = order_from_assignment(Assignment(xs, best, True, (), 0, aug.vertices))
    stats = {
        "wall_time_s": time.monotonic() - start,
        "table_max": table_max,
        "table_bound": factorial(ntd.width + 1),
        "charges_introduce": charges_introduce,
        "charges_join_correction": charges_join,
    }
    return SolveResult(order, best, "dp", stats)
