"""Depth-first 0/1 branch and bound over the pair variables of an ILPModel.

Only the x variables are branched; each b variable is implied, because for a
fixed x the violation constraints force b_i's cheapest value outright. The
lower bound is the multiplicity-weighted sum of restrictions that are already
certainly violated, and unit propagation over the model's transitivity
constraints prunes orientations that close a directed triangle.

Wall-clock time limits are checked every 4096 branch nodes; running out of
time returns the best incumbent flagged non-optimal, never a silent wrong
answer.
"""

import time
from typing import Dict, List, Optional, Tuple

from ..errors import InfeasibleError, TimeLimitExceeded
from .ilp import Assignment, ILPModel

TIME_CHECK_INTERVAL = 4096


def _split_constraints(m: ILPModel, vidx: Dict):
    """Hard (pure x) constraints and per-b groups of violation constraints."""
    hard = []
    soft: List[List[Tuple[tuple, int]]] = [[] for _ in m.restrictions]
    for c in m.constraints:
        b_terms = [(var, coef) for var, coef in c.coeffs if var[0] == "b"]
        x_terms = tuple((vidx[var[1:]], coef) for var, coef in c.coeffs if var[0] == "x")
        if not b_terms:
            hard.append((x_terms, c.rhs))
            continue
        if len(b_terms) != 1 or b_terms[0][1] != 1:
            raise ValueError("unsupported constraint shape: expected a single "
                             "b variable with coefficient 1")
        i = b_terms[0][0][1]
        if not 0 <= i < len(m.restrictions):
            raise ValueError("b_%d has no matching restriction" % i)
        soft[i].append((x_terms, c.rhs))
    return hard, soft


def _max_lhs(terms, rhs, assign) -> int:
    mx = 0
    for vi, a in terms:
        val = assign[vi]
        if val >= 0:
            mx += a * val
        elif a > 0:
            mx += a
    return mx


def _greedy_sequence(ground, restrictions) -> List[str]:
    """Insert locations one by one at the cheapest position."""
    seq: List[str] = []
    for v in sorted(ground):
        best_pos, best_cost = 0, None
        for pos in range(len(seq) + 1):
            cand = seq[:pos] + [v] + seq[pos:]
            at = {u: k for k, u in enumerate(cand)}
            cost = 0
            for (p, q, r), mult in restrictions:
                if p in at and q in at and r in at:
                    if (at[q] < at[p]) == (at[q] < at[r]):
                        cost += mult
            if best_cost is None or cost < best_cost:
                best_pos, best_cost = pos, cost
        seq.insert(best_pos, v)
    return seq


class _Search:
    def __init__(self, m: ILPModel, time_limit: Optional[float]):
        self.m = m
        self.vars = list(m.pair_vars)
        self.vidx = {pair: i for i, pair in enumerate(self.vars)}
        self.hard, self.soft = _split_constraints(m, self.vidx)
        self.weights = [mult for _, mult in m.restrictions]
        self.watch: List[List[int]] = [[] for _ in self.vars]
        for ci, (terms, _) in enumerate(self.hard):
            for vi, _ in terms:
                self.watch[vi].append(ci)
        self.assign = [-1] * len(self.vars)
        self.time_limit = time_limit
        self.start = time.monotonic()
        self.nodes = 0
        self.timed_out = False
        self.best: Optional[int] = None
        self.best_x: Optional[List[int]] = None

    # -- implied b values ---------------------------------------------------

    def _group_need(self, i: int) -> int:
        """Largest b_i value some violation constraint still forces, given
        the most favorable completion of the unassigned variables."""
        need = 0
        for terms, rhs in self.soft[i]:
            need = max(need, rhs - _max_lhs(terms, rhs, self.assign))
        return need

    def lower_bound(self) -> Optional[int]:
        lb = 0
        for i, w in enumerate(self.weights):
            need = self._group_need(i)
            if need >= 2:
                return None  # not even b_i = 1 can satisfy the group
            if need == 1:
                lb += w
        return lb

    # -- propagation ---------------------------------------------------------

    def _feasible_seed(self, values: List[int]) -> Optional[int]:
        for terms, rhs in self.hard:
            if sum(a * values[vi] for vi, a in terms) < rhs:
                return None
        obj = 0
        saved = self.assign
        self.assign = values
        try:
            for i, w in enumerate(self.weights):
                need = self._group_need(i)
                if need >= 2:
                    return None
                obj += w * need
        finally:
            self.assign = saved
        return obj

    def try_assign(self, v: int, val: int, trail: List[int]) -> bool:
        queue = [(v, val)]
        while queue:
            u, uv = queue.pop()
            cur = self.assign[u]
            if cur >= 0:
                if cur != uv:
                    return False
                continue
            self.assign[u] = uv
            trail.append(u)
            for ci in self.watch[u]:
                if not self._check_constraint(ci, queue):
                    return False
        return True

    def _check_constraint(self, ci: int, queue) -> bool:
        terms, rhs = self.hard[ci]
        mx = _max_lhs(terms, rhs, self.assign)
        if mx < rhs:
            return False
        for wi, a in terms:
            if self.assign[wi] < 0:
                base = mx - (a if a > 0 else 0)
                if base + a < rhs:
                    queue.append((wi, 0))
                elif base < rhs:
                    queue.append((wi, 1))
        return True

    def propagate_roots(self, trail: List[int]) -> bool:
        queue: List[Tuple[int, int]] = []
        for ci in range(len(self.hard)):
            if not self._check_constraint(ci, queue):
                return False
        while queue:
            u, uv = queue.pop()
            if not self.try_assign(u, uv, trail):
                return False
        return True

    def undo(self, trail: List[int]) -> None:
        for u in trail:
            self.assign[u] = -1

    # -- search --------------------------------------------------------------

    def out_of_time(self) -> bool:
        if self.time_limit is None:
            return False
        if time.monotonic() - self.start >= self.time_limit:
            self.timed_out = True
        return self.timed_out

    def next_unassigned(self) -> Optional[int]:
        for i, v in enumerate(self.assign):
            if v < 0:
                return i
        return None

    def run(self, value_hint: List[int]) -> None:
        root_trail: List[int] = []
        if not self.propagate_roots(root_trail):
            raise InfeasibleError("constraints admit no 0/1 assignment")
        if self.time_limit is not None and self.time_limit <= 0:
            self.timed_out = True
            return
        first = self.next_unassigned()
        if first is None:
            lb = self.lower_bound()
            if lb is not None and (self.best is None or lb < self.best):
                self.best, self.best_x = lb, list(self.assign)
            return
        frames: List[list] = [[first, 0, None]]
        while frames:
            frame = frames[-1]
            v, tried, trail = frame
            if trail is not None:
                self.undo(trail)
                frame[2] = None
            if tried >= 2:
                frames.pop()
                continue
            frame[1] += 1
            self.nodes += 1
            if self.nodes % TIME_CHECK_INTERVAL == 0 and self.out_of_time():
                return
            val = value_hint[v] if tried == 0 else 1 - value_hint[v]
            trail = []
            ok = self.try_assign(v, val, trail)
            lb = self.lower_bound() if ok else None
            if not ok or lb is None or (self.best is not None and lb >= self.best):
                self.undo(trail)
                continue
            nxt = self.next_unassigned()
            if nxt is None:
                if self.best is None or lb < self.best:
                    self.best, self.best_x = lb, list(self.assign)
                self.undo(trail)
                continue
            frame[2] = trail
            frames.append([nxt, 0, None])


def bb_solve(m: ILPModel, time_limit: Optional[float] = None) -> Assignment:
    """Provably optimal assignment, or the incumbent flagged non-optimal
    when the wall-clock limit runs out first."""
    search = _Search(m, time_limit)
    seeds = [sorted(m.ground_set)]
    if m.restrictions:
        seeds.append(_greedy_sequence(m.ground_set, m.restrictions))
    incumbent = None
    for seq in seeds:
        pos = {u: k for k, u in enumerate(seq)}
        values = [1 if pos[p] < pos[q] else 0 for p, q in m.pair_vars]
        obj = search._feasible_seed(values)
        if obj is not None and (incumbent is None or obj < incumbent[0]):
            incumbent = (obj, values)
    hint = incumbent[1] if incumbent else [1] * len(m.pair_vars)
    if incumbent:
        search.best, search.best_x = incumbent[0], list(incumbent[1])
    search.run(hint)
    if search.best_x is None:
        if search.timed_out:
            raise TimeLimitExceeded("time limit hit before any feasible assignment")
        raise InfeasibleError("constraints admit no 0/1 assignment")
    xs = {pair: search.best_x[i] for i, pair in enumerate(m.pair_vars)}
    saved = search.assign
    search.assign = search.best_x
    bs = tuple(min(1, search._group_need(i)) for i in range(len(search.weights)))
    search.assign = saved
    return Assignment(xs, search.best, not search.timed_out, bs,
                      search.nodes, m.ground_set)
