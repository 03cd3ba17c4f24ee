"""0/1 linear models for turn minimization, plus LP-format export.

Variables: one x variable per unordered location pair {p, q}, stored under
the lexicographic key (p, q); the reverse orientation is the substitution
x_qp = 1 - x_pq, so no asymmetry constraints are needed. One b variable per
distinct restriction, weighted by its multiplicity in the objective.

The naive model carries one transitivity constraint per (outer pair, middle)
combination; the tree-decomposition model only carries those whose three
locations share a bag, which keeps the constraint count near-linear for
small-treewidth location graphs.
"""

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import CyclicOrderError, DecompositionError
from ..locgraph import LocationOrder, Pair, RestrictionMultiset, Triple, pair_key
from ..treedecomp import TreeDecomposition

Var = Tuple
# ("x", p, q) with p < q, or ("b", i)


@dataclass(frozen=True)
class Constraint:
    """sum(coef * var) >= rhs over 0/1 variables."""

    coeffs: Tuple[Tuple[Var, int], ...]
    rhs: int
    tag: str = ""


@dataclass(frozen=True)
class ILPModel:
    pair_vars: Tuple[Pair, ...]
    restrictions: Tuple[Tuple[Triple, int], ...]
    constraints: Tuple[Constraint, ...]
    ground_set: Tuple[str, ...]
    kind: str

    def transitivity_constraints(self) -> List[Constraint]:
        return [c for c in self.constraints if c.tag == "transitivity"]

    def violation_constraints(self) -> List[Constraint]:
        return [c for c in self.constraints if c.tag == "violation"]


@dataclass
class Assignment:
    """Complete values of the pair variables; b values are implied.

    xs maps each canonical pair to 0/1 with xs[(p, q)] = 1 meaning p
    precedes q (is drawn above). The induced digraph on the universe is a
    tournament when every pair is present, a partial tournament otherwise.
    """

    xs: Dict[Pair, int]
    objective: int = 0
    optimal: bool = True
    bs: Tuple[int, ...] = ()
    nodes: int = 0
    universe: Tuple[str, ...] = ()

    def vertices(self) -> List[str]:
        if self.universe:
            return sorted(self.universe)
        seen = set()
        for p, q in self.xs:
            seen.add(p)
            seen.add(q)
        return sorted(seen)


def _x_term(p: str, q: str) -> Tuple[Var, int, int]:
    """Canonical (var, sign, shift) with x_pq = shift + sign * var."""
    if p < q:
        return ("x", p, q), 1, 0
    return ("x", q, p), -1, 1


def _ge(x_terms: Iterable[Tuple[str, str, int]], rhs: int, tag: str,
        b_index: Optional[int] = None) -> Constraint:
    coeffs: Dict[Var, int] = {}
    shift = 0
    for p, q, sign in x_terms:
        var, s, c = _x_term(p, q)
        coeffs[var] = coeffs.get(var, 0) + sign * s
        shift += sign * c
    if b_index is not None:
        coeffs[("b", b_index)] = coeffs.get(("b", b_index), 0) + 1
    items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
    return Constraint(items, rhs - shift, tag)


def transitivity_constraint(p: str, q: str, r: str) -> Constraint:
    """x_pr >= x_pq + x_qr - 1 for the ordered reading p, q, r."""
    return _ge([(p, r, 1), (p, q, -1), (q, r, -1)], -1, "transitivity")


def _violation_constraints(i: int, p: str, q: str, r: str) -> List[Constraint]:
    # b_i >= x_qp + x_qr - 1 (q above both) and b_i >= x_pq + x_rq - 1
    return [
        _ge([(q, p, -1), (q, r, -1)], -1, "violation", b_index=i),
        _ge([(p, q, -1), (r, q, -1)], -1, "violation", b_index=i),
    ]


def build_ilp_naive(rm: RestrictionMultiset, include_transitivity: bool = True) -> ILPModel:
    """Model with all C(n,2)*(n-2) transitivity constraints.

    include_transitivity=False yields the relaxation the cutting-plane loop
    starts from (violation constraints only).
    """
    ground = tuple(sorted(rm.ground_set))
    pair_vars = tuple(combinations(ground, 2))
    constraints: List[Constraint] = []
    if include_transitivity:
        for p, r in pair_vars:
            for q in ground:
                if q != p and q != r:
                    constraints.append(transitivity_constraint(p, q, r))
    restrictions = tuple(rm.items())
    for i, ((p, q, r), _) in enumerate(restrictions):
        constraints.extend(_violation_constraints(i, p, q, r))
    return ILPModel(pair_vars, restrictions, tuple(constraints), ground, "naive")


def build_ilp_tw(rm: RestrictionMultiset, td: TreeDecomposition) -> ILPModel:
    """Model with pair variables and transitivity restricted to bags.

    Every restriction's two inner pairs are location-graph edges and hence
    appear in some bag, so the violation constraints are always expressible.
    """
    ground = tuple(sorted(rm.ground_set))
    pairs = set()
    triples = set()
    for bag in td.bags.values():
        members = sorted(bag)
        pairs.update(combinations(members, 2))
        for p, r in combinations(members, 2):
            for q in members:
                if q != p and q != r:
                    triples.add((p, q, r))
    missing = [v for v in ground if not any(v in bag for bag in td.bags.values())]
    if missing:
        raise DecompositionError(
            "decomposition does not cover location %r" % (missing[0],))
    constraints = [transitivity_constraint(p, q, r) for p, q, r in sorted(triples)]
    restrictions = tuple(rm.items())
    for i, ((p, q, r), _) in enumerate(restrictions):
        for key in (pair_key(p, q), pair_key(q, r)):
            if key not in pairs:
                raise DecompositionError(
                    "restriction pair %r not covered by any bag; decomposition "
                    "does not match the location graph" % (key,))
        constraints.extend(_violation_constraints(i, p, q, r))
    return ILPModel(tuple(sorted(pairs)), restrictions, tuple(constraints), ground, "tw")


def order_from_assignment(a: Assignment) -> LocationOrder:
    """Topological order of the (partial) tournament, source at level Y.

    Complete acyclic tournaments have a unique topological order; partial
    ones are completed deterministically by breaking ties lexicographically.
    """
    verts = a.vertices()
    out: Dict[str, set] = {v: set() for v in verts}
    indeg: Dict[str, int] = {v: 0 for v in verts}
    for (p, q), val in a.xs.items():
        u, w = (p, q) if val == 1 else (q, p)
        if w not in out[u]:
            out[u].add(w)
            indeg[w] += 1
    heap = [v for v in verts if indeg[v] == 0]
    heapq.heapify(heap)
    seq: List[str] = []
    while heap:
        v = heapq.heappop(heap)
        seq.append(v)
        for w in sorted(out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(seq) != len(verts):
        rest = [v for v in verts if indeg[v] > 0]
        raise CyclicOrderError("assignment tournament contains a cycle", rest)
    return LocationOrder.from_sequence(seq)


def assignment_from_sequence(model: ILPModel, seq: List[str]) -> Assignment:
    """Assignment induced by a top-to-bottom sequence, restricted to the
    model's pair variables; objective filled in from the restrictions."""
    pos = {v: i for i, v in enumerate(seq)}
    xs = {(p, q): 1 if pos[p] < pos[q] else 0 for p, q in model.pair_vars}
    obj = sum(m for (p, q, r), m in model.restrictions
              if (pos[q] < pos[p]) == (pos[q] < pos[r]))
    bs = tuple(1 if (pos[q] < pos[p]) == (pos[q] < pos[r]) else 0
               for (p, q, r), _ in model.restrictions)
    return Assignment(xs, obj, True, bs, 0, model.ground_set)


def _format_terms(coeffs) -> str:
    parts: List[str] = []
    for var, coef in coeffs:
        name = "x_%s_%s" % var[1:] if var[0] == "x" else "b_%d" % var[1]
        mag = "" if abs(coef) == 1 else "%d " % abs(coef)
        if not parts:
            sign = "-" if coef < 0 else ""
            parts.append("%s%s%s" % (sign, mag, name))
        else:
            sign = "-" if coef < 0 else "+"
            parts.append("%s %s%s" % (sign, mag, name))
    return " ".join(parts)


def export_lp(m: ILPModel) -> str:
    """Textual LP document: Minimize / Subject To / Binary / End.

    Output is byte-deterministic for a fixed model.
    """
    lines = ["Minimize"]
    obj_terms = []
    for i, (_, mult) in enumerate(m.restrictions):
        mag = "" if mult == 1 else "%d " % mult
        obj_terms.append("%s%s" % (mag, "b_%d" % i))
    lines.append(" obj: " + (" + ".join(obj_terms) if obj_terms else "0"))
    lines.append("Subject To")
    for k, c in enumerate(m.constraints):
        lines.append(" c%d: %s >= %d" % (k, _format_terms(c.coeffs), c.rhs))
    lines.append("Binary")
    for p, q in m.pair_vars:
        lines.append(" x_%s_%s" % (p, q))
    for i in range(len(m.restrictions)):
        lines.append(" b_%d" % i)
    lines.append("End")
    return "\n".join(lines) + "\n"
