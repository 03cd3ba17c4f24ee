"""Location graphs, restriction multisets, location orders, turn counting.

Turn minimization is an ordering problem over locations. This module derives
the combinatorial objects that the solvers work on:

  * the weighted location graph (edge weight = number of train arcs between
    a pair of locations),
  * its augmentation by the outer pair of every consecutive location triple,
  * the restriction multiset (one ordered triple per consecutive location
    triple of a train, middle element second),

and the two diagram quality measures, turn count and crossing count.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .errors import NotNormalizedError, OrderError
from .model import EventGraph, is_normalized

Pair = Tuple[str, str]
Triple = Tuple[str, str, str]


def pair_key(a: str, b: str) -> Pair:
    """Canonical form of an unordered location pair."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class LocationGraph:
    """Undirected weighted graph on locations.

    vertices keeps the canonical (first-appearance) order; weights maps
    canonical pairs to positive arc counts.
    """

    vertices: Tuple[str, ...]
    weights: Dict[Pair, int]

    def edges(self) -> List[Pair]:
        return sorted(self.weights)

    def adjacency(self) -> Dict[str, set]:
        adj: Dict[str, set] = {v: set() for v in self.vertices}
        for a, b in self.weights:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def total_weight(self) -> int:
        return sum(self.weights.values())


@dataclass(frozen=True)
class AugmentedLocationGraph:
    """Location graph plus the outer pair of every consecutive triple.

    extra_edges holds every such outer pair, whether or not it already occurs
    as a base edge; edge_set() is the union used for decompositions.
    """

    base: LocationGraph
    extra_edges: FrozenSet[Pair]

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.base.vertices

    def edge_set(self) -> FrozenSet[Pair]:
        return frozenset(self.base.weights) | self.extra_edges


@dataclass(frozen=True)
class RestrictionMultiset:
    """Ordered location triples with multiplicities.

    ground_set keeps the canonical location order of the source graph.
    counts maps (p, q, r) to the number of consecutive event triples whose
    locations read p, q, r; triples with p == r are excluded at extraction
    and tallied in excluded_reversals.
    """

    ground_set: Tuple[str, ...]
    counts: Dict[Triple, int]
    excluded_reversals: int = 0

    def total(self) -> int:
        return sum(self.counts.values())

    def items(self) -> List[Tuple[Triple, int]]:
        return sorted(self.counts.items())


class LocationOrder:
    """Bijection from locations onto levels 1..Y. Level Y is drawn topmost."""

    def __init__(self, levels: Dict[str, int]):
        values = sorted(levels.values())
        if values != list(range(1, len(levels) + 1)):
            raise OrderError("levels must be a bijection onto 1..%d" % len(levels))
        self.levels = dict(levels)

    @classmethod
    def from_sequence(cls, top_to_bottom: Iterable[str]) -> "LocationOrder":
        seq = list(top_to_bottom)
        return cls({loc: len(seq) - i for i, loc in enumerate(seq)})

    def to_sequence(self) -> List[str]:
        return [loc for loc, _ in sorted(self.levels.items(), key=lambda kv: -kv[1])]

    def reversed_order(self) -> "LocationOrder":
        y = len(self.levels) + 1
        return LocationOrder({loc: y - lv for loc, lv in self.levels.items()})

    def __getitem__(self, loc: str) -> int:
        return self.levels[loc]

    def __contains__(self, loc: str) -> bool:
        return loc in self.levels

    def __len__(self) -> int:
        return len(self.levels)

    def __eq__(self, other) -> bool:
        return isinstance(other, LocationOrder) and self.levels == other.levels

    def __repr__(self) -> str:
        return "LocationOrder(%r)" % (self.to_sequence(),)


def _require_normalized(g: EventGraph) -> None:
    if not is_normalized(g):
        raise NotNormalizedError("event graph has consecutive same-location events; normalize first")


def _check_bijection(g: EventGraph, y: LocationOrder) -> None:
    if set(y.levels) != set(g.locations):
        raise OrderError("order does not cover exactly the graph's locations")


def build_location_graph(g: EventGraph) -> LocationGraph:
    """Weighted location graph: one unit per consecutive event pair."""
    _require_normalized(g)
    weights: Dict[Pair, int] = {}
    for z in g.trains:
        for a, b in zip(z.events, z.events[1:]):
            k = pair_key(a.loc, b.loc)
            weights[k] = weights.get(k, 0) + 1
    return LocationGraph(g.ordered_locations(), weights)


def build_augmented(g: EventGraph) -> AugmentedLocationGraph:
    """Location graph plus an edge for the outer pair of each triple."""
    base = build_location_graph(g)
    extra = set()
    for z in g.trains:
        locs = z.locations()
        for p, q, r in zip(locs, locs[1:], locs[2:]):
            if p != r:
                extra.add(pair_key(p, r))
    return AugmentedLocationGraph(base, frozenset(extra))


def extract_restrictions(g: EventGraph) -> RestrictionMultiset:
    """Collect the ordered triple multiset driving turn minimization.

    A triple whose first and third location coincide is never a turn (turns
    need three pairwise distinct locations), so keeping it would only add a
    constant to every order's violation count. It is excluded and tallied,
    which keeps violated_restrictions equal to count_turns exactly.
    """
    _require_normalized(g)
    counts: Dict[Triple, int] = {}
    excluded = 0
    for z in g.trains:
        locs = z.locations()
        for p, q, r in zip(locs, locs[1:], locs[2:]):
            if p == r:
                excluded += 1
                continue
            counts[(p, q, r)] = counts.get((p, q, r), 0) + 1
    return RestrictionMultiset(g.ordered_locations(), counts, excluded)


def _collapsed_runs(z) -> List[str]:
    run: List[str] = []
    for e in z.events:
        if not run or run[-1] != e.loc:
            run.append(e.loc)
    return run


def count_turns(g: EventGraph, y: LocationOrder) -> int:
    """Number of turns of the diagram drawn with order y.

    A turn is a consecutive location triple (after collapsing same-location
    runs) with three distinct locations whose middle level is strictly above
    or strictly below both outer levels.
    """
    _check_bijection(g, y)
    total = 0
    for z in g.trains:
        run = _collapsed_runs(z)
        for p, q, r in zip(run, run[1:], run[2:]):
            if p == r:
                continue
            lq, lp, lr = y[q], y[p], y[r]
            if (lq < lp and lq < lr) or (lq > lp and lq > lr):
                total += 1
    return total


def violated_restrictions(rm: RestrictionMultiset, y: LocationOrder) -> int:
    """Multiplicity-weighted number of triples not drawn monotonically."""
    for loc in rm.ground_set:
        if loc not in y:
            raise OrderError("order is missing location %r" % (loc,))
    total = 0
    for (p, q, r), w in rm.counts.items():
        lq, lp, lr = y[q], y[p], y[r]
        if not (lp < lq < lr or lr < lq < lp):
            total += w
    return total


def _orient(ax, ay, bx, by, cx, cy) -> int:
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def _segments(g: EventGraph, y: LocationOrder):
    for z in g.trains:
        for a, b in zip(z.events, z.events[1:]):
            yield (z.train_id, a.t, y[a.loc], b.t, y[b.loc])


def count_crossings(g: EventGraph, y: LocationOrder) -> int:
    """Proper crossings between segments of distinct trains.

    Exact integer arithmetic; touching endpoints and collinear overlaps do
    not count. Placement within a level band does not matter because levels
    are integers and times are exact.
    """
    _check_bijection(g, y)
    segs = list(_segments(g, y))
    total = 0
    for i in range(len(segs)):
        zi, x1, y1, x2, y2 = segs[i]
        for j in range(i + 1, len(segs)):
            zj, x3, y3, x4, y4 = segs[j]
            if zi == zj:
                continue
            if max(x1, x2) <= min(x3, x4) or max(x3, x4) <= min(x1, x2):
                continue
            o1 = _orient(x1, y1, x2, y2, x3, y3)
            o2 = _orient(x1, y1, x2, y2, x4, y4)
            o3 = _orient(x3, y3, x4, y4, x1, y1)
            o4 = _orient(x3, y3, x4, y4, x2, y2)
            if o1 * o2 < 0 and o3 * o4 < 0:
                total += 1
    return total


def connected_components(L: LocationGraph) -> List[Tuple[str, ...]]:
    """Components as vertex tuples, both ordered by canonical vertex order."""
    adj = L.adjacency()
    pos = {v: i for i, v in enumerate(L.vertices)}
    seen = set()
    comps: List[Tuple[str, ...]] = []
    for v in L.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp, key=pos.get)))
    return comps


def induced_subgraph(L: LocationGraph, vertices: Iterable[str]) -> LocationGraph:
    keep = set(vertices)
    pos = {v: i for i, v in enumerate(L.vertices)}
    weights = {p: w for p, w in L.weights.items() if p[0] in keep and p[1] in keep}
    return LocationGraph(tuple(sorted(keep, key=pos.get)), weights)


def instance_stats(g: EventGraph) -> Dict[str, int]:
    """Summary counters for a normalized graph, as printed by the stats CLI."""
    rm = extract_restrictions(g)
    aug = build_augmented(g)
    return {
        "locations": len(g.locations),
        "trains": len(g.trains),
        "events": g.event_count,
        "restrictions_total": rm.total(),
        "restrictions_distinct": len(rm.counts),
        "excluded_reversal_triplets": rm.excluded_reversals,
        "location_graph_edges": len(aug.base.weights),
        "augmented_edges": len(aug.edge_set()),
    }
