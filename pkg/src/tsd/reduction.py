"""Instance reduction by contracting pass-through parts of the network.

A component C separated off by a location pair {s, t} can be removed from
the instance when every train visiting C merely passes from one pole to the
other (transit) and the pass-through subwalks admit a common acyclic
orientation (contractible). The optimal turn count is unchanged; an optimal
order of the reduced instance lifts back by inserting the removed locations
between the poles in topological order.

Two modes are offered: chain mode only contracts maximal degree-2 paths
(cheap, covers the common corridor case), full mode searches all separating
pairs after every contraction.
"""

import heapq
import itertools
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .errors import LiftError, NotNormalizedError
from .locgraph import (
    LocationGraph,
    LocationOrder,
    build_location_graph,
    connected_components,
    induced_subgraph,
    pair_key,
)
from .model import EventGraph, TrainLine, is_normalized, require_valid

NOT_TRANSIT = "not-transit"
NOT_CONTRACTIBLE = "transit-not-contractible"
CONTRACTIBLE = "contractible"


@dataclass(frozen=True)
class Chain:
    """Maximal path of degree-2 vertices.

    attachments are the non-chain endpoints (equal for a pendant loop,
    None for a component that is one full cycle).
    """

    vertices: Tuple[str, ...]
    attachments: Optional[Tuple[str, str]]
    contains_terminal: bool
    is_cycle: bool


@dataclass(frozen=True)
class BlockCutTree:
    """Blocks and cut vertices of a connected graph, with their incidences."""

    blocks: Tuple[FrozenSet[str], ...]
    cut_vertices: Tuple[str, ...]
    edges: Tuple[Tuple[int, str], ...]  # (block index, cut vertex)

    @property
    def node_count(self) -> int:
        return len(self.blocks) + len(self.cut_vertices)


@dataclass(frozen=True)
class ContractionCandidate:
    """A separating pair with one component hanging between the poles."""

    pair: Tuple[str, str]
    component: FrozenSet[str]
    classification: Optional[str] = None
    reason: str = ""
    topo_order: Optional[Tuple[str, ...]] = None  # interior, pole s side first
    any_orientation_acyclic: Optional[bool] = None


@dataclass(frozen=True)
class ReductionStep:
    pair: Tuple[str, str]
    component: Tuple[str, ...]
    topo_order: Tuple[str, ...]
    removed: Tuple[Tuple[int, Tuple[Tuple[str, int], ...]], ...]

    def to_obj(self):
        return {
            "pair": list(self.pair),
            "component": list(self.component),
            "topo_order": list(self.topo_order),
            "removed": [
                {"train": tid, "events": [{"loc": loc, "t": t} for loc, t in events]}
                for tid, events in self.removed
            ],
        }


@dataclass(frozen=True)
class ContractionReport:
    mode: str
    steps: Tuple[ReductionStep, ...]
    location_count_before: int
    location_count_after: int
    locations_after: Tuple[str, ...]

    def to_obj(self):
        return {
            "mode": self.mode,
            "steps": [s.to_obj() for s in self.steps],
            "location_count_before": self.location_count_before,
            "location_count_after": self.location_count_after,
            "locations_after": list(self.locations_after),
        }


def find_terminals(g: EventGraph) -> FrozenSet[str]:
    """Locations where some train starts or ends."""
    out = set()
    for z in g.trains:
        if z.events:
            out.add(z.events[0].loc)
            out.add(z.events[-1].loc)
    return frozenset(out)


def find_chains(L: LocationGraph, terminals: FrozenSet[str] = frozenset()) -> List[Chain]:
    """Maximal degree-2 paths, in canonical vertex order of their heads."""
    adj = L.adjacency()
    deg2 = {v for v in L.vertices if len(adj[v]) == 2}
    pos = {v: i for i, v in enumerate(L.vertices)}
    seen: Set[str] = set()
    chains: List[Chain] = []
    for v in L.vertices:
        if v not in deg2 or v in seen:
            continue
        left, right = sorted(adj[v], key=pos.get)
        path = [v]
        is_cycle = False
        came, cur = v, left
        while cur in deg2 and cur not in path:
            path.insert(0, cur)
            nxt = [w for w in adj[cur] if w != came]
            came, cur = cur, nxt[0]
        if cur in path:
            is_cycle = True
            attachments = None
        else:
            left_attach = cur
            came, cur = v, right
            while cur in deg2 and cur not in path:
                path.append(cur)
                nxt = [w for w in adj[cur] if w != came]
                came, cur = cur, nxt[0]
            attachments = (left_attach, cur)
            if tuple(reversed(path)) < tuple(path):
                path.reverse()
                attachments = (attachments[1], attachments[0])
        seen.update(path)
        chains.append(Chain(tuple(path), attachments,
                            any(u in terminals for u in path), is_cycle))
    return chains


def block_cut_tree(L: LocationGraph) -> BlockCutTree:
    """Blocks and cut vertices of a connected location graph."""
    vs = list(L.vertices)
    if not vs:
        raise ValueError("graph has no vertices")
    if len(connected_components(L)) != 1:
        raise ValueError("graph is not connected")
    if len(vs) == 1:
        return BlockCutTree((frozenset(vs),), (), ())
    adj = {v: sorted(n) for v, n in L.adjacency().items()}
    disc: Dict[str, int] = {}
    low: Dict[str, int] = {}
    counter = itertools.count()
    edge_stack: List[Tuple[str, str]] = []
    raw_blocks: List[FrozenSet[str]] = []
    cut: Set[str] = set()

    # iterative DFS; each frame re-enters at the child whose walk finished
    root = vs[0]
    stack: List[List] = [[root, None, iter(adj[root]), 0]]
    disc[root] = low[root] = next(counter)
    while stack:
        frame = stack[-1]
        v, parent, it, _ = frame
        moved = False
        for w in it:
            if w == parent:
                continue
            if w in disc:
                if disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
                continue
            edge_stack.append((v, w))
            disc[w] = low[w] = next(counter)
            frame[3] += 1
            stack.append([w, v, iter(adj[w]), 0])
            moved = True
            break
        if moved:
            continue
        stack.pop()
        if not stack:
            break
        up = stack[-1]
        u = up[0]
        low[u] = min(low[u], low[v])
        if low[v] >= disc[u]:
            comp: Set[str] = set()
            while True:
                a, b = edge_stack.pop()
                comp.add(a)
                comp.add(b)
                if (a, b) == (u, v):
                    break
            raw_blocks.append(frozenset(comp))
            if up[1] is None:
                if up[3] > 1:
                    cut.add(u)
            else:
                cut.add(u)
    blocks = tuple(sorted(raw_blocks, key=lambda b: tuple(sorted(b))))
    cut_vertices = tuple(sorted(cut))
    edges = tuple(sorted(
        (i, c) for i, b in enumerate(blocks) for c in cut_vertices if c in b))
    return BlockCutTree(blocks, cut_vertices, edges)


def find_separating_pairs(L: LocationGraph) -> List[ContractionCandidate]:
    """Candidate seeds: pairs whose removal disconnects the rest.

    The graph must be connected; graphs with fewer than four vertices have
    no proper two-sided separations and yield no seeds. Each component of
    L minus the pair becomes one seed. Quadratic pair enumeration with a
    linear check each, which is fine at network sizes.
    """
    vs = list(L.vertices)
    if len(connected_components(L)) != 1:
        raise ValueError("graph is not connected")
    if len(vs) < 4:
        return []
    pos = {v: i for i, v in enumerate(vs)}
    adj = L.adjacency()
    seeds: List[ContractionCandidate] = []
    for s, t in itertools.combinations(sorted(vs), 2):
        rest = [v for v in vs if v not in (s, t)]
        unseen = set(rest)
        comps: List[Tuple[str, ...]] = []
        while unseen:
            start = min(unseen, key=pos.get)
            comp = {start}
            unseen.discard(start)
            work = [start]
            while work:
                u = work.pop()
                for w in adj[u]:
                    if w in unseen:
                        unseen.discard(w)
                        comp.add(w)
                        work.append(w)
            comps.append(tuple(sorted(comp)))
        if len(comps) < 2:
            continue
        for comp in sorted(comps):
            seeds.append(ContractionCandidate(pair_key(s, t), frozenset(comp)))
    return seeds


def _stays(locs: Tuple[str, ...], region: FrozenSet[str]):
    """Maximal runs of consecutive events inside the region, as slices."""
    i = 0
    while i < len(locs):
        if locs[i] not in region:
            i += 1
            continue
        j = i
        while j + 1 < len(locs) and locs[j + 1] in region:
            j += 1
        yield locs[i:j + 1]
        i = j + 1


def _topo_sort(nodes, arcs) -> Optional[List[str]]:
    """Kahn's algorithm with a lexicographic heap; None on a cycle."""
    out: Dict[str, Set[str]] = {v: set() for v in nodes}
    indeg: Dict[str, int] = {v: 0 for v in nodes}
    for a, b in arcs:
        if b not in out[a]:
            out[a].add(b)
            indeg[b] += 1
    heap = [v for v in nodes if indeg[v] == 0]
    heapq.heapify(heap)
    order: List[str] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in sorted(out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(out):
        return None
    return order


def classify_candidate(g: EventGraph, cand: ContractionCandidate,
                       exhaustive_orientations: bool = False) -> ContractionCandidate:
    """Decide whether the candidate component may be contracted.

    not-transit whenever some train, during one maximal stay inside the
    component plus poles, fails to cross cleanly from one pole to the other:
    a terminal lies inside, a stay leaves via its entry pole, or a stay
    revisits a pole (this includes a bare pole-to-pole shuttle, which pins
    the middle pole like a terminal). Such a stay would force a turn at a
    pole that the contracted instance cannot see.

    Otherwise every stay is a subwalk from one pole to the other. Under the
    canonical orientation (subwalk directed from its s end to its t end) the
    interior arcs must be acyclic: then the candidate is contractible and
    carries the interior topological order, else transit-not-contractible.

    With exhaustive_orientations set and at most 15 subwalks, additionally
    reports whether any orientation assignment of the interiors is acyclic;
    a research statistic that never changes the classification.
    """
    s, t = cand.pair
    component = cand.component
    region = component | {s, t}
    terminals = find_terminals(g)
    inside = sorted(component & terminals)
    if inside:
        return replace(cand, classification=NOT_TRANSIT,
                       reason="terminal %r inside the component" % (inside[0],))
    subwalks: List[Tuple[str, ...]] = []
    for z in g.trains:
        locs = z.locations()
        for stay in _stays(locs, region):
            poles = [v for v in stay if v in (s, t)]
            if not poles or stay[0] not in (s, t) or stay[-1] not in (s, t):
                return replace(cand, classification=NOT_TRANSIT,
                               reason="train %r starts or ends inside the component"
                                      % (z.train_id,))
            if len(poles) == 1:
                continue  # touches one pole, never enters
            if poles[0] == poles[-1] or len(poles) > 2:
                return replace(cand, classification=NOT_TRANSIT,
                               reason="train %r revisits pole %r during one stay"
                                      % (z.train_id, poles[1 if len(poles) > 2 else 0]))
            walk = stay if stay[0] == s else tuple(reversed(stay))
            subwalks.append(walk)

    def interior_arcs(walks):
        return [(a, b) for w in walks for a, b in zip(w, w[1:])
                if a in component and b in component]

    nodes = sorted(component)
    topo = _topo_sort(nodes, interior_arcs(subwalks))
    any_acyclic = None
    if exhaustive_orientations and len(subwalks) <= 15:
        any_acyclic = False
        for mask in range(2 ** len(subwalks)):
            flipped = [
                tuple(reversed(w)) if (mask >> k) & 1 else w
                for k, w in enumerate(subwalks)
            ]
            if _topo_sort(nodes, interior_arcs(flipped)) is not None:
                any_acyclic = True
                break
    if topo is None:
        return replace(cand, classification=NOT_CONTRACTIBLE,
                       reason="pass-through subwalks force a cycle",
                       any_orientation_acyclic=any_acyclic)
    return replace(cand, classification=CONTRACTIBLE, reason="",
                   topo_order=tuple(topo), any_orientation_acyclic=any_acyclic)


def _contract(g: EventGraph, cand: ContractionCandidate) -> Tuple[EventGraph, ReductionStep]:
    component = cand.component
    new_trains: List[TrainLine] = []
    removed = []
    for z in g.trains:
        kept = tuple(e for e in z.events if e.loc not in component)
        gone = tuple((e.loc, e.t) for e in z.events if e.loc in component)
        if gone:
            removed.append((z.train_id, gone))
        new_trains.append(TrainLine(z.train_id, kept))
    reduced = EventGraph(tuple(new_trains), g.locations - component)
    assert is_normalized(reduced), "contraction must keep the graph normalized"
    step = ReductionStep(cand.pair, tuple(sorted(component)), cand.topo_order or (),
                         tuple(removed))
    return reduced, step


def _chain_pass(g: EventGraph) -> Tuple[EventGraph, List[ReductionStep]]:
    L = build_location_graph(g)
    terminals = find_terminals(g)
    steps: List[ReductionStep] = []
    for ch in find_chains(L, terminals):
        if ch.is_cycle or ch.contains_terminal:
            continue
        a, b = ch.attachments
        if a == b:
            continue
        cand = classify_candidate(g, ContractionCandidate(pair_key(a, b), frozenset(ch.vertices)))
        if cand.classification == CONTRACTIBLE:
            g, step = _contract(g, cand)
            steps.append(step)
    return g, steps


def _full_pass(g: EventGraph) -> Tuple[EventGraph, List[ReductionStep]]:
    L = build_location_graph(g)
    for comp in connected_components(L):
        if len(comp) < 4:
            continue
        sub = induced_subgraph(L, comp)
        for seed in find_separating_pairs(sub):
            cand = classify_candidate(g, seed)
            if cand.classification == CONTRACTIBLE:
                g, step = _contract(g, cand)
                return g, [step]
    return g, []


def apply_rule_exhaustively(g: EventGraph, mode: str = "chain") -> Tuple[EventGraph, ContractionReport]:
    """Contract until nothing changes. mode is "chain" or "full".

    Chain mode contracts every eligible chain per pass (chains are pairwise
    non-adjacent, so one pass is safe) and recomputes until a pass is empty.
    Full mode recomputes all separating pairs after every single contraction.
    """
    if mode not in ("chain", "full"):
        raise ValueError("mode must be 'chain' or 'full', got %r" % (mode,))
    require_valid(g)
    if not is_normalized(g):
        raise NotNormalizedError("reduce requires a normalized event graph")
    before = len(g.locations)
    steps: List[ReductionStep] = []
    while True:
        g, new_steps = _chain_pass(g) if mode == "chain" else _full_pass(g)
        if not new_steps:
            break
        steps.extend(new_steps)
    report = ContractionReport(mode, tuple(steps), before, len(g.locations),
                               tuple(sorted(g.locations)))
    return g, report


def replay_report(g: EventGraph, report: ContractionReport) -> EventGraph:
    """Apply the recorded removals to the original graph again."""
    for step in report.steps:
        gone = {tid: set(events) for tid, events in step.removed}
        trains = []
        for z in g.trains:
            drop = gone.get(z.train_id, set())
            kept = tuple(e for e in z.events if (e.loc, e.t) not in drop)
            trains.append(TrainLine(z.train_id, kept))
        g = EventGraph(tuple(trains), g.locations - set(step.component))
    return g


def lift_order(report: ContractionReport, reduced_order: LocationOrder) -> LocationOrder:
    """Extend an order of the reduced instance to the original one.

    Replays the steps backwards, inserting each contracted component
    strictly between its poles, adjacent to pole s, following the recorded
    topological order. The turn count is preserved exactly, whether or not
    the reduced order is optimal.
    """
    seq = reduced_order.to_sequence()
    if sorted(seq) != sorted(report.locations_after):
        raise LiftError("order does not match the reduced instance's locations")
    for step in reversed(report.steps):
        s, t = step.pair
        if s not in seq or t not in seq:
            raise LiftError("pole %r or %r missing while lifting" % (s, t))
        if any(v in seq for v in step.topo_order):
            raise LiftError("component vertex already present while lifting")
        pos_s, pos_t = seq.index(s), seq.index(t)
        if pos_s < pos_t:
            seq[pos_s + 1:pos_s + 1] = list(step.topo_order)
        else:
            seq[pos_s:pos_s] = list(reversed(step.topo_order))
    return LocationOrder.from_sequence(seq)
