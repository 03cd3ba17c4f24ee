"""Seeded instance generators with known-optimum structure.

Two families encode classic ordering problems as event graphs, one 3-event
train per constraint:

  * from_betweenness: one train per ordered triple; a satisfiable instance
    (gen_satisfiable_betweenness) draws with zero turns.
  * from_maxcut: one train (u, hub, v) per edge; the minimum turn count is
    exactly |E(G)| minus the maximum cut of G.

Two more families exist for benchmarking: gen_corridor builds a station
path with pass-through halts that the chain reduction removes again, and
gen_random_event_graph produces unstructured random walks.

All randomness flows through random.Random (the stdlib Mersenne Twister)
seeded with an explicit integer, so a fixed seed reproduces the same
instance on every platform. Event times are globally distinct integers,
one disjoint window per train, which makes validity immediate.
"""

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .locgraph import Triple, pair_key
from .model import EventGraph


@dataclass(frozen=True)
class BetweennessInstance:
    """Ground set plus ordered restriction triples (a, b, c)."""

    ground: Tuple[str, ...]
    triples: Tuple[Triple, ...]

    def __post_init__(self):
        if len(set(self.ground)) != len(self.ground):
            raise ValueError("ground set has duplicate elements")
        members = set(self.ground)
        for t in self.triples:
            if len(set(t)) != 3:
                raise ValueError("triple %r has repeated entries" % (t,))
            if not set(t) <= members:
                raise ValueError("triple %r uses elements outside the ground set" % (t,))


def _window(rng: random.Random, i: int, width: int = 16) -> Tuple[int, int, int]:
    """Three increasing times inside train i's private window."""
    base = (i - 1) * width
    a, b, c = sorted(rng.sample(range(width), 3))
    return base + a, base + b, base + c


def from_betweenness(bi: BetweennessInstance, seed: int = 0) -> EventGraph:
    """One 3-event train per triple; restrictions of the output equal the
    input triples as a multiset."""
    rng = random.Random(seed)
    trains = []
    for i, (a, b, c) in enumerate(bi.triples, start=1):
        t1, t2, t3 = _window(rng, i)
        trains.append((i, [(a, t1), (b, t2), (c, t3)]))
    return EventGraph.build(trains, bi.ground)


def from_maxcut(vertices: Iterable[str], edges: Iterable[Tuple[str, str]],
                seed: int = 0) -> EventGraph:
    """Hub-and-spoke encoding of a simple graph: one train (u, hub, v) per
    edge. The location graph is a star around the hub, and the minimum turn
    count equals |E| minus the maximum cut."""
    verts = list(vertices)
    names = set(verts)
    if len(names) != len(verts):
        raise ValueError("duplicate vertex")
    hub = "z"
    while hub in names:
        hub += "z"
    canon = []
    for u, v in edges:
        if u == v:
            raise ValueError("self-loop at %r; the graph must be simple" % (u,))
        if u not in names or v not in names:
            raise ValueError("edge endpoint %r is not a vertex" % ((u, v),))
        key = pair_key(u, v)
        if key in canon:
            raise ValueError("duplicate edge %r; the graph must be simple" % (key,))
        canon.append(key)
    rng = random.Random(seed)
    trains = []
    for i, (u, v) in enumerate(sorted(canon), start=1):
        t1, t2, t3 = _window(rng, i)
        trains.append((i, [(u, t1), (hub, t2), (v, t3)]))
    return EventGraph.build(trains, verts + [hub])


def _satisfiable_instance(n, m, seed) -> Tuple[BetweennessInstance, Tuple[str, ...]]:
    if n < 3:
        raise ValueError("need at least three ground elements, got %d" % n)
    if m < 0:
        raise ValueError("triple count must be nonnegative")
    rng = random.Random(seed)
    ground = tuple("S%02d" % i for i in range(1, n + 1))
    hidden = list(ground)
    rng.shuffle(hidden)
    triples: List[Triple] = []
    for _ in range(m):
        i, j, k = sorted(rng.sample(range(n), 3))
        t = (hidden[i], hidden[j], hidden[k])
        if rng.random() < 0.5:
            t = (t[2], t[1], t[0])
        triples.append(t)
    return BetweennessInstance(ground, tuple(triples)), tuple(hidden)


def gen_satisfiable_betweenness(n, m, seed: int = 0) -> BetweennessInstance:
    """m triples consistent with a hidden random permutation, so the
    instance is fully satisfiable (zero turns after from_betweenness)."""
    inst, _ = _satisfiable_instance(n, m, seed)
    return inst


def gen_random_event_graph(n_loc, n_trains, max_len, seed: int = 0) -> EventGraph:
    """Seeded random walks over a random connected location pool.

    The pool is a random spanning tree plus a few extra edges; each train
    walks from a random start, one neighbor step per event. Times strictly
    increase globally, so the output is always valid and normalized.
    """
    if min(n_loc, n_trains, max_len) < 1:
        raise ValueError("all size parameters must be positive")
    rng = random.Random(seed)
    locs = ["L%02d" % i for i in range(1, n_loc + 1)]
    adj: Dict[str, set] = {v: set() for v in locs}
    order = locs[:]
    rng.shuffle(order)
    for i in range(1, len(order)):
        j = rng.randrange(i)
        adj[order[i]].add(order[j])
        adj[order[j]].add(order[i])
    for _ in range(max(0, int(round(0.4 * n_loc)))):
        if n_loc >= 2:
            a, b = rng.sample(locs, 2)
            adj[a].add(b)
            adj[b].add(a)
    trains = []
    clock = 0
    for tid in range(1, n_trains + 1):
        length = rng.randint(1, max_len)
        v = rng.choice(locs)
        walk = [v]
        while len(walk) < length and adj[v]:
            v = rng.choice(sorted(adj[v]))
            walk.append(v)
        events = []
        for loc in walk:
            clock += rng.randint(1, 3)
            events.append((loc, clock))
        clock += 5
        trains.append((tid, events))
    return EventGraph.build(trains, locs)


def _corridor(n_loc, n_trains, k_chain, seed):
    if n_loc < 2:
        raise ValueError("a corridor needs at least two stations")
    if n_trains < 1:
        raise ValueError("need at least one through train")
    if k_chain < 0:
        raise ValueError("pass-through count must be nonnegative")
    rng = random.Random(seed)
    stations = ["S%02d" % i for i in range(1, n_loc + 1)]
    # pass-through halts only between interior stations: a halt next to a
    # corridor end would share its degree-2 chain with a station and survive
    interior_gaps = [i for i in range(n_loc - 1) if 1 <= i <= n_loc - 3]
    per_gap = [0] * (n_loc - 1)
    injected: List[List[str]] = [[] for _ in range(n_loc - 1)]
    placed = 0
    if interior_gaps:
        for _ in range(k_chain):
            per_gap[rng.choice(interior_gaps)] += 1
        count = 0
        for gap in range(n_loc - 1):
            for _ in range(per_gap[gap]):
                count += 1
                injected[gap].append("X%02d" % count)
        placed = count
    path: List[str] = []
    for i, s in enumerate(stations):
        path.append(s)
        if i < n_loc - 1:
            path.extend(injected[i])

    trains = []
    clock = 0

    def add_train(tid, locs_seq):
        nonlocal clock
        events = []
        for loc in locs_seq:
            clock += rng.randint(1, 3)
            events.append((loc, clock))
        clock += 5
        trains.append((tid, events))

    # stopping services: one per adjacent station pair, skipping the halts,
    # so every station hosts a terminal and keeps a direct edge
    for i in range(n_loc - 1):
        add_train(i + 1, [stations[i], stations[i + 1]])
    # through trains call at every vertex of their span; the first spans the
    # whole corridor so each halt is actually visited
    pos = {v: i for i, v in enumerate(path)}
    for t in range(n_trains):
        if t == 0:
            span = path
        else:
            a, b = sorted(rng.sample(range(n_loc), 2))
            span = path[pos[stations[a]]:pos[stations[b]] + 1]
            if rng.random() < 0.5:
                span = list(reversed(span))
        add_train(n_loc + t, span)
    g = EventGraph.build(trains, path)
    meta = {
        "stations": stations,
        "injected": [v for gap in injected for v in gap],
        "k_chain": placed,
        "path": path,
    }
    return g, meta


def gen_corridor(n_loc, n_trains, k_chain, seed: int = 0) -> EventGraph:
    """Monotone traffic on a station path with k_chain pass-through halts.

    Every train runs monotonically along the path, so the path order draws
    the instance with zero turns. The halts are degree-2 transit locations
    between interior stations; chain-mode reduction removes exactly them.
    Corridors with fewer than four stations have no interior gaps and get
    no halts regardless of k_chain; generate() reports the placed count.
    """
    g, _ = _corridor(n_loc, n_trains, k_chain, seed)
    return g


_DEFAULTS = {
    "betweenness": {"n": 6, "m": 8},
    "maxcut": {"n_vertices": 5, "edge_prob": 0.5},
    "corridor": {"n_loc": 8, "n_trains": 3, "k_chain": 2},
    "random": {"n_loc": 6, "n_trains": 3, "max_len": 8},
}


def generate(family: str, seed: int = 0, **params):
    """Build one instance of the named family plus its oracle metadata.

    Returns (graph, meta). meta always carries family and seed; families
    with a known optimum include min_turns, and structural secrets (hidden
    order, placed halts, source graph) appear so tests can check against
    them. Unknown family names and unknown parameters raise ValueError.
    """
    if family not in _DEFAULTS:
        raise ValueError("unknown family %r; expected one of %s"
                         % (family, "|".join(sorted(_DEFAULTS))))
    args = dict(_DEFAULTS[family])
    unknown = set(params) - set(args)
    if unknown:
        raise ValueError("unknown parameters for %s: %s"
                         % (family, ", ".join(sorted(unknown))))
    args.update(params)
    meta = {"family": family, "seed": seed}

    if family == "betweenness":
        inst, hidden = _satisfiable_instance(args["n"], args["m"], seed)
        g = from_betweenness(inst, seed)
        meta.update({
            "n": args["n"], "m": args["m"],
            "hidden_order": list(hidden),
            "triples": [list(t) for t in inst.triples],
            "min_turns": 0,
        })
    elif family == "maxcut":
        rng = random.Random(seed)
        verts = ["V%02d" % i for i in range(1, args["n_vertices"] + 1)]
        edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]
                 if rng.random() < args["edge_prob"]]
        g = from_maxcut(verts, edges, seed)
        hub = sorted(set(g.locations) - set(verts))[0]
        meta.update({
            "vertices": verts,
            "edges": [list(e) for e in edges],
            "hub": hub,
        })
    elif family == "corridor":
        g, extra = _corridor(args["n_loc"], args["n_trains"], args["k_chain"], seed)
        meta.update(extra)
        meta["min_turns"] = 0
    else:
        g = gen_random_event_graph(args["n_loc"], args["n_trains"],
                                   args["max_len"], seed)
        meta.update(args)
    return g, meta
