"""Shared builders for the test suite."""

import random

from tsd.model import EventGraph


def eg(*seqs, locations=()):
    """Build an event graph from per-train location sequences.

    Each argument is either a list of locations (times auto-assigned on a
    disjoint window per train) or a list of (loc, t) pairs. Train ids are
    1, 2, ... in argument order.
    """
    trains = []
    clock = 0
    for i, seq in enumerate(seqs, start=1):
        if seq and isinstance(seq[0], tuple):
            trains.append((i, list(seq)))
        else:
            events = [(loc, clock + k) for k, loc in enumerate(seq)]
            clock += len(seq) + 3
            trains.append((i, events))
    return EventGraph.build(trains, locations)


def random_instance(rng: random.Random, n_loc, n_trains, max_len):
    """Small random instance on a random connected location pool.

    Distinct times everywhere, so validity is trivial. Returns the graph.
    """
    locs = ["L%02d" % i for i in range(1, n_loc + 1)]
    adj = {v: set() for v in locs}
    order = locs[:]
    rng.shuffle(order)
    for i in range(1, len(order)):
        j = rng.randrange(i)
        adj[order[i]].add(order[j])
        adj[order[j]].add(order[i])
    extra = max(0, int(round(0.4 * n_loc)))
    for _ in range(extra):
        a, b = rng.sample(locs, 2) if n_loc >= 2 else (locs[0], locs[0])
        if a != b:
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


def loc_seqs(g):
    """Per-train location sequences, the oracle's input shape."""
    return [[e.loc for e in z.events] for z in g.trains]


# one-line verdicts collected by test_acceptance.py, printed after the run
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance checks")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
