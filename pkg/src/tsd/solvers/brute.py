"""Exhaustive baseline: evaluate every permutation of the locations.

Permutations are generated in lexicographic sequence and violation counts
are evaluated in vectorized chunks, so the first optimum encountered is the
lexicographically smallest witness. The location cap keeps Y! honest.
"""

import time
from itertools import islice, permutations

import numpy as np

from ..errors import CapExceededError
from ..locgraph import LocationOrder, extract_restrictions
from ..model import EventGraph
from .result import SolveResult

CHUNK = 40320  # one 8!-sized block of permutations at a time


def solve_brute_force(g: EventGraph, cap: int = 10) -> SolveResult:
    """Global minimum over all Y! orders; ties break lexicographically."""
    start = time.monotonic()
    rm = extract_restrictions(g)
    locs = sorted(rm.ground_set)
    y = len(locs)
    if y > cap:
        raise CapExceededError(
            "%d locations exceed the brute-force cap of %d" % (y, cap))
    index = {v: i for i, v in enumerate(locs)}
    triples = [(index[p], index[q], index[r], m) for (p, q, r), m in rm.items()]

    best = None
    best_perm = None
    scanned = 0
    gen = permutations(range(y))
    while True:
        chunk = list(islice(gen, CHUNK))
        if not chunk:
            break
        scanned += len(chunk)
        perms = np.array(chunk, dtype=np.int16)
        pos = np.argsort(perms, axis=1)
        counts = np.zeros(len(chunk), dtype=np.int64)
        for ip, iq, ir, mult in triples:
            above_p = pos[:, iq] < pos[:, ip]
            above_r = pos[:, iq] < pos[:, ir]
            counts += mult * (above_p == above_r)
        k = int(np.argmin(counts))
        if best is None or counts[k] < best:
            best = int(counts[k])
            best_perm = chunk[k]
        if best == 0:
            break
    if best is None:  # zero locations
        best, best_perm = 0, ()
    order = LocationOrder.from_sequence([locs[i] for i in best_perm])
    stats = {"wall_time_s": time.monotonic() - start, "orders_scanned": scanned}
    return SolveResult(order, best, "brute", stats)
