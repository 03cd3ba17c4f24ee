"""CSV benchmark harness over a directory of instance documents.

One row per (instance, method) pair: reduction statistics, the optimal turn
count, and the mean wall time over the requested repetitions. Failures of a
single instance or method become rows with the error column filled and the
run continues; methods disagreeing on an optimum abort the whole run, since
every method is exact and a disagreement means a bug, not a data point.

Cells run sequentially so timings never share a core; row order is sorted
by (instance, method) regardless of execution order.
"""

import csv
import io
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from .errors import CrossCheckError, TsdError
from .model import parse_event_graph
from .solvers import METHODS, solve

CSV_VERSION = 1
COLUMNS = ("instance", "method", "locations_before", "locations_after",
           "turns", "mean_wall_time_s", "reps", "error")


@dataclass
class BenchRecord:
    instance: str
    method: str
    locations_before: Optional[int] = None
    locations_after: Optional[int] = None
    turns: Optional[int] = None
    mean_wall_time_s: Optional[float] = None
    reps: int = 0
    error: str = ""

    def row(self) -> List[str]:
        def num(v):
            return "" if v is None else str(v)
        sec = "" if self.mean_wall_time_s is None else "%.6f" % self.mean_wall_time_s
        return [self.instance, self.method, num(self.locations_before),
                num(self.locations_after), num(self.turns), sec,
                str(self.reps), self.error]


def bench_rows(path, methods: Sequence[str], reps: int = 5,
               solve_fn=solve) -> List[BenchRecord]:
    """Benchmark every *.json instance under path with every method."""
    if reps < 1:
        raise ValueError("need at least one repetition")
    if not methods:
        raise ValueError("no methods given")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError("unknown method %r; expected one of %s"
                         % (unknown[0], "|".join(METHODS)))
    root = Path(path)
    if not root.is_dir():
        raise ValueError("%s is not a directory" % (root,))
    records: List[BenchRecord] = []
    for file in sorted(root.glob("*.json")):
        name = file.stem
        try:
            g = parse_event_graph(file.read_text())
        except TsdError as exc:
            for m in sorted(methods):
                records.append(BenchRecord(name, m, error=str(exc)))
            continue
        seen = {}
        for m in sorted(methods):
            try:
                elapsed = []
                result = None
                for _ in range(reps):
                    t0 = time.monotonic()
                    result = solve_fn(g, method=m)
                    # prefer the solver's own wall time over the round trip,
                    # which may include client/transport overhead
                    elapsed.append(result.stats.get("wall_time_s",
                                                    time.monotonic() - t0))
            except TsdError as exc:
                records.append(BenchRecord(name, m, error=str(exc)))
                continue
            seen[m] = result.turns
            records.append(BenchRecord(
                name, m,
                locations_before=result.stats.get("locations_before"),
                locations_after=result.stats.get("locations_after"),
                turns=result.turns,
                mean_wall_time_s=sum(elapsed) / len(elapsed),
                reps=reps))
        if len(set(seen.values())) > 1:
            raise CrossCheckError(
                "instance %s: methods disagree on the optimum: %s"
                % (name, ", ".join("%s=%d" % kv for kv in sorted(seen.items()))))
    records.sort(key=lambda r: (r.instance, r.method))
    return records


def bench_csv(path, methods: Sequence[str], reps: int = 5,
              solve_fn=solve) -> str:
    """The CSV document: a versioned header comment, then one header row
    and one data row per (instance, method)."""
    records = bench_rows(path, methods, reps, solve_fn)
    buf = io.StringIO()
    buf.write("# tsd bench format v%d; columns: %s\n"
              % (CSV_VERSION, ",".join(COLUMNS)))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()
