import csv
import io

import pytest

from conftest import eg

from tsd.bench import COLUMNS, bench_csv, bench_rows
from tsd.errors import CrossCheckError
from tsd.model import serialize_event_graph
from tsd.solvers.result import SolveResult
from tsd.locgraph import LocationOrder


def write_instances(tmp_path):
    a = eg(["A", "B", "C"], ["C", "A", "B"])
    b = eg(["X", "Y"])
    (tmp_path / "alpha.json").write_text(serialize_event_graph(a))
    (tmp_path / "beta.json").write_text(serialize_event_graph(b))
    return a, b


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# tsd bench format v")
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    rows = list(reader)
    assert rows[0] == list(COLUMNS)
    return [dict(zip(COLUMNS, r)) for r in rows[1:]]


def test_bench_rows_per_instance_method_pair(tmp_path):
    write_instances(tmp_path)
    rows = parse_csv(bench_csv(tmp_path, ["dp", "brute"], reps=2))
    assert [(r["instance"], r["method"]) for r in rows] == [
        ("alpha", "brute"), ("alpha", "dp"), ("beta", "brute"), ("beta", "dp")]
    for r in rows:
        assert r["error"] == ""
        assert r["reps"] == "2"
        assert float(r["mean_wall_time_s"]) >= 0
    assert {r["turns"] for r in rows if r["instance"] == "alpha"} == {"1"}
    assert {r["turns"] for r in rows if r["instance"] == "beta"} == {"0"}


def test_bench_records_reduction_columns(tmp_path):
    path = ["P%d" % i for i in range(6)]
    g = eg(path, path)
    (tmp_path / "corridor.json").write_text(serialize_event_graph(g))
    (row,) = bench_rows(tmp_path, ["dp"], reps=1)
    assert row.locations_before == 6
    assert row.locations_after == 2
    assert row.turns == 0


def test_bench_bad_instance_becomes_error_rows(tmp_path):
    write_instances(tmp_path)
    (tmp_path / "broken.json").write_text("{not json")
    rows = bench_rows(tmp_path, ["dp", "brute"], reps=1)
    broken = [r for r in rows if r.instance == "broken"]
    assert len(broken) == 2
    assert all(r.error for r in broken)
    assert all(r.turns is None for r in broken)
    # the other instances still ran
    assert sum(1 for r in rows if not r.error) == 4


def test_bench_method_failure_is_contained(tmp_path):
    # 12 parked trains: nothing reduces, so brute refuses but dp is fine
    big = eg(*[["L%02d" % i] for i in range(12)])
    (tmp_path / "big.json").write_text(serialize_event_graph(big))
    rows = bench_rows(tmp_path, ["brute", "dp"], reps=1)
    by_method = {r.method: r for r in rows}
    assert "cap" in by_method["brute"].error
    assert by_method["dp"].error == ""
    assert by_method["dp"].turns == 0


def test_bench_aborts_when_methods_disagree(tmp_path):
    write_instances(tmp_path)
    fake = {"brute": 0, "dp": 1}

    def stub(g, method):
        y = LocationOrder({loc: i + 1 for i, loc in enumerate(sorted(g.locations))})
        return SolveResult(y, fake[method], method, {})

    with pytest.raises(CrossCheckError) as info:
        bench_rows(tmp_path, ["brute", "dp"], reps=1, solve_fn=stub)
    assert "alpha" in str(info.value)


def test_bench_validates_arguments(tmp_path):
    with pytest.raises(ValueError):
        bench_rows(tmp_path, ["dp"], reps=0)
    with pytest.raises(ValueError):
        bench_rows(tmp_path, [])
    with pytest.raises(ValueError):
        bench_rows(tmp_path, ["simplex"])
    with pytest.raises(ValueError):
        bench_rows(tmp_path / "missing", ["dp"])
