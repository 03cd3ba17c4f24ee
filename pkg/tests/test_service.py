"""End-to-end checks of the HTTP service endpoints and status mapping."""

import asyncio

import httpx
import pytest

import tsd
from tsd.errors import CrossCheckError
from tsd.model import event_graph_from_obj, event_graph_to_obj
from tsd.service import app
from tsd.service.app import _internal_tsd_error

from conftest import eg


def call(method, path, payload=None):
    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://test") as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def graph_obj(*seqs):
    return event_graph_to_obj(eg(*seqs))


CONFLICT = graph_obj(["A", "B", "C"], ["A", "C", "B"])


def test_health():
    r = call("GET", "/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": tsd.__version__}


def test_validate_valid_and_invalid():
    r = call("POST", "/validate", {"graph": CONFLICT})
    assert r.status_code == 200
    assert r.json() == {"valid": True, "violations": []}

    broken = {"trains": [{"id": 1, "events": [{"loc": "A", "t": 5},
                                              {"loc": "B", "t": 5}]}]}
    r = call("POST", "/validate", {"graph": broken})
    assert r.status_code == 200
    body = r.json()
    assert body["valid"] is False
    assert {v["rule"] for v in body["violations"]} == {"time-order",
                                                       "time-clash-train"}


def test_stats_counts():
    r = call("POST", "/stats", {"graph": CONFLICT})
    assert r.status_code == 200
    assert r.json() == {
        "locations": 3,
        "trains": 2,
        "events": 6,
        "restrictions_total": 2,
        "restrictions_distinct": 2,
        "excluded_reversal_triplets": 0,
        "location_graph_edges": 3,
        "augmented_edges": 3,
    }


def test_stats_rejects_invalid_graph_with_the_report():
    broken = {"trains": [{"id": 1, "events": [{"loc": "A", "t": 5},
                                              {"loc": "B", "t": 5}]}]}
    r = call("POST", "/stats", {"graph": broken})
    assert r.status_code == 400
    detail = r.json()["detail"]
    assert "invalid" in detail["error"]
    assert detail["violations"][0]["rule"] == "time-order"


def test_stats_rejects_schema_garbage():
    r = call("POST", "/stats", {"graph": {"trains": "zebra"}})
    assert r.status_code == 400
    r = call("POST", "/stats", {"graph": []})
    assert r.status_code == 422


def test_reduce_contracts_and_reports():
    path = ["A", "B", "C", "D", "E"]
    doc = graph_obj(path, path)
    r = call("POST", "/reduce", {"graph": doc, "mode": "chain"})
    assert r.status_code == 200
    body = r.json()
    reduced = event_graph_from_obj(body["graph"])
    assert len(reduced.locations) == 2
    assert body["report"]["location_count_before"] == 5
    assert body["report"]["location_count_after"] == 2
    assert sorted(body["report"]["locations_after"]) == ["A", "E"]


def test_treedecomp_plain_and_nice():
    r = call("POST", "/treedecomp", {"graph": CONFLICT})
    assert r.status_code == 200
    body = r.json()
    assert body["root"] is None
    assert all(n["kind"] is None for n in body["nodes"])
    bags = [set(n["bag"]) for n in body["nodes"]]
    assert set().union(*bags) == {"A", "B", "C"}

    r = call("POST", "/treedecomp", {"graph": CONFLICT, "nice": True})
    nice = r.json()
    assert nice["width"] == body["width"]
    assert nice["root"] in {n["id"] for n in nice["nodes"]}
    assert {n["kind"] for n in nice["nodes"]} <= {"leaf", "introduce",
                                                  "forget", "join"}


@pytest.mark.parametrize("method", ["brute", "dp", "ilp", "ilp-tw",
                                    "cutplane"])
def test_solve_every_method(method):
    r = call("POST", "/solve", {"graph": CONFLICT, "method": method})
    assert r.status_code == 200
    body = r.json()
    assert body["turns"] == 1
    assert sorted(body["order"]) == ["A", "B", "C"]
    assert body["method"] == method
    assert body["stats"]["wall_time_s"] >= 0


def test_solve_envelope_errors():
    r = call("POST", "/solve", {"graph": CONFLICT, "method": "simplex"})
    assert r.status_code == 422
    r = call("POST", "/solve", {})
    assert r.status_code == 422


def test_solve_time_limit_answers_408_with_the_incumbent():
    r = call("POST", "/solve", {"graph": CONFLICT, "method": "ilp",
                                "time_limit": 0})
    assert r.status_code == 408
    detail = r.json()["detail"]
    assert "time limit" in detail["error"]
    partial = detail["partial"]
    assert partial["stats"]["optimal"] is False
    assert sorted(partial["order"]) == ["A", "B", "C"]


def test_solve_brute_cap_is_a_client_error():
    doc = graph_obj(*[["L%02d" % i] for i in range(12)])
    r = call("POST", "/solve", {"graph": doc, "method": "brute"})
    assert r.status_code == 400
    assert "cap" in r.json()["detail"]["error"]


def test_export_lp_both_formulations():
    r = call("POST", "/export-lp", {"graph": CONFLICT})
    assert r.status_code == 200
    naive = r.json()["lp"]
    assert naive.startswith("Minimize\n")
    assert naive.endswith("End\n")

    path = ["A", "B", "C", "D", "E"]
    doc = graph_obj(path, list(reversed(path)))
    wide = call("POST", "/export-lp", {"graph": doc,
                                       "formulation": "naive"}).json()["lp"]
    slim = call("POST", "/export-lp", {"graph": doc,
                                       "formulation": "tw"}).json()["lp"]
    assert len(slim.splitlines()) <= len(wide.splitlines())


def test_generate_families_and_rejections():
    r = call("POST", "/generate", {"family": "corridor", "seed": 7,
                                   "params": {"n_loc": 6, "k_chain": 3}})
    assert r.status_code == 200
    body = r.json()
    assert body["meta"]["family"] == "corridor"
    assert body["meta"]["k_chain"] == 3
    g = event_graph_from_obj(body["graph"])
    assert len(g.locations) == 9

    assert call("POST", "/generate", {"family": "zoo"}).status_code == 400
    r = call("POST", "/generate", {"family": "random",
                                   "params": {"banana": 1}})
    assert r.status_code == 400


def test_render_and_its_error_paths():
    order = call("POST", "/solve", {"graph": CONFLICT}).json()["order"]
    r = call("POST", "/render", {"graph": CONFLICT, "order": order})
    assert r.status_code == 200
    svg = r.json()["svg"]
    assert svg.startswith("<svg ")
    assert svg.count("<polyline") == 2

    r = call("POST", "/render", {"graph": CONFLICT, "order": ["A", "B"]})
    assert r.status_code == 400
    r = call("POST", "/render", {"graph": CONFLICT, "order": order,
                                 "style": {"width": 0}})
    assert r.status_code == 400


def test_render_honours_style_overrides():
    order = ["A", "B", "C"]
    slim = call("POST", "/render", {"graph": CONFLICT, "order": order,
                                    "style": {"width": 300,
                                              "height": 200}}).json()["svg"]
    assert 'width="300"' in slim and 'height="200"' in slim


def test_internal_failures_answer_500():
    response = asyncio.run(_internal_tsd_error(None, CrossCheckError("boom")))
    assert response.status_code == 500
