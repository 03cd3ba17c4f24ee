"""HTTP facade over the toolkit.

Every endpoint is a thin adapter: decode the envelope, call the library,
encode the result. Status codes are assigned here and nowhere else:

  400  the library rejected the document or the parameters
  408  a solve gave up at its time limit (the flagged incumbent, when
       one exists, rides along in the error detail)
  422  FastAPI's own envelope validation
  500  internal invariant failures (cross-check, lift, infeasibility)

The handlers are synchronous on purpose: solves are CPU bound, so the
threadpool FastAPI runs sync routes on is exactly what we want.
"""

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (CapExceededError, GraphValidationError, OrderError,
                      ParseError, SchemaError, TimeLimitExceeded, TsdError)
from ..generators import generate
from ..locgraph import (LocationOrder, build_augmented, build_location_graph,
                        extract_restrictions, instance_stats)
from ..model import (EventGraph, event_graph_from_obj, event_graph_to_obj,
                     normalize, require_valid, validate)
from ..reduction import apply_rule_exhaustively
from ..render import RenderStyle, render_svg
from ..solvers import solve
from ..solvers.ilp import build_ilp_naive, build_ilp_tw, export_lp
from ..treedecomp import (decomposition_to_obj, make_nice,
                          min_degree_decomposition, nice_to_obj)
from . import schemas

# errors that mean the request was wrong, not that the service is broken
_CLIENT_ERRORS = (ParseError, SchemaError, OrderError, CapExceededError,
                  ValueError)

app = FastAPI(title="tsd", version=__version__)


@app.exception_handler(TsdError)
async def _internal_tsd_error(request, exc):
    # anything not converted below is an internal invariant failure
    return JSONResponse(status_code=500,
                        content={"detail": {"error": str(exc)}})


def _bad_request(exc) -> HTTPException:
    detail = {"error": str(exc)}
    if isinstance(exc, GraphValidationError):
        detail["violations"] = [v.to_obj() for v in exc.report.violations]
    return HTTPException(status_code=400, detail=detail)


def _decode(obj) -> EventGraph:
    try:
        return event_graph_from_obj(obj)
    except (ParseError, SchemaError) as exc:
        raise _bad_request(exc)


def _normalized(obj) -> EventGraph:
    g = _decode(obj)
    try:
        require_valid(g)
    except GraphValidationError as exc:
        raise _bad_request(exc)
    return normalize(g)


@app.get("/health", response_model=schemas.HealthResponse)
def health():
    return {"status": "ok", "version": __version__}


@app.post("/validate", response_model=schemas.ValidateResponse)
def validate_graph(req: schemas.GraphRequest):
    return validate(_decode(req.graph)).to_obj()


@app.post("/stats", response_model=schemas.StatsResponse)
def stats(req: schemas.GraphRequest):
    return instance_stats(_normalized(req.graph))


@app.post("/reduce", response_model=schemas.ReduceResponse)
def reduce_graph(req: schemas.ReduceRequest):
    g = _normalized(req.graph)
    reduced, report = apply_rule_exhaustively(g, req.mode)
    return {"graph": event_graph_to_obj(reduced), "report": report.to_obj()}


@app.post("/treedecomp", response_model=schemas.TreedecompResponse)
def treedecomp(req: schemas.TreedecompRequest):
    # decompose the augmented location graph: that is the one whose
    # width bounds the dynamic program
    g = _normalized(req.graph)
    aug = build_augmented(g)
    td = min_degree_decomposition(aug.vertices, sorted(aug.edge_set()))
    if req.nice:
        return nice_to_obj(make_nice(td))
    return decomposition_to_obj(td)


@app.post("/solve", response_model=schemas.SolveResponse)
def solve_graph(req: schemas.SolveRequest):
    g = _decode(req.graph)
    try:
        result = solve(g, method=req.method, reduce=req.reduce,
                       reduce_mode=req.reduce_mode,
                       time_limit=req.time_limit, cap=req.cap,
                       cuts_per_round=req.cuts_per_round)
    except TimeLimitExceeded as exc:
        detail = {"error": str(exc)}
        if exc.partial is not None:
            detail["partial"] = exc.partial.to_obj()
        raise HTTPException(status_code=408, detail=detail)
    except (GraphValidationError,) + _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return result.to_obj()


@app.post("/export-lp", response_model=schemas.ExportLpResponse)
def export_model(req: schemas.ExportLpRequest):
    g = _normalized(req.graph)
    rm = extract_restrictions(g)
    if req.formulation == "naive":
        model = build_ilp_naive(rm)
    else:
        loc = build_location_graph(g)
        td = min_degree_decomposition(loc.vertices, loc.edges())
        model = build_ilp_tw(rm, td)
    return {"lp": export_lp(model)}


@app.post("/generate", response_model=schemas.GenerateResponse)
def generate_instance(req: schemas.GenerateRequest):
    try:
        g, meta = generate(req.family, seed=req.seed, **req.params)
    except (TypeError, ValueError) as exc:
        raise _bad_request(exc)
    return {"graph": event_graph_to_obj(g), "meta": meta}


@app.post("/render", response_model=schemas.RenderResponse)
def render(req: schemas.RenderRequest):
    g = _normalized(req.graph)
    try:
        y = LocationOrder.from_sequence(req.order)
        style = RenderStyle() if req.style is None else _style(req.style)
        svg = render_svg(g, y, style)
    except _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return {"svg": svg}


def _style(m: schemas.StyleModel) -> RenderStyle:
    kwargs = m.model_dump(exclude_none=True)
    if "palette" in kwargs:
        kwargs["palette"] = tuple(kwargs["palette"])
    return RenderStyle(**kwargs)
