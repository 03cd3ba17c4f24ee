"""Request and response bodies for the HTTP service.

The event graph itself travels as a plain JSON object in the documented
interchange format. The core parser owns that schema and its error
messages, so the envelope deliberately keeps the graph as an untyped
dict; re-stating the schema here would just duplicate the checks with
worse diagnostics.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field


class GraphRequest(BaseModel):
    graph: Dict[str, Any]


class ReduceRequest(GraphRequest):
    mode: Literal["chain", "full"] = "chain"


class TreedecompRequest(GraphRequest):
    nice: bool = False


class SolveRequest(GraphRequest):
    method: Literal["brute", "dp", "ilp", "ilp-tw", "cutplane"] = "dp"
    reduce: bool = True
    reduce_mode: Literal["chain", "full"] = "chain"
    time_limit: Optional[float] = None
    cap: int = 10
    cuts_per_round: int = 100


class ExportLpRequest(GraphRequest):
    formulation: Literal["naive", "tw"] = "naive"


class GenerateRequest(BaseModel):
    family: str
    seed: int = 0
    # family parameters vary (counts for most, edge_prob for maxcut);
    # the generator validates names and values
    params: Dict[str, Union[int, float]] = Field(default_factory=dict)


class StyleModel(BaseModel):
    width: int = 900
    height: int = 480
    margin: int = 36
    gutter: int = 72
    font_size: int = 12
    palette: Optional[List[str]] = None
    time_scale: Optional[float] = None


class RenderRequest(GraphRequest):
    order: List[str]
    style: Optional[StyleModel] = None


class ViolationModel(BaseModel):
    rule: str
    message: str
    refs: List[List[Any]] = Field(default_factory=list)


class ValidateResponse(BaseModel):
    valid: bool
    violations: List[ViolationModel] = Field(default_factory=list)


class StatsResponse(BaseModel):
    locations: int
    trains: int
    events: int
    restrictions_total: int
    restrictions_distinct: int
    excluded_reversal_triplets: int
    location_graph_edges: int
    augmented_edges: int


class ReduceResponse(BaseModel):
    graph: Dict[str, Any]
    report: Dict[str, Any]


class TreedecompNode(BaseModel):
    id: int
    bag: List[str]
    kind: Optional[str] = None


class TreedecompResponse(BaseModel):
    nodes: List[TreedecompNode]
    edges: List[List[int]]
    root: Optional[int] = None
    width: int


class SolveResponse(BaseModel):
    order: List[str]
    turns: int
    method: str
    stats: Dict[str, Any]


class ExportLpResponse(BaseModel):
    lp: str


class GenerateResponse(BaseModel):
    graph: Dict[str, Any]
    meta: Dict[str, Any]


class RenderResponse(BaseModel):
    svg: str


class HealthResponse(BaseModel):
    status: str
    version: str
