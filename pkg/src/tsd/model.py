"""Core event graph model: parsing, validation, normalization, serialization.

An event graph records, per train, the ordered sequence of events the train
produces. Every event is a (location, time) pair. The JSON document format is

    {"locations": ["A", "B"],
     "trains": [{"id": 1,
                 "events": [{"loc": "A", "t": 0}, {"loc": "B", "t": 5}]}]}

where "locations" is optional and is unioned with all referenced locations.
Unknown object keys are ignored. Times are 64-bit signed integers, train ids
are positive integers, and locations are opaque strings compared by equality.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

from .errors import GraphValidationError, ParseError, SchemaError

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


class Event(NamedTuple):
    loc: str
    t: int


@dataclass(frozen=True)
class TrainLine:
    """One train's event sequence, ordered as given in the input."""

    train_id: int
    events: Tuple[Event, ...]

    def locations(self) -> Tuple[str, ...]:
        return tuple(e.loc for e in self.events)


@dataclass(frozen=True)
class EventGraph:
    """Immutable event graph. Trains are kept sorted by train id."""

    trains: Tuple[TrainLine, ...]
    locations: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, "trains", tuple(sorted(self.trains, key=lambda z: z.train_id)))
        object.__setattr__(self, "locations", frozenset(self.locations))

    @classmethod
    def build(cls, trains: Iterable, locations: Iterable[str] = ()) -> "EventGraph":
        """Build from [(train_id, [(loc, t), ...]), ...].

        The location set is the union of the given ones and every referenced
        location, mirroring the document semantics.
        """
        lines = tuple(
            TrainLine(train_id, tuple(Event(loc, t) for loc, t in events))
            for train_id, events in trains
        )
        referenced = {e.loc for z in lines for e in z.events}
        return cls(lines, frozenset(locations) | referenced)

    @property
    def event_count(self) -> int:
        return sum(len(z.events) for z in self.trains)

    def ordered_locations(self) -> Tuple[str, ...]:
        """All locations, referenced ones first in order of first appearance.

        Declared-but-unreferenced locations follow in sorted order. This is
        the canonical vertex order used wherever a dense index is needed.
        """
        seen: Dict[str, None] = {}
        for z in self.trains:
            for e in z.events:
                if e.loc not in seen:
                    seen[e.loc] = None
        for loc in sorted(self.locations - seen.keys()):
            seen[loc] = None
        return tuple(seen)

    def location_index(self) -> Dict[str, int]:
        return {loc: i for i, loc in enumerate(self.ordered_locations())}


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    refs: Tuple = ()

    def to_obj(self):
        return {"rule": self.rule, "message": self.message, "refs": [list(r) for r in self.refs]}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_obj(self):
        return {"valid": self.valid, "violations": [v.to_obj() for v in self.violations]}


def _require(cond, message, fieldname):
    if not cond:
        raise SchemaError(message, fieldname)


def _check_int(value, fieldname, low, high):
    _require(isinstance(value, int) and not isinstance(value, bool),
             "expected an integer", fieldname)
    _require(low <= value <= high, "integer out of range", fieldname)
    return value


def event_graph_from_obj(obj) -> EventGraph:
    """Build an EventGraph from an already-parsed JSON object."""
    _require(isinstance(obj, dict), "top-level value must be an object", "")
    declared = obj.get("locations", [])
    _require(isinstance(declared, list), "expected a list of strings", "locations")
    for i, loc in enumerate(declared):
        _require(isinstance(loc, str), "expected a string", "locations[%d]" % i)
    trains_obj = obj.get("trains")
    _require(isinstance(trains_obj, list), "expected a list of trains", "trains")
    lines: List[TrainLine] = []
    for i, tr in enumerate(trains_obj):
        prefix = "trains[%d]" % i
        _require(isinstance(tr, dict), "expected a train object", prefix)
        tid = _check_int(tr.get("id"), prefix + ".id", 1, INT64_MAX)
        events_obj = tr.get("events")
        _require(isinstance(events_obj, list) and events_obj,
                 "expected a non-empty list of events", prefix + ".events")
        events = []
        for j, ev in enumerate(events_obj):
            eprefix = "%s.events[%d]" % (prefix, j)
            _require(isinstance(ev, dict), "expected an event object", eprefix)
            _require(isinstance(ev.get("loc"), str), "expected a string", eprefix + ".loc")
            t = _check_int(ev.get("t"), eprefix + ".t", INT64_MIN, INT64_MAX)
            events.append(Event(ev["loc"], t))
        lines.append(TrainLine(tid, tuple(events)))
    referenced = {e.loc for z in lines for e in z.events}
    return EventGraph(tuple(lines), frozenset(declared) | referenced)


def parse_event_graph(text: str) -> EventGraph:
    """Parse a JSON document into an EventGraph.

    Raises ParseError (with line and column) on malformed JSON and
    SchemaError (naming the offending field) on schema violations.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), exc.lineno, exc.colno) from None
    return event_graph_from_obj(obj)


def validate(g: EventGraph) -> ValidationReport:
    """Check the event graph axioms and return a report of all violations.

    Rules: positive-train-id, duplicate-train-id, empty-train, time-order
    (strictly increasing times along each train), time-clash-train (two
    events of one train share a time), time-clash-location (two same-time
    events share a location), unknown-location.
    """
    violations: List[Violation] = []
    seen_ids: Dict[int, int] = {}
    for z in g.trains:
        if z.train_id < 1:
            violations.append(Violation(
                "positive-train-id", "train id %r is not positive" % (z.train_id,),
                ((z.train_id,),)))
        if z.train_id in seen_ids:
            violations.append(Violation(
                "duplicate-train-id", "train id %r occurs more than once" % (z.train_id,),
                ((z.train_id,),)))
        seen_ids[z.train_id] = seen_ids.get(z.train_id, 0) + 1
        if not z.events:
            violations.append(Violation(
                "empty-train", "train %r has no events" % (z.train_id,), ((z.train_id,),)))
        for k in range(len(z.events) - 1):
            if z.events[k].t >= z.events[k + 1].t:
                violations.append(Violation(
                    "time-order",
                    "train %r: time %d at event %d does not precede time %d"
                    % (z.train_id, z.events[k].t, k, z.events[k + 1].t),
                    ((z.train_id, k), (z.train_id, k + 1))))
        for k, e in enumerate(z.events):
            if e.loc not in g.locations:
                violations.append(Violation(
                    "unknown-location",
                    "train %r event %d references unknown location %r" % (z.train_id, k, e.loc),
                    ((z.train_id, k),)))
    by_time: Dict[int, List[Tuple[int, int, str]]] = {}
    for zi, z in enumerate(g.trains):
        for k, e in enumerate(z.events):
            by_time.setdefault(e.t, []).append((zi, k, e.loc))
    for t in sorted(by_time):
        group = by_time[t]
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                zi, ki, loci = group[a]
                zj, kj, locj = group[b]
                ida, idb = g.trains[zi].train_id, g.trains[zj].train_id
                if zi == zj:
                    violations.append(Violation(
                        "time-clash-train",
                        "train %r has two events at time %d" % (ida, t),
                        ((ida, ki), (idb, kj))))
                elif loci == locj:
                    violations.append(Violation(
                        "time-clash-location",
                        "trains %r and %r are both at %r at time %d" % (ida, idb, loci, t),
                        ((ida, ki), (idb, kj))))
    return ValidationReport(tuple(violations))


def require_valid(g: EventGraph) -> None:
    report = validate(g)
    if not report.valid:
        raise GraphValidationError(report)


def is_normalized(g: EventGraph) -> bool:
    """True if no train has two consecutive events at the same location."""
    for z in g.trains:
        for k in range(len(z.events) - 1):
            if z.events[k].loc == z.events[k + 1].loc:
                return False
    return True


def normalize(g: EventGraph) -> EventGraph:
    """Merge runs of consecutive same-location events, keeping the earliest.

    The graph must be valid. Normalization never changes the optimal turn
    count, so solvers operate on normalized graphs only.
    """
    require_valid(g)
    lines = []
    for z in g.trains:
        kept = [z.events[0]]
        for e in z.events[1:]:
            if e.loc != kept[-1].loc:
                kept.append(e)
        lines.append(TrainLine(z.train_id, tuple(kept)))
    return EventGraph(tuple(lines), g.locations)


def event_graph_to_obj(g: EventGraph):
    """Canonical plain-object form: sorted locations, trains sorted by id."""
    return {
        "locations": sorted(g.locations),
        "trains": [
            {"id": z.train_id, "events": [{"loc": e.loc, "t": e.t} for e in z.events]}
            for z in g.trains
        ],
    }


def serialize_event_graph(g: EventGraph) -> str:
    """Serialize to canonical JSON text. parse(serialize(g)) == g for valid g."""
    return json.dumps(event_graph_to_obj(g), sort_keys=True, separators=(",", ":"))
