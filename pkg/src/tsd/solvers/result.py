"""Common result container for every solve method."""

from dataclasses import dataclass, field
from typing import Dict

from ..locgraph import LocationOrder


@dataclass
class SolveResult:
    """An optimal order with its turn count and per-method statistics.

    The order is a bijection over the instance's locations; turns always
    equals count_turns(instance, order).
    """

    order: LocationOrder
    turns: int
    method: str
    stats: Dict = field(default_factory=dict)

    def to_obj(self):
        return {
            "order": self.order.to_sequence(),
            "turns": self.turns,
            "method": self.method,
            "stats": dict(self.stats),
        }
