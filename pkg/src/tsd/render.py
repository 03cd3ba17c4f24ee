"""Time-space diagrams as SVG documents.

An event is drawn at (x, y) where x is the affine image of its time and y
the gridline of its location's level; each train is one polyline through
its events in order. Level Y sits at the top of the canvas (SVG grows
downward, so levels are flipped). The output is a pure string function of
(graph, order, style): the same inputs give byte-identical documents.

By default the time axis is fitted to the canvas. A fixed pixels-per-time
scale can be set instead, which honors absolute distances but may overflow
the declared width for long horizons; the auto fit is the reason two
diagrams of different horizons are not distance-comparable.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import NotNormalizedError, OrderError
from .locgraph import LocationOrder
from .model import EventGraph, is_normalized

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


@dataclass(frozen=True)
class RenderStyle:
    """Canvas geometry and colors.

    time_scale is pixels per time unit; None means fit the whole horizon
    into the canvas. The palette cycles by train id, so a train keeps its
    color across renders. Labels sit in the left gutter at a fixed offset;
    same-time events within a train cannot exist post-validation, so no
    collision handling is needed beyond that.
    """

    width: int = 900
    height: int = 480
    margin: int = 36
    gutter: int = 72
    font_size: int = 12
    palette: Tuple[str, ...] = PALETTE
    time_scale: Optional[float] = None

    def __post_init__(self):
        if min(self.width, self.height) <= 0 or self.margin < 0 or self.gutter < 0:
            raise ValueError("canvas dimensions must be positive")
        if self.font_size <= 0 or not self.palette:
            raise ValueError("font size must be positive and the palette nonempty")
        if self.time_scale is not None and self.time_scale <= 0:
            raise ValueError("time scale must be positive")


def _fmt(v: float) -> str:
    return "%.2f" % v


def render_svg(g: EventGraph, y: LocationOrder, style: RenderStyle = RenderStyle()) -> str:
    """SVG document for the diagram of g drawn with order y."""
    if not is_normalized(g):
        raise NotNormalizedError("render requires a normalized event graph")
    if set(y.levels) != set(g.locations):
        raise OrderError("order does not cover exactly the graph's locations")

    left = style.gutter
    right = style.width - style.margin
    top = style.margin
    bottom = style.height - style.margin
    n_levels = len(y)

    def py(level: int) -> float:
        if n_levels <= 1:
            return (top + bottom) / 2.0
        return top + (n_levels - level) * (bottom - top) / (n_levels - 1)

    times = [e.t for z in g.trains for e in z.events]
    t0 = min(times) if times else 0
    span = (max(times) - t0) if times else 0
    if style.time_scale is not None:
        scale = style.time_scale
    else:
        scale = (right - left) / float(span) if span > 0 else 0.0

    def px(t: int) -> float:
        return left + (t - t0) * scale

    lines: List[str] = []
    lines.append('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
                 'viewBox="0 0 %d %d">' % (style.width, style.height,
                                           style.width, style.height))
    lines.append('<g class="axes" stroke="#222" stroke-width="1">')
    lines.append('<line x1="%s" y1="%s" x2="%s" y2="%s" />'
                 % (_fmt(left), _fmt(top), _fmt(left), _fmt(bottom)))
    lines.append('<line x1="%s" y1="%s" x2="%s" y2="%s" />'
                 % (_fmt(left), _fmt(bottom), _fmt(right), _fmt(bottom)))
    lines.append('</g>')

    lines.append('<g class="grid" font-size="%d" font-family="sans-serif">'
                 % style.font_size)
    for loc in y.to_sequence():
        gy = py(y[loc])
        lines.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#bbb" '
                     'stroke-dasharray="3 3" />'
                     % (_fmt(left), _fmt(gy), _fmt(right), _fmt(gy)))
        lines.append('<text x="%s" y="%s">%s</text>'
                     % (_fmt(4), _fmt(gy + 0.35 * style.font_size), _esc(loc)))
    lines.append('</g>')

    lines.append('<g class="trains" fill="none" stroke-width="1.5">')
    for z in g.trains:
        pts = " ".join("%s,%s" % (_fmt(px(e.t)), _fmt(py(y[e.loc])))
                       for e in z.events)
        color = style.palette[(z.train_id - 1) % len(style.palette)]
        lines.append('<polyline stroke="%s" points="%s"><title>train %d</title>'
                     '</polyline>' % (color, pts, z.train_id))
    lines.append('</g>')
    lines.append('</svg>')
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))
