"""Tree decompositions: min-degree construction, validation, nice form.

The dynamic program and the sparse integer program both consume tree
decompositions of the augmented location graph. Construction uses the
classic min-degree elimination heuristic; widths are heuristic upper bounds,
never certified optimal.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import DecompositionError
from .model import ValidationReport, Violation


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node id plus undirected tree edges."""

    bags: Dict[int, FrozenSet[str]]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adjacency(self) -> Dict[int, set]:
        adj: Dict[int, set] = {i: set() for i in self.bags}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


@dataclass(frozen=True)
class NiceNode:
    bag: FrozenSet[str]
    kind: str  # leaf, introduce, forget, join
    children: Tuple[int, ...]
    vertex: Optional[str] = None  # the vertex introduced or forgotten


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted decomposition with leaf, introduce, forget and join nodes.

    The root has an empty bag and is a forget node (a lone leaf for the
    empty graph). Children always precede parents in topo_order().
    """

    nodes: Dict[int, NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes.values()), default=0) - 1

    def topo_order(self) -> List[int]:
        order: List[int] = []
        stack: List[Tuple[int, bool]] = [(self.root, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                order.append(nid)
                continue
            stack.append((nid, True))
            for c in self.nodes[nid].children:
                stack.append((c, False))
        return order

    def as_decomposition(self) -> TreeDecomposition:
        edges = tuple(
            (c, nid) for nid, node in self.nodes.items() for c in node.children
        )
        return TreeDecomposition({i: n.bag for i, n in self.nodes.items()}, edges)


def min_degree_decomposition(vertices: Iterable[str], edges: Iterable[Tuple[str, str]]) -> TreeDecomposition:
    """Elimination-order decomposition, smallest degree first.

    Ties break on the position of the vertex in the given sequence, so the
    result is a pure function of the inputs. The bag of an eliminated vertex
    is itself plus its current (fill-augmented) neighborhood; its tree parent
    is the bag of the earliest-eliminated neighbor. Disconnected parts yield
    parentless nodes which are chained in elimination order. A zero-vertex
    graph maps to a single empty bag of width -1.
    """
    vs = list(vertices)
    index = {v: i for i, v in enumerate(vs)}
    if len(index) != len(vs):
        raise DecompositionError("duplicate vertex in input")
    if not vs:
        return TreeDecomposition({0: frozenset()}, ())
    adj: Dict[str, set] = {v: set() for v in vs}
    for a, b in edges:
        if a not in adj or b not in adj:
            raise DecompositionError("edge endpoint %r is not a vertex" % ((a, b),))
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    bags: Dict[int, FrozenSet[str]] = {}
    elim_pos: Dict[str, int] = {}
    neigh_at_elim: Dict[int, List[str]] = {}
    remaining = set(vs)
    for step in range(len(vs)):
        v = min(remaining, key=lambda u: (len(adj[u]), index[u]))
        bags[step] = frozenset(adj[v] | {v})
        neigh_at_elim[step] = sorted(adj[v], key=index.get)
        elim_pos[v] = step
        for a in adj[v]:
            adj[a].discard(v)
        for a, b in itertools.combinations(sorted(adj[v], key=index.get), 2):
            adj[a].add(b)
            adj[b].add(a)
        del adj[v]
        remaining.discard(v)
    tree_edges: List[Tuple[int, int]] = []
    parentless: List[int] = []
    for step in range(len(vs)):
        neigh = neigh_at_elim[step]
        if neigh:
            parent = min(elim_pos[u] for u in neigh)
            tree_edges.append((step, parent))
        else:
            parentless.append(step)
    for a, b in zip(parentless, parentless[1:]):
        tree_edges.append((a, b))
    return TreeDecomposition(bags, tuple(tree_edges))


def validate_decomposition(vertices: Iterable[str], edges: Iterable[Tuple[str, str]],
                           td: TreeDecomposition) -> ValidationReport:
    """Check the three decomposition axioms plus tree shape.

    Rules: tree-shape, vertex-cover (every vertex in some bag and no foreign
    vertices), edge-cover (every edge inside some bag), occupancy-connected
    (the bags holding a vertex induce a connected subtree).
    """
    violations: List[Violation] = []
    vset = set(vertices)
    ids = sorted(td.bags)
    if not ids:
        violations.append(Violation("tree-shape", "decomposition has no nodes"))
        return ValidationReport(tuple(violations))
    adj = {i: set() for i in ids}
    ok_shape = True
    for a, b in td.edges:
        if a not in adj or b not in adj or a == b:
            violations.append(Violation("tree-shape", "edge %r references unknown node" % ((a, b),)))
            ok_shape = False
            continue
        adj[a].add(b)
        adj[b].add(a)
    if ok_shape:
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(ids):
            violations.append(Violation("tree-shape", "tree is not connected"))
            ok_shape = False
        elif len(td.edges) != len(ids) - 1:
            violations.append(Violation("tree-shape", "node and edge counts do not form a tree"))
            ok_shape = False
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in sorted(vset - covered):
        violations.append(Violation("vertex-cover", "vertex %r is in no bag" % (v,), ((v,),)))
    for v in sorted(covered - vset):
        violations.append(Violation("vertex-cover", "bag vertex %r is not a graph vertex" % (v,), ((v,),)))
    for a, b in edges:
        if not any(a in bag and b in bag for bag in td.bags.values()):
            violations.append(Violation("edge-cover", "edge %r is in no bag" % ((a, b),), ((a, b),)))
    if ok_shape:
        for v in sorted(vset & covered):
            holding = [i for i in ids if v in td.bags[i]]
            seen = {holding[0]}
            stack = [holding[0]]
            hold = set(holding)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w in hold and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(holding):
                violations.append(Violation(
                    "occupancy-connected", "bags holding %r are not connected" % (v,), ((v,),)))
    return ValidationReport(tuple(violations))


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a decomposition to nice form without increasing the width.

    Subset bags are merged away first, then every remaining tree edge is
    expanded into a forget/introduce transition and nodes with several
    children into left-deep joins. The node count is at most
    6 * (width + 1) * n for n >= 1 vertices (see the accounting in the
    tests); the width never changes.
    """
    if not td.bags:
        raise DecompositionError("decomposition has no nodes")
    bags = {i: frozenset(b) for i, b in td.bags.items()}
    adj = {i: set() for i in bags}
    for a, b in td.edges:
        adj[a].add(b)
        adj[b].add(a)

    merged = True
    while merged:
        merged = False
        for u in sorted(bags):
            for w in sorted(adj[u]):
                if bags[u] <= bags[w]:
                    for x in adj[u] - {w}:
                        adj[x].discard(u)
                        adj[x].add(w)
                        adj[w].add(x)
                    adj[w].discard(u)
                    del bags[u], adj[u]
                    merged = True
                    break
            if merged:
                break

    nodes: Dict[int, NiceNode] = {}
    counter = itertools.count()

    def new_node(bag, kind, children=(), vertex=None) -> int:
        nid = next(counter)
        nodes[nid] = NiceNode(frozenset(bag), kind, tuple(children), vertex)
        return nid

    def leaf_chain(bag: FrozenSet[str]) -> int:
        nid = new_node(frozenset(), "leaf")
        cur = set()
        for v in sorted(bag):
            cur.add(v)
            nid = new_node(cur, "introduce", (nid,), v)
        return nid

    def transition(top: int, from_bag: FrozenSet[str], to_bag: FrozenSet[str]) -> int:
        nid, cur = top, set(from_bag)
        for v in sorted(from_bag - to_bag):
            cur.remove(v)
            nid = new_node(cur, "forget", (nid,), v)
        for v in sorted(to_bag - from_bag):
            cur.add(v)
            nid = new_node(cur, "introduce", (nid,), v)
        return nid

    anchor = min(bags)
    # post-order over the pruned tree, iterative to keep deep paths safe
    order: List[Tuple[int, Optional[int]]] = []
    stack: List[Tuple[int, Optional[int]]] = [(anchor, None)]
    while stack:
        u, parent = stack.pop()
        order.append((u, parent))
        for w in sorted(adj[u]):
            if w != parent:
                stack.append((w, u))
    built: Dict[int, int] = {}
    for u, parent in reversed(order):
        kids = [w for w in sorted(adj[u]) if w != parent]
        if not kids:
            built[u] = leaf_chain(bags[u])
            continue
        tops = [transition(built[w], bags[w], bags[u]) for w in kids]
        while len(tops) > 1:
            a = tops.pop(0)
            b = tops.pop(0)
            tops.insert(0, new_node(bags[u], "join", (a, b)))
        built[u] = tops[0]

    top = built[anchor]
    cur = set(bags[anchor])
    for v in sorted(cur):
        cur.remove(v)
        top = new_node(cur, "forget", (top,), v)
    return NiceTreeDecomposition(nodes, top)


def check_nice(ntd: NiceTreeDecomposition) -> List[str]:
    """Structural problems of a nice decomposition, empty when well formed."""
    problems: List[str] = []
    root = ntd.nodes.get(ntd.root)
    if root is None:
        return ["root id is not a node"]
    if root.bag:
        problems.append("root bag is not empty")
    if root.kind not in ("forget", "leaf"):
        problems.append("root is neither a forget node nor a lone leaf")
    for nid, node in ntd.nodes.items():
        kids = [ntd.nodes[c].bag for c in node.children if c in ntd.nodes]
        if len(kids) != len(node.children):
            problems.append("node %d has unknown children" % nid)
            continue
        if node.kind == "leaf":
            if node.children or node.bag:
                problems.append("leaf %d must have no children and an empty bag" % nid)
        elif node.kind == "introduce":
            if len(kids) != 1 or node.vertex is None or node.bag != kids[0] | {node.vertex} \
                    or node.vertex in kids[0]:
                problems.append("introduce %d does not add exactly one vertex" % nid)
        elif node.kind == "forget":
            if len(kids) != 1 or node.vertex is None or kids[0] != node.bag | {node.vertex} \
                    or node.vertex in node.bag:
                problems.append("forget %d does not remove exactly one vertex" % nid)
        elif node.kind == "join":
            if len(kids) != 2 or kids[0] != node.bag or kids[1] != node.bag:
                problems.append("join %d needs two children with equal bags" % nid)
        else:
            problems.append("node %d has unknown kind %r" % (nid, node.kind))
    return problems


def decomposition_to_obj(td: TreeDecomposition):
    return {
        "nodes": [{"id": i, "bag": sorted(td.bags[i]), "kind": None} for i in sorted(td.bags)],
        "edges": [sorted(e) for e in sorted(tuple(sorted(e)) for e in td.edges)],
        "root": None,
        "width": td.width,
    }


def nice_to_obj(ntd: NiceTreeDecomposition):
    return {
        "nodes": [
            {"id": i, "bag": sorted(ntd.nodes[i].bag), "kind": ntd.nodes[i].kind}
            for i in sorted(ntd.nodes)
        ],
        "edges": sorted([c, i] for i in ntd.nodes for c in ntd.nodes[i].children),
        "root": ntd.root,
        "width": ntd.width,
    }
