"""Contraction rule machinery: chains, blocks, separating pairs, lifting."""

import random

import pytest

import oracle
from conftest import eg, loc_seqs, random_instance
from tsd.errors import LiftError
from tsd.locgraph import LocationOrder, build_location_graph, count_turns, pair_key
from tsd.model import EventGraph, normalize
from tsd.reduction import (
    CONTRACTIBLE,
    NOT_CONTRACTIBLE,
    NOT_TRANSIT,
    ContractionCandidate,
    apply_rule_exhaustively,
    block_cut_tree,
    classify_candidate,
    find_chains,
    find_separating_pairs,
    find_terminals,
    lift_order,
    replay_report,
)


def path_train(*locs):
    return eg(list(locs))


def lgraph(vertices, edges):
    """Location graph straight from an edge list, weight 1 each."""
    from tsd.locgraph import LocationGraph
    return LocationGraph(tuple(vertices), {pair_key(a, b): 1 for a, b in edges})


def test_find_terminals():
    g = eg(["A", "B", "C"], ["C", "D"])
    assert find_terminals(g) == frozenset({"A", "C", "D"})
    assert find_terminals(eg(["A", "B", "A"])) == frozenset({"A"})
    assert find_terminals(eg(["X"])) == frozenset({"X"})


def test_find_chains_on_path():
    L = lgraph("ABCDE", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "E")])
    chains = find_chains(L, frozenset({"A", "E"}))
    assert len(chains) == 1
    ch = chains[0]
    assert ch.vertices == ("B", "C", "D")
    assert ch.attachments == ("A", "E")
    assert not ch.contains_terminal and not ch.is_cycle


def test_find_chains_terminal_flag():
    L = lgraph("ABCDE", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "E")])
    chains = find_chains(L, frozenset({"C"}))
    assert chains[0].contains_terminal


def test_find_chains_cycle_component():
    L = lgraph("ABCD", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")])
    chains = find_chains(L)
    assert len(chains) == 1
    assert chains[0].is_cycle
    assert chains[0].attachments is None


def test_find_chains_pendant_loop_attaches_twice():
    L = lgraph("AXYB", [("A", "X"), ("X", "Y"), ("Y", "A"), ("A", "B")])
    chains = find_chains(L)
    assert len(chains) == 1
    assert chains[0].attachments == ("A", "A")
    assert chains[0].vertices in (("X", "Y"), ("Y", "X"))


def test_find_chains_none_on_star():
    L = lgraph("XABC", [("X", "A"), ("X", "B"), ("X", "C")])
    assert find_chains(L) == []


def test_block_cut_tree_biconnected_is_single_node():
    L = lgraph("ABCD", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("A", "C"), ("B", "D")])
    bct = block_cut_tree(L)
    assert bct.node_count == 1
    assert bct.blocks == (frozenset("ABCD"),)
    assert bct.cut_vertices == ()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_block_cut_tree_path_has_expected_node_count(n):
    vs = ["p%d" % i for i in range(n)]
    L = lgraph(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])
    bct = block_cut_tree(L)
    assert len(bct.blocks) == n - 1
    assert len(bct.cut_vertices) == n - 2
    assert bct.node_count == 2 * n - 3
    assert len(bct.edges) == 2 * (n - 2)


def test_block_cut_tree_two_triangles_sharing_a_vertex():
    L = lgraph("ABCDE", [("A", "B"), ("B", "C"), ("C", "A"), ("C", "D"), ("D", "E"), ("E", "C")])
    bct = block_cut_tree(L)
    assert set(bct.blocks) == {frozenset("ABC"), frozenset("CDE")}
    assert bct.cut_vertices == ("C",)
    assert bct.node_count == 3
    assert bct.edges == ((0, "C"), (1, "C"))


def test_block_cut_tree_single_vertex():
    L = lgraph("A", [])
    assert block_cut_tree(L).blocks == (frozenset("A"),)


def test_block_cut_tree_rejects_disconnected():
    with pytest.raises(ValueError):
        block_cut_tree(lgraph("ABCD", [("A", "B"), ("C", "D")]))


def test_separating_pairs_on_cycle():
    L = lgraph("ABCD", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")])
    seeds = find_separating_pairs(L)
    assert {(s.pair, tuple(sorted(s.component))) for s in seeds} == {
        (("A", "C"), ("B",)), (("A", "C"), ("D",)),
        (("B", "D"), ("A",)), (("B", "D"), ("C",)),
    }


def test_separating_pairs_none_in_clique():
    import itertools
    L = lgraph("ABCD", list(itertools.combinations("ABCD", 2)))
    assert find_separating_pairs(L) == []


def test_separating_pairs_small_graphs_have_none():
    L = lgraph("ABC", [("A", "B"), ("B", "C")])
    assert find_separating_pairs(L) == []


def test_separating_pairs_match_oracle_on_random_graphs():
    rng = random.Random(47)
    for _ in range(25):
        n = rng.randint(4, 9)
        vs = ["v%d" % i for i in range(n)]
        edges = set()
        order = vs[:]
        rng.shuffle(order)
        for i in range(1, n):
            edges.add(pair_key(order[i], order[rng.randrange(i)]))
        for _ in range(n):
            a, b = rng.sample(vs, 2)
            edges.add(pair_key(a, b))
        L = lgraph(vs, sorted(edges))
        seeds = find_separating_pairs(L)
        assert sorted({s.pair for s in seeds}) == oracle.separating_pairs(vs, sorted(edges))
        for s in seeds:
            assert oracle.connected(list(s.component), sorted(edges))


def transit_fixture():
    """P-s-x-y-t-Q path with two trains crossing the middle in both senses."""
    return eg(["P", "s", "x", "y", "t", "Q"], ["Q", "t", "y", "x", "s", "P"])


def test_classify_contractible_in_both_directions():
    g = transit_fixture()
    cand = ContractionCandidate(("s", "t"), frozenset({"x", "y"}))
    out = classify_candidate(g, cand)
    assert out.classification == CONTRACTIBLE
    assert out.topo_order == ("x", "y")


def test_classify_terminal_inside_component():
    g = eg(["P", "s", "x", "y", "t", "Q"], ["x", "y"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})))
    assert out.classification == NOT_TRANSIT
    assert "terminal" in out.reason


def test_classify_same_pole_return():
    g = eg(["P", "s", "x", "s", "P"], ["P", "s", "x", "y", "t", "Q"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})))
    assert out.classification == NOT_TRANSIT
    assert "pole" in out.reason


def test_classify_pole_shuttle_marks_pole():
    g = eg(["P", "s", "x", "y", "t", "Q"], ["R", "t", "s", "t", "R"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})))
    assert out.classification == NOT_TRANSIT
    assert "pole" in out.reason


def test_classify_conflicting_subwalks_are_not_contractible():
    g = eg(["P", "s", "x", "y", "t", "Q"], ["Q", "t", "x", "y", "s", "P"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})))
    assert out.classification == NOT_CONTRACTIBLE


def test_classify_exhaustive_orientation_flag():
    g = eg(["P", "s", "x", "y", "t", "Q"], ["Q", "t", "x", "y", "s", "P"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})),
                             exhaustive_orientations=True)
    assert out.classification == NOT_CONTRACTIBLE
    assert out.any_orientation_acyclic is True
    ok = classify_candidate(transit_fixture(),
                            ContractionCandidate(("s", "t"), frozenset({"x", "y"})),
                            exhaustive_orientations=True)
    assert ok.any_orientation_acyclic is True


def test_classify_backtracking_train_is_not_contractible():
    g = eg(["P", "s", "x", "y", "x", "y", "t", "Q"])
    out = classify_candidate(g, ContractionCandidate(("s", "t"), frozenset({"x", "y"})))
    assert out.classification == NOT_CONTRACTIBLE


def test_apply_chain_mode_contracts_a_path():
    g = eg(["A", "B", "C", "D", "E"])
    reduced, report = apply_rule_exhaustively(g, "chain")
    assert report.location_count_before == 5
    assert report.location_count_after == 2
    assert len(report.steps) == 1
    assert report.steps[0].component == ("B", "C", "D")
    assert [e.loc for e in reduced.trains[0].events] == ["A", "E"]


def test_apply_chain_mode_respects_terminals():
    g = eg(["A", "B", "C", "D", "E"], ["C", "D"])
    reduced, report = apply_rule_exhaustively(g, "chain")
    # C and D are now terminals; only B is a terminal-free chain
    assert set(report.steps[0].component if report.steps else ()) <= {"B"}
    assert "C" in reduced.locations and "D" in reduced.locations


def test_apply_full_mode_on_path_stops_at_three_locations():
    g = eg(["A", "B", "C", "D", "E"])
    reduced, report = apply_rule_exhaustively(g, "full")
    assert report.location_count_after == 3
    assert len(report.steps) == 2
    best_before, _ = oracle.min_turns(loc_seqs(g), g.locations)
    best_after, _ = oracle.min_turns(loc_seqs(reduced), reduced.locations)
    assert best_before == best_after == 0


def test_apply_full_mode_contracts_explicit_two_sided_component():
    g = eg(["P", "s", "x", "y", "t", "Q"], ["P", "s", "w", "t", "Q"])
    reduced, report = apply_rule_exhaustively(g, "full")
    contracted = set().union(*(set(s.component) for s in report.steps))
    # full mode keeps contracting while any separating pair works; the
    # terminals P and Q must survive, everything strictly between may go
    assert contracted and not contracted & {"P", "Q"}
    assert {"P", "Q"} <= reduced.locations
    best_before, _ = oracle.min_turns(loc_seqs(g), g.locations)
    best_after, _ = oracle.min_turns(loc_seqs(reduced), reduced.locations)
    assert best_before == best_after


def test_apply_handles_disconnected_networks_independently():
    g = eg(["A", "B", "C", "D", "E"], ["U", "V", "W", "X", "Z"])
    reduced, report = apply_rule_exhaustively(g, "chain")
    assert report.location_count_after == 4
    assert {e.loc for z in reduced.trains for e in z.events} == {"A", "E", "U", "Z"}


def test_apply_rejects_bad_mode_and_unnormalized_input():
    with pytest.raises(ValueError):
        apply_rule_exhaustively(eg(["A", "B"]), "fast")
    from tsd.errors import NotNormalizedError
    with pytest.raises(NotNormalizedError):
        apply_rule_exhaustively(eg([("A", 0), ("A", 1), ("B", 2)]), "chain")


def test_replay_report_reproduces_reduced_graph():
    rng = random.Random(53)
    for _ in range(20):
        g = normalize(random_instance(rng, rng.randint(4, 8), rng.randint(1, 4), 9))
        for mode in ("chain", "full"):
            reduced, report = apply_rule_exhaustively(g, mode)
            assert replay_report(g, report) == reduced


def test_lift_order_inserts_between_poles():
    g = eg(["A", "B", "C", "D", "E"])
    reduced, report = apply_rule_exhaustively(g, "chain")
    lifted = lift_order(report, LocationOrder({"A": 1, "E": 2}))
    assert lifted.levels == {"A": 1, "B": 2, "C": 3, "D": 4, "E": 5}
    lifted2 = lift_order(report, LocationOrder({"E": 1, "A": 2}))
    assert lifted2.levels == {"E": 1, "D": 2, "C": 3, "B": 4, "A": 5}


def test_lift_order_rejects_mismatched_orders():
    g = eg(["A", "B", "C", "D", "E"])
    _, report = apply_rule_exhaustively(g, "chain")
    with pytest.raises(LiftError):
        lift_order(report, LocationOrder({"A": 1, "B": 2}))


def test_lift_preserves_turn_count_for_any_reduced_order():
    rng = random.Random(59)
    checked = 0
    for _ in range(120):
        g = normalize(random_instance(rng, rng.randint(4, 8), rng.randint(1, 4), 9))
        for mode in ("chain", "full"):
            reduced, report = apply_rule_exhaustively(g, mode)
            if not report.steps:
                continue
            seq = sorted(reduced.locations)
            rng.shuffle(seq)
            y_red = LocationOrder.from_sequence(seq)
            lifted = lift_order(report, y_red)
            assert count_turns(g, lifted) == count_turns(reduced, y_red)
            checked += 1
    assert checked >= 20


def test_reduction_soundness_small_batch():
    rng = random.Random(61)
    for _ in range(25):
        g = normalize(random_instance(rng, rng.randint(4, 7), rng.randint(1, 4), 8))
        best, _ = oracle.min_turns(loc_seqs(g), g.locations)
        for mode in ("chain", "full"):
            reduced, report = apply_rule_exhaustively(g, mode)
            red_best, _ = oracle.min_turns(loc_seqs(reduced), reduced.locations)
            assert red_best == best, (mode, loc_seqs(g))
