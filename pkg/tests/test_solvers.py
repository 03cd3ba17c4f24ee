import random
from math import factorial

import pytest

import oracle
from conftest import eg, loc_seqs, random_instance

from tsd.errors import (CapExceededError, DecompositionError,
                        TimeLimitExceeded)
from tsd.locgraph import build_augmented, count_turns, extract_restrictions
from tsd.model import normalize
from tsd.solvers import (METHODS, solve, solve_brute_force,
                         solve_cutting_plane, solve_dp)
from tsd.treedecomp import (NiceNode, NiceTreeDecomposition, make_nice,
                            min_degree_decomposition)


def ntd_for(g):
    aug = build_augmented(g)
    td = min_degree_decomposition(aug.vertices, sorted(aug.edge_set()))
    return make_nice(td)


def instances(seed, count, n_loc_hi=7):
    rng = random.Random(seed)
    for _ in range(count):
        g = random_instance(rng, rng.randint(3, n_loc_hi), rng.randint(1, 4), 8)
        yield normalize(g)


# -- brute force -------------------------------------------------------------

def test_brute_monotone_train_is_turn_free():
    r = solve_brute_force(eg(["A", "B", "C"]))
    assert r.turns == 0
    assert r.order.to_sequence() == ["A", "B", "C"]


def test_brute_conflicting_pair_needs_one_turn():
    r = solve_brute_force(eg(["A", "B", "C"], ["C", "A", "B"]))
    assert r.turns == 1
    assert r.order.to_sequence() == ["A", "B", "C"]
    assert r.stats["orders_scanned"] == 6


def test_brute_trivial_graphs():
    r = solve_brute_force(eg())
    assert r.turns == 0 and len(r.order) == 0
    r = solve_brute_force(eg(["A", "B"]))
    assert r.turns == 0 and set(r.order.levels) == {"A", "B"}


def test_brute_cap_is_enforced():
    g = eg(["L%d" % i for i in range(5)])
    with pytest.raises(CapExceededError):
        solve_brute_force(g, cap=4)
    assert solve_brute_force(g, cap=5).turns == 0


def test_brute_matches_oracle_with_lex_witness():
    for g in instances(101, 25, n_loc_hi=6):
        best, perm = oracle.min_turns(loc_seqs(g), g.locations)
        r = solve_brute_force(g)
        assert r.turns == best
        assert tuple(r.order.to_sequence()) == perm


# -- dynamic program ----------------------------------------------------------

def test_dp_examples():
    g = eg(["A", "B", "C"], ["C", "A", "B"])
    r = solve_dp(g, ntd_for(g))
    assert r.turns == 1
    assert count_turns(g, r.order) == 1
    assert solve_dp(eg(["A", "B", "C"]), ntd_for(eg(["A", "B", "C"]))).turns == 0


def test_dp_matches_oracle_and_witness_counts():
    for g in instances(103, 40):
        best, _ = oracle.min_turns(loc_seqs(g), g.locations)
        r = solve_dp(g, ntd_for(g))
        assert r.turns == best
        assert count_turns(g, r.order) == best


def test_dp_table_sizes_respect_width_bound():
    for g in instances(105, 20):
        ntd = ntd_for(g)
        r = solve_dp(g, ntd)
        assert r.stats["table_bound"] == factorial(ntd.width + 1)
        assert r.stats["table_max"] <= r.stats["table_bound"]


def test_dp_charge_accounting_adds_up():
    for g in instances(107, 25):
        r = solve_dp(g, ntd_for(g))
        assert r.stats["charges_introduce"] - r.stats["charges_join_correction"] == r.turns


def test_dp_long_path_stays_narrow():
    # full traversals square the path (outer pairs of each triple), width 2
    path = ["P%02d" % i for i in range(30)]
    g = eg(path, path, list(reversed(path)))
    ntd = ntd_for(g)
    assert ntd.width == 2
    r = solve_dp(g, ntd)
    assert r.turns == 0
    assert r.stats["table_max"] <= 6

    # two-event hops add no outer pairs, so the width stays 1
    hops = [path[i:i + 2] for i in range(len(path) - 1)]
    g2 = eg(*hops)
    ntd2 = ntd_for(g2)
    assert ntd2.width == 1
    assert solve_dp(g2, ntd2).turns == 0


def test_dp_rejects_foreign_decomposition():
    donor = eg(["X", "Y", "Z"])
    g = eg(["A", "B", "C"])
    with pytest.raises(DecompositionError):
        solve_dp(g, ntd_for(donor))


def test_dp_rejects_malformed_nice_decomposition():
    bad = NiceTreeDecomposition({0: NiceNode(frozenset({"A"}), "leaf", ())}, 0)
    with pytest.raises(DecompositionError):
        solve_dp(eg(["A"]), bad)


# -- cutting plane ------------------------------------------------------------

def test_cutplane_single_restriction_needs_no_cuts():
    r = solve_cutting_plane(extract_restrictions(eg(["A", "B", "C"])))
    assert r.turns == 0
    assert r.stats["rounds"] == 1
    assert r.stats["cuts_added"] == 0


def test_cutplane_conflicting_pair():
    r = solve_cutting_plane(extract_restrictions(eg(["A", "B", "C"], ["C", "A", "B"])))
    assert r.turns == 1
    assert r.stats["rounds"] >= 1


def test_cutplane_matches_oracle():
    for g in instances(109, 25, n_loc_hi=6):
        best, _ = oracle.min_turns(loc_seqs(g), g.locations)
        rm = extract_restrictions(g)
        r = solve_cutting_plane(rm)
        assert r.turns == best
        assert oracle.turn_count(loc_seqs(g), r.order.levels) == best


def test_cutplane_small_cut_budget_still_exact():
    g = normalize(random_instance(random.Random(111), 6, 4, 8))
    best, _ = oracle.min_turns(loc_seqs(g), g.locations)
    r = solve_cutting_plane(extract_restrictions(g), k=1)
    assert r.turns == best


def test_cutplane_zero_time_limit_raises():
    rm = extract_restrictions(eg(["A", "B", "C"], ["C", "A", "B"]))
    with pytest.raises(TimeLimitExceeded):
        solve_cutting_plane(rm, time_limit=0)


# -- facade --------------------------------------------------------------------

def test_solve_rejects_unknown_method():
    with pytest.raises(ValueError):
        solve(eg(["A", "B"]), method="simplex")


def test_solve_methods_agree():
    for g in instances(113, 12, n_loc_hi=6):
        results = {m: solve(g, method=m) for m in METHODS}
        turns = {r.turns for r in results.values()}
        assert len(turns) == 1
        for r in results.values():
            assert set(r.order.levels) == set(g.locations)
            assert count_turns(g, r.order) == r.turns


def test_solve_reduction_does_not_change_the_optimum():
    for g in instances(115, 15):
        with_red = solve(g, method="dp", reduce=True)
        without = solve(g, method="dp", reduce=False)
        assert with_red.turns == without.turns
        assert count_turns(g, with_red.order) == with_red.turns
        assert with_red.stats["locations_after"] <= with_red.stats["locations_before"]
        assert without.stats["reduce_mode"] is None


def test_solve_adding_a_train_never_helps():
    rng = random.Random(117)
    for _ in range(10):
        g = normalize(random_instance(rng, rng.randint(3, 6), rng.randint(1, 3), 7))
        seqs = loc_seqs(g)
        extra = [rng.choice(sorted(g.locations)) for _ in range(4)]
        g2 = normalize(eg(*(seqs + [extra]), locations=g.locations))
        base = solve(g, method="dp").turns
        grown = solve(g2, method="dp").turns
        assert base <= grown


def test_solve_time_limit_carries_partial_result():
    g = eg(["A", "B", "C"], ["C", "A", "B"])
    with pytest.raises(TimeLimitExceeded) as info:
        solve(g, method="ilp", time_limit=0)
    partial = info.value.partial
    assert partial is not None
    assert partial.stats["optimal"] is False
    assert count_turns(normalize(g), partial.order) == partial.turns


def test_solve_stats_report_the_pipeline():
    g = eg(["A", "B", "C"], ["C", "A", "B"])
    r = solve(g, method="cutplane")
    assert r.method == "cutplane"
    assert r.stats["locations_before"] == 3
    assert r.stats["reduce_mode"] == "chain"
    assert r.stats["wall_time_s"] >= 0
