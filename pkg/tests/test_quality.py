"""The modularity family and single-node move gains."""

import math

import numpy as np
import pytest

from cafnet import (
    CommunityFeatures,
    InputError,
    ParameterError,
    Partition,
    generalized_modularity,
    modularity,
    move_gain_degree_tax,
    move_gain_edge_contribution,
    regularized_modularity,
)

import oracles
from conftest import build_graph, random_graph, random_partition


def test_two_triangles_value(two_triangles_split):
    g, p = two_triangles_split
    assert abs(modularity(g, p) - 5.0 / 14.0) < 1e-12


def test_whole_graph_scores_zero(two_triangles):
    for seed in range(3):
        g = random_graph(30, 4.0, seed)
        assert modularity(g, Partition.whole(g)) == pytest.approx(0.0, abs=1e-12)
    assert modularity(two_triangles, Partition.whole(two_triangles)) == 0.0


def test_triangle_singletons(triangle):
    p = Partition.singletons(triangle)
    assert abs(modularity(triangle, p) - (-1.0 / 3.0)) < 1e-12


def test_matches_brute_force_on_random_instances():
    for seed in range(20):
        g = random_graph(40, 5.0, seed)
        p = random_partition(g, 5, seed + 50)
        want = oracles.brute_modularity(g, p.assignment)
        assert modularity(g, p) == pytest.approx(want, abs=1e-12)
        q = modularity(g, p)
        assert -1.0 < q < 1.0


def test_resolution_one_reduces_to_modularity():
    for seed in range(20):
        g = random_graph(35, 4.0, seed)
        p = random_partition(g, 4, seed + 7)
        assert generalized_modularity(g, p, 1.0) == modularity(g, p)


def test_resolution_two_on_fixture(two_triangles_split):
    g, p = two_triangles_split
    assert abs(generalized_modularity(g, p, 2.0) - (-1.0 / 7.0)) < 1e-12


def test_resolution_matches_brute_force():
    for seed in range(10):
        g = random_graph(30, 4.0, seed)
        p = random_partition(g, 4, seed + 3)
        for lam in (0.3, 1.7, 5.0):
            want = oracles.brute_modularity(g, p.assignment, lam)
            assert generalized_modularity(g, p, lam) == pytest.approx(want, abs=1e-12)


def test_nonpositive_resolution_rejected(triangle):
    p = Partition.whole(triangle)
    for lam in (0.0, -1.0):
        with pytest.raises(ParameterError):
            generalized_modularity(triangle, p, lam)


def test_huge_resolution_prefers_singletons():
    g = random_graph(10, 3.0, 4)
    lam = 1e6
    best = generalized_modularity(g, Partition.singletons(g), lam)
    rng = np.random.default_rng(8)
    for _ in range(200):
        assign = rng.integers(0, rng.integers(1, g.n), size=g.n)
        p = Partition(g, assign)
        if p.ell == g.n:
            continue  # only coarser partitions compete
        assert best > generalized_modularity(g, p, lam)


# -- regularized variant -------------------------------------------------------


def test_beta_zero_recovers_generalized():
    for seed in range(10):
        g = random_graph(30, 4.0, seed)
        p = random_partition(g, 8, seed + 1)
        for lam in (0.5, 1.0, 2.0):
            a = regularized_modularity(g, p, lam, 0.0)
            b = generalized_modularity(g, p, lam)
            assert a == pytest.approx(b, abs=1e-12)


def test_no_singletons_means_beta_is_inert(two_triangles_split):
    g, p = two_triangles_split
    base = generalized_modularity(g, p, 1.0)
    for beta in (0.1, 1.0, 7.5):
        assert regularized_modularity(g, p, 1.0, beta) == pytest.approx(base, abs=1e-12)


def test_split_node_fixture_matches_transcription(two_triangles):
    g = two_triangles
    p = Partition(g, [2, 0, 0, 1, 1, 1])  # node 0 split off as a singleton
    want = oracles.brute_regularized_modularity(g, p.assignment, 1.0, 1.0)
    got = regularized_modularity(g, p, 1.0, 1.0)
    assert got == pytest.approx(want, abs=1e-12)


def test_matches_transcription_on_random_instances():
    for seed in range(15):
        g = random_graph(30, 4.0, seed)
        # singleton-heavy partitions exercise the outlier bookkeeping
        p = random_partition(g, max(2, g.n // 2), seed + 9)
        for lam, beta in ((1.0, 0.5), (0.7, 1.0), (2.0, 3.0)):
            want = oracles.brute_regularized_modularity(g, p.assignment, lam, beta)
            got = regularized_modularity(g, p, lam, beta)
            assert got == pytest.approx(want, abs=1e-12)


def test_continuous_in_beta(two_triangles):
    g = two_triangles
    p = Partition(g, [2, 0, 0, 1, 1, 1])
    base = regularized_modularity(g, p, 1.0, 0.7)
    last = math.inf
    for h in (1e-2, 1e-4, 1e-6):
        diff = abs(regularized_modularity(g, p, 1.0, 0.7 + h) - base)
        assert diff < last
        assert diff < 5.0 * h
        last = diff


def test_negative_beta_rejected(two_triangles_split):
    g, p = two_triangles_split
    with pytest.raises(ParameterError):
        regularized_modularity(g, p, 1.0, -0.1)


# -- move gains ----------------------------------------------------------------


def test_tax_gain_hand_value(two_triangles_split):
    # vol(V)=14, community volume 7, degree 2
    g, p = two_triangles_split
    got = move_gain_degree_tax(g, p, 0, 1.0)
    assert got == pytest.approx(-2.0 * (7 * 2 - 4) / 196.0, abs=1e-15)
    assert got == pytest.approx(-10.0 / 98.0, abs=1e-15)


def test_edge_gain_all_internal(two_triangles_split):
    g, p = two_triangles_split
    # node 0 has both neighbours inside, so at beta=0 the gain is -2*deg/vol(V)
    got = move_gain_edge_contribution(g, p, 0, 0.0)
    assert got == pytest.approx(-2.0 * 2.0 / 14.0, abs=1e-15)


def test_edge_gain_vanishes_at_twice_internal_fraction(two_triangles_split):
    g, p = two_triangles_split
    for v in range(g.n):
        beta = 2.0 * p.internal_degree(g, v) / g.degree(v)
        assert move_gain_edge_contribution(g, p, v, beta) == pytest.approx(0.0, abs=1e-15)


def test_tax_gain_pendant_hand_value():
    # path 0-1-2-3 split down the middle; the pendant node 0 has
    # deg=1 inside a volume-3 community, vol(V)=6
    g = build_graph([(0, 1), (1, 2), (2, 3)])
    p = Partition(g, [0, 0, 1, 1])
    got = move_gain_degree_tax(g, p, 0, 1.0)
    assert got == pytest.approx(-2.0 * (3 * 1 - 1) / 36.0, abs=1e-15)
    assert got == pytest.approx(-1.0 / 9.0, abs=1e-15)


def test_gains_on_singletons_are_rejected(triangle):
    p = Partition.singletons(triangle)
    with pytest.raises(InputError):
        move_gain_edge_contribution(triangle, p, 0, 1.0)
    with pytest.raises(InputError):
        move_gain_degree_tax(triangle, p, 0, 1.0)


def _finite_difference_parts(g, p, v, lam, beta):
    """Objective parts before and after splitting v into a fresh singleton."""
    before_edge, before_tax = oracles.approx_objective_parts(
        g, p.assignment, lam, beta
    )
    after = p.copy(g)
    after.move(g, v, after.n_communities)
    after_edge, after_tax = oracles.approx_objective_parts(
        g, after.assignment, lam, beta
    )
    return after_edge - before_edge, after_tax - before_tax


def test_gains_match_finite_differences():
    checked = 0
    for seed in range(12):
        g = random_graph(30, 5.0, seed)
        p = random_partition(g, 4, seed + 21)
        lam, beta = 0.8, 1.3
        for v in range(g.n):
            c = p.community_of(v)
            if int(p.comm_size[c]) < 3:
                continue  # splitting would mint an extra singleton bonus
            d_edge, d_tax = _finite_difference_parts(g, p, v, lam, beta)
            assert move_gain_edge_contribution(g, p, v, beta) == pytest.approx(
                d_edge, abs=1e-12
            )
            assert move_gain_degree_tax(g, p, v, lam) == pytest.approx(
                d_tax, abs=1e-12
            )
            checked += 1
    assert checked > 200


def test_threshold_beta_balances_the_gains():
    for seed in range(10):
        g = random_graph(40, 5.0, seed)
        p = random_partition(g, 5, seed + 2)
        feats = CommunityFeatures(g, p, lam=1.0)
        for v in range(g.n):
            if p.is_singleton(v):
                continue
            beta_star = feats.cas(v)
            gap = move_gain_edge_contribution(g, p, v, beta_star) - move_gain_degree_tax(
                g, p, v, 1.0
            )
            assert abs(gap) < 1e-9
