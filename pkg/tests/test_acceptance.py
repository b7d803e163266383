"""End-to-end acceptance gate.

One test per headline guarantee, so a verbose run reads as a scorecard.
Every test pins its numeric tolerance and its wall-clock budget; the
budgets are generous on purpose (they flag pathological slowdowns, not
machine-to-machine jitter).
"""

import time

import numpy as np
import pytest
from sklearn.metrics import adjusted_mutual_info_score

from cafnet import (
    CommunityFeatures,
    DetectConfig,
    GenSpec,
    Partition,
    compute_community_features,
    degree_centrality,
    detect,
    generate,
    modularity,
    move_gain_degree_tax,
    move_gain_edge_contribution,
    oriented_rank_auc,
)
from cafnet.data import karate_factions

import oracles
from conftest import build_graph, random_graph, random_partition


def test_modularity_hand_values_and_trivial_partitions():
    start = time.perf_counter()
    g = build_graph([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
    split = Partition(g, [0, 0, 0, 1, 1, 1])
    assert abs(modularity(g, split) - 5.0 / 14.0) < 1e-12
    assert modularity(g, Partition(g, [0] * g.n)) == 0.0

    tri = build_graph([(0, 1), (0, 2), (1, 2)])
    assert abs(modularity(tri, Partition(tri, [0, 1, 2])) - (-1.0 / 3.0)) < 1e-12
    assert modularity(tri, Partition(tri, [0, 0, 0])) == 0.0
    assert time.perf_counter() - start < 1.0


def test_cas_is_the_break_even_beta_on_1000_random_instances():
    # At beta = CAS(v), splitting v into a fresh singleton changes the edge
    # contribution and the degree tax by exactly the same amount.
    start = time.perf_counter()
    rng = np.random.default_rng(424242)
    checked = 0
    while checked < 1000:
        g = random_graph(int(rng.integers(16, 48)), float(rng.uniform(3.0, 6.0)), int(rng.integers(1 << 30)))
        p = random_partition(g, int(rng.integers(2, 6)), int(rng.integers(1 << 30)))
        lam = float(rng.uniform(0.3, 2.5))
        v = int(rng.integers(g.n))
        if p.is_singleton(v):
            continue
        beta_star = CommunityFeatures(g, p, lam=lam).cas(v)
        gap = move_gain_edge_contribution(g, p, v, beta_star) - move_gain_degree_tax(g, p, v, lam)
        assert abs(gap) < 1e-9
        checked += 1
    assert time.perf_counter() - start < 10.0


def test_karate_two_lowest_cas_nodes_are_3_and_10():
    start = time.perf_counter()
    g, factions = karate_factions()
    assert g.n == 34
    feats = CommunityFeatures(g, factions)
    scores = [feats.cas(v) for v in range(g.n)]
    order = np.argsort(scores)
    assert {g.labels[int(order[0])], g.labels[int(order[1])]} == {"3", "10"}
    # The pair is separated from the rest, not just tied at the front.
    assert scores[int(order[1])] < scores[int(order[2])]
    assert time.perf_counter() - start < 1.0


def test_eight_distance_columns_match_dense_oracle_on_100_pairs():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    names = [f"CD_{tag}" for tag in ("L11", "L21", "KL1", "HD1", "L12", "L22", "KL2", "HD2")]
    worst = 0.0
    for _ in range(100):
        g = random_graph(int(rng.integers(60, 220)), float(rng.integers(4, 9)), int(rng.integers(1 << 30)))
        p = random_partition(g, int(rng.integers(2, 51)), int(rng.integers(1 << 30)))
        got = compute_community_features(g, p)
        want = oracles.dense_community_features(g, p.assignment)
        for name in names:
            worst = max(worst, float(np.max(np.abs(got.column(name) - want[name]))))
    assert worst < 1e-12
    assert time.perf_counter() - start < 30.0


def test_outlier_auc_cas_beats_degree_and_decays_with_mixing():
    start = time.perf_counter()
    aucs = []
    for xi in (0.3, 0.4, 0.5, 0.6):
        out = generate(GenSpec(n=10_000, s0=1000, xi=xi, seed=101))
        res = detect(out.graph, DetectConfig(seed=17, restarts=4))
        fm = compute_community_features(out.graph, res.partition)
        auc_cas = oriented_rank_auc(fm.column("CAS"), out.labels)
        if xi == 0.3:
            auc_dc = oriented_rank_auc(degree_centrality(out.graph), out.labels)
            assert auc_cas >= 0.85
            assert auc_cas - auc_dc >= 0.15
        aucs.append(auc_cas)
    assert all(later <= earlier for earlier, later in zip(aucs, aucs[1:])), aucs
    assert time.perf_counter() - start < 300.0


def test_depth1_features_fast_at_1e6_edges_and_near_linear_growth():
    # Two rungs with identical average degree (20) and community count
    # (about 29): edge count grows 10x, wall time must stay within a
    # factor 3 of linear, i.e. grow at most 30x.
    small = generate(GenSpec(n=10_000, s0=0, xi=0.3, seed=77, deg_min=20, deg_max=20, size_min=300, size_max=400))
    big = generate(GenSpec(n=100_000, s0=0, xi=0.3, seed=77, deg_min=20, deg_max=20, size_min=3000, size_max=4000))
    assert big.graph.m > 900_000

    def best_of_three(g, p):
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            compute_community_features(g, p, depth2=False)
            times.append(time.perf_counter() - t0)
        return min(times)

    p_small = small.planted_partition()
    p_big = big.planted_partition()
    compute_community_features(small.graph, p_small, depth2=False)  # warm-up
    t_small = best_of_three(small.graph, p_small)
    t_big = best_of_three(big.graph, p_big)
    assert t_big < 10.0
    assert t_big / t_small <= 30.0, (t_small, t_big)


def test_detection_recovers_cliques_and_planted_benchmark(two_cliques):
    start = time.perf_counter()
    res = detect(two_cliques, DetectConfig(seed=1, restarts=4))
    got = res.partition.assignment
    assert got[:5].tolist() == [got[0]] * 5
    assert got[5:].tolist() == [got[5]] * 5
    assert got[0] != got[5]
    assert res.q_lambda == pytest.approx(19.0 / 42.0, abs=1e-12)

    out = generate(GenSpec(n=2000, s0=0, xi=0.2, seed=42, size_min=50, size_max=500))
    first = detect(out.graph, DetectConfig(seed=7, restarts=16))
    again = detect(out.graph, DetectConfig(seed=7, restarts=16))
    assert np.array_equal(first.partition.assignment, again.partition.assignment)
    assert first.q_lambda == again.q_lambda
    assert adjusted_mutual_info_score(out.planted, first.partition.assignment) >= 0.9
    assert time.perf_counter() - start < 60.0
