"""Community detection: recovery, determinism, and the restart protocol."""

import numpy as np
import pytest
from sklearn.metrics import adjusted_mutual_info_score

from cafnet import (
    DetectConfig,
    GenSpec,
    ParameterError,
    Partition,
    best_partition_of,
    detect,
    from_edge_pairs,
    generalized_modularity,
    generate,
)

import oracles
from conftest import random_graph


def test_two_cliques_recovered_exactly(two_cliques):
    res = detect(two_cliques, DetectConfig(seed=1, restarts=4))
    got = res.partition.assignment
    assert got[:5].tolist() == [got[0]] * 5
    assert got[5:].tolist() == [got[5]] * 5
    assert got[0] != got[5]
    assert res.q_lambda == pytest.approx(19.0 / 42.0, abs=1e-12)


def test_two_cliques_partition_is_globally_optimal(two_cliques):
    best_q, blocks = oracles.best_partition_exhaustive(two_cliques)
    assert best_q == pytest.approx(19.0 / 42.0, abs=1e-12)
    assert sorted(sorted(b) for b in blocks) == [
        [0, 1, 2, 3, 4],
        [5, 6, 7, 8, 9],
    ]


def test_same_seed_same_assignment(two_cliques):
    cfg = DetectConfig(seed=42, restarts=8)
    a = detect(two_cliques, cfg).partition.assignment
    b = detect(two_cliques, cfg).partition.assignment
    assert a.tolist() == b.tolist()
    g = random_graph(120, 6.0, 3)
    a = detect(g, DetectConfig(seed=5, restarts=4)).partition.assignment
    b = detect(g, DetectConfig(seed=5, restarts=4)).partition.assignment
    assert a.tolist() == b.tolist()


def test_thread_count_does_not_change_results():
    g = random_graph(150, 6.0, 9)
    serial = detect(g, DetectConfig(seed=2, restarts=6, threads=1))
    threaded = detect(g, DetectConfig(seed=2, restarts=6, threads=4))
    assert serial.partition.assignment.tolist() == threaded.partition.assignment.tolist()
    assert serial.q_lambda == threaded.q_lambda
    assert serial.best_restart == threaded.best_restart


def test_level_trace_is_monotone():
    for seed in range(4):
        g = random_graph(200, 6.0, seed)
        res = detect(g, DetectConfig(seed=seed + 1, restarts=2))
        trace = res.level_trace
        assert all(b >= a - 1e-9 for a, b in zip(trace, trace[1:]))
        # connectivity repair may only raise the score further
        assert res.q_lambda >= trace[-1] - 1e-12


def test_restart_scores_and_best_index():
    g = random_graph(100, 5.0, 4)
    res = detect(g, DetectConfig(seed=7, restarts=5))
    assert len(res.restart_scores) == 5
    best = max(range(5), key=lambda r: (res.restart_scores[r], -r))
    assert res.best_restart == best
    assert res.q_lambda == res.restart_scores[best]


def test_communities_are_connected_on_benchmarks():
    spec = GenSpec(
        n=400, s0=0, xi=0.2, seed=11, deg_min=5, deg_max=30,
        size_min=40, size_max=80,
    )
    out = generate(spec)
    g = out.graph
    res = detect(g, DetectConfig(seed=3, restarts=4))
    p = res.partition
    for c in range(p.ell):
        members = set(p.members(c).tolist())
        start = next(iter(members))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                u = int(u)
                if u in members and u not in seen:
                    seen.add(u)
                    stack.append(u)
        assert seen == members


def test_benchmark_recovery_quality():
    spec = GenSpec(
        n=600, s0=0, xi=0.15, seed=11, deg_min=5, deg_max=40,
        size_min=40, size_max=150,
    )
    out = generate(spec)
    res = detect(out.graph, DetectConfig(seed=3, restarts=8))
    ami = adjusted_mutual_info_score(out.planted, res.partition.assignment)
    assert ami >= 0.9


def test_output_stable_under_relabeling():
    spec = GenSpec(
        n=300, s0=0, xi=0.1, seed=11, deg_min=5, deg_max=30,
        size_min=40, size_max=80,
    )
    g = generate(spec).graph
    cfg = DetectConfig(seed=3, restarts=16)
    base = detect(g, cfg)
    for perm_seed in (99, 7):
        perm = np.random.default_rng(perm_seed).permutation(g.n)
        pairs = [(int(perm[u]), int(perm[v])) for u, v in g.edges()]
        g2 = from_edge_pairs(pairs, [str(i) for i in range(g.n)])
        other = detect(g2, cfg)
        assert sorted(other.partition.comm_size.tolist()) == sorted(
            base.partition.comm_size.tolist()
        )
        assert other.q_lambda == pytest.approx(base.q_lambda, abs=1e-12)


def test_resolution_parameter_changes_granularity(two_cliques):
    coarse = detect(two_cliques, DetectConfig(seed=1, restarts=4, lam=0.05))
    fine = detect(two_cliques, DetectConfig(seed=1, restarts=4, lam=20.0))
    assert coarse.partition.ell <= fine.partition.ell


def test_config_validation():
    with pytest.raises(ParameterError):
        DetectConfig(seed=1, restarts=0)
    with pytest.raises(ParameterError):
        DetectConfig(seed=1, lam=0.0)
    with pytest.raises(ParameterError):
        DetectConfig(seed=1, max_levels=0)
    with pytest.raises(ParameterError):
        DetectConfig(seed=1, threads=0)
    with pytest.raises(ParameterError):
        DetectConfig(seed=1, min_gain=-1e-9)


def test_best_partition_of_examples(triangle):
    singles = Partition.singletons(triangle)
    whole = Partition.whole(triangle)
    assert best_partition_of(triangle, [singles, whole]) is whole
    assert best_partition_of(triangle, [whole]) is whole
    with pytest.raises(ParameterError):
        best_partition_of(triangle, [])


def test_best_partition_of_prefers_planted():
    spec = GenSpec(
        n=300, s0=0, xi=0.1, seed=5, deg_min=5, deg_max=30,
        size_min=40, size_max=80,
    )
    out = generate(spec)
    g = out.graph
    planted = out.planted_partition()
    rng = np.random.default_rng(17)
    candidates = [planted] + [
        Partition(g, rng.integers(0, planted.ell, size=g.n)) for _ in range(10)
    ]
    assert best_partition_of(g, candidates) is planted


def test_best_partition_of_tie_breaks_by_index(triangle):
    a = Partition.whole(triangle)
    b = Partition.whole(triangle)
    assert best_partition_of(triangle, [a, b]) is a


def test_detected_partition_is_internally_consistent():
    g = random_graph(80, 5.0, 6)
    res = detect(g, DetectConfig(seed=4, restarts=3))
    assert res.partition.caches_consistent(g)
    q = generalized_modularity(g, res.partition, 1.0)
    assert q == pytest.approx(res.q_lambda, abs=1e-12)
