import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maximin_access import fixtures
from maximin_access.cascade import CascadeConfig, ExactEvaluator, MonteCarloEvaluator
from maximin_access.graph import Graph
from maximin_access.seeding import (METHODS, SelectionError, gonzalez, greedy_maximin, minimax_distance_seeds,
                                    myopic, naive_myopic, random_seeds, reach_greedy, select)

from conftest import small_graphs

CFG = CascadeConfig(0.3, 400, 5)


def exact(g, a=0.5):
    return ExactEvaluator(g, a)


def two_nodes():
    return Graph.from_edges(2, [], directed=False)


@pytest.mark.parametrize("method", METHODS)
def test_size_and_rounds(method):
    g = fixtures.h_composite(6).graph
    res = select(method, g, [0], 3, CFG)
    assert len(res.seeds) == 4 and 0 in res.seeds and len(res.added) == 3
    assert len(res.per_round_min) == 3
    assert all(0.0 <= x <= 1.0 for x in res.per_round_min)


@pytest.mark.parametrize("method", METHODS)
def test_empty_initial_counts_auto_seed(method):
    g = fixtures.path(8).graph
    assert len(select(method, g, [], 3, CFG).seeds) == 3


@pytest.mark.parametrize("method", METHODS)
def test_k_too_large(method):
    with pytest.raises(SelectionError):
        select(method, fixtures.path(4).graph, [0], 4, CFG)


def test_greedy_path_center_with_exact():
    g = fixtures.path(10).graph
    res = greedy_maximin(g, [], 1, evaluator=exact(g), first_seed="evaluate")
    assert res.seeds == (4,)
    deg_rule = greedy_maximin(g, [], 1, evaluator=exact(g))
    assert deg_rule.seeds == (1,)


def test_greedy_two_nodes_and_fig3():
    g = two_nodes()
    assert greedy_maximin(g, [0], 1, evaluator=exact(g)).added == (1,)
    fx = fixtures.greed_is_bad(4)
    res = greedy_maximin(fx.graph, fx.initial, 1, evaluator=exact(fx.graph, 0.3))
    assert res.added == (fx.labels["t"],) and res.per_round_min[0] >= 0.09


@pytest.mark.parametrize("fx", fixtures.all_small(10), ids=lambda f: f"{f.name}{f.params}")
def test_greedy_exact_per_round_min_nondecreasing(fx):
    g = fx.graph
    k = min(3, g.n - len(fx.initial))
    res = greedy_maximin(g, fx.initial, k, evaluator=exact(g, 0.4))
    assert all(b >= a - 1e-12 for a, b in zip(res.per_round_min, res.per_round_min[1:]))


def test_myopic_examples():
    fx = fixtures.greed_is_bad(4)
    res = myopic(fx.graph, fx.initial, 1, evaluator=exact(fx.graph, 0.3))
    assert res.added == (fx.labels["v1"],)
    assert res.per_round_min[0] == pytest.approx(0.3 ** 5, abs=1e-15)
    g = two_nodes()
    assert myopic(g, [0], 1, evaluator=exact(g)).added == (1,)
    star = fixtures.star(5).graph
    assert myopic(star, [], 1, CFG).seeds == (0,)


def test_naive_myopic_examples():
    p = fixtures.path(5).graph
    assert naive_myopic(p, [2], 2, evaluator=exact(p)).added == (0, 4)
    pairs = Graph.from_edges(4, [(0, 1), (2, 3)], directed=False)
    assert set(naive_myopic(pairs, [0], 2, evaluator=exact(pairs)).added) == {2, 3}
    assert set(naive_myopic(pairs, [0], 2, CFG).added) == {2, 3}


@given(small_graphs(min_n=2, max_n=30, max_edges=60), st.integers(0, 1000), st.booleans())
@settings(max_examples=100, deadline=None)
def test_myopic_equals_naive_for_k1(g, seed, with_initial):
    cfg = CascadeConfig(0.3, 50, seed)
    initial = [0] if with_initial else []
    assert myopic(g, initial, 1, cfg).seeds == naive_myopic(g, initial, 1, cfg).seeds


def test_gonzalez_examples():
    p = fixtures.path(10).graph
    assert gonzalez(p, [0], 1).added == (9,)
    assert gonzalez(p, [0, 9], 1).added == (4,)
    two = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)], directed=False)
    assert gonzalez(two, [0], 1).added[0] in (3, 4)
    assert gonzalez(fixtures.star(4).graph, [], 1).seeds == (0,)


def test_gonzalez_directed_uses_undirected_view():
    g = Graph.from_edges(4, [(1, 0), (2, 1), (3, 2)], directed=True)
    assert gonzalez(g, [0], 1).added == (3,)


def test_random_examples():
    g = fixtures.path(6).graph
    assert random_seeds(g, [1], 5, 3).seeds == tuple(range(6))
    assert random_seeds(g, [1], 2, 42).seeds == random_seeds(g, [1], 2, 42).seeds
    pair = Graph.from_edges(3, [(0, 1), (1, 2)], directed=False)
    gen = np.random.default_rng(2024)
    counts = {1: 0, 2: 0}
    for _ in range(10_000):
        counts[random_seeds(pair, [0], 1, gen, track=False).added[0]] += 1
    assert abs(counts[1] - 5000) <= 300 and abs(counts[2] - 5000) <= 300


def test_reach_greedy_examples():
    star = fixtures.star(6).graph
    assert reach_greedy(star, [], 1, CFG).seeds == (0,)
    assert reach_greedy(star, [], 1, evaluator=exact(star)).seeds == (0,)
    fx = fixtures.fig2()
    res = reach_greedy(fx.graph, fx.initial, 1, evaluator=exact(fx.graph, 0.3))
    assert res.added == (1,)
    assert reach_greedy(star, [2], 0, CFG).seeds == (2,)


@given(small_graphs(min_n=2, max_n=25, max_edges=50), st.integers(0, 10**6), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_celf_equals_plain_greedy(g, seed, k):
    k = min(k, g.n - 1)
    cfg = CascadeConfig(0.35, 60, seed)
    lazy = reach_greedy(g, [0], k, cfg, lazy=True)
    plain = reach_greedy(g, [0], k, cfg, lazy=False)
    assert lazy.added == plain.added


def test_celf_saves_evaluations():
    g = fixtures.star_imbalance(10).graph
    cfg = CascadeConfig(0.2, 200, 1)
    lazy = reach_greedy(g, [], 5, cfg, track=False)
    plain = reach_greedy(g, [], 5, cfg, lazy=False, track=False)
    assert lazy.added == plain.added and lazy.evaluations < plain.evaluations


def test_selection_deterministic():
    g = fixtures.h_composite(8).graph
    a = greedy_maximin(g, [], 3, CFG)
    b = greedy_maximin(g, [], 3, CFG)
    assert a.seeds == b.seeds and a.per_round_min == b.per_round_min


def test_minimax_distance_seeds():
    assert minimax_distance_seeds(fixtures.path(7).graph, [], 1) == (3,)
    assert minimax_distance_seeds(fixtures.path(9).graph, [], 2) == (1, 6)
    fx = fixtures.h_composite(8)
    assert minimax_distance_seeds(fx.graph, [], 1) == (fx.labels["s"],)


def test_unknown_method():
    with pytest.raises(SelectionError):
        select("tim+", fixtures.path(3).graph, [], 1, CFG)
