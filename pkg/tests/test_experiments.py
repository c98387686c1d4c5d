import json
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import spearmanr

from maximin_access import fixtures
from maximin_access.experiments import (ConfigError, ExperimentConfig, position_correlations, prepare_dataset,
                                        probability_histogram, run_sweep, sign_test, spearman, timing_table,
                                        write_report)
from maximin_access.graph import Graph, write_edge_list


def surrogate(tmp_path, n=60, seed=3):
    """Small clustered power-law graph standing in for an email network."""
    h = nx.powerlaw_cluster_graph(n, 2, 0.3, seed=seed)
    g = Graph.from_edges(n, list(h.edges()), directed=False)
    path = tmp_path / "surrogate.txt"
    path.write_text(write_edge_list(g))
    return path


def test_spearman_examples():
    x = [0.1, 0.5, 0.2, 0.9]
    assert spearman(x, x) == 1.0
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0
    assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)
    assert math.isnan(spearman([1, 2, 3], [5, 5, 5]))
    with pytest.raises(ValueError):
        spearman([1], [1])
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2, 3])


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=2, max_size=40))
@settings(max_examples=200, deadline=None)
def test_spearman_matches_scipy(pairs):
    x, y = map(list, zip(*pairs))
    ours = spearman(x, y)
    if len(set(x)) == 1 or len(set(y)) == 1:
        assert math.isnan(ours)
    else:
        assert ours == pytest.approx(spearmanr(x, y).statistic, abs=1e-12)


def test_histogram_examples():
    assert probability_histogram(np.ones(7)).tolist() == [0] * 19 + [7]
    grid = np.arange(20) * 0.05 + 0.025
    assert probability_histogram(grid).tolist() == [1] * 20
    assert probability_histogram([0.0, 1.0], bins=1).tolist() == [2]
    with pytest.raises(ValueError):
        probability_histogram([0.5], bins=0)


def test_position_correlations():
    g = fixtures.star(5).graph
    p = np.array([1.0, 0.2, 0.3, 0.4, 0.5, 0.6])
    assert position_correlations(g, p, p)[0] == 1.0
    ones = np.ones(g.n)
    assert all(math.isnan(r) for r in position_correlations(g, ones, p))


def test_sign_test():
    assert sign_test(20, 0) < 1e-5
    assert sign_test(10, 10) > 0.5
    assert sign_test(0, 0) == 1.0


def test_prepare_dataset(tmp_path):
    f = tmp_path / "cyc.txt"
    f.write_text("0 1\n1 2\n2 0\n")
    ds = prepare_dataset(f, directed=True)
    assert ds.retained_nodes == 3 and ds.original_nodes == 3
    f.write_text("0 1\n1 2\n")
    ds = prepare_dataset(f, directed=True)
    assert ds.retained_nodes == 1 and ds.original_edges == 2
    f.write_text("0 1\n1 x\n")
    with pytest.raises(ValueError):
        prepare_dataset(f, directed=True)


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig("g.txt", methods=[])
    with pytest.raises(ConfigError):
        ExperimentConfig("g.txt", methods=["tim+"])
    with pytest.raises(ConfigError):
        ExperimentConfig("g.txt", alphas=[1.2])
    with pytest.raises(ConfigError):
        ExperimentConfig("g.txt", repeats=0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"graph_path": "g.txt", "colour": 1})
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"graph_path": "sub/g.txt"}))
    assert ExperimentConfig.load(cfgfile).path == str(tmp_path / "sub" / "g.txt")


def test_sweep_invariants(tmp_path):
    path = surrogate(tmp_path)
    cfg = ExperimentConfig(str(path), methods=["random", "gonzalez", "myopic"], alphas=[0.3], ks=[2, 59, 500],
                           reps_per_estimate=100, repeats=2)
    rep = run_sweep(cfg)
    for t in rep.trials:
        assert t.min_prob <= t.reach
        assert len(t.seeds) == t.k
    assert {s.k for s in rep.skipped} == {500}
    # k = n - 1: the single non-seed neighbours a seed, so its probability is at least alpha up to noise
    for t in rep.cell("random", 0.3, 59):
        assert t.min_prob >= 0.3 - 0.03
    rows = {(r["method"], r["k"]): r for r in rep.summary()}
    assert all(r["min_prob_std"] >= 0 for r in rows.values())


def test_deterministic_method_has_zero_std(tmp_path):
    cfg = ExperimentConfig(str(surrogate(tmp_path)), methods=["gonzalez"], alphas=[0.2], ks=[3],
                           reps_per_estimate=50, repeats=1)
    (row,) = run_sweep(cfg).summary()
    assert row["min_prob_std"] == 0.0 and row["reach_std"] == 0.0


def test_reports_byte_identical(tmp_path):
    cfg = ExperimentConfig(str(surrogate(tmp_path)), methods=["greedy", "naive-myopic", "reach-greedy", "random"],
                           alphas=[0.2, 0.4], ks=[1, 4], reps_per_estimate=60, repeats=2, master_seed=9)
    a, b = tmp_path / "a", tmp_path / "b"
    files_a = write_report(run_sweep(cfg), a)
    write_report(run_sweep(cfg), b)
    for f in files_a:
        assert f.read_bytes() == (b / f.name).read_bytes()
    manifest = json.loads((a / "report.json").read_text())
    assert manifest["schema"] == 1 and manifest["config"]["master_seed"] == 9
    header = (a / "sweep.csv").read_text().splitlines()[0]
    assert header == "method,alpha,k,trial,min_prob,reach,seconds"


def test_timing_table(tmp_path):
    cfg = ExperimentConfig(str(surrogate(tmp_path)), methods=["random", "greedy"], alphas=[0.2], ks=[5],
                           reps_per_estimate=50, repeats=2)
    table = timing_table(cfg)
    assert set(table) == {"random", "greedy"} and table["random"] < table["greedy"]


def test_timing_column_opt_in(tmp_path):
    cfg = ExperimentConfig(str(surrogate(tmp_path)), methods=["random"], alphas=[0.2], ks=[2],
                           reps_per_estimate=20, repeats=1, timing=True)
    write_report(run_sweep(cfg), tmp_path / "t")
    row = (tmp_path / "t" / "sweep.csv").read_text().splitlines()[1]
    assert float(row.rsplit(",", 1)[1]) >= 0
