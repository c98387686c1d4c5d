"""Evaluation harness: dataset preparation, heuristic sweeps, correlation and
histogram analyses, timing, and report files.

Every random quantity is derived from ``master_seed`` and the cell's labels, so
two runs of the same config write byte-identical files whatever the thread count.
"""
from __future__ import annotations

import csv
import json
import math
import os
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest, rankdata

from . import __version__
from .cascade import CascadeConfig, prob_est
from .graph import Graph, bfs_hop_distances, degrees, graph_center, largest_scc, max_degree_node, read_edge_list
from .rng import derive_seed
from .seeding import METHODS, SelectionError, select

SCHEMA = 1
UNDEFINED = math.nan  # Spearman of a constant vector


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    """Floats in report files: 9 significant digits."""
    return format(float(x), ".9g")


@dataclass
class ExperimentConfig:
    graph_path: str
    directed: bool = False
    methods: list = field(default_factory=lambda: list(METHODS))
    alphas: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    ks: list = field(default_factory=lambda: [1, 25, 50, 100])
    reps_per_estimate: int = 1000
    repeats: int = 20
    master_seed: int = 0
    eval_factor: int = 10
    bins: int = 20
    timing: bool = False

    def __post_init__(self):
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; expected a subset of {list(METHODS)}")
        if any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ConfigError("every alpha must lie in [0, 1]")
        if any(int(k) != k or k < 1 for k in self.ks):
            raise ConfigError("ks must be positive integers")
        if self.reps_per_estimate < 1 or self.repeats < 1 or self.bins < 1:
            raise ConfigError("reps_per_estimate, repeats and bins must be >= 1")
        if self.eval_factor < 10:
            raise ConfigError("eval_factor must be >= 10")

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path | None = None) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        if "graph_path" not in data:
            raise ConfigError("config needs graph_path")
        cfg = cls(**data)
        if base_dir is not None and not os.path.isabs(cfg.graph_path):
            cfg.resolved_path = str(Path(base_dir) / cfg.graph_path)
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data, Path(path).parent)

    @property
    def path(self) -> str:
        return getattr(self, "resolved_path", self.graph_path)

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class PreparedDataset:
    graph: Graph
    original_nodes: int
    original_edges: int

    @property
    def retained_nodes(self) -> int:
        return self.graph.n

    @property
    def retained_edges(self) -> int:
        return self.graph.num_edges


def prepare_dataset(path: str | Path, directed: bool) -> PreparedDataset:
    """Load an edge list and keep its largest strongly connected component."""
    full = read_edge_list(path, directed)
    core, _ = largest_scc(full)
    return PreparedDataset(core, full.n, full.num_edges)


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties; ``nan`` if either side is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("spearman needs two equal-length vectors of length >= 2")
    rx = rankdata(x) - (x.size + 1) / 2.0
    ry = rankdata(y) - (y.size + 1) / 2.0
    sxx = math.fsum(rx * rx)
    syy = math.fsum(ry * ry)
    if sxx == 0.0 or syy == 0.0:
        return UNDEFINED
    rho = math.fsum(rx * ry) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def position_axes(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Degree and undirected hop distance from the graph center, per node."""
    return degrees(g), bfs_hop_distances(g, [graph_center(g)], treat_as_undirected=True)


def position_correlations(g: Graph, final_probs, baseline_probs,
                          axes: tuple[np.ndarray, np.ndarray] | None = None) -> tuple[float, float, float]:
    """Spearman of final probabilities against baseline probabilities, degree, and distance from the center."""
    deg, dist = position_axes(g) if axes is None else axes
    return (spearman(final_probs, baseline_probs), spearman(final_probs, deg),
            spearman(final_probs, dist))


def probability_histogram(probs, bins: int = 20) -> np.ndarray:
    """Counts over equal-width bins of [0, 1]; the last bin is closed on the right."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts, _ = np.histogram(np.asarray(probs, dtype=np.float64), bins=bins, range=(0.0, 1.0))
    return counts


def sign_test(wins: int, losses: int) -> float:
    """One-sided p-value that wins outnumber losses (ties are dropped beforehand)."""
    if wins + losses == 0:
        return 1.0
    return float(binomtest(wins, wins + losses, 0.5, alternative="greater").pvalue)


@dataclass
class Trial:
    method: str
    alpha: float
    k: int
    trial: int
    seeds: tuple
    min_prob: float
    reach: float
    seconds: float
    correlations: tuple
    histogram: np.ndarray


@dataclass
class Skipped:
    method: str
    alpha: float
    k: int
    reason: str


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    dataset: PreparedDataset
    trials: list
    skipped: list

    def cell(self, method: str, alpha: float, k: int) -> list:
        return [t for t in self.trials if (t.method, t.alpha, t.k) == (method, alpha, k)]

    def summary(self) -> list[dict]:
        rows = []
        seen = []
        for t in self.trials:
            key = (t.method, t.alpha, t.k)
            if key not in seen:
                seen.append(key)
        for method, alpha, k in seen:
            ts = self.cell(method, alpha, k)
            mins = [t.min_prob for t in ts]
            reach = [t.reach for t in ts]
            secs = [t.seconds for t in ts]
            rows.append({
                "method": method, "alpha": alpha, "k": k, "trials": len(ts),
                "min_prob_mean": math.fsum(mins) / len(ts), "min_prob_std": statistics.pstdev(mins),
                "reach_mean": math.fsum(reach) / len(ts), "reach_std": statistics.pstdev(reach),
                "seconds_mean": math.fsum(secs) / len(ts),
            })
        return rows


def _select_seed(cfg: ExperimentConfig, method: str, alpha: float, k: int, trial: int) -> int:
    return derive_seed(cfg.master_seed, "select", method, alpha, k, trial)


def _eval_seed(cfg: ExperimentConfig, alpha: float, k: int, trial: int) -> int:
    # shared by all methods so their final estimates use common random numbers
    return derive_seed(cfg.master_seed, "evaluate", alpha, k, trial)


def run_sweep(cfg: ExperimentConfig, dataset: PreparedDataset | None = None) -> ExperimentReport:
    """Select, re-evaluate and analyze every (method, alpha, k, trial) cell."""
    ds = dataset if dataset is not None else prepare_dataset(cfg.path, cfg.directed)
    g = ds.graph
    axes = position_axes(g)
    eval_reps = cfg.eval_factor * cfg.reps_per_estimate
    hub = max_degree_node(g)
    baselines = {a: prob_est(g, [hub], CascadeConfig(a, eval_reps, derive_seed(cfg.master_seed, "baseline", a)))
                 for a in cfg.alphas}
    trials, skipped = [], []
    for method in cfg.methods:
        for alpha in cfg.alphas:
            for k in cfg.ks:
                if k > g.n:
                    skipped.append(Skipped(method, alpha, k, f"k={k} exceeds {g.n} retained nodes"))
                    continue
                for trial in range(cfg.repeats):
                    try:
                        trials.append(_run_cell(cfg, g, method, alpha, k, trial, eval_reps,
                                                baselines[alpha], axes))
                    except (SelectionError, ValueError) as exc:
                        skipped.append(Skipped(method, alpha, k, f"trial {trial}: {exc}"))
                        break
    return ExperimentReport(cfg, ds, trials, skipped)


def _run_cell(cfg, g, method, alpha, k, trial, eval_reps, baseline, axes) -> Trial:
    sel_cfg = CascadeConfig(alpha, cfg.reps_per_estimate, _select_seed(cfg, method, alpha, k, trial))
    res = select(method, g, [], k, sel_cfg, track=False)
    probs = prob_est(g, res.seeds, CascadeConfig(alpha, eval_reps, _eval_seed(cfg, alpha, k, trial)))
    corr = position_correlations(g, probs, baseline, axes)
    return Trial(method, alpha, k, trial, tuple(g.original_ids[v] for v in res.seeds),
                 float(probs.min()), math.fsum(probs) / g.n, res.wall_time, corr,
                 probability_histogram(probs, cfg.bins))


def timing_table(cfg: ExperimentConfig, dataset: PreparedDataset | None = None,
                 alpha: float | None = None, k: int | None = None) -> dict[str, float]:
    """Mean selection wall time per method over ``cfg.repeats`` runs (largest k, first alpha by default)."""
    ds = dataset if dataset is not None else prepare_dataset(cfg.path, cfg.directed)
    g = ds.graph
    alpha = cfg.alphas[0] if alpha is None else alpha
    k = min(max(cfg.ks), g.n) if k is None else k
    table = {}
    for method in cfg.methods:
        times = []
        for trial in range(cfg.repeats):
            sel_cfg = CascadeConfig(alpha, cfg.reps_per_estimate, _select_seed(cfg, method, alpha, k, trial))
            times.append(select(method, g, [], k, sel_cfg, track=False).wall_time)
        table[method] = math.fsum(times) / len(times)
    return table


def _writer(path: Path):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_report(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Write sweep.csv, summary.csv, correlations.csv, histogram.csv and report.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = report.config
    paths = []

    def seconds(x):
        return fmt(x) if cfg.timing else ""

    fh, w = _writer(out / "sweep.csv")
    with fh:
        w.writerow(["method", "alpha", "k", "trial", "min_prob", "reach", "seconds"])
        for t in report.trials:
            w.writerow([t.method, fmt(t.alpha), t.k, t.trial, fmt(t.min_prob), fmt(t.reach), seconds(t.seconds)])
    paths.append(out / "sweep.csv")

    fh, w = _writer(out / "summary.csv")
    with fh:
        w.writerow(["method", "alpha", "k", "trials", "min_prob_mean", "min_prob_std",
                    "reach_mean", "reach_std", "seconds_mean"])
        for r in report.summary():
            w.writerow([r["method"], fmt(r["alpha"]), r["k"], r["trials"], fmt(r["min_prob_mean"]),
                        fmt(r["min_prob_std"]), fmt(r["reach_mean"]), fmt(r["reach_std"]),
                        seconds(r["seconds_mean"])])
    paths.append(out / "summary.csv")

    fh, w = _writer(out / "correlations.csv")
    with fh:
        w.writerow(["method", "alpha", "k", "trial", "rho_baseline", "rho_degree", "rho_center_distance"])
        for t in report.trials:
            w.writerow([t.method, fmt(t.alpha), t.k, t.trial] + [fmt(c) for c in t.correlations])
    paths.append(out / "correlations.csv")

    fh, w = _writer(out / "histogram.csv")
    with fh:
        w.writerow(["method", "alpha", "k", "trial", "bin", "lower", "upper", "count"])
        for t in report.trials:
            for b, count in enumerate(t.histogram):
                w.writerow([t.method, fmt(t.alpha), t.k, t.trial, b, fmt(b / cfg.bins),
                            fmt((b + 1) / cfg.bins), int(count)])
    paths.append(out / "histogram.csv")

    manifest = {
        "schema": SCHEMA,
        "software": {"name": "maximin-access", "version": __version__},
        "config": cfg.echo(),
        "dataset": {
            "original_nodes": report.dataset.original_nodes,
            "original_edges": report.dataset.original_edges,
            "retained_nodes": report.dataset.retained_nodes,
            "retained_edges": report.dataset.retained_edges,
        },
        "evaluation": {
            "reps": cfg.eval_factor * cfg.reps_per_estimate,
            "note": "final seed sets are re-estimated on streams independent of selection",
        },
        "seeds": [{"method": t.method, "alpha": fmt(t.alpha), "k": t.k, "trial": t.trial,
                   "seeds": list(t.seeds)} for t in report.trials],
        "skipped": [asdict(s) | {"alpha": fmt(s.alpha)} for s in report.skipped],
        "files": [p.name for p in paths],
    }
    with open(out / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(out / "report.json")
    return paths
