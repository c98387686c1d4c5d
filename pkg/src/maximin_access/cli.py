"""Command-line front end: ``gen``, ``estimate``, ``exact``, ``select`` and ``experiment``.

Errors go to stderr as one line ``error:<category>:<message>``. Exit codes:
0 success, 2 usage, 3 input or parse problem, 4 infeasible request.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, kernels
from .cascade import CascadeConfig, CascadeError, ExactCapExceeded, ExactEvaluator, MonteCarloEvaluator, \
    exact_probabilities, prob_est, write_prob_csv
from .experiments import ConfigError, ExperimentConfig, fmt, run_sweep, write_report
from .fixtures import NAMES, FixtureError, FixtureSpec, generate
from .graph import Graph, GraphError, read_edge_list, write_edge_list
from .seeding import METHODS, SelectionError, select
from .welfare import InfeasibleSearch

PROG = "maximin-access"
EXIT_USAGE, EXIT_INPUT, EXIT_INFEASIBLE = 2, 3, 4


class CliError(Exception):
    def __init__(self, category: str, message: str, code: int):
        super().__init__(message)
        self.category, self.code = category, code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, EXIT_USAGE)


def _formatter(prog):
    # fixed width keeps --help output independent of the terminal
    return argparse.HelpFormatter(prog, width=80, max_help_position=32)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, formatter_class=_formatter,
                     description="Seed selection for maximin access under the independent cascade model.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, formatter_class=_formatter)
        p.add_argument("--threads", type=int, default=0, metavar="N",
                       help="cap worker threads (0 = auto); results do not depend on it")
        return p

    def graph_args(p):
        p.add_argument("-g", "--graph", required=True, metavar="PATH", help="edge-list file")
        p.add_argument("--directed", action="store_true",
                       help="treat edges as directed (also implied by a sidecar JSON)")

    p = add("gen", "Write a fixture graph as an edge list plus a sidecar JSON.")
    p.add_argument("fixture", choices=NAMES, help="fixture name")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="integer fixture parameter, e.g. ell=4 (repeatable)")
    p.add_argument("-o", "--output", required=True, metavar="PATH",
                   help="edge-list path; the sidecar goes next to it with a .json suffix")

    p = add("estimate", "Monte Carlo estimate of each node's probability of being informed.")
    graph_args(p)
    p.add_argument("--alpha", type=float, required=True, metavar="A", help="transmission probability")
    p.add_argument("--reps", type=int, default=1000, metavar="R", help="simulated cascades (default 1000)")
    p.add_argument("--seed-nodes", required=True, metavar="LIST", help="comma-separated seed ids or labels")
    p.add_argument("--rng", type=int, default=0, metavar="SEED", help="master random seed (default 0)")
    p.add_argument("-o", "--output", required=True, metavar="CSV", help="output CSV path")

    p = add("exact", "Exact probabilities by enumerating live-edge graphs (small graphs only).")
    graph_args(p)
    p.add_argument("--alpha", type=float, required=True, metavar="A", help="transmission probability")
    p.add_argument("--seed-nodes", required=True, metavar="LIST", help="comma-separated seed ids or labels")
    p.add_argument("-o", "--output", required=True, metavar="CSV", help="output CSV path")

    p = add("select", "Choose k additional seeds with one heuristic.")
    graph_args(p)
    p.add_argument("--method", required=True, choices=METHODS, help="selection heuristic")
    p.add_argument("-k", type=int, required=True, metavar="K", help="number of seeds to add")
    p.add_argument("--alpha", type=float, required=True, metavar="A", help="transmission probability")
    p.add_argument("--reps", type=int, default=1000, metavar="R",
                   help="cascades per estimate (default 1000)")
    p.add_argument("--rng", type=int, default=0, metavar="SEED", help="master random seed (default 0)")
    p.add_argument("--initial", default="", metavar="LIST", help="comma-separated initial seeds")
    p.add_argument("--exact", action="store_true", help="use the exact oracle instead of Monte Carlo")
    p.add_argument("-o", "--output", required=True, metavar="JSON", help="output JSON path")

    p = add("experiment", "Run a heuristic sweep and write report files.")
    p.add_argument("--config", required=True, metavar="JSON", help="experiment configuration file")
    p.add_argument("-o", "--output", required=True, metavar="DIR", help="report directory")
    return parser


def _sidecar_path(graph_path: str) -> Path:
    return Path(graph_path).with_suffix(".json")


def _load_graph(args) -> tuple[Graph, dict]:
    side = {}
    sp = _sidecar_path(args.graph)
    if sp.exists() and sp != Path(args.graph):
        try:
            side = json.loads(sp.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError("input", f"{sp}: bad sidecar JSON: {exc}", EXIT_INPUT) from None
    directed = bool(args.directed or side.get("directed", False))
    try:
        g = read_edge_list(args.graph, directed)
    except OSError as exc:
        raise CliError("input", f"{args.graph}: {exc.strerror}", EXIT_INPUT) from None
    return g, side


def _resolve(g: Graph, side: dict, text: str) -> list[int]:
    labels = side.get("labels", {})
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        key = labels.get(tok, tok)
        try:
            out.append(g.node_of(key))
        except (KeyError, GraphError, ValueError):
            raise CliError("input", f"unknown node {tok!r}", EXIT_INPUT) from None
    return out


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _cmd_gen(args) -> None:
    params = {}
    for item in args.param:
        key, sep, val = item.partition("=")
        if not sep:
            raise CliError("usage", f"--param expects KEY=VALUE, got {item!r}", EXIT_USAGE)
        try:
            params[key.strip()] = int(val)
        except ValueError:
            raise CliError("usage", f"--param {key} needs an integer value", EXIT_USAGE) from None
    try:
        fx = generate(FixtureSpec(args.fixture, params))
    except FixtureError as exc:
        raise CliError("usage", str(exc), EXIT_USAGE) from None
    _write_text(args.output, write_edge_list(fx.graph))
    side = {
        "schema": 1,
        "fixture": fx.name,
        "params": fx.params,
        "directed": fx.graph.directed,
        "nodes": fx.graph.n,
        "labels": fx.labels,
        "initial": list(fx.initial),
    }
    if fx.k is not None:
        side["k"] = fx.k
    if fx.bipartition is not None:
        side["bipartition"] = {"v": fx.bipartition.v, "v_prime": fx.bipartition.v_prime}
    _write_text(str(_sidecar_path(args.output)), json.dumps(side, indent=2, sort_keys=True) + "\n")


def _cmd_estimate(args) -> None:
    g, side = _load_graph(args)
    seeds = _resolve(g, side, args.seed_nodes)
    probs = prob_est(g, seeds, CascadeConfig(args.alpha, args.reps, args.rng))
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_prob_csv(probs, g, fh)


def _cmd_exact(args) -> None:
    g, side = _load_graph(args)
    seeds = _resolve(g, side, args.seed_nodes)
    probs = exact_probabilities(g, seeds, args.alpha)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_prob_csv(probs, g, fh)


def _cmd_select(args) -> None:
    g, side = _load_graph(args)
    initial = _resolve(g, side, args.initial)
    cfg = CascadeConfig(args.alpha, args.reps, args.rng)
    ev = ExactEvaluator(g, args.alpha) if args.exact else MonteCarloEvaluator(g, cfg)
    res = select(args.method, g, initial, args.k, cfg, evaluator=ev)
    names = {v: k for k, v in side.get("labels", {}).items()}
    doc = {
        "schema": 1,
        "method": res.method,
        "backend": "exact" if args.exact else "monte-carlo",
        "alpha": args.alpha,
        "k": args.k,
        "reps": None if args.exact else args.reps,
        "rng": args.rng,
        "initial": [g.original_ids[v] for v in sorted(set(initial))],
        "added": [g.original_ids[v] for v in res.added],
        "seeds": [g.original_ids[v] for v in res.seeds],
        "per_round_min": [float(fmt(x)) for x in res.per_round_min],
        "evaluations": res.evaluations,
    }
    if names:
        doc["seed_labels"] = [names.get(g.original_ids[v], str(g.original_ids[v])) for v in res.seeds]
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")


def _cmd_experiment(args) -> None:
    try:
        cfg = ExperimentConfig.load(args.config)
    except OSError as exc:
        raise CliError("input", f"{args.config}: {exc.strerror}", EXIT_INPUT) from None
    except (ConfigError, TypeError) as exc:
        raise CliError("input", str(exc), EXIT_INPUT) from None
    try:
        report = run_sweep(cfg)
    except OSError as exc:
        raise CliError("input", f"{cfg.path}: {exc.strerror}", EXIT_INPUT) from None
    write_report(report, args.output)


_COMMANDS = {
    "gen": _cmd_gen,
    "estimate": _cmd_estimate,
    "exact": _cmd_exact,
    "select": _cmd_select,
    "experiment": _cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 0:
            raise CliError("usage", "--threads must be >= 0", EXIT_USAGE)
        kernels.set_threads(args.threads)
        _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error:{exc.category}:{exc}", file=sys.stderr)
        return exc.code
    except (ExactCapExceeded, InfeasibleSearch, SelectionError) as exc:
        print(f"error:infeasible:{exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GraphError, CascadeError, ConfigError) as exc:
        print(f"error:input:{exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
