"""Command-line interface: run experiment grids, inspect dataset stats,
enumerate cliques, and fit an ERGM to a dataset."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .config import ExperimentConfig, load_config
from .ergm import ErgmSpec, fit_mple, fit_report
from .errors import MisslinkError
from .graph import core_k, graph_stats
from .hypergraph import maximal_cliques
from .registry import registry_load


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="misslink",
        description="Missing-interaction benchmarks on small social graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment grid")
    run_p.add_argument("--config", help="INI manifest; flags override it")
    run_p.add_argument("--datasets", nargs="+", help="registry keys or paths")
    run_p.add_argument("--methods", nargs="+")
    run_p.add_argument("--rho", nargs="+", type=float)
    run_p.add_argument("--mechanism", choices=["mcar", "mnar"])
    run_p.add_argument("--trials", type=int)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--out", help="output directory (default: results)")
    run_p.add_argument("--chart", action="store_true",
                       help="also write an SVG bar chart of mean AUC")

    st_p = sub.add_parser("stats", help="print summary statistics")
    st_p.add_argument("--dataset", required=True, help="registry key or path")

    cl_p = sub.add_parser("cliques", help="print maximal cliques")
    cl_p.add_argument("--dataset", required=True)
    cl_p.add_argument("--min-size", type=int, default=1)

    fe_p = sub.add_parser("fit-ergm", help="fit an ERGM by pseudolikelihood")
    fe_p.add_argument("--dataset", required=True)
    fe_p.add_argument("--core", type=int, default=100,
                      help="restrict to the k highest-activity nodes when "
                           "the graph has more than 1000 nodes")
    fe_p.add_argument("--tau-d", type=float, default=0.5)
    fe_p.add_argument("--tau-e", type=float, default=0.5)
    return parser


def _cmd_run(args) -> int:
    from .experiment import run_experiment, summarize
    if args.config:
        cfg = load_config(args.config)
    else:
        if not args.datasets:
            raise MisslinkError("run needs --config or --datasets")
        cfg = ExperimentConfig(datasets=list(args.datasets))
    if args.datasets:
        cfg.datasets = list(args.datasets)
    if args.methods:
        cfg.methods = list(args.methods)
    if args.rho:
        cfg.rhos = list(args.rho)
    if args.mechanism:
        cfg.mechanism = args.mechanism.upper()
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.out_dir = args.out
    if args.chart:
        cfg.chart = True
    _trials, agg = run_experiment(cfg, write=True)
    sys.stdout.write(summarize(agg))
    return 0


def _cmd_stats(args) -> int:
    g, _ = registry_load(args.dataset)
    st = graph_stats(g)
    print("dataset,nodes,edges,density,triangles")
    nodes, edges, density, triangles = st.table_row()
    print(f"{args.dataset},{nodes},{edges},{density},{triangles}")
    return 0


def _cmd_cliques(args) -> int:
    g, _ = registry_load(args.dataset)
    for c in maximal_cliques(g):
        if len(c) >= args.min_size:
            print(",".join(g.labels[i] for i in c))
    return 0


def _cmd_fit_ergm(args) -> int:
    g, volumes = registry_load(args.dataset)
    if g.n > 1000:
        g = core_k(g, volumes, args.core)
    fit = fit_mple(g, ErgmSpec(tau_d=args.tau_d, tau_e=args.tau_e))
    sys.stdout.write(fit_report(fit))
    return 0


_COMMANDS = {"run": _cmd_run, "stats": _cmd_stats, "cliques": _cmd_cliques,
             "fit-ergm": _cmd_fit_ergm}


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except (MisslinkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
