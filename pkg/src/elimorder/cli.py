"""Command-line front end.

Exit status is 0 on success, 2 when some input failed (other inputs are
still processed), and 1 for bad options or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bounds, ilp, preprocess
from .dag import Dag
from .errors import ConfigError, ElimError, InvalidParams
from .exact import bnb_ove, exact_mec
from .experiment import METHODS, RunConfig, load_graph, parse_family, run_experiment
from .formats import write_dot, write_edgelist
from .stochastic import AUTO, McmcParams, Move, SaParams, Start

EXIT_OK, EXIT_CONFIG, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise ConfigError(message)


def _global_options(parser: argparse.ArgumentParser, defaults: bool) -> None:
    # Registered on the top-level parser and on every subcommand so the flags
    # may appear on either side of the subcommand name.
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", choices=["csv", "json", "markdown", "text"], default=d("csv"))
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes for `run`")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized methods")


def _temp(text: str) -> float | str:
    return AUTO if text == AUTO else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elimorder", description="Vertex-elimination orders for DAGs.")
    _global_options(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_options(p, defaults=False)
        return p

    run = command("run", help="run heuristics on graphs and tabulate the results")
    run.add_argument("inputs", nargs="+", help="graph files (.txt edge list, .dot) or family specs")
    group = run.add_mutually_exclusive_group(required=True)
    group.add_argument("--rule", action="append", dest="rules", metavar="NAME", help=f"one of {', '.join(METHODS)}")
    group.add_argument("--all", action="store_true", help="every deterministic heuristic")
    run.add_argument("--exact", action="store_true", help="add ratios against exact optima")
    run.add_argument("--budget", type=int, default=10**8, help="node budget for the exact search")
    run.add_argument("--mec-limit", type=int, default=22, help="largest internal count for exact edge minimization")
    run.add_argument("--iters", type=int, default=20000)
    run.add_argument("--cooling", type=float, default=0.999)
    run.add_argument("--temp", type=_temp, default=1.0, help="initial annealing temperature or 'auto'")
    run.add_argument("--moves", choices=[m.value for m in Move], default=Move.ADJACENT_SWAP.value)
    run.add_argument("--start", choices=[s.value for s in Start], default=Start.FORWARD.value)
    run.add_argument("--restarts", type=int, default=1)
    run.add_argument("--mcmc-temp", type=float, default=1.0, help="temperature of the subset chain")

    exact = command("exact", help="solve one graph exactly")
    exact.add_argument("input")
    exact.add_argument("--problem", choices=["ove", "mec"], default="ove")
    exact.add_argument("--budget", type=int, default=10**8)
    exact.add_argument("--limit", type=int, default=22, help="largest internal count accepted for mec")

    b = command("bounds", help="print lower bounds")
    b.add_argument("input")

    pre = command("preprocess", help="apply safe eliminations; residual graph to stdout, log to stderr")
    pre.add_argument("input")
    pre.add_argument("--out", type=Path, help="write the residual graph here instead of stdout")
    pre.add_argument("--log", type=Path, help="write the JSON log here instead of stderr")

    model = command("ilp", help="write an LP file")
    model.add_argument("input")
    model.add_argument("--problem", choices=["ove", "mec"], default="ove")
    model.add_argument("--variant", choices=[v.value for v in ilp.Variant], default="vC")
    model.add_argument("--out", type=Path, help="LP file path (default stdout)")

    check = command("ilp-check", help="validate a solver's solution against the model")
    check.add_argument("input")
    check.add_argument("--problem", choices=["ove", "mec"], default="ove")
    check.add_argument("--variant", choices=[v.value for v in ilp.Variant], default="vC")
    check.add_argument("--solution", type=Path, required=True)

    gen = command("gen", help="generate a graph family as an edge list")
    gen.add_argument("--family", required=True, help="evolution, tightness, middleout-hard, ove-gap, mec-gap")
    gen.add_argument("--params", default="", help="comma-separated key=value, e.g. p=4,q=2,steps=2")

    conv = command("convert", help="convert between edge list and DOT")
    conv.add_argument("input")
    conv.add_argument("--to", choices=["edgelist", "dot"], default="dot")
    return parser


def _emit(text: str, out: Path | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _build_model(dag: Dag, args) -> ilp.IlpModel:
    if args.problem == "mec":
        return ilp.build_mec_ilp(dag)
    return ilp.build_ove_ilp(dag, args.variant)


def _cmd_run(args) -> int:
    methods = [m for m in METHODS if m not in ("SA", "MC2")] if args.all else args.rules
    cfg = RunConfig(
        inputs=args.inputs,
        methods=methods,
        exact=args.exact,
        exact_budget=args.budget,
        mec_limit=args.mec_limit,
        sa=SaParams(
            iterations=args.iters,
            initial_temp=args.temp,
            cooling=args.cooling,
            moves=Move(args.moves),
            seed=args.seed,
            start=Start(args.start),
            restarts=args.restarts,
        ),
        mcmc=McmcParams(iterations=args.iters, temperature=args.mcmc_temp, seed=args.seed),
        jobs=args.jobs,
    )
    table = run_experiment(cfg)
    sys.stdout.write(table.render(args.format))
    for row in table.rows:
        if row.error:
            print(f"{row.graph}: {row.error}", file=sys.stderr)
    return EXIT_INPUT if table.failed else EXIT_OK


def _cmd_exact(args) -> int:
    _, dag = load_graph(args.input)
    if args.problem == "ove":
        res = bnb_ove(dag, budget=args.budget)
    else:
        res = exact_mec(dag, limit=args.limit, budget=args.budget)
    witness = [dag.labels[v] for v in res.witness]
    payload = {
        "problem": args.problem,
        "status": res.status.value,
        "objective": res.objective,
        "nodes_explored": res.nodes_explored,
        "witness": witness,
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key}={' '.join(value) if isinstance(value, list) else value}")
    return EXIT_OK if res.optimal else EXIT_INPUT


def _cmd_bounds(args) -> int:
    _, dag = load_graph(args.input)
    data = bounds.report(dag).as_dict()
    if args.format == "json":
        print(json.dumps(data, indent=2))
        return EXIT_OK
    for key, value in data.items():
        if isinstance(value, dict):
            value = json.dumps(value, separators=(",", ":"))
        print(f"{key}={value}")
    print(json.dumps(data, separators=(",", ":")))
    return EXIT_OK


def _cmd_preprocess(args) -> int:
    _, dag = load_graph(args.input)
    log = preprocess.reduce(dag)
    _emit(write_edgelist(log.residual), args.out)
    text = json.dumps(log.as_dict(), indent=2) + "\n"
    if args.log is None:
        sys.stderr.write(text)
    else:
        args.log.write_text(text, encoding="utf-8")
    return EXIT_OK


def _cmd_ilp(args) -> int:
    _, dag = load_graph(args.input)
    _emit(ilp.lp_text(_build_model(dag, args)), args.out)
    return EXIT_OK


def _cmd_ilp_check(args) -> int:
    _, dag = load_graph(args.input)
    model = _build_model(dag, args)
    res = ilp.read_solution(model, args.solution.read_text(encoding="utf-8"))
    base = model.base_graph or model.graph
    print(f"objective={res.objective}")
    print("witness=" + " ".join(base.labels[v] for v in res.witness))
    return EXIT_OK


def _cmd_gen(args) -> int:
    spec = parse_family(f"{args.family}:{args.params}")
    _emit(write_edgelist(spec.build()))
    return EXIT_OK


def _cmd_convert(args) -> int:
    name, dag = load_graph(args.input)
    _emit(write_dot(dag, name) if args.to == "dot" else write_edgelist(dag))
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "exact": _cmd_exact,
    "bounds": _cmd_bounds,
    "preprocess": _cmd_preprocess,
    "ilp": _cmd_ilp,
    "ilp-check": _cmd_ilp_check,
    "gen": _cmd_gen,
    "convert": _cmd_convert,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ElimError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
