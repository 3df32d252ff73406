"""
Command-line entry point: `dire-vc <command>`.

Exit codes: 0 success or YES, 1 NO (or a replay that no longer reproduces), 2 usage, input or
parse errors, 3 hard failures (found by `fuzz`, or raised by the pipeline itself).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from dire_vertex_cover.config_loader import get_parameter, load_section
from dire_vertex_cover.graph import (
    GRAPH_FORMATS,
    Graph,
    GraphParseError,
    normalize,
    read_graph,
    to_edgelist,
)
from dire_vertex_cover.harness import (
    Counterexample,
    DifferentialRunner,
    RunMode,
    default_modes,
    exhaustive_source,
    random_source,
    replay_counterexample,
)
from dire_vertex_cover.matching import perturbed_maximum_matching
from dire_vertex_cover.maximal_matching import SELECTION_MODES
from dire_vertex_cover.oracle import exact_mvc, exact_mvc_exhaustive
from dire_vertex_cover.reductions import (
    dire_to_vc,
    read_dire,
    to_simple_connected,
    vc_to_dire,
)
from dire_vertex_cover.solver import SolverConfig, decide, events_to_jsonl, solve, trace

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_HARD_FAILURE = 3


def _load_graph(args: argparse.Namespace) -> Graph:
    raw = read_graph(args.graph, format=args.format)
    graph, report = normalize(raw)
    for line in report.lines():
        logger.info("normalize: %s", line)
    return graph


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig.from_config(
        mode=getattr(args, "mode", None),
        matching_perturbation=getattr(args, "perturbation", None),
    )


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"Saved: {out}")
    else:
        print(text, end="")


def _cmd_decide(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    decision = decide(g, args.k, _solver_config(args))
    if not decision.answer:
        print("NO")
        return EXIT_NO
    print("YES")
    if args.witness and decision.witness is not None:
        print(" ".join(decision.witness.cover_names(g)))
    return EXIT_YES


def _cmd_solve(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    config = _solver_config(args)
    result = solve(g, config, only_seed=args.bfs_seed)
    print(result.size)
    print(" ".join(result.cover_names(g)))
    if args.emit_matching:
        em = perturbed_maximum_matching(g, config.matching_perturbation)
        print(json.dumps([g.names_of(edge) for edge in em.sorted_edges()]))
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    seed = args.bfs_seed if args.bfs_seed is not None else 0
    sys.stdout.write(events_to_jsonl(trace(g, seed, _solver_config(args))))
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    if args.exhaustive:
        print(exact_mvc_exhaustive(g))
    else:
        result = exact_mvc(g)
        print(result.size)
        print(" ".join(result.cover_names(g)))
    return 0


def _cmd_fuzz(args: argparse.Namespace) -> int:
    section = load_section("harness")
    modes = (
        [RunMode(args.mode, p) for p in section.get("matching_perturbations", [0])]
        if args.mode
        else default_modes()
    )
    out_dir = Path(args.out)
    exhaustive = exhaustive_source(args.exhaustive_max)
    runner = DifferentialRunner(modes=modes, out_dir=out_dir, workers=args.workers)

    def instances():
        yield from exhaustive
        yield from random_source(
            args.trials,
            args.random_n,
            args.rng_seed,
            section.get("edge_probability_range", [0.05, 0.6]),
        )

    report = runner.run(instances())
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8"
    )
    runner.outcomes_frame().to_csv(out_dir / "outcomes.csv", index=False)
    print(report.summary())
    print(f"Saved: {out_dir / 'report.json'}")
    return EXIT_HARD_FAILURE if report.hard_failures else 0


def _cmd_reduce(args: argparse.Namespace) -> int:
    if args.kind == "vc2dire":
        instance = vc_to_dire(_load_graph(args), args.k)
        _write_or_print(json.dumps(instance.to_json(), indent=2) + "\n", args.out)
    elif args.kind == "dire2vc":
        raw, k = dire_to_vc(read_dire(args.dire))
        _write_or_print(f"# k={k}\n" + raw.to_edgelist(), args.out)
    elif args.kind == "normalize":
        _write_or_print(to_edgelist(_load_graph(args)), args.out)
    else:
        instance = to_simple_connected(read_graph(args.graph, format=args.format), args.k)
        _write_or_print(f"# k={instance.k_prime}\n" + to_edgelist(instance.graph), args.out)
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    from dire_vertex_cover.scaling import create_charts, median_table, scaling_bench

    report = scaling_bench(
        sizes=args.sizes,
        trials=args.trials,
        edge_probability=args.edge_probability,
        rng_seed=args.rng_seed,
        config=_solver_config(args),
    )
    df = report.samples_frame()
    print(median_table(df).to_string(index=False))
    if report.slope is None:
        print("Log-log slope: undefined")
    else:
        print(f"Log-log slope: {report.slope:.2f}")
    print(f"Polynomial-consistent: {report.polynomial_consistent}")
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        df.to_csv(out_dir / "scaling.csv", index=False)
        if not df.empty:
            create_charts(df, out_dir)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    recorded = Counterexample.read(args.path).classification
    observed = replay_counterexample(args.path)
    print(observed.value)
    return 0 if observed is recorded else EXIT_NO


def _add_graph_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--graph", required=required, help="Graph file")
    parser.add_argument("--format", choices=GRAPH_FORMATS, default="edgelist")


def _add_solver_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=SELECTION_MODES, default=None)
    parser.add_argument("--perturbation", type=int, default=None, help="Matching perturbation id")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dire-vc", description="Matching-guided vertex cover solver and test harness."
    )
    parser.add_argument("--verbose", action="store_true", help="Log progress to stderr")
    # SUPPRESS keeps the top-level value when a subcommand omits the flag.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose", action="store_true", default=argparse.SUPPRESS, help="Log progress to stderr"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help, parents=[common])

    decide_parser = add_command("decide", help="Is there a cover of size <= k?")
    _add_graph_arguments(decide_parser)
    decide_parser.add_argument("--k", type=int, required=True)
    decide_parser.add_argument("--witness", action="store_true", help="Print the cover on YES")
    _add_solver_arguments(decide_parser)

    solve_parser = add_command("solve", help="Print the cover size and the cover.")
    _add_graph_arguments(solve_parser)
    solve_parser.add_argument("--bfs-seed", default=None, help="Only try this seed vertex")
    solve_parser.add_argument("--emit-matching", action="store_true")
    _add_solver_arguments(solve_parser)

    trace_parser = add_command("trace", help="Stream one seed's events as JSON lines.")
    _add_graph_arguments(trace_parser)
    trace_parser.add_argument("--bfs-seed", default=None)
    _add_solver_arguments(trace_parser)

    oracle_parser = add_command("oracle", help="Exact minimum cover size.")
    _add_graph_arguments(oracle_parser)
    oracle_parser.add_argument("--exhaustive", action="store_true")

    fuzz_parser = add_command("fuzz", help="Differential run against the oracle.")
    fuzz_parser.add_argument(
        "--exhaustive-max", type=int, default=get_parameter("harness", "exhaustive_max")
    )
    fuzz_parser.add_argument(
        "--random-n", type=int, default=get_parameter("harness", "random_max_vertices")
    )
    fuzz_parser.add_argument("--trials", type=int, default=get_parameter("harness", "trials"))
    fuzz_parser.add_argument("--rng-seed", type=int, default=get_parameter("harness", "rng_seed"))
    fuzz_parser.add_argument(
        "--out", required=True, help="Directory for report and counterexamples"
    )
    fuzz_parser.add_argument("--workers", type=int, default=1)
    fuzz_parser.add_argument("--mode", choices=SELECTION_MODES, default=None)

    reduce_parser = add_command("reduce", help="Convert between problem encodings.")
    reduce_parser.add_argument(
        "kind", choices=["vc2dire", "dire2vc", "normalize", "simple-connected"]
    )
    _add_graph_arguments(reduce_parser, required=False)
    reduce_parser.add_argument("--dire", help="Committee instance (JSON)")
    reduce_parser.add_argument("--k", type=int, default=0)
    reduce_parser.add_argument("--out", default=None)

    bench_parser = add_command("bench", help="Time solve() across graph sizes.")
    bench_parser.add_argument("--sizes", type=int, nargs="*", default=None)
    bench_parser.add_argument("--trials", type=int, default=None)
    bench_parser.add_argument("--edge-probability", type=float, default=None)
    bench_parser.add_argument("--rng-seed", type=int, default=0)
    bench_parser.add_argument("--out", default=None)
    _add_solver_arguments(bench_parser)

    replay_parser = add_command("replay", help="Re-run a persisted counterexample.")
    replay_parser.add_argument("path")

    return parser


COMMANDS = {
    "decide": _cmd_decide,
    "solve": _cmd_solve,
    "trace": _cmd_trace,
    "oracle": _cmd_oracle,
    "fuzz": _cmd_fuzz,
    "reduce": _cmd_reduce,
    "bench": _cmd_bench,
    "replay": _cmd_replay,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "reduce":
        needs = "dire" if args.kind == "dire2vc" else "graph"
        if getattr(args, needs) is None:
            parser.error(f"reduce {args.kind} needs --{needs}")

    try:
        return COMMANDS[args.command](args)
    except (GraphParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        # LocalMinimizationError, LevelInvariantError, or no seed produced a cover
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HARD_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
