"""Command-line front end: run experiments, sweep step sizes, inspect operators.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    ExperimentError,
    emit_csv,
    load_config,
    ratio_curve,
    run_experiment,
    sweep_step_size,
)
from .pauli import exact_bounds, parse_pauli_sum
from .problems import random_graph, write_graph


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; route them to the config path.
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="vqaopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a config file")
    run.add_argument("config", help="experiment config file (key = value lines)")
    run.add_argument("--out", help="override out_dir from the config")

    sweep = sub.add_parser("sweep", help="repeat an experiment over several step sizes")
    sweep.add_argument("config")
    sweep.add_argument("--etas", required=True, help="comma-separated step sizes, e.g. 0.01,0.1")
    sweep.add_argument("--out", help="override out_dir from the config")

    bounds = sub.add_parser("bounds", help="print exact bounds of a Pauli-sum file")
    bounds.add_argument("hamiltonian", help="operator file in Pauli-sum text format")

    gen = sub.add_parser("gen-graph", help="write a seeded random graph file")
    gen.add_argument("--vertices", type=int, required=True)
    gen.add_argument("--edge-prob", type=float, default=0.5)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    return parser


def _print_summary(label: str, aggregate) -> None:
    summary = aggregate.summary()
    print(f"[{label}] seeds={summary['n_seeds']} failures={summary['n_failures']}")
    print(f"[{label}] mean best energy = {summary['mean_best_energy']:.6f}")
    if "mean_best_ratio" in summary:
        print(f"[{label}] mean best ratio = {summary['mean_best_ratio']:.4f}")
        reached = summary["mean_evals_to_threshold"]
        shown = f"{reached:.1f}" if reached is not None else "never"
        print(
            f"[{label}] evals to r>={summary['threshold']}: {shown}"
            f" (reach fraction {summary['reach_fraction']:.2f})"
        )


def _cmd_run(args) -> int:
    config = load_config(args.config)
    out_dir = Path(args.out or config.out_dir)
    aggregate = run_experiment(config)
    emit_csv(aggregate.records, out_dir / "trajectories.csv")
    emit_csv(aggregate, out_dir / "aggregate.csv")
    _print_summary(config.optimizer.name, aggregate)
    print(f"wrote {out_dir / 'trajectories.csv'} and {out_dir / 'aggregate.csv'}")
    return 0


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    try:
        etas = [float(x) for x in args.etas.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --etas value {args.etas!r}: {exc}") from exc
    if not etas:
        raise ConfigError("--etas must name at least one step size")
    out_dir = Path(args.out or config.out_dir)
    results = sweep_step_size(config, etas)
    for eta, aggregate in results.items():
        sub = out_dir / f"eta_{eta:g}"
        emit_csv(aggregate.records, sub / "trajectories.csv")
        emit_csv(aggregate, sub / "aggregate.csv")
        if aggregate.exact_bounds is not None:
            steps, ratios = ratio_curve(aggregate)
            sub.mkdir(parents=True, exist_ok=True)
            with (sub / "ratio_curve.csv").open("w") as fh:
                fh.write("step,ratio_mean\n")
                for step, ratio in zip(steps, ratios):
                    fh.write(f"{int(step)},{float(ratio)!r}\n")
        _print_summary(f"{config.optimizer.name} eta={eta:g}", aggregate)
    return 0


def _cmd_bounds(args) -> int:
    path = Path(args.hamiltonian)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    n_qubits = None
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            n_qubits = len(line.split()[-1])
            break
    if n_qubits is None:
        raise ConfigError(f"{path}: no operator terms found")
    observable = parse_pauli_sum(text, n_qubits)
    e_min, e_max = exact_bounds(observable)
    print(f"E_min {e_min!r}")
    print(f"E_max {e_max!r}")
    return 0


def _cmd_gen_graph(args) -> int:
    if args.vertices < 2:
        raise ConfigError("--vertices must be at least 2")
    if not 0.0 < args.edge_prob <= 1.0:
        raise ConfigError("--edge-prob must lie in (0, 1]")
    graph = random_graph(args.vertices, args.edge_prob, args.seed)
    write_graph(graph, args.out)
    print(f"wrote {args.out}: {graph.n_vertices} vertices, {len(graph.edges)} edges")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "bounds": _cmd_bounds,
    "gen-graph": _cmd_gen_graph,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ExperimentError, OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
