"""Command-line interface: learn, synth, and measure subcommands.

Exit codes: 0 success, 1 validation or I/O error, 2 internal invariant
violation.  All randomness flows from the --seed / --tie-seed flags.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .algebra import generate_synthetic, load_synthetic_spec
from .dataset import column_ranks, load_dataset
from .empirical import default_lattice_order
from .measures import mutual_info_cell, mutual_info_kde, spearman_rho
from .structure import DependenceTree, learn_structure

__all__ = ["main", "build_parser", "RunConfig", "tree_as_dict", "tree_as_dot"]

_MEASURE_FLAGS = {"rho": "rho_abs", "mi-cell": "mi_cell", "mi-kde": "mi_kde"}


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation; exactly one command with its options."""

    command: str
    input_path: str | None = None
    spec_path: str | None = None
    output_path: str | None = None
    json_path: str | None = None
    dot_path: str | None = None
    measure: str = "mi_cell"
    lattice_order: int = 0
    seed: int | None = None
    tie_seed: int = 0
    pair: tuple[str, str] | None = None

    def __post_init__(self):
        if self.command not in ("learn", "synth", "measure"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.lattice_order < 0:
            raise ValueError("lattice order must be 0 (auto) or >= 2")
        if self.lattice_order == 1:
            raise ValueError("lattice order must be 0 (auto) or >= 2")
        if self.seed is not None and self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coptree",
        description=(
            "Rank-based dependence analysis: pairwise copula measures and "
            "maximum spanning dependence trees."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="learn a dependence tree from a CSV file")
    learn.add_argument("--input", required=True, help="input CSV path")
    learn.add_argument(
        "--measure", choices=sorted(_MEASURE_FLAGS), default="mi-cell"
    )
    learn.add_argument(
        "--lattice-order", type=int, default=0,
        help="copula grid resolution K (0 = auto, about 20 samples per cell)",
    )
    learn.add_argument("--json", help="write the tree as JSON to this path")
    learn.add_argument("--dot", help="write the tree as DOT to this path")
    learn.add_argument(
        "--tie-seed", type=int, default=0,
        help="seed for randomized rank tie order (default 0)",
    )

    synth = sub.add_parser("synth", help="generate a synthetic CSV dataset")
    synth.add_argument("--spec", required=True, help="synthetic-spec JSON path")
    synth.add_argument("--output", required=True, help="output CSV path")
    synth.add_argument(
        "--seed", type=int, default=None,
        help="override the seed recorded in the spec file",
    )

    measure = sub.add_parser("measure", help="one pairwise dependence value")
    measure.add_argument("--input", required=True, help="input CSV path")
    measure.add_argument("--pair", required=True, help="two column names: A,B")
    measure.add_argument(
        "--measure", choices=sorted(_MEASURE_FLAGS), default="rho"
    )
    measure.add_argument("--lattice-order", type=int, default=0)
    measure.add_argument("--tie-seed", type=int, default=0)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "learn":
        return RunConfig(
            command="learn",
            input_path=args.input,
            measure=_MEASURE_FLAGS[args.measure],
            lattice_order=args.lattice_order,
            json_path=args.json,
            dot_path=args.dot,
            tie_seed=args.tie_seed,
        )
    if args.command == "synth":
        return RunConfig(
            command="synth",
            spec_path=args.spec,
            output_path=args.output,
            seed=args.seed,
        )
    parts = tuple(name.strip() for name in args.pair.split(","))
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"--pair expects two column names, got {args.pair!r}")
    if parts[0] == parts[1]:
        raise ValueError(f"--pair must name two distinct columns, got {args.pair!r}")
    return RunConfig(
        command="measure",
        input_path=args.input,
        pair=parts,
        measure=_MEASURE_FLAGS[args.measure],
        lattice_order=args.lattice_order,
        tie_seed=args.tie_seed,
    )


def tree_as_dict(tree: DependenceTree) -> dict:
    """JSON-ready dict: nodes, edges with weight and signed value,
    measure tag, lattice order, coverage ratio."""
    return {
        "nodes": list(tree.nodes),
        "edges": [
            {
                "u": e.u,
                "v": e.v,
                "weight": e.weight,
                "signed_value": e.signed_value,
            }
            for e in tree.edges
        ],
        "measure": tree.measure,
        "lattice_order": tree.lattice_order,
        "coverage_ratio": tree.coverage_ratio,
    }


def tree_as_dot(tree: DependenceTree) -> str:
    """Undirected DOT graph with 4-decimal edge weight labels."""
    lines = ["graph deptree {"]
    for e in tree.edges:
        lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.weight:.4f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_learn(config: RunConfig) -> int:
    data = load_dataset(config.input_path)
    tree = learn_structure(
        data,
        measure=config.measure,
        lattice_order=config.lattice_order,
        tie_seed=config.tie_seed,
    )
    payload = json.dumps(tree_as_dict(tree), indent=2) + "\n"
    if config.json_path:
        with open(config.json_path, "w", encoding="utf-8") as handle:
            handle.write(payload)
    if config.dot_path:
        with open(config.dot_path, "w", encoding="utf-8") as handle:
            handle.write(tree_as_dot(tree))
    if not config.json_path and not config.dot_path:
        sys.stdout.write(payload)
    return 0


def _format_float(value: float) -> str:
    return repr(float(value))


def cmd_synth(config: RunConfig) -> int:
    spec = load_synthetic_spec(config.spec_path)
    data = generate_synthetic(spec, seed=config.seed)
    with open(config.output_path, "w", encoding="utf-8") as handle:
        handle.write(",".join(data.columns) + "\n")
        for row in data.values:
            handle.write(",".join(_format_float(v) for v in row) + "\n")
    return 0


def cmd_measure(config: RunConfig) -> int:
    data = load_dataset(config.input_path)
    a, b = config.pair
    ia, ib = data.column_index(a), data.column_index(b)
    order = (
        default_lattice_order(data.sample_count)
        if config.lattice_order == 0
        else config.lattice_order
    )
    if config.measure == "rho_abs":
        ranks = column_ranks(data.values[:, [ia, ib]], "random", config.tie_seed)
        value = spearman_rho(ranks[:, 0], ranks[:, 1])
        sys.stdout.write(f"rho({a}, {b}) = {value:.6f}\n")
    elif config.measure == "mi_cell":
        ranks = column_ranks(data.values[:, [ia, ib]], "random", config.tie_seed)
        value = mutual_info_cell(ranks[:, 0], ranks[:, 1], order)
        sys.stdout.write(
            f"mi_cell({a}, {b}) = {value:.6f} [lattice_order={order}]\n"
        )
    else:
        value = mutual_info_kde(
            data.values[:, ia], data.values[:, ib], order, tie_seed=config.tie_seed
        )
        sys.stdout.write(
            f"mi_kde({a}, {b}) = {value:.6f} [lattice_order={order}]\n"
        )
    return 0


_COMMANDS = {"learn": cmd_learn, "synth": cmd_synth, "measure": cmd_measure}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except (ValueError, OSError, json.JSONDecodeError) as error:
        sys.stderr.write(f"error: {error}\n")
        return 1
    except Exception as error:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {error!r}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
