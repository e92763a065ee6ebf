"""Command-line front end: symmetry detection, presolving, TU checks,
solving, and a benchmark harness over directories of DIMACS instances.

Exit codes: 0 success (or TU), 2 input error, 3 negative verdict (not TU),
4 resource cap exceeded.  All outputs are deterministic for a fixed
configuration except wall-clock timing fields.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import autom, graph, perm, presolve, solver, sst, tu_tp

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    command: str
    input_path: str
    symmetry_file: str | None = None
    orbit_rule: str = "min"
    stringent: bool = False
    max_rounds: int = 50
    use_addition: bool = False
    cut_kind: str = "plain"  # plain | clique | none
    apply_deletion: bool = True
    method: str = "bb"  # bb | brute
    output_path: str | None = None
    json_path: str | None = None
    seed: int = 0


class InputError(ValueError):
    pass


def _load_graph(path: str) -> graph.Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return graph.parse_dimacs(text)
    except graph.DimacsParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_symmetries(config: RunConfig, g: graph.Graph) -> perm.GeneratorSet:
    """Compute generators, or read and validate an external generator file."""
    if config.symmetry_file is None:
        return autom.automorphism_generators(g)
    try:
        text = Path(config.symmetry_file).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {config.symmetry_file}: {exc}") from exc
    try:
        gens = perm.parse_generators(text, g.n)
    except ValueError as exc:
        raise InputError(f"{config.symmetry_file}: {exc}") from exc
    lines = [line.strip() for line in text.splitlines()]
    nonempty = [(i + 1, line) for i, line in enumerate(lines) if line]
    for (lineno, line), p in zip(nonempty, gens.generators):
        if not autom.is_automorphism(g, p):
            raise InputError(
                f"{config.symmetry_file}: line {lineno}: {line!r} is not an "
                "automorphism of the input graph"
            )
    return gens


def _build_cuts(config: RunConfig, g: graph.Graph, gens: perm.GeneratorSet):
    """Returns (table, cuts) per the stringent / orbit-rule / cut-kind flags."""
    if config.stringent:
        table = sst.build_stringent_sst_table(
            gens, orbit_rule=config.orbit_rule, max_rounds=config.max_rounds
        )
    else:
        table = sst.build_sst_table(
            gens, orbit_rule=config.orbit_rule, max_rounds=config.max_rounds
        )
    if config.cut_kind == "clique":
        cuts = sst.sst_clique_cuts(table, g)
    elif config.cut_kind == "plain":
        cuts = list(table.cuts)
    elif config.cut_kind == "none":
        cuts = []
    else:
        raise InputError(f"unknown cut kind {config.cut_kind!r}")
    return table, cuts


def _write(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).write_text(content)


def _json_dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def cmd_symmetries(config: RunConfig) -> int:
    g = _load_graph(config.input_path)
    gens = _load_symmetries(config, g)
    _write(config.output_path, perm.format_generators(gens))
    return EXIT_OK


def cmd_presolve(config: RunConfig) -> int:
    g = _load_graph(config.input_path)
    gens = _load_symmetries(config, g)
    table, cuts = _build_cuts(config, g, gens)
    result = presolve.sst_presolve(g, cuts, use_addition=config.use_addition)
    stats = {
        "nodes": float(result.stats.node_ratio),
        "edges": float(result.stats.edge_ratio),
        "edges_plus": float(result.stats.edge_plus_ratio),
        "removed_nodes": [v + 1 for v in sorted(result.removed_nodes)],
        "added_edges": [[u + 1, v + 1] for u, v in sorted(result.added_edges)],
        "rounds": len(table.rounds),
        "cuts": len(presolve.expand_to_pairs(cuts)),
    }
    if config.output_path is not None:
        _write(config.output_path, graph.write_dimacs(result.reduced_graph))
    _write(config.json_path, _json_dumps(stats))
    return EXIT_OK


def cmd_check_tu(config: RunConfig) -> int:
    g = _load_graph(config.input_path)
    gens = _load_symmetries(config, g)
    _, cuts = _build_cuts(config, g, gens)
    matrix = tu_tp.extended_clique_matrix(
        g, cuts, apply_deletion=config.apply_deletion
    )
    det_ok, det_witness = tu_tp.is_tu_determinant(matrix)
    gh_ok, gh_witness = tu_tp.is_tu_ghouila_houri(matrix)
    if det_ok != gh_ok:
        raise AssertionError("the two total unimodularity checkers disagree")
    report: dict = {
        "totally_unimodular": det_ok,
        "rows": matrix.nrows,
        "cols": matrix.ncols,
    }
    if not det_ok:
        assert det_witness is not None and gh_witness is not None
        tags = tu_tp.matrix_to_dict(matrix)["row_tags"]
        report["witness"] = {
            "rows": [tags[i] for i in det_witness.rows],
            "cols": [matrix.col_tags[j] + 1 for j in det_witness.cols],
            "determinant": det_witness.determinant,
            "unbalanceable_rows": [tags[i] for i in gh_witness.rows],
        }
    _write(config.json_path, _json_dumps(report))
    return EXIT_OK if det_ok else EXIT_NEGATIVE


def cmd_solve(config: RunConfig) -> int:
    g = _load_graph(config.input_path)
    cuts = None
    if config.cut_kind != "none":
        gens = _load_symmetries(config, g)
        _, cuts = _build_cuts(config, g, gens)
    solve = (
        solver.brute_force_max_stable
        if config.method == "brute"
        else solver.branch_and_bound_max_stable
    )
    started = time.perf_counter()
    solution = solve(g, cuts)
    elapsed = time.perf_counter() - started
    report = {
        "value": solution.value,
        "members": [v + 1 for v in solution.members],
        "nodes_explored": solution.nodes_explored,
        "wall_time_s": elapsed,
    }
    _write(config.json_path, _json_dumps(report))
    return EXIT_OK


def _geometric_mean(values) -> float:
    values = [v for v in values]
    if not values or any(v <= 0 for v in values):
        return 0.0
    return math.exp(sum(math.log(v) for v in values) / len(values))


BENCH_COLUMNS = [
    "instance",
    "n",
    "m",
    "node_ratio",
    "edge_ratio",
    "edge_plus_ratio",
    "value_raw",
    "value_presolved",
    "values_equal",
    "bb_nodes_raw",
    "bb_nodes_presolved",
    "time_raw_s",
    "time_presolved_s",
]


def cmd_bench(config: RunConfig) -> int:
    directory = Path(config.input_path)
    if not directory.is_dir():
        raise InputError(f"{config.input_path} is not a directory")
    paths = sorted(p for p in directory.iterdir() if p.suffix == ".col")
    if not paths:
        raise InputError(f"no .col instances found in {config.input_path}")
    rows = []
    for path in paths:
        g = _load_graph(str(path))
        gens = autom.automorphism_generators(g)
        _, cuts = _build_cuts(config, g, gens)
        result = presolve.sst_presolve(g, cuts, use_addition=config.use_addition)
        started = time.perf_counter()
        raw = solver.branch_and_bound_max_stable(g)
        time_raw = time.perf_counter() - started
        started = time.perf_counter()
        reduced = solver.branch_and_bound_max_stable(result.reduced_graph)
        time_presolved = time.perf_counter() - started
        rows.append(
            {
                "instance": path.name,
                "n": g.n,
                "m": g.m,
                "node_ratio": float(result.stats.node_ratio),
                "edge_ratio": float(result.stats.edge_ratio),
                "edge_plus_ratio": float(result.stats.edge_plus_ratio),
                "value_raw": raw.value,
                "value_presolved": reduced.value,
                "values_equal": str(raw.value == reduced.value).lower(),
                "bb_nodes_raw": raw.nodes_explored,
                "bb_nodes_presolved": reduced.nodes_explored,
                "time_raw_s": f"{time_raw:.6f}",
                "time_presolved_s": f"{time_presolved:.6f}",
            }
        )
    summary = {
        "instance": "GEOMEAN",
        "n": "",
        "m": "",
        "node_ratio": _geometric_mean([r["node_ratio"] for r in rows]),
        "edge_ratio": _geometric_mean([r["edge_ratio"] for r in rows]),
        "edge_plus_ratio": _geometric_mean([r["edge_plus_ratio"] for r in rows]),
        "value_raw": "",
        "value_presolved": "",
        "values_equal": str(all(r["values_equal"] == "true" for r in rows)).lower(),
        "bb_nodes_raw": "",
        "bb_nodes_presolved": "",
        "time_raw_s": f"{_geometric_mean([float(r['time_raw_s']) for r in rows]):.6f}",
        "time_presolved_s": f"{_geometric_mean([float(r['time_presolved_s']) for r in rows]):.6f}",
    }
    lines = [",".join(BENCH_COLUMNS)]
    for row in rows + [summary]:
        lines.append(",".join(str(row[c]) for c in BENCH_COLUMNS))
    _write(config.output_path, "\n".join(lines) + "\n")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, table_flags=True) -> None:
    parser.add_argument("input", help="DIMACS .col file (or directory for bench)")
    if table_flags:
        parser.add_argument("--orbit-rule", choices=("min", "max"), default="min")
        parser.add_argument("--stringent", action="store_true")
        parser.add_argument("--max-rounds", type=int, default=50)
        parser.add_argument("--symmetry-file", default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", dest="json_path", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sstcuts",
        description="Symmetry-handling cuts for maximum-weight stable set",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetries", help="compute or validate graph symmetries")
    p.add_argument("input")
    p.add_argument("--symmetry-file", default=None)
    p.add_argument("--output", dest="output_path", default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("presolve", help="symmetry-based graph reduction")
    _add_common(p)
    p.add_argument("--addition", action="store_true")
    p.add_argument("--cuts", choices=("plain", "clique"), default="plain")
    p.add_argument("--output", dest="output_path", default=None,
                   help="write the reduced graph as DIMACS here")

    p = sub.add_parser("check-tu", help="total unimodularity of the extended clique matrix")
    _add_common(p)
    p.add_argument("--cuts", choices=("plain", "clique"), default="plain")
    p.add_argument("--no-deletion", action="store_true",
                   help="keep columns of deleted nodes")

    p = sub.add_parser("solve", help="exact maximum-weight stable set")
    _add_common(p)
    p.add_argument("--cuts", choices=("none", "plain", "clique"), default="none")
    p.add_argument("--method", choices=("bb", "brute"), default="bb")

    p = sub.add_parser("bench", help="benchmark a directory of instances")
    _add_common(p)
    p.add_argument("--addition", action="store_true")
    p.add_argument("--cuts", choices=("plain", "clique"), default="plain")
    p.add_argument("--output", dest="output_path", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input,
        symmetry_file=getattr(args, "symmetry_file", None),
        orbit_rule=getattr(args, "orbit_rule", "min"),
        stringent=getattr(args, "stringent", False),
        max_rounds=getattr(args, "max_rounds", 50),
        use_addition=getattr(args, "addition", False),
        cut_kind=getattr(args, "cuts", "plain"),
        apply_deletion=not getattr(args, "no_deletion", False),
        method=getattr(args, "method", "bb"),
        output_path=getattr(args, "output_path", None),
        json_path=getattr(args, "json_path", None),
        seed=getattr(args, "seed", 0),
    )


COMMANDS = {
    "symmetries": cmd_symmetries,
    "presolve": cmd_presolve,
    "check-tu": cmd_check_tu,
    "solve": cmd_solve,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    if config.max_rounds < 1:
        print("error: --max-rounds must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[config.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (tu_tp.TuCapError, graph.CliqueCapError, perm.GroupTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except presolve.WeightHypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
