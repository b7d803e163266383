"""Command-line pipelines: generate / detect / features / modularity.

Every file-producing run writes a JSON manifest next to its outputs with
the full flag set, seed, and sha256 digests of inputs and outputs, so a
run can be audited and replayed. Exit codes: 0 success, 1 usage error,
2 unreadable or malformed input, 3 infeasible or out-of-range parameters.

Seeds are mandatory wherever randomness is involved (generation, detection,
sampled betweenness); there is no silent time-based seeding. The
``CAFNET_THREADS`` environment variable sets the default worker count,
overridden by ``--threads``; thread count never changes results.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

from . import __version__
from .classical import ClassicalConfig, compute_classical_features
from .detect import DetectConfig, detect
from .errors import EdgeListParseError, InfeasibleError, InputError, ParameterError
from .features import compute_community_features
from .generator import GenSpec, generate
from .graph import Graph, giant_component, load_edge_list
from .matrix import CLASSICAL_FEATURE_NAMES
from .partition import load_partition_csv, save_partition_csv
from .quality import generalized_modularity, regularized_modularity

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_PARAMS = 3

# dataclass field defaults double as the CLI defaults (class attribute access)
_GEN_DEFAULTS = GenSpec
_DETECT_DEFAULTS = DetectConfig
_CLASSICAL_DEFAULTS = ClassicalConfig


class UsageError(Exception):
    """Invocation-level mistake that argparse cannot express (exit 1)."""


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def _write_manifest(path: str, args: argparse.Namespace, inputs: list[str], outputs: list[str]) -> None:
    arguments = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    doc = {
        "tool": "cafnet",
        "version": __version__,
        "subcommand": args.command,
        "arguments": arguments,
        "seed": arguments.get("seed"),
        "inputs": {p: _sha256(p) for p in inputs},
        "outputs": {p: _sha256(p) for p in outputs},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args: argparse.Namespace, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("CAFNET_THREADS")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise ParameterError(f"CAFNET_THREADS must be an integer, got {env!r}") from None


def _load_graph(args: argparse.Namespace) -> Graph:
    g = load_edge_list(args.graph)
    rep = g.report
    if rep.self_loops_dropped or rep.duplicate_edges_dropped or rep.isolated_nodes_dropped:
        print(
            f"note: cleaned {args.graph}: dropped {rep.self_loops_dropped} self-loops, "
            f"{rep.duplicate_edges_dropped} duplicate edges, "
            f"{rep.isolated_nodes_dropped} isolated nodes",
            file=sys.stderr,
        )
    if getattr(args, "giant_component", False):
        before = g.n
        g = giant_component(g)
        if g.n != before:
            print(f"note: kept giant component ({g.n} of {before} nodes)", file=sys.stderr)
    return g


def cmd_generate(args: argparse.Namespace) -> int:
    spec = GenSpec(
        n=args.n,
        s0=args.outliers,
        xi=args.xi,
        seed=args.seed,
        gamma=args.gamma,
        deg_min=args.deg_min,
        deg_max=args.deg_max,
        size_exponent=args.size_exponent,
        size_min=args.size_min,
        size_max=args.size_max,
    )
    out = generate(spec)
    g = out.graph
    prefix = args.out_prefix
    edges_path = f"{prefix}.edges"
    planted_path = f"{prefix}.planted.csv"
    labels_path = f"{prefix}.labels.csv"
    meta_path = f"{prefix}.meta.json"

    g.write_edge_list(edges_path)
    with open(planted_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["internal_id", "community"])
        for v, c in enumerate(out.planted):
            writer.writerow([v, int(c)])
    with open(labels_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "label"])
        for v, flag in enumerate(out.labels):
            writer.writerow([g.labels[v], int(flag)])
    meta = dict(out.metadata)
    meta["community_sizes"] = out.community_sizes
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    outputs = [edges_path, planted_path, labels_path, meta_path]
    _write_manifest(f"{prefix}.manifest.json", args, inputs=[], outputs=outputs)
    _emit(
        args,
        f"generated {g.n} nodes, {g.m} edges, {out.metadata['communities']} communities, "
        f"{out.metadata['outliers_surviving']} outliers -> {prefix}.*",
        {
            "nodes": g.n,
            "edges": g.m,
            "communities": out.metadata["communities"],
            "outliers": out.metadata["outliers_surviving"],
            "edge_loss_fraction": out.metadata["edge_loss_fraction"],
            "outputs": outputs,
        },
    )
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    config = DetectConfig(
        seed=args.seed,
        lam=args.lam,
        restarts=args.restarts,
        max_levels=args.max_levels,
        min_gain=args.min_gain,
        threads=_resolve_threads(args.threads),
    )
    result = detect(g, config)
    save_partition_csv(result.partition, args.out)
    outputs = [args.out]
    if args.mapping_out:
        g.write_mapping(args.mapping_out)
        outputs.append(args.mapping_out)
    _write_manifest(f"{args.out}.manifest.json", args, inputs=[args.graph], outputs=outputs)
    _emit(
        args,
        f"q_lambda = {result.q_lambda:.6f} with {result.partition.n_communities} communities "
        f"(best of {config.restarts} restarts) -> {args.out}",
        {
            "q_lambda": result.q_lambda,
            "lambda": args.lam,
            "communities": result.partition.n_communities,
            "best_restart": result.best_restart,
            "restart_scores": result.restart_scores,
            "level_trace": result.level_trace,
            "outputs": outputs,
        },
    )
    return EXIT_OK


def cmd_features(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    threads = _resolve_threads(args.threads)
    info: dict = {}
    matrices = []
    if args.set in ("community", "all"):
        if args.partition:
            part = load_partition_csv(g, args.partition)
        else:
            if args.seed is None:
                raise UsageError("--seed is required when no --partition is given (detection is stochastic)")
            config = DetectConfig(
                seed=args.seed,
                lam=args.lam,
                restarts=args.restarts,
                max_levels=args.max_levels,
                min_gain=args.min_gain,
                threads=threads,
            )
            result = detect(g, config)
            part = result.partition
            info["q_lambda"] = result.q_lambda
            info["communities"] = part.n_communities
        matrices.append(compute_community_features(g, part, lam=args.lam))
    if args.set in ("classical", "all"):
        if args.bc_sample is not None and args.seed is None:
            raise UsageError("--seed is required with --bc-sample (pivot choice is random)")
        config_c = ClassicalConfig(
            enabled=CLASSICAL_FEATURE_NAMES,
            ec_tolerance=args.ec_tol,
            ec_max_iter=args.ec_max_iter,
            bc_sample=args.bc_sample,
            seed=args.seed,
            per_component=args.per_component,
            threads=threads,
        )
        matrices.append(compute_classical_features(g, config_c))
    matrix = matrices[0] if len(matrices) == 1 else matrices[0].hstack(matrices[1])
    matrix.to_csv(args.out)
    outputs = [args.out]
    if args.mapping_out:
        g.write_mapping(args.mapping_out)
        outputs.append(args.mapping_out)
    inputs = [args.graph] + ([args.partition] if args.partition else [])
    _write_manifest(f"{args.out}.manifest.json", args, inputs=inputs, outputs=outputs)
    payload = {"rows": matrix.n, "columns": matrix.names, "outputs": outputs, **info}
    _emit(args, f"wrote {matrix.n} rows x {len(matrix.names)} features -> {args.out}", payload)
    return EXIT_OK


def cmd_modularity(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    part = load_partition_csv(g, args.partition)
    if args.beta is None:
        q = generalized_modularity(g, part, args.lam)
        human = f"q = {q!r} (lambda={args.lam}, {part.n_communities} communities)"
    else:
        q = regularized_modularity(g, part, args.lam, args.beta)
        human = f"q = {q!r} (lambda={args.lam}, beta={args.beta}, {part.n_communities} communities)"
    _emit(
        args,
        human,
        {
            "q": q,
            "lambda": args.lam,
            "beta": args.beta,
            "communities": part.n_communities,
            "nodes": g.n,
            "edges": g.m,
        },
    )
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--json", action="store_true", help="print a JSON summary instead of text")


def _add_graph_input(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--graph", required=True, help="edge list file (one 'u v' pair per line, # comments)")
    sub.add_argument(
        "--giant-component",
        action="store_true",
        help="keep only the largest connected component after loading",
    )


def _add_detect_options(sub: argparse.ArgumentParser, seed_required: bool) -> None:
    sub.add_argument("--seed", type=int, required=seed_required, default=None, help="random seed (required; no time-based seeding)" if seed_required else "random seed (required for any stochastic step)")
    sub.add_argument("--lambda", dest="lam", type=float, default=_DETECT_DEFAULTS.lam, help="resolution parameter (default %(default)s)")
    sub.add_argument("--restarts", type=int, default=_DETECT_DEFAULTS.restarts, help="independent detection restarts (default %(default)s)")
    sub.add_argument("--max-levels", type=int, default=_DETECT_DEFAULTS.max_levels, help="aggregation level cap (default %(default)s)")
    sub.add_argument("--min-gain", type=float, default=_DETECT_DEFAULTS.min_gain, help="smallest move gain counted as an improvement (default %(default)s)")
    sub.add_argument("--threads", type=int, default=None, help="worker threads (default: CAFNET_THREADS or 1; never changes results)")


def build_parser() -> _Parser:
    parser = _Parser(prog="cafnet", description="Community-aware node features over sparse graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    gen = subs.add_parser("generate", help="generate a planted-partition benchmark with outliers")
    gen.add_argument("--n", type=int, required=True, help="node count")
    gen.add_argument("--outliers", type=int, required=True, help="number of outlier nodes (s0)")
    gen.add_argument("--xi", type=float, required=True, help="mixing parameter in [0,1]")
    gen.add_argument("--seed", type=int, required=True, help="random seed")
    gen.add_argument("--gamma", type=float, default=_GEN_DEFAULTS.gamma, help="degree power-law exponent (default %(default)s)")
    gen.add_argument("--deg-min", type=int, default=_GEN_DEFAULTS.deg_min, help="minimum degree (default %(default)s)")
    gen.add_argument("--deg-max", type=int, default=_GEN_DEFAULTS.deg_max, help="maximum degree (default %(default)s)")
    gen.add_argument("--size-exponent", type=float, default=_GEN_DEFAULTS.size_exponent, help="community size power-law exponent (default %(default)s)")
    gen.add_argument("--size-min", type=int, default=_GEN_DEFAULTS.size_min, help="minimum community size (default %(default)s)")
    gen.add_argument("--size-max", type=int, default=_GEN_DEFAULTS.size_max, help="maximum community size (default %(default)s)")
    gen.add_argument("--out-prefix", required=True, help="path prefix for the .edges/.planted.csv/.labels.csv/.meta.json outputs")
    _add_common(gen)
    gen.set_defaults(func=cmd_generate)

    det = subs.add_parser("detect", help="detect communities by modularity maximization")
    _add_graph_input(det)
    _add_detect_options(det, seed_required=True)
    det.add_argument("--out", required=True, help="partition CSV to write (internal_id,community)")
    det.add_argument("--mapping-out", default=None, help="also write the external-to-internal id mapping CSV")
    _add_common(det)
    det.set_defaults(func=cmd_detect)

    feat = subs.add_parser("features", help="compute node feature columns to CSV")
    _add_graph_input(feat)
    feat.add_argument("--set", choices=("community", "classical", "all"), default="community", help="feature family (default %(default)s)")
    feat.add_argument("--partition", default=None, help="partition CSV; omitted, communities are detected first")
    _add_detect_options(feat, seed_required=False)
    feat.add_argument("--ec-tol", type=float, default=_CLASSICAL_DEFAULTS.ec_tolerance, help="eigenvector iteration tolerance (default %(default)s)")
    feat.add_argument("--ec-max-iter", type=int, default=_CLASSICAL_DEFAULTS.ec_max_iter, help="eigenvector iteration cap (default %(default)s)")
    feat.add_argument("--bc-sample", type=int, default=None, help="approximate betweenness from this many source pivots (default: exact)")
    feat.add_argument("--per-component", action="store_true", help="closeness/eccentricity within each component instead of erroring on disconnected input")
    feat.add_argument("--out", required=True, help="feature CSV to write")
    feat.add_argument("--mapping-out", default=None, help="also write the external-to-internal id mapping CSV")
    _add_common(feat)
    feat.set_defaults(func=cmd_features)

    mod = subs.add_parser("modularity", help="score a partition")
    _add_graph_input(mod)
    mod.add_argument("--partition", required=True, help="partition CSV (internal_id,community)")
    mod.add_argument("--lambda", dest="lam", type=float, default=1.0, help="resolution parameter (default %(default)s)")
    mod.add_argument("--beta", type=float, default=None, help="singleton bonus; set to score the regularized objective")
    _add_common(mod)
    mod.set_defaults(func=cmd_modularity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cafnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EdgeListParseError, InputError) as exc:
        print(f"cafnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ParameterError, InfeasibleError) as exc:
        print(f"cafnet: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except OSError as exc:
        print(f"cafnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
