"""Command line: run the selected experiments over feature/label CSVs.

Configuration comes from flags, from a TOML file via ``--config``, or
both (flags win). Each run writes one CSV table and one PNG chart per
experiment into the output directory, plus a JSON manifest with the
resolved settings, the model hyperparameters, and sha256 digests of all
inputs and outputs. Exit codes: 0 success, 1 usage error, 2 unreadable
or malformed input, 3 out-of-range parameters.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import __version__
from .errors import InputError, ParameterError
from .experiments import (
    METRIC_IDS,
    ExperimentConfig,
    combined_importance,
    info_overlap,
    one_way_power,
)
from .io import load_features, load_labels
from .models import MODEL_DEFAULTS, REGRESSOR_IDS
from .plots import bar_chart

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_PARAMS = 3

EXPERIMENTS = ("overlap", "oneway", "importance")

_TOML_KEYS = {"features", "labels", "out", "split", "seed", "models", "metrics", "experiments"}


class UsageError(Exception):
    """Invocation-level mistake that argparse cannot express (exit 1)."""


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cafeval",
        description="Score node-feature CSVs: rank-correlation overlap, "
        "single-feature power, permutation importance.",
    )
    parser.add_argument("--config", help="TOML file with the same keys as the flags")
    parser.add_argument("--features", action="append", default=None,
                        help="feature CSV (repeatable; files are joined on the node column)")
    parser.add_argument("--labels", help="labels CSV with header node,label")
    parser.add_argument("--out", help="output directory (created if missing)")
    parser.add_argument("--split", type=float, default=None,
                        help="train fraction of the stratified split (default 0.7)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the split, the models, and the permutations (default 0)")
    parser.add_argument("--models", default=None,
                        help=f"comma-separated regressor ids (default {','.join(REGRESSOR_IDS)})")
    parser.add_argument("--metrics", default=None,
                        help=f"comma-separated metric ids (default {','.join(METRIC_IDS)})")
    parser.add_argument("--experiments", default=None,
                        help=f"comma-separated subset of {','.join(EXPERIMENTS)} (default all)")
    return parser


def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            values = tomllib.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    unknown = set(values) - _TOML_KEYS
    if unknown:
        raise ParameterError(f"{path}: unknown keys {sorted(unknown)}; known: {sorted(_TOML_KEYS)}")
    return values


def _as_list(value, flag: str) -> list[str]:
    if isinstance(value, str):
        return [part for part in value.split(",") if part]
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return list(value)
    raise ParameterError(f"{flag} must be a string list, got {value!r}")


def _resolve(args) -> tuple[ExperimentConfig, list[str]]:
    toml = _load_toml(args.config) if args.config else {}

    def pick(flag_value, key, fallback):
        if flag_value is not None:
            return flag_value
        return toml.get(key, fallback)

    features = pick(args.features, "features", None)
    labels = pick(args.labels, "labels", None)
    out = pick(args.out, "out", None)
    if not features or not labels or not out:
        raise UsageError("need --features, --labels and --out (flags or config keys)")
    chosen = _as_list(pick(args.experiments, "experiments", list(EXPERIMENTS)), "experiments")
    bad = [e for e in chosen if e not in EXPERIMENTS]
    if bad:
        raise ParameterError(f"unknown experiments {bad}; known: {', '.join(EXPERIMENTS)}")
    cfg = ExperimentConfig(
        features=_as_list(features, "features"),
        labels=str(labels),
        out_dir=str(out),
        split=float(pick(args.split, "split", 0.7)),
        seed=int(pick(args.seed, "seed", 0)),
        models=tuple(_as_list(pick(args.models, "models", list(REGRESSOR_IDS)), "models")),
        metrics=tuple(_as_list(pick(args.metrics, "metrics", list(METRIC_IDS)), "metrics")),
    )
    return cfg, chosen


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return f"sha256:{digest.hexdigest()}"


def _write_manifest(cfg: ExperimentConfig, chosen: list[str], outputs: list[str]) -> str:
    manifest = {
        "tool": "cafeval",
        "version": __version__,
        "experiments": chosen,
        "config": {
            "features": cfg.features,
            "labels": cfg.labels,
            "out_dir": cfg.out_dir,
            "split": cfg.split,
            "seed": cfg.seed,
            "models": list(cfg.models),
            "metrics": list(cfg.metrics),
        },
        "model_defaults": MODEL_DEFAULTS,
        "inputs": {p: _sha256(p) for p in cfg.features + [cfg.labels]},
        "outputs": {p: _sha256(p) for p in outputs},
    }
    path = os.path.join(cfg.out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def run(cfg: ExperimentConfig, chosen: list[str]) -> list[str]:
    """Execute the chosen experiments; returns the files written."""
    table = load_features(cfg.features)
    labels = load_labels(cfg.labels, table)
    os.makedirs(cfg.out_dir, exist_ok=True)
    jobs = {
        "overlap": (info_overlap, "table_overlap.csv", "chart_overlap.png",
                    "best Kendall tau-b from classical features"),
        "oneway": (one_way_power, "table_oneway.csv", "chart_oneway.png",
                   "single-feature test scores"),
        "importance": (combined_importance, "table_importance.csv", "chart_importance.png",
                       "permutation importance (average-precision drop)"),
    }
    written = []
    for name in chosen:
        experiment, csv_name, png_name, title = jobs[name]
        result = experiment(table, labels, cfg)
        csv_path = os.path.join(cfg.out_dir, csv_name)
        png_path = os.path.join(cfg.out_dir, png_name)
        result.write_csv(csv_path)
        bar_chart(result, png_path, title)
        written += [csv_path, png_path]
    return written


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg, chosen = _resolve(args)
        outputs = run(cfg, chosen)
        manifest = _write_manifest(cfg, chosen, outputs)
        print(f"wrote {len(outputs)} files and {manifest}")
        return EXIT_OK
    except UsageError as exc:
        print(f"cafeval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"cafeval: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"cafeval: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except OSError as exc:
        print(f"cafeval: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
