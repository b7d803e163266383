"""CSV input and output.

The harness consumes the companion feature extractor's files: a feature
CSV has a ``node`` column of external labels followed by one float column
per feature; a labels CSV has columns ``node,label`` with binary labels.
Several feature CSVs for the same node set are joined column-wise on the
node key, so community and classical columns may arrive in one file or in
separate files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError

COMMUNITY_COLUMNS: tuple[str, ...] = (
    "CADA",
    "CADA*",
    "WMD",
    "CPC",
    "CAS",
    "CD_L11",
    "CD_L21",
    "CD_KL1",
    "CD_HD1",
    "CD_L12",
    "CD_L22",
    "CD_KL2",
    "CD_HD2",
)
"""Column names treated as community-aware; everything else is classical."""


@dataclass
class FeatureTable:
    """A node-by-feature float matrix with named columns."""

    nodes: list[str]
    names: list[str]
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.nodes)

    def column(self, name: str) -> np.ndarray:
        if name not in self.names:
            raise InputError(f"no column named {name!r}; have {', '.join(self.names)}")
        return self.values[:, self.names.index(name)]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        return np.stack([self.column(name) for name in names], axis=1)

    def community_names(self) -> list[str]:
        return [name for name in COMMUNITY_COLUMNS if name in self.names]

    def classical_names(self) -> list[str]:
        return [name for name in self.names if name not in COMMUNITY_COLUMNS]


def _read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path} is empty")
    return rows[0], rows[1:]


def _read_feature_csv(path: str) -> FeatureTable:
    header, body = _read_csv(path)
    if not header or header[0] != "node":
        raise InputError(f"{path}: first column must be 'node', got {header[:1]}")
    names = header[1:]
    if not names:
        raise InputError(f"{path} has no feature columns")
    nodes = [row[0] for row in body]
    try:
        values = np.array([[float(x) for x in row[1:]] for row in body], dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric feature value ({exc})") from exc
    if values.ndim != 2 or values.shape != (len(nodes), len(names)):
        raise InputError(f"{path}: ragged rows")
    if not np.all(np.isfinite(values)):
        raise InputError(f"{path}: non-finite feature values")
    return FeatureTable(nodes=nodes, names=names, values=values)


def load_features(paths: Sequence[str]) -> FeatureTable:
    """Load one or more feature CSVs and join them on the node column.

    Every file must cover exactly the same node set; rows are aligned to
    the node order of the first file. Duplicate column names across files
    are an error.
    """
    if not paths:
        raise InputError("no feature CSV given")
    first = _read_feature_csv(paths[0])
    if len(set(first.nodes)) != first.n:
        raise InputError(f"{paths[0]}: duplicate node labels")
    for path in paths[1:]:
        extra = _read_feature_csv(path)
        if set(extra.nodes) != set(first.nodes):
            raise InputError(f"{path}: node set differs from {paths[0]}")
        clash = set(extra.names) & set(first.names)
        if clash:
            raise InputError(f"{path}: duplicate columns {sorted(clash)}")
        where = {node: i for i, node in enumerate(extra.nodes)}
        order = np.array([where[node] for node in first.nodes])
        first = FeatureTable(
            nodes=first.nodes,
            names=first.names + extra.names,
            values=np.concatenate([first.values, extra.values[order]], axis=1),
        )
    return first


def load_labels(path: str, table: FeatureTable) -> np.ndarray:
    """Binary labels aligned to ``table``'s node order."""
    header, body = _read_csv(path)
    if header != ["node", "label"]:
        raise InputError(f"{path}: expected header node,label, got {header}")
    seen: dict[str, int] = {}
    for row in body:
        if len(row) != 2 or row[1] not in ("0", "1"):
            raise InputError(f"{path}: labels must be 0 or 1, got row {row}")
        seen[row[0]] = int(row[1])
    if set(seen) != set(table.nodes):
        raise InputError(f"{path}: node set differs from the feature table")
    return np.array([seen[node] for node in table.nodes], dtype=np.int64)


@dataclass
class ResultTable:
    """A small named-column table, written as CSV with repr floats."""

    names: list[str]
    rows: list[list]

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.names)
            for row in self.rows:
                writer.writerow([x if isinstance(x, (str, int)) else repr(float(x)) for x in row])

    def column(self, name: str) -> list:
        idx = self.names.index(name)
        return [row[idx] for row in self.rows]
