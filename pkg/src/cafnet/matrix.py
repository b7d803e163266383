"""Dense per-node feature matrices with named columns and CSV round-tripping.

The CSV layout is `node,<feature...>` where `node` holds the external node
label. Floats are written with ``repr`` (shortest round-trip form), so a
save/load cycle is lossless and byte-deterministic for equal inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from .errors import InputError

COMMUNITY_FEATURE_NAMES: tuple[str, ...] = (
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

DEPTH1_FEATURE_NAMES: tuple[str, ...] = COMMUNITY_FEATURE_NAMES[:9]

CLASSICAL_FEATURE_NAMES: tuple[str, ...] = (
    "lcc",
    "bc",
    "cc",
    "dc",
    "ndc",
    "ec",
    "eccen",
    "core",
)


@dataclass
class FeatureMatrix:
    """Rows are nodes (in internal id order), columns are named features."""

    names: list[str]
    values: np.ndarray
    node_labels: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise InputError(f"feature values must be 2-d, got shape {self.values.shape}")
        if self.values.shape[1] != len(self.names):
            raise InputError(
                f"{len(self.names)} names for {self.values.shape[1]} columns"
            )
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate feature names")
        if self.node_labels and len(self.node_labels) != self.values.shape[0]:
            raise InputError(
                f"{len(self.node_labels)} labels for {self.values.shape[0]} rows"
            )
        if not self.node_labels:
            self.node_labels = [str(i) for i in range(self.values.shape[0])]
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise InputError(
                f"non-finite value in feature '{self.names[bad[1]]}' at row {bad[0]}"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.names.index(name)
        except ValueError:
            raise InputError(f"unknown feature {name!r}; have {self.names}") from None
        return self.values[:, j]

    def hstack(self, other: "FeatureMatrix") -> "FeatureMatrix":
        """Column-concatenate two matrices over the same nodes."""
        if self.node_labels != other.node_labels:
            raise InputError("cannot combine feature matrices over different node sets")
        return FeatureMatrix(
            names=self.names + other.names,
            values=np.hstack([self.values, other.values]),
            node_labels=list(self.node_labels),
        )

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        cols = np.stack([self.column(name) for name in names], axis=1)
        return FeatureMatrix(list(names), cols, list(self.node_labels))

    def to_csv(self, dest: str | TextIO) -> None:
        own = isinstance(dest, str)
        fh = open(dest, "w", encoding="utf-8", newline="") if own else dest
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["node", *self.names])
            for i, label in enumerate(self.node_labels):
                writer.writerow([label, *(repr(float(x)) for x in self.values[i])])
        finally:
            if own:
                fh.close()

    @classmethod
    def from_csv(cls, source: str | TextIO) -> "FeatureMatrix":
        own = isinstance(source, str)
        fh = open(source, "r", encoding="utf-8", newline="") if own else source
        try:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header or header[0] != "node":
                raise InputError("feature CSV must start with header 'node,<feature...>'")
            names = header[1:]
            labels: list[str] = []
            rows: list[list[float]] = []
            for row in reader:
                if not row:
                    continue
                if len(row) != len(names) + 1:
                    raise InputError(
                        f"feature CSV row has {len(row)} fields, expected {len(names) + 1}"
                    )
                labels.append(row[0])
                try:
                    rows.append([float(x) for x in row[1:]])
                except ValueError:
                    raise InputError(f"non-numeric entry in feature CSV row {row!r}") from None
        finally:
            if own:
                fh.close()
        if not rows:
            raise InputError("feature CSV has no data rows")
        return cls(names=names, values=np.array(rows, dtype=np.float64), node_labels=labels)
