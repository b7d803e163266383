"""Bundled example data: Zachary's karate club with the two factions."""

from __future__ import annotations

from importlib import resources

from ..graph import Graph, loads_edge_list
from ..partition import Partition, load_partition_csv


def karate_graph() -> Graph:
    """The karate club graph; node labels are the customary 1..34."""
    text = resources.files(__name__).joinpath("karate.edges").read_text("utf-8")
    return loads_edge_list(text)


def karate_factions(g: Graph | None = None) -> tuple[Graph, Partition]:
    """The karate graph with its two observed factions as a partition."""
    g = g if g is not None else karate_graph()
    ref = resources.files(__name__).joinpath("karate_factions.csv")
    with ref.open("r", encoding="utf-8") as fh:
        part = load_partition_csv(g, fh)
    return g, part
