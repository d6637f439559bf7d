"""Combinatorial and metric constructions for Outer space of right-angled Artin groups."""
from .blowup import Blowup, build_blowup, salvetti
from .graph_core import DefiningGraph
from .partitions import PartitionFamily, SignedVertex, WPartition, enumerate_all_partitions, enumerate_partitions

__all__ = [
    "Blowup",
    "DefiningGraph",
    "PartitionFamily",
    "SignedVertex",
    "WPartition",
    "build_blowup",
    "enumerate_all_partitions",
    "enumerate_partitions",
    "salvetti",
]
__version__ = "0.1.0"
