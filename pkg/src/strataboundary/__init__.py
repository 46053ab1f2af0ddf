"""Boundary combinatorics of compactified strata of abelian and meromorphic differentials."""

from .curve_graph import DualGraph, StratumDescriptor, arithmetic_genus, enumerate_stable_graphs, validate_dual_graph
from .level_order import LevelGraph, enumerate_level_structures
from .twisted_type import TwistedDiffType, enumerate_twisted_types

__all__ = [
    "DualGraph",
    "LevelGraph",
    "StratumDescriptor",
    "TwistedDiffType",
    "arithmetic_genus",
    "enumerate_level_structures",
    "enumerate_stable_graphs",
    "enumerate_twisted_types",
    "validate_dual_graph",
]
