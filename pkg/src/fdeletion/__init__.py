"""Randomized approximation and FPT algorithms for weighted planar minor deletion."""

from .boundaried import BoundariedGraph, Folio, compatible, equivalent_h, folio, glue
from .exact import solve_exact, solve_exact_k
from .exhaustive import ExhaustiveFamily, exhaustive_family, exhaustive_family_sized
from .graph import GraphError, WeightedGraph, load_graph, read_graph
from .minors import FamilyError, MinorFamilySpec, has_minor, is_F_minor_free, preset
from .separations import (
    HittingFamily,
    PreconditionError,
    Separation,
    build_hitting_family,
    enumerate_important_separators,
    enumerate_simple_separations,
)
from .solvers import (
    RunReport,
    SamplingDistribution,
    approx_deletion,
    approx_modulator,
    fpt_k_optimal,
    sample_step,
)
from .treewidth import CapExceeded, TreeDecomposition, lca_closure, treewidth_exact

__version__ = "0.1.0"

__all__ = [
    "BoundariedGraph",
    "CapExceeded",
    "ExhaustiveFamily",
    "FamilyError",
    "Folio",
    "GraphError",
    "HittingFamily",
    "MinorFamilySpec",
    "PreconditionError",
    "RunReport",
    "SamplingDistribution",
    "Separation",
    "TreeDecomposition",
    "WeightedGraph",
    "approx_deletion",
    "approx_modulator",
    "build_hitting_family",
    "compatible",
    "enumerate_important_separators",
    "enumerate_simple_separations",
    "equivalent_h",
    "exhaustive_family",
    "exhaustive_family_sized",
    "folio",
    "fpt_k_optimal",
    "glue",
    "has_minor",
    "is_F_minor_free",
    "lca_closure",
    "load_graph",
    "preset",
    "read_graph",
    "sample_step",
    "solve_exact",
    "solve_exact_k",
    "treewidth_exact",
]
