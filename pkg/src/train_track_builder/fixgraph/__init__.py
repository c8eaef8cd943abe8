"""Fixed-point Stallings graphs, fixed subgroups and the invariants read off them."""

from train_track_builder.fixgraph.filtration import CoreCase, CoreFiltration, CoreStep, core_filtration
from train_track_builder.fixgraph.fix import FixCase, FixClass, FixReport, compute_fix, fix_possibilities
from train_track_builder.fixgraph.index import ClassIndex, IndexReport, index, neg_rays
from train_track_builder.fixgraph.properties import DecisionResult, is_hyperbolic, is_primitively_atoroidal
from train_track_builder.fixgraph.stallings import (
    FixedPointGraph,
    Lollipop,
    RayAttachment,
    RayKind,
    Variant,
    extend_to_rays,
    fixed_conjugacy_classes,
    stallings_fixed_graph,
)

__all__ = [
    "ClassIndex",
    "CoreCase",
    "CoreFiltration",
    "CoreStep",
    "DecisionResult",
    "FixCase",
    "FixClass",
    "FixReport",
    "FixedPointGraph",
    "IndexReport",
    "Lollipop",
    "RayAttachment",
    "RayKind",
    "Variant",
    "compute_fix",
    "core_filtration",
    "extend_to_rays",
    "fix_possibilities",
    "fixed_conjugacy_classes",
    "index",
    "is_hyperbolic",
    "is_primitively_atoroidal",
    "neg_rays",
    "stallings_fixed_graph",
]
