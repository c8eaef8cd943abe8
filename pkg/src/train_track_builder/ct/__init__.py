"""CT verification, reducibility of filtration steps and the CT construction pipeline."""

from train_track_builder.ct.irreducible import IrreducibilityResult, fully_irreducible_rel
from train_track_builder.ct.pipeline import build_ct, find_reduction, slide_neg_edges
from train_track_builder.ct.reduction import (
    NonAttractedCase,
    NonAttractedSystem,
    ReductionKind,
    ReductionResult,
    ReductionWitness,
    eg_reduction_search,
    neg_reduction_check,
    non_attracted_system,
)
from train_track_builder.ct.verify import CTCertificate, CTProperty, PropertyCheck, verify_ct

__all__ = [
    "CTCertificate",
    "CTProperty",
    "IrreducibilityResult",
    "NonAttractedCase",
    "NonAttractedSystem",
    "PropertyCheck",
    "ReductionKind",
    "ReductionResult",
    "ReductionWitness",
    "build_ct",
    "eg_reduction_search",
    "find_reduction",
    "fully_irreducible_rel",
    "neg_reduction_check",
    "non_attracted_system",
    "slide_neg_edges",
    "verify_ct",
]
